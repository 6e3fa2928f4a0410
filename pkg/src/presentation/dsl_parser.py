# Parses the presentation DSL (free / group / binoid / smash / sr) and prints presentations back.
import logging
import re
from typing import Iterator, List, NamedTuple, Optional, Tuple

from presentation.presentation import (
    Presentation,
    SimplicialComplex,
    UnitFactor,
    Word,
    free_binoid,
    group_binoid,
    smash,
    stanley_reisner,
)
from utils.errors import InvalidPresentationError, PresentationSyntaxError, UndeclaredGeneratorError

logger = logging.getLogger(__name__)

KEYWORDS = {'free', 'group', 'binoid', 'smash', 'sr', 'facet', 'inf', 'cancellative'}

TOKEN_PATTERNS = {
    'comment': r"#[^\n]*",
    'newline': r"\n",
    'skip': r"[ \t\r]+",
    'num': r"-?\d+",
    'name': r"[A-Za-z_][A-Za-z0-9_']*",
    'infinity': r"∞",
    'plus': r"\+",
    'equal': r"=",
    'comma': r",",
    'semicolon': r";",
    'bar': r"\|",
    'colon': r":",
    'lbrace': r"\{",
    'rbrace': r"\}",
    'error': r".",
}
TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in TOKEN_PATTERNS.items()))


class Token(NamedTuple):
    type: str
    value: str
    line: int
    column: int


def tokenize(source: str) -> Iterator[Token]:
    line = 1
    line_start = 0
    for mo in TOKEN_REGEX.finditer(source):
        kind = str(mo.lastgroup)
        value = mo.group()
        column = mo.start() - line_start + 1
        if kind == 'newline':
            line += 1
            line_start = mo.end()
            continue
        if kind in ('skip', 'comment'):
            continue
        if kind == 'name' and value in KEYWORDS:
            kind = 'keyword'
        elif kind == 'infinity':
            kind, value = 'keyword', 'inf'
        elif kind == 'error':
            raise PresentationSyntaxError(f"unexpected character '{value}'", line, column, _line_of(source, line))
        yield Token(kind, value, line, column)
    yield Token('end', '', line, len(source) - line_start + 1)


def _line_of(source: str, line: int) -> str:
    lines = source.split('\n')
    return lines[line - 1] if 0 < line <= len(lines) else ''


class PresentationParser:
    """Recursive-descent parser for the presentation DSL"""

    def __init__(self, source: str):
        self.source = source
        self.tokens = list(tokenize(source))
        self.position = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.token
        if token.type != 'end':
            self.position += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> PresentationSyntaxError:
        token = token or self.token
        return PresentationSyntaxError(message, token.line, token.column, _line_of(self.source, token.line))

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        token = self.token
        if token.type != kind or (value is not None and token.value != value):
            wanted = f"'{value}'" if value else kind
            found = f"'{token.value}'" if token.value else 'end of input'
            raise self.error(f"expected {wanted}, found {found}")
        return self.advance()

    def parse(self) -> Presentation:
        if self.token.type == 'end':
            raise self.error("empty presentation")
        result = self.parse_spec()
        if self.token.type != 'end':
            raise self.error(f"unexpected '{self.token.value}' after presentation")
        return result

    def parse_spec(self) -> Presentation:
        cancellative = False
        if self.token.type == 'keyword' and self.token.value == 'cancellative':
            self.advance()
            cancellative = True

        token = self.token
        if token.type != 'keyword' or token.value not in ('free', 'group', 'binoid', 'smash', 'sr'):
            raise self.error("expected one of 'free', 'group', 'binoid', 'smash', 'sr'")
        self.advance()

        try:
            if token.value == 'free':
                result = free_binoid(self.parse_count())
            elif token.value == 'group':
                result = group_binoid(self.parse_count())
            elif token.value == 'binoid':
                result = self.parse_binoid()
            elif token.value == 'smash':
                left = self.parse_braced()
                right = self.parse_braced()
                result = smash(left, right)
            else:
                result = self.parse_stanley_reisner()
        except (InvalidPresentationError, UndeclaredGeneratorError) as e:
            if isinstance(e, PresentationSyntaxError) or e.message.startswith('line '):
                raise
            raise type(e)(f"line {token.line}, column {token.column}: {e.message}") from None

        if cancellative:
            result = result.with_cancellative(True)
        return result

    def parse_count(self) -> int:
        token = self.expect('num')
        value = int(token.value)
        if value < 0:
            raise self.error(f"count must be non-negative, got {value}", token)
        return value

    def parse_braced(self) -> Presentation:
        self.expect('lbrace')
        inner = self.parse_spec()
        self.expect('rbrace')
        return inner

    def parse_name_list(self) -> List[Tuple[str, Optional[int], Token]]:
        entries = []
        while True:
            token = self.expect('name')
            order = None
            if self.token.type == 'colon':
                self.advance()
                order_token = self.expect('num')
                order = int(order_token.value)
                if order < 2:
                    raise self.error(f"unit factor order must be >= 2, got {order}", order_token)
            entries.append((token.value, order, token))
            if self.token.type != 'comma':
                return entries
            self.advance()

    def parse_binoid(self) -> Presentation:
        entries = []
        if self.token.type == 'name':
            entries = self.parse_name_list()
        names = [name for name, _, _ in entries]
        seen = set()
        for name, _, token in entries:
            if name in seen:
                raise self.error(f"duplicate generator '{name}'", token)
            seen.add(name)

        congruences: List[Tuple[Word, Word]] = []
        infinity_relations: List[Word] = []
        unit_factors = []
        for i, (name, order, _) in enumerate(entries):
            if order is not None:
                lhs = tuple(order if j == i else 0 for j in range(len(names)))
                congruences.append((lhs, (0,) * len(names)))
                unit_factors.append(UnitFactor(name, order))

        if self.token.type == 'bar':
            self.advance()
            while True:
                lhs = self.parse_word(names)
                self.expect('equal')
                if self.token.type == 'keyword' and self.token.value == 'inf':
                    self.advance()
                    infinity_relations.append(lhs)
                else:
                    congruences.append((lhs, self.parse_word(names)))
                if self.token.type != 'semicolon':
                    break
                self.advance()
                if self.token.type in ('end', 'rbrace'):
                    break

        return Presentation(
            generators=tuple(names),
            congruences=tuple(congruences),
            infinity_relations=tuple(infinity_relations),
            unit_factors=tuple(unit_factors),
        )

    def parse_word(self, names: List[str]) -> Word:
        vector = [0] * len(names)
        if self.token.type == 'num' and self.token.value == '0' and self.tokens[self.position + 1].type != 'name':
            self.advance()
            return tuple(vector)
        while True:
            self.parse_term(names, vector)
            if self.token.type != 'plus':
                return tuple(vector)
            plus = self.advance()
            if self.token.type not in ('num', 'name'):
                raise self.error("dangling '+': expected a term after it", plus)

    def parse_term(self, names: List[str], vector: List[int]) -> None:
        coefficient = 1
        if self.token.type == 'num':
            token = self.advance()
            coefficient = int(token.value)
            if coefficient < 0:
                raise self.error(f"negative exponent {coefficient}", token)
        token = self.token
        if token.type != 'name':
            raise self.error("expected a generator name")
        self.advance()
        if token.value not in names:
            raise UndeclaredGeneratorError(
                f"line {token.line}, column {token.column}: undeclared generator '{token.value}'"
            )
        vector[names.index(token.value)] += coefficient

    def parse_stanley_reisner(self) -> Presentation:
        vertices = [name for name, _, _ in self.parse_name_list()]
        facets = []
        while self.token.type == 'semicolon':
            self.advance()
            if self.token.type in ('end', 'rbrace'):
                break
            self.expect('keyword', 'facet')
            facets.append(frozenset(name for name, _, _ in self.parse_name_list()))
        return stanley_reisner(SimplicialComplex(tuple(vertices), tuple(facets)))


def parse_presentation(text: str) -> Presentation:
    """Parse DSL source into a Presentation"""
    result = PresentationParser(text).parse()
    logger.debug(f"Parsed presentation with {result.rank} generators")
    return result


def format_word(p: Presentation, word: Word) -> str:
    terms = []
    for name, exponent in zip(p.generators, word):
        if exponent == 1:
            terms.append(name)
        elif exponent > 1:
            terms.append(f"{exponent}{name}")
    return " + ".join(terms) if terms else "0"


def format_presentation(p: Presentation) -> str:
    """Print p in the binoid form of the DSL; parse_presentation inverts it"""
    orders = {f.generator: f.order for f in p.unit_factors}
    generators = ",".join(f"{name}:{orders[name]}" if name in orders else name for name in p.generators)

    implied = [(p.scaled_unit(f.generator, f.order), p.zero_word) for f in p.unit_factors]
    relations = []
    for lhs, rhs in p.congruences:
        if (lhs, rhs) in implied:
            implied.remove((lhs, rhs))
            continue
        relations.append(f"{format_word(p, lhs)} = {format_word(p, rhs)}")
    relations += [f"{format_word(p, w)} = inf" for w in p.infinity_relations]

    head = "cancellative binoid" if p.cancellative else "binoid"
    text = f"{head} {generators}".rstrip()
    if relations:
        text += " | " + "; ".join(relations)
    return text


def parse_word(p: Presentation, text: str) -> Optional[Word]:
    """Parse one word over p's generators; 'inf' gives None"""
    parser = PresentationParser(text)
    if parser.token.type == 'keyword' and parser.token.value == 'inf':
        parser.advance()
        result = None
    else:
        result = parser.parse_word(list(p.generators))
    if parser.token.type != 'end':
        raise parser.error(f"unexpected '{parser.token.value}' after word")
    return result


def parse_word_list(p: Presentation, text: str) -> List[Optional[Word]]:
    """Words separated by ';' or ','"""
    parser = PresentationParser(text)
    words: List[Optional[Word]] = []
    names = list(p.generators)
    while parser.token.type != 'end':
        if parser.token.type == 'keyword' and parser.token.value == 'inf':
            parser.advance()
            words.append(None)
        else:
            words.append(parser.parse_word(names))
        if parser.token.type in ('semicolon', 'comma'):
            parser.advance()
        elif parser.token.type != 'end':
            raise parser.error(f"expected ';' between words, found '{parser.token.value}'")
    return words
