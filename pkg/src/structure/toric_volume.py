# Exact Hilbert-Kunz multiplicity of a positive affine monoid as the volume of C outside the shifted cones f_i + C.
import itertools
import logging
import math
from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from structure.lattice import lattice_index
from utils.errors import HypothesisRefuted, HypothesisUnmet, UsageError

DEFAULT_DIMENSION_CAP = 3

Point = Tuple[Fraction, ...]
Constraint = Tuple[Tuple[int, ...], Fraction]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _det(rows: Sequence[Sequence]) -> Fraction:
    value = Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]).det()
    return Fraction(int(value.p), int(value.q))


def _angle_order(points: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    """Counter-clockwise order of the vertices of a convex polygon around their centroid"""
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)

    def half(p) -> int:
        x, y = p[0] - cx, p[1] - cy
        return 0 if y > 0 or (y == 0 and x > 0) else 1

    def compare(p, q) -> int:
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(compare))


class ToricVolumeCalculator:
    """Normalized volume of C ∖ ⋃(f_i + C) for a pointed rational cone C of dimension <= 3"""

    def __init__(self, config=None):
        self.config = config
        self.dimension_cap = config.exact_dimension_cap if config is not None else DEFAULT_DIMENSION_CAP
        self.logger = logging.getLogger(__name__)

    def facet_normals(self, gens: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
        """Primitive inner normals of the facets of cone(gens)"""
        d = len(gens[0])
        if d == 1:
            candidates = [(1,)]
        else:
            candidates = []
            for subset in itertools.combinations(gens, d - 1):
                m = Matrix(subset)
                if m.rank() < d - 1:
                    continue
                rows = list(range(d - 1))
                normal = [
                    int((-1) ** k * m.extract(rows, [c for c in range(d) if c != k]).det()) for k in range(d)
                ]
                candidates.append(tuple(normal))

        normals = set()
        for normal in candidates:
            g = math.gcd(*normal)
            if g == 0:
                continue
            normal = tuple(x // g for x in normal)
            values = [_dot(normal, x) for x in gens]
            if all(v >= 0 for v in values):
                normals.add(normal)
            elif all(v <= 0 for v in values):
                normals.add(tuple(-x for x in normal))
        return sorted(normals)

    def truncation_height(self, gens, normals, w, ideal) -> Fraction:
        """Height h with C ∖ ⋃(f_i + C) inside {w·x <= h}"""
        h = Fraction(0)
        for ray in gens:
            best: Optional[Fraction] = None
            for f in ideal:
                t = Fraction(0)
                feasible = True
                for a in normals:
                    ar, af = _dot(a, ray), _dot(a, f)
                    if ar > 0:
                        t = max(t, Fraction(af, ar))
                    elif af > 0:
                        feasible = False
                        break
                if feasible and (best is None or t < best):
                    best = t
            if best is None:
                raise HypothesisRefuted(
                    f"region is unbounded along {list(ray)}: the ideal is not primary to the maximal ideal"
                )
            h += best * _dot(w, ray)
        return h

    def vertices(self, constraints: List[Constraint], d: int) -> List[Point]:
        found = set()
        for subset in itertools.combinations(constraints, d):
            rows = [c for c, _ in subset]
            denominator = _det(rows)
            if denominator == 0:
                continue
            rhs = [beta for _, beta in subset]
            point = []
            for i in range(d):
                replaced = [row[:i] + (b,) + row[i + 1:] for row, b in zip(rows, rhs)]
                point.append(_det(replaced) / denominator)
            point = tuple(point)
            if all(_dot(c, point) >= beta for c, beta in constraints):
                found.add(point)
        return sorted(found)

    def polytope_volume(self, constraints: List[Constraint], d: int) -> Fraction:
        """Euclidean volume of {x : c·x >= beta for all constraints}, assumed bounded"""
        points = self.vertices(constraints, d)
        if len(points) <= d:
            return Fraction(0)
        if d == 1:
            return max(p[0] for p in points) - min(p[0] for p in points)
        if d == 2:
            polygon = _angle_order(points)
            twice = sum(
                p[0] * q[1] - q[0] * p[1] for p, q in zip(polygon, polygon[1:] + polygon[:1])
            )
            return abs(twice) / 2
        return self._polyhedron_volume(constraints, points)

    def _polyhedron_volume(self, constraints: List[Constraint], points: List[Point]) -> Fraction:
        apex = points[0]
        volume = Fraction(0)
        faces = set()
        for c, beta in constraints:
            on = frozenset(i for i, p in enumerate(points) if _dot(c, p) == beta)
            if len(on) < 3 or on in faces or 0 in on:
                faces.add(on)
                continue
            faces.add(on)
            # project along the dominant normal axis to order the face polygon
            axis = max(range(3), key=lambda k: abs(c[k]))
            keep = [k for k in range(3) if k != axis]
            face = [points[i] for i in sorted(on)]
            lookup = {(p[keep[0]], p[keep[1]]): p for p in face}
            ordered = [lookup[q] for q in _angle_order(list(lookup))]
            for a, b in zip(ordered[1:], ordered[2:]):
                rows = [tuple(x - y for x, y in zip(v, apex)) for v in (ordered[0], a, b)]
                volume += abs(_det(rows)) / 6
        return volume

    def toric_ehk(self, gens: Sequence[Sequence[int]], n_gens: Sequence[Sequence[int]]) -> Fraction:
        """Normalized lattice volume of C ∖ ⋃(f_i + C) with C = cone(gens), f_i the ideal generators"""
        vectors = [tuple(int(x) for x in g) for g in gens]
        d = len(vectors[0]) if vectors else 0
        vectors = [v for v in vectors if any(v)]
        if d == 0:
            return Fraction(1)
        if d > self.dimension_cap:
            raise HypothesisUnmet(f"exact volume is limited to dimension {self.dimension_cap}, got {d}")
        if not vectors:
            raise UsageError("monoid generators span no cone")

        covolume = lattice_index(vectors)
        normals = self.facet_normals(vectors)
        w = tuple(sum(a[k] for a in normals) for k in range(d))
        if not normals or any(_dot(w, v) <= 0 for v in vectors):
            raise UsageError("cone is not pointed: the monoid has non-torsion units")

        ideal = [tuple(int(x) for x in f) for f in n_gens]
        if any(not any(f) for f in ideal):
            return Fraction(0)
        if not ideal:
            raise HypothesisRefuted("empty ideal in a positive-dimensional monoid is not primary")

        h = self.truncation_height(vectors, normals, w, ideal)
        top = (tuple(-x for x in w), -h)

        total = Fraction(0)
        for size in range(len(ideal) + 1):
            for subset in itertools.combinations(ideal, size):
                bounds = [max((_dot(a, f) for f in subset), default=0) for a in normals]
                constraints = [(a, Fraction(b)) for a, b in zip(normals, bounds)] + [top]
                total += (-1) ** size * self.polytope_volume(constraints, d)

        value = total / covolume
        self.logger.debug(f"Toric volume: {total} over covolume {covolume} = {value}")
        return value


def toric_ehk(gens: Sequence[Sequence[int]], n_gens: Sequence[Sequence[int]], config=None) -> Fraction:
    return ToricVolumeCalculator(config).toric_ehk(gens, n_gens)
