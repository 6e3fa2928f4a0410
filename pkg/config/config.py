# Configuration management for binoid-hk including computation caps, parallelism and logging.
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List

from dotenv import load_dotenv

# Load environment variables
load_dotenv('config/config.env')


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name, '')
    return int(value) if value.strip() else default


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name, '')
    if not value.strip():
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


def _env_schedule(name: str, default: List[int]) -> List[int]:
    value = os.getenv(name, '')
    if not value.strip():
        return list(default)
    return [int(part) for part in value.split(',') if part.strip()]


DEFAULT_SCHEDULE = [8, 12, 16, 24, 32, 48, 64]


@dataclass
class HKConfig:
    # Configuration for Hilbert-Kunz computations

    # Rewriting
    completion_budget: int = field(default_factory=lambda: _env_int('BINOID_HK_COMPLETION_BUDGET', 100_000))

    # Enumeration and search caps
    enumeration_cap: int = field(default_factory=lambda: _env_int('BINOID_HK_ENUMERATION_CAP', 10_000_000))
    subset_cap: int = field(default_factory=lambda: _env_int('BINOID_HK_SUBSET_CAP', 20))
    reduced_multiple_cap: int = field(default_factory=lambda: _env_int('BINOID_HK_REDUCED_CAP', 64))
    unit_search_cap: int = field(default_factory=lambda: _env_int('BINOID_HK_UNIT_CAP', 100_000))

    # Exact toric volumes are computed up to this ambient dimension
    exact_dimension_cap: int = 3

    # Sample schedule for numerical e_HK estimates
    estimate_schedule: List[int] = field(default_factory=lambda: _env_schedule('BINOID_HK_SCHEDULE', DEFAULT_SCHEDULE))

    # Parallelism (1 = run in-process)
    threads: int = field(default_factory=lambda: _env_int('BINOID_HK_THREADS', 1))

    # Hypotheses the user may assert globally
    assume_cancellative: bool = field(default_factory=lambda: _env_bool('BINOID_HK_ASSUME_CANCELLATIVE', False))
    assume_semipositive: bool = field(default_factory=lambda: _env_bool('BINOID_HK_ASSUME_SEMIPOSITIVE', False))

    # Logging Configuration
    log_level: str = field(default_factory=lambda: os.getenv('LOG_LEVEL', 'INFO'))
    log_dir: str = field(default_factory=lambda: os.getenv('BINOID_HK_LOG_DIR', ''))

    def validate(self) -> List[str]:
        """Validate configuration parameters"""
        errors = []

        caps = [
            ('completion_budget', self.completion_budget),
            ('enumeration_cap', self.enumeration_cap),
            ('subset_cap', self.subset_cap),
            ('reduced_multiple_cap', self.reduced_multiple_cap),
            ('unit_search_cap', self.unit_search_cap),
            ('exact_dimension_cap', self.exact_dimension_cap),
            ('threads', self.threads),
        ]
        for name, value in caps:
            if value <= 0:
                errors.append(f"{name} must be positive")

        if not self.estimate_schedule:
            errors.append("estimate_schedule must not be empty")
        elif any(q < 1 for q in self.estimate_schedule):
            errors.append("estimate_schedule values must be >= 1")

        if self.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"unknown log level {self.log_level}")

        return errors

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)
