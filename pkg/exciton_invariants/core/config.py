"""
Runtime settings.

Limits and defaults are read from ``EXCITON_*`` environment variables, optionally
seeded from a ``.env`` file through python-dotenv. Variables already present in
the environment always win over the file.
"""

import os
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv

from exciton_invariants.core.errors import ConfigurationError

ENV_PREFIX = "EXCITON_"


@dataclass(frozen=True)
class Settings:
    """
    Size guards and numeric defaults shared by every module.

    Attributes:
        max_level_dim (int): Largest C(N, n) a level matrix may have
        exact_max_dim (int): Largest dimension accepted by the exact char-poly mode
        exact_roots_max_dim (int): Largest dimension whose char-poly roots are
            extracted to cross-check the float spectrum
        brute_force_max_vertices (int): Largest N for the N! isomorphism search
        oracle_max_vertices (int): Largest N for physics-route exciton blocks
        hamiltonian_max_vertices (int): Largest N for the full 2^N Hamiltonian
        tolerance_scale (float): Default tolerance is this times max(1, max row sum)
        workers (int): Thread pool size for batch eigensolves
        log_level (str): Logging level used by the CLI when no -v flag is given
    """

    max_level_dim: int = 50_000
    exact_max_dim: int = 512
    exact_roots_max_dim: int = 64
    brute_force_max_vertices: int = 10
    oracle_max_vertices: int = 14
    hamiltonian_max_vertices: int = 8
    tolerance_scale: float = 1e-8
    workers: int = 4
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        for field in fields(self):
            value = getattr(self, field.name)
            if isinstance(value, (int, float)) and value <= 0:
                raise ConfigurationError(
                    f"Setting '{field.name}' must be positive, got {value!r}"
                )

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """
        Build settings from the process environment.

        Args:
            env_file: Optional path to a .env file. When omitted python-dotenv
                      searches upward from the working directory.

        Returns:
            A validated Settings instance

        Raises:
            ConfigurationError: If a variable cannot be parsed or is not positive
        """
        load_dotenv(env_file, override=False)

        parsers: Dict[str, Callable[[str], Any]] = {
            field.name: _parser_for(field.type) for field in fields(cls)
        }
        overrides: Dict[str, Any] = {}
        for name, parse in parsers.items():
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is None or raw.strip() == "":
                continue
            try:
                overrides[name] = parse(raw.strip())
            except ValueError as e:
                raise ConfigurationError(
                    f"Cannot parse {ENV_PREFIX + name.upper()}={raw!r}: {e}"
                ) from e

        return cls(**overrides)


def _parser_for(annotation: Any) -> Callable[[str], Any]:
    if annotation in (int, "int"):
        return lambda raw: int(raw.replace("_", ""))
    if annotation in (float, "float"):
        return float
    return lambda raw: raw.upper()


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, read from the environment on first use."""
    return Settings.from_env()


def resolve_settings(settings: Optional[Settings]) -> Settings:
    """Return ``settings`` or the process-wide default when it is None."""
    return settings if settings is not None else get_settings()
