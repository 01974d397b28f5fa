"""
Spectra of symmetric integer matrices.

Floating-point spectra come from scipy's symmetric eigensolver, which always
returns real eigenvalues. The exact mode computes the characteristic
polynomial over the integers with sympy and is reserved for small matrices.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from exciton_invariants.core.config import Settings, resolve_settings
from exciton_invariants.core.errors import GuardLimitError
from exciton_invariants.core.exciton import Flavor, build_level
from exciton_invariants.core.graph import Graph, SymmetricIntMatrix

_LAMBDA = sympy.Symbol("lambda")


class Verdict(str, Enum):
    EQUAL = "Equal"
    DIFFERENT = "Different"


@dataclass(frozen=True)
class Spectrum:
    """
    Eigenvalues with multiplicity, sorted ascending.

    Attributes:
        values (Tuple[float, ...]): The eigenvalues
        dim (int): Dimension of the source matrix, equal to len(values)
    """

    values: Tuple[float, ...]
    dim: int

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "Spectrum":
        ordered = tuple(sorted(float(v) for v in values))
        return cls(ordered, len(ordered))

    def trace(self) -> float:
        return math.fsum(self.values)

    def sum_of_squares(self) -> float:
        return math.fsum(v * v for v in self.values)

    def grouped(self, tol: float) -> List[Tuple[float, int]]:
        """
        Cluster eigenvalues within tol of their group's first member.

        Returns:
            (mean value, multiplicity) pairs in descending value order
        """
        groups: List[List[float]] = []
        for value in reversed(self.values):
            if groups and abs(groups[-1][0] - value) <= tol:
                groups[-1].append(value)
            else:
                groups.append([value])
        return [(math.fsum(group) / len(group), len(group)) for group in groups]

    def format_grouped(self, tol: float) -> str:
        """Multiplicity notation such as "{8^1, 2^11, -2^9, -4^3}"."""
        parts = [f"{format_eigenvalue(value, tol)}^{count}" for value, count in self.grouped(tol)]
        return "{" + ", ".join(parts) + "}"


def format_eigenvalue(value: float, tol: float) -> str:
    """Integers print bare, anything else with 12 significant digits."""
    nearest = round(value)
    if abs(value - nearest) <= tol:
        return str(int(nearest))
    return f"{value:.12g}"


@dataclass(frozen=True)
class SpectrumVerdict:
    """
    Outcome of comparing two spectra.

    Attributes:
        outcome (Verdict): Different iff max_gap > tolerance_used
        max_gap (float): Largest gap between sorted eigenvalues, inf on a dimension mismatch
        tolerance_used (float): Tolerance the comparison ran with
        dim_mismatch (bool): True when the spectra had different lengths
    """

    outcome: Verdict
    max_gap: float
    tolerance_used: float
    dim_mismatch: bool = False

    @property
    def is_equal(self) -> bool:
        return self.outcome is Verdict.EQUAL


@dataclass(frozen=True)
class CharPoly:
    """
    Exact monic characteristic polynomial det(lambda I - M).

    Attributes:
        coefficients (Tuple[int, ...]): Highest degree first, leading 1
    """

    coefficients: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x: int) -> int:
        """Exact value at an integer point (Horner)."""
        result = 0
        for coefficient in self.coefficients:
            result = result * x + coefficient
        return result

    def as_sympy(self) -> sympy.Poly:
        return sympy.Poly.from_list(list(self.coefficients), _LAMBDA, domain=ZZ)

    def roots(self) -> List[float]:
        """
        Numerical roots with multiplicity, ascending.

        The polynomial is factored over the integers first so the root finder
        only ever sees square-free irreducible factors.
        """
        _, factors = self.as_sympy().factor_list()
        roots: List[float] = []
        for factor, multiplicity in factors:
            for root in factor.nroots(n=30, maxsteps=200):
                roots.extend([float(sympy.re(root))] * multiplicity)
        return sorted(roots)

    def __str__(self) -> str:
        terms = []
        for power, coefficient in zip(range(self.degree, -1, -1), self.coefficients):
            if coefficient == 0:
                continue
            magnitude = abs(coefficient)
            if power == 0:
                body = str(magnitude)
            else:
                monomial = "λ" if power == 1 else f"λ^{power}"
                body = monomial if magnitude == 1 else f"{magnitude}{monomial}"
            sign = "-" if coefficient < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _check_symmetric(m: npt.ArrayLike) -> np.ndarray:
    matrix = np.asarray(m)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    if not np.array_equal(matrix, matrix.T):
        raise ValueError("Matrix is not symmetric")
    return matrix


def default_tolerance(m: npt.ArrayLike, settings: Optional[Settings] = None) -> float:
    """tolerance_scale * max(1, largest absolute row sum)."""
    settings = resolve_settings(settings)
    matrix = np.asarray(m)
    row_bound = float(np.abs(matrix).sum(axis=1).max()) if matrix.size else 0.0
    return settings.tolerance_scale * max(1.0, row_bound)


def spectrum(m: SymmetricIntMatrix) -> Spectrum:
    """
    All eigenvalues of a symmetric matrix, ascending.

    Raises:
        ValueError: If m is not square and symmetric
    """
    matrix = _check_symmetric(m)
    if matrix.shape[0] == 0:
        return Spectrum((), 0)
    values = scipy.linalg.eigh(matrix.astype(np.float64), eigvals_only=True, check_finite=False)
    return Spectrum(tuple(float(v) for v in np.sort(values)), int(matrix.shape[0]))


def compare_spectra(s1: Spectrum, s2: Spectrum, tol: float) -> SpectrumVerdict:
    """
    Compare sorted spectra position by position.

    Spectra of different dimension are Different with an infinite gap and
    dim_mismatch set.
    """
    if s1.dim != s2.dim:
        return SpectrumVerdict(Verdict.DIFFERENT, math.inf, tol, dim_mismatch=True)
    if s1.dim == 0:
        return SpectrumVerdict(Verdict.EQUAL, 0.0, tol)
    gap = float(np.max(np.abs(np.asarray(s1.values) - np.asarray(s2.values))))
    outcome = Verdict.DIFFERENT if gap > tol else Verdict.EQUAL
    return SpectrumVerdict(outcome, gap, tol)


def char_poly_exact(m: SymmetricIntMatrix, settings: Optional[Settings] = None) -> CharPoly:
    """
    Exact characteristic polynomial with arbitrary-precision coefficients.

    Uses sympy's division-free charpoly over ZZ.

    Raises:
        GuardLimitError: If the dimension exceeds settings.exact_max_dim
        ValueError: If m is not square
    """
    settings = resolve_settings(settings)
    matrix = np.asarray(m)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    dim = int(matrix.shape[0])
    if dim > settings.exact_max_dim:
        raise GuardLimitError(
            f"Exact characteristic polynomial is limited to dimension "
            f"{settings.exact_max_dim}, got {dim}",
            limit=settings.exact_max_dim,
            requested=dim,
        )
    rows = [[ZZ(int(x)) for x in row] for row in matrix.tolist()]
    coefficients = DomainMatrix(rows, (dim, dim), ZZ).charpoly()
    return CharPoly(tuple(int(c) for c in coefficients))


def spectra_equal_exact(
    m1: SymmetricIntMatrix, m2: SymmetricIntMatrix, settings: Optional[Settings] = None
) -> bool:
    """Exact cospectrality certificate: identical characteristic polynomials."""
    return char_poly_exact(m1, settings) == char_poly_exact(m2, settings)


def level_spectrum(
    g: Graph,
    n: int,
    flavor: Flavor = Flavor.ADJACENCY,
    settings: Optional[Settings] = None,
) -> Spectrum:
    """Spectrum of the level-n matrix of the requested flavour."""
    return spectrum(build_level(g, n, flavor, settings).base)


def invariant_profile(
    g: Graph,
    max_level: Optional[int] = None,
    flavor: Flavor = Flavor.ADJACENCY,
    settings: Optional[Settings] = None,
) -> List[Spectrum]:
    """
    Spectra at levels 1..max_level; max_level defaults to floor(N/2).

    Entry k - 1 is the level-k spectrum.
    """
    top = g.n_vertices // 2 if max_level is None else max_level
    return [level_spectrum(g, n, flavor, settings) for n in range(1, top + 1)]
