"""Energy bounds for single modes and smeared fields on truncated Fock spaces.

Matrices are assembled exactly; floating point (mpmath) enters only in the
final generalized eigenvalue step and in the smeared-field norms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Tuple

import mpmath

from .algebra import StructureConstants, as_scalar, format_scalar, structure_pi, structure_pi_prime
from .fock import FockVector, gram_matrix, inner_product, level, level_basis, apply_mode
from .linalg import independent_columns

DEFAULT_TOLERANCE = 1e-9
DEFAULT_DPS = 30


class TruncationError(ValueError):
    """A creation mode would leave the configured level window."""


@dataclass
class BoundReport:
    kind: str
    n: int
    m: int
    level: int
    observed: mpmath.mpf
    bound: Fraction
    passed: bool
    tolerance: float
    effective_dimension: int = 0
    identity_holds: bool | None = None
    min_eigenvalue: mpmath.mpf | None = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "level": self.level,
            "observed": mpmath.nstr(self.observed, 20),
            "bound": format_scalar(self.bound) if isinstance(self.bound, Fraction) else mpmath.nstr(self.bound, 20),
            "passed": self.passed,
            "tolerance": self.tolerance,
            "effective_dimension": self.effective_dimension,
            "identity_holds": self.identity_holds,
            "notes": list(self.notes),
        }


def _max_generalized_eigenvalue(M: List[List[Fraction]], G: List[List[Fraction]],
                                dps: int) -> Tuple[mpmath.mpf, mpmath.mpf, int]:
    """Largest and smallest eigenvalue of the pencil ``(M, G)`` on the range of ``G``.

    ``G`` is restricted to a maximal set of independent columns, where it is
    positive definite; null directions of a PSD form are also null for
    ``M``, so nothing is lost.
    """
    support = independent_columns(G)
    if not support:
        return mpmath.mpf(0), mpmath.mpf(0), 0
    with mpmath.workdps(dps):
        L = mpmath.cholesky(_mp(G, support))
        Linv = mpmath.inverse(L)
        A = Linv * _mp(M, support) * Linv.T
        A = (A + A.T) / 2
        ev = mpmath.eigsy(A, eigvals_only=True)
        ev = [ev[i] for i in range(len(support))]
        return max(ev), min(ev), len(support)


def _mp(a, support):
    return mpmath.matrix([[mpmath.mpf(a[i][j].numerator) / a[i][j].denominator for j in support] for i in support])


def _mode_images(m: int, N: int, constants: StructureConstants) -> Tuple[list, List[FockVector]]:
    basis = level_basis(N)
    return basis, [apply_mode(m, FockVector.basis(s), constants) for s in basis]


def _pairing_matrix(vectors: List[FockVector], n: int, q) -> List[List[Fraction]]:
    size = len(vectors)
    out = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            out[i][j] = out[j][i] = inner_product(vectors[i], vectors[j], n, q)
    return out


def _ladder_report(kind: str, n: int, m: int, N: int, bound: Fraction, tolerance: float,
                   dps: int, identity: bool | None = None) -> BoundReport:
    constants = StructureConstants(n)
    sign = 1 if kind == "annihilator" else -1
    basis, images = _mode_images(sign * m, N, constants)
    G = [list(r) for r in gram_matrix(n, N).entries]
    M = _pairing_matrix(images, n, 0)
    top, bottom, dim = _max_generalized_eigenvalue(M, G, dps)
    notes = []
    if dim == 0:
        notes.append("empty effective space: every level-%d state is null" % N)
    passed = bool(top <= _as_mpf(bound) * (1 + tolerance)) and identity is not False
    return BoundReport(kind, n, m, N, top, bound, passed, tolerance, dim, identity, bottom, notes)


def annihilator_bound_check(n: int, m: int, N: int, tolerance: float = DEFAULT_TOLERANCE,
                            dps: int = DEFAULT_DPS) -> BoundReport:
    """Largest ``||a_m psi||^2`` over unit level-``N`` states against ``N * Pi'(m)``."""
    if m < 1 or N < 0:
        raise ValueError("need m >= 1 and N >= 0")
    bound = N * structure_pi_prime(n, m)
    return _ladder_report("annihilator", n, m, N, bound, tolerance, dps)


def ladder_identity_holds(n: int, m: int, N: int) -> bool:
    """``||a_{-m} e||^2 == ||a_m e||^2 + Pi(m) ||e||^2`` exactly for every level-``N`` basis state."""
    c = StructureConstants(n)
    pi = structure_pi(n, m)
    for s in level_basis(N):
        e = FockVector.basis(s)
        up = apply_mode(-m, e, c)
        down = apply_mode(m, e, c)
        if inner_product(up, up, n) != inner_product(down, down, n) + pi * inner_product(e, e, n):
            return False
    return True


def creator_bound_check(n: int, m: int, N: int, tolerance: float = DEFAULT_TOLERANCE,
                        dps: int = DEFAULT_DPS) -> BoundReport:
    """Largest ``||a_{-m} psi||^2`` over unit level-``N`` states against ``(N + m) Pi'(m)``.

    Also checks the exact ladder identity state by state.
    """
    if m < 1 or N < 0:
        raise ValueError("need m >= 1 and N >= 0")
    bound = (N + m) * structure_pi_prime(n, m)
    identity = ladder_identity_holds(n, m, N)
    return _ladder_report("creator", n, m, N, bound, tolerance, dps, identity)


@dataclass(frozen=True)
class SmearedFunction:
    """Finitely supported Fourier coefficients ``f_m`` of a test function on the circle."""

    coefficients: Mapping[int, complex]
    real: bool = False

    def __post_init__(self):
        coeffs = {int(m): mpmath.mpc(c) for m, c in self.coefficients.items() if c != 0}
        if self.real:
            for m, c in coeffs.items():
                if abs(coeffs.get(-m, 0) - mpmath.conj(c)) > 1e-12 * max(1, abs(c)):
                    raise ValueError("real test function needs f_{-m} = conj(f_m)")
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))

    @classmethod
    def random(cls, rng: random.Random, support: int = 4, density: float = 0.6,
               real: bool = False) -> "SmearedFunction":
        coeffs: Dict[int, complex] = {}
        for m in range(0 if real else -support, support + 1):
            if rng.random() < density:
                c = complex(rng.gauss(0, 1), rng.gauss(0, 1))
                if real:
                    c = c.real if m == 0 else c
                    coeffs[-m] = c.conjugate()
                coeffs[m] = c
        return cls(coeffs, real)


def _pi_prime_or_zero(n: int, m: int) -> Fraction:
    return Fraction(0) if m == 0 else structure_pi_prime(n, m)


def smeared_bound_check(n: int, f: SmearedFunction, psi: FockVector, q=0, max_level: int = 16,
                        tolerance: float = DEFAULT_TOLERANCE, dps: int = DEFAULT_DPS,
                        normalize: bool = False) -> BoundReport:
    """Linear energy bound ``||Phi(f) psi|| <= ||(L0 + 1) psi|| sum |f_m| (|m| + Pi'(m) + |q| + 1)``.

    ``Pi'(0)`` is taken as 0.  With ``normalize=True`` both sides are divided
    by the Gram norm of ``psi``.
    """
    q = as_scalar(q)
    if psi.max_level() > max_level:
        raise TruncationError(f"state reaches level {psi.max_level()} > max_level {max_level}")
    for m in f.coefficients:
        if m < 0 and psi.max_level() - m > max_level:
            raise TruncationError(f"a_{m} pushes level {psi.max_level()} past max_level {max_level}")
    constants = StructureConstants(n, q)
    modes = list(f.coefficients)
    images = [apply_mode(m, psi, constants) for m in modes]
    raised = FockVector({s: (level(s) + 1) * c for s, c in psi.items()})
    with mpmath.workdps(dps):
        lhs2 = mpmath.mpc(0)
        for i, mi in enumerate(modes):
            for j, mj in enumerate(modes):
                g = inner_product(images[i], images[j], n, q)
                if g:
                    lhs2 += mpmath.conj(f.coefficients[mi]) * f.coefficients[mj] * (mpmath.mpf(g.numerator) / g.denominator)
        lhs = mpmath.sqrt(max(mpmath.re(lhs2), 0))
        r2 = inner_product(raised, raised, n, q)
        weight = mpmath.fsum(
            abs(c) * (abs(m) + _as_mpf(_pi_prime_or_zero(n, m)) + abs(_as_mpf(q)) + 1)
            for m, c in f.coefficients.items()
        )
        rhs = mpmath.sqrt(_as_mpf(r2)) * weight
        if normalize:
            nrm = mpmath.sqrt(_as_mpf(inner_product(psi, psi, n, q)))
            if nrm:
                lhs, rhs = lhs / nrm, rhs / nrm
        passed = bool(lhs <= rhs * (1 + tolerance))
    return BoundReport("smeared", n, 0, psi.max_level(), lhs, rhs, passed, tolerance)


def _as_mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def random_state(rng: random.Random, max_level: int, terms: int = 4) -> FockVector:
    """Random rational combination of basis states with levels up to ``max_level``."""
    coeffs = {}
    for _ in range(terms):
        N = rng.randint(0, max_level)
        s = rng.choice(level_basis(N))
        coeffs[s] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return FockVector(coeffs)


def bound_grid(n_max: int, m_max: int, N_max: int, tolerance: float = DEFAULT_TOLERANCE,
               checks: Tuple[Callable, ...] = (annihilator_bound_check, creator_bound_check)) -> List[BoundReport]:
    return [
        check(n, m, N, tolerance)
        for n in range(n_max + 1)
        for m in range(1, m_max + 1)
        for N in range(N_max + 1)
        for check in checks
    ]
