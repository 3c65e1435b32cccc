"""Level-graded Fock space of the derivative models.

Basis states are partitions ``(m1 >= m2 >= ... >= mk >= 1)`` standing for
``a_{-m1} ... a_{-mk} Omega``.  Modes with ``1 <= m <= n`` are kept as formal
creators; they only ever produce null vectors, which the exact Gram rank
detects.

The Mobius generators ``L_{-1}, L_0, L_1`` act by the weight ``n + 1``
primary law ``[L_k, a_m] = (n k - m) a_{m+k}`` with ``L_k Omega = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Mapping, Tuple

from .algebra import StructureConstants, as_scalar, format_scalar, structure_pi, vacuum_expectation
from .linalg import bareiss_rank, matvec, nullspace

PartitionState = Tuple[int, ...]
VACUUM: PartitionState = ()


def as_state(parts: Iterable[int]) -> PartitionState:
    parts = tuple(sorted(parts, reverse=True))
    if parts and parts[-1] < 1:
        raise ValueError("partition parts must be positive")
    return parts


def level(state: PartitionState) -> int:
    return sum(state)


def format_state(state: PartitionState) -> str:
    return "{" + ",".join(str(p) for p in state) + "}" if state else "Omega"


class FockVector:
    """Finite linear combination of partition states with exact coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Iterable[int], object] | None = None):
        acc: Dict[PartitionState, Fraction] = {}
        for s, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c:
                s = as_state(s)
                acc[s] = acc.get(s, 0) + c
        self._coeffs = {s: c for s, c in sorted(acc.items(), key=_state_key) if c}

    @classmethod
    def basis(cls, state: Iterable[int]) -> "FockVector":
        return cls({tuple(state): 1})

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls({VACUUM: 1})

    @property
    def coeffs(self) -> Dict[PartitionState, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def levels(self) -> set:
        return {level(s) for s in self._coeffs}

    @property
    def level(self) -> int | None:
        """Common level of all terms, or ``None`` if empty or inhomogeneous."""
        lv = self.levels()
        return lv.pop() if len(lv) == 1 else None

    def max_level(self) -> int:
        return max(self.levels(), default=0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "FockVector") -> "FockVector":
        acc = dict(self._coeffs)
        for s, c in other._coeffs.items():
            acc[s] = acc.get(s, 0) + c
        return FockVector(acc)

    def __neg__(self):
        return FockVector({s: -c for s, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_scalar(k)
        return FockVector({s: k * c for s, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "FockVector(0)"
        body = " + ".join(f"{format_scalar(c)}*{format_state(s)}" for s, c in self._coeffs.items())
        return f"FockVector({body})"


def _state_key(item):
    s = item[0]
    # higher level first, then reverse-lexicographic inside a level
    return (-level(s), tuple(-p for p in s))


@lru_cache(maxsize=None)
def _partitions(total: int, largest: int) -> Tuple[PartitionState, ...]:
    if total == 0:
        return (VACUUM,)
    out = []
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            out.append((first,) + rest)
    return tuple(out)


def level_basis(N: int) -> List[PartitionState]:
    """All partitions of ``N`` in reverse-lexicographic order, e.g. ``[(2,), (1, 1)]``."""
    if N < 0:
        raise ValueError("level must be non-negative")
    return list(_partitions(N, N))


def _annihilate(m: int, state: PartitionState, n: int) -> Dict[PartitionState, Fraction]:
    # a_m commutes past every creator except a_{-m}, each of which yields Pi(m)
    k = state.count(m)
    if k == 0:
        return {}
    pi = structure_pi(n, m)
    if pi == 0:
        return {}
    i = state.index(m)
    return {state[:i] + state[i + 1:]: Fraction(k * pi)}


def apply_mode(m: int, v: FockVector, constants: StructureConstants) -> FockVector:
    """``a_m v``; creators append a part, ``a_0`` acts as ``q``, annihilators contract."""
    if m < 0:
        return FockVector({s + (-m,): c for s, c in v.items()})
    if m == 0:
        return v * constants.q
    acc: Dict[PartitionState, Fraction] = {}
    for s, c in v.items():
        for t, d in _annihilate(m, s, constants.n).items():
            acc[t] = acc.get(t, 0) + c * d
    return FockVector(acc)


def apply_word(word: Iterable[int], v: FockVector, constants: StructureConstants) -> FockVector:
    """Apply ``a_{m1} ... a_{mk}`` to ``v`` (rightmost mode first)."""
    for m in reversed(tuple(word)):
        v = apply_mode(m, v, constants)
        if v.is_zero():
            break
    return v


@lru_cache(maxsize=None)
def _basis_pairing(s: PartitionState, t: PartitionState, n: int, q: Fraction) -> Fraction:
    if level(s) != level(t):
        return Fraction(0)
    # <s, t> = <Omega, a_{s_k} ... a_{s_1} t>: adjoint of a_{-m} is a_m
    out = apply_word(tuple(reversed(s)), FockVector.basis(t), StructureConstants(n, q))
    return out.coeffs.get(VACUUM, Fraction(0))


def inner_product(u: FockVector, v: FockVector, n: int, q=0) -> Fraction:
    """Bilinear extension of the Gram pairing; zero between different levels."""
    q = as_scalar(q)
    total = Fraction(0)
    for s, a in u.items():
        for t, b in v.items():
            if level(s) == level(t):
                total += a * b * _basis_pairing(s, t, n, q)
    return total


def norm_squared(v: FockVector, n: int, q=0) -> Fraction:
    return inner_product(v, v, n, q)


def is_null(v: FockVector, n: int, q=0) -> bool:
    """Zero Gram norm; for the semi-definite form this also means orthogonal to everything."""
    return norm_squared(v, n, q) == 0


def is_physical(state: PartitionState, n: int) -> bool:
    """All parts exceed ``n``; these states span the level spaces modulo null vectors."""
    return all(p > n for p in state)


@dataclass(frozen=True)
class GramMatrix:
    n: int
    level: int
    q: Fraction
    basis: Tuple[PartitionState, ...]
    entries: Tuple[Tuple[Fraction, ...], ...]

    @property
    def rows(self) -> List[List[Fraction]]:
        return [list(r) for r in self.entries]

    def rank(self) -> int:
        return bareiss_rank(self.entries)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "q": format_scalar(self.q),
            "basis": [list(s) for s in self.basis],
            "entries": [[format_scalar(x) for x in row] for row in self.entries],
        }


def gram_matrix(n: int, N: int, q=0) -> GramMatrix:
    """Exact Gram matrix of the raw level-``N`` basis."""
    q = as_scalar(q)
    basis = tuple(level_basis(N))
    entries = tuple(tuple(_basis_pairing(s, t, n, q) for t in basis) for s in basis)
    return GramMatrix(n, N, q, basis, entries)


def gram_entry_via_normal_order(s: PartitionState, t: PartitionState, n: int, q=0) -> Fraction:
    """Gram entry recomputed by normal ordering the full word (independent route)."""
    word = tuple(reversed(s)) + tuple(-p for p in t)
    return vacuum_expectation(word, StructureConstants(n, q))


def diagonal_norm_formula(state: PartitionState, n: int) -> int:
    """Closed form ``prod_m k_m! Pi(m)^{k_m}`` of a basis state's norm."""
    out = 1
    for m in set(state):
        k = state.count(m)
        out *= factorial(k) * structure_pi(n, m) ** k
    return out


@dataclass(frozen=True)
class NullReport:
    n: int
    level: int
    dimension: int
    rank: int
    null_basis: Tuple[FockVector, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "dimension": self.dimension,
            "rank": self.rank,
            "null_basis": [
                [[list(s), format_scalar(c)] for s, c in v.items()] for v in self.null_basis
            ],
        }


def null_report(n: int, N: int, q=0) -> NullReport:
    g = gram_matrix(n, N, q)
    rank = g.rank()
    kernel = nullspace(g.entries)
    vectors = tuple(FockVector(dict(zip(g.basis, vec))) for vec in kernel)
    assert rank + len(vectors) == len(g.basis)
    assert all(not any(matvec(g.entries, vec)) for vec in kernel)
    return NullReport(n, N, len(g.basis), rank, vectors)


def effective_multiplicity(n: int, N: int) -> int:
    """Dimension of the level-``N`` space modulo null vectors."""
    return gram_matrix(n, N).rank()


def mobius_apply(k: int, v: FockVector, n: int) -> FockVector:
    """Action of the global conformal generator ``L_k``, ``k in {-1, 0, 1}``.

    Uses the vacuum representation ``q = 0``; ``L_k`` acts as a derivation on
    the creators and kills ``Omega``.  For ``n >= 1`` the sl(2) relations hold
    exactly on :func:`is_physical` states and only up to null vectors on
    states containing a mode with ``|m| <= n``: setting ``a_0 = q`` is not
    compatible with ``[L_k, a_0] = n k a_k`` unless those modes vanish.
    """
    if k not in (-1, 0, 1):
        raise ValueError("only L_{-1}, L_0, L_1 are available")
    if k == 0:
        return FockVector({s: level(s) * c for s, c in v.items()})
    c0 = StructureConstants(n, 0)
    out = FockVector()
    for s, c in v.items():
        for i, part in enumerate(s):
            coeff = n * k + part  # (n k - m) with m = -part
            if coeff == 0:
                continue
            left, right = s[:i], s[i + 1:]
            w = apply_mode(k - part, FockVector.basis(right), c0)
            w = apply_word(tuple(-p for p in left), w, c0)
            out = out + w * (c * coeff)
    return out
