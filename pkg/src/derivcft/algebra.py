"""Exact mode algebra of the derivative fields.

The modes ``a_m`` of the degree-``n`` derivative of the chiral current obey

    [a_m, a_m'] = delta_{m,-m'} * Pi(m) * 1,   Pi(m) = prod_{k=0}^{2n} (m - n + k)

and the zeroth mode is central, ``a_0 = q * 1``.  Every bracket is a scalar, so
normal ordering a word only ever produces shorter words times rationals.

All coefficients are :class:`fractions.Fraction`; nothing here rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

Word = Tuple[int, ...]
Number = Union[int, Fraction]


def as_scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a :class:`Fraction`."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def structure_pi(n: int, m: int) -> int:
    """Structure polynomial ``prod_{k=0}^{2n} (m - n + k)``.

    Odd in ``m`` and zero exactly when ``|m| <= n``.
    """
    if n < 0:
        raise ValueError("degree n must be non-negative")
    out = 1
    for k in range(2 * n + 1):
        out *= m - n + k
    return out


def structure_pi_prime(n: int, m: int) -> Fraction:
    """``structure_pi(n, m) / m`` for ``m != 0``; even in ``m`` and non-negative."""
    if m == 0:
        raise ValueError("structure_pi_prime is undefined at m = 0")
    return Fraction(structure_pi(n, m), m)


@dataclass(frozen=True)
class StructureConstants:
    """Degree ``n`` (field weight ``n + 1``) and the central value ``q`` of ``a_0``."""

    n: int
    q: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError("degree n must be a non-negative integer")
        object.__setattr__(self, "q", as_scalar(self.q))

    @property
    def weight(self) -> int:
        return self.n + 1

    def bracket(self, m: int, mp: int) -> int:
        """Scalar value of ``[a_m, a_mp]``."""
        return structure_pi(self.n, m) if m + mp == 0 else 0


def _order_key(m: int) -> Tuple[int, int]:
    # creators (m < 0) before annihilators (m > 0), ascending inside each block
    return (0 if m < 0 else 1, m)


def is_normal_ordered(word: Iterable[int]) -> bool:
    w = tuple(word)
    if 0 in w:
        return False
    return all(_order_key(a) <= _order_key(b) for a, b in zip(w, w[1:]))


def grade(word: Iterable[int]) -> int:
    """L0 grade of a word: the energy it adds, ``-sum(m_i)``."""
    return -sum(word)


@lru_cache(maxsize=None)
def _normal_order(word: Word, n: int, q: Fraction) -> Tuple[Tuple[Word, Fraction], ...]:
    if 0 in word:
        i = word.index(0)
        if q == 0:
            return ()
        rest = _normal_order(word[:i] + word[i + 1:], n, q)
        return tuple((w, q * c) for w, c in rest)
    # first adjacent inversion; swapping emits the bracket on the shorter word
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if _order_key(a) > _order_key(b):
            out: Dict[Word, Fraction] = {}
            swapped = word[:i] + (b, a) + word[i + 2:]
            for w, c in _normal_order(swapped, n, q):
                out[w] = out.get(w, 0) + c
            if a + b == 0:
                br = structure_pi(n, a)
                if br:
                    for w, c in _normal_order(word[:i] + word[i + 2:], n, q):
                        out[w] = out.get(w, 0) + br * c
            return tuple((w, c) for w, c in sorted(out.items()) if c)
    return ((word, Fraction(1)),)


class AlgebraElement:
    """Finite linear combination of normal-ordered mode words plus a scalar.

    The scalar part is stored under the empty word and exposed as
    :attr:`scalar`.  Instances are treated as immutable.
    """

    __slots__ = ("constants", "_terms")

    def __init__(self, terms: Mapping[Word, Number] | None = None,
                 constants: StructureConstants | None = None):
        self.constants = constants if constants is not None else StructureConstants(0)
        acc: Dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            coeff = as_scalar(coeff)
            if not coeff:
                continue
            for w, c in _normal_order(tuple(word), self.constants.n, self.constants.q):
                acc[w] = acc.get(w, 0) + coeff * c
        self._terms = {w: c for w, c in sorted(acc.items(), key=_term_sort_key) if c}

    @classmethod
    def mode(cls, m: int, constants: StructureConstants, coeff: Number = 1) -> "AlgebraElement":
        return cls({(m,): coeff}, constants)

    @classmethod
    def scalar_element(cls, value: Number, constants: StructureConstants) -> "AlgebraElement":
        return cls({(): value}, constants)

    @property
    def terms(self) -> Dict[Word, Fraction]:
        return dict(self._terms)

    @property
    def scalar(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def words(self) -> Dict[Word, Fraction]:
        """Non-scalar part."""
        return {w: c for w, c in self._terms.items() if w}

    def is_zero(self) -> bool:
        return not self._terms

    def is_central(self) -> bool:
        return not self.words()

    def _check(self, other: "AlgebraElement"):
        if self.constants != other.constants:
            raise ValueError("elements belong to different mode algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar_element(other, self.constants)
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return AlgebraElement(acc, self.constants)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({w: -c for w, c in self._terms.items()}, self.constants)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            k = as_scalar(other)
            return AlgebraElement({w: k * c for w, c in self._terms.items()}, self.constants)
        self._check(other)
        acc: Dict[Word, Fraction] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                acc[w1 + w2] = acc.get(w1 + w2, 0) + c1 * c2
        return AlgebraElement(acc, self.constants)

    def __rmul__(self, other):
        k = as_scalar(other)
        return AlgebraElement({w: k * c for w, c in self._terms.items()}, self.constants)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.constants == other.constants and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_central() and self.scalar == other
        return NotImplemented

    def __hash__(self):
        return hash((self.constants, tuple(self._terms.items())))

    def __repr__(self):
        return f"AlgebraElement({format_element(self)!r}, n={self.constants.n})"

    def __str__(self):
        return format_element(self)


def _term_sort_key(item):
    word, _ = item
    return (len(word), tuple(_order_key(m) for m in word))


def normal_order(word: Iterable[int], constants: StructureConstants) -> AlgebraElement:
    """Rewrite ``a_{m1} ... a_{mk}`` into normal order using the mode relations."""
    return AlgebraElement({tuple(word): 1}, constants)


def vacuum_expectation(word: Iterable[int], constants: StructureConstants) -> Fraction:
    """``<Omega, a_{m1} ... a_{mk} Omega>``: the scalar part of the normal form."""
    word = tuple(word)
    if grade(word) != 0:
        return Fraction(0)
    return normal_order(word, constants).scalar


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y - y * x


def format_scalar(x: Fraction) -> str:
    x = as_scalar(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_element(x: AlgebraElement) -> str:
    """Canonical text form ``coeff * a[m1] a[m2] ... + coeff * 1``."""
    if x.is_zero():
        return "0"
    parts = []
    for word, c in x.words().items():
        parts.append(f"{format_scalar(c)} * " + " ".join(f"a[{m}]" for m in word))
    if x.scalar:
        parts.append(f"{format_scalar(x.scalar)} * 1")
    return " + ".join(parts)
