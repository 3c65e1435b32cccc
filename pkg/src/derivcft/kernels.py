"""Laurent differential operators in ``zeta`` and ``D = d/dzeta``.

Operators are kept in the normal form ``sum c[a, b] zeta^a D^b`` with every
power of ``zeta`` to the left.  Composition uses the Leibniz rule
``D zeta^a = zeta^a D + a zeta^(a-1)``, valid for every integer ``a``.

Used to check the integration-kernel identities behind the mode commutators
and to rederive those commutators from contour residues.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Mapping, NamedTuple, Tuple

from .algebra import as_scalar, format_scalar, structure_pi

Key = Tuple[int, int]


def falling_factorial(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


class LaurentDiffOp:
    """Normal-formed ``sum c[a, b] zeta^a D^b`` with integer ``a`` and ``b >= 0``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        acc: Dict[Key, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            if b < 0:
                raise ValueError("derivative order must be non-negative")
            c = as_scalar(c)
            if c:
                acc[(a, b)] = acc.get((a, b), 0) + c
        self._terms = {k: v for k, v in sorted(acc.items(), key=lambda kv: (-kv[0][0], kv[0][1])) if v}

    @classmethod
    def zeta(cls, a: int = 1) -> "LaurentDiffOp":
        return cls({(a, 0): 1})

    @classmethod
    def d(cls, b: int = 1) -> "LaurentDiffOp":
        return cls({(0, b): 1})

    @classmethod
    def one(cls) -> "LaurentDiffOp":
        return cls({(0, 0): 1})

    @property
    def terms(self) -> Dict[Key, Fraction]:
        return dict(self._terms)

    def __add__(self, other):
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0) + v
        return LaurentDiffOp(acc)

    def __neg__(self):
        return LaurentDiffOp({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentDiffOp):
            return compose(self, other)
        k = as_scalar(other)
        return LaurentDiffOp({key: k * v for key, v in self._terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("only non-negative powers")
        out = LaurentDiffOp.one()
        for _ in range(e):
            out = compose(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentDiffOp):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"LaurentDiffOp({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(c)} * z^{a} * D^{b}" for (a, b), c in self._terms.items())

    def apply_monomial(self, p: int) -> Dict[int, Fraction]:
        """Action on ``zeta^p``: returns ``{power: coefficient}``."""
        out: Dict[int, Fraction] = {}
        for (a, b), c in self._terms.items():
            f = falling_factorial(p, b)
            if f:
                out[p - b + a] = out.get(p - b + a, 0) + c * f
        return {k: v for k, v in out.items() if v}

    def transpose(self) -> "LaurentDiffOp":
        """Formal adjoint under contour integration: ``(zeta^a D^b)^T = (-D)^b zeta^a``."""
        out = LaurentDiffOp()
        for (a, b), c in self._terms.items():
            out = out + compose(LaurentDiffOp.d(b) * ((-1) ** b * c), LaurentDiffOp.zeta(a))
        return out


def compose(A: LaurentDiffOp, B: LaurentDiffOp) -> LaurentDiffOp:
    """Normal form of ``A B``.

    ``D^b zeta^a = sum_j C(b, j) a(a-1)...(a-j+1) zeta^(a-j) D^(b-j)`` is the
    closed form of iterating the single Leibniz step.
    """
    acc: Dict[Key, Fraction] = {}
    for (a1, b1), c1 in A.terms.items():
        for (a2, b2), c2 in B.terms.items():
            for j in range(b1 + 1):
                f = comb(b1, j) * falling_factorial(a2, j)
                if f:
                    key = (a1 + a2 - j, b1 - j + b2)
                    acc[key] = acc.get(key, 0) + c1 * c2 * f
    return LaurentDiffOp(acc)


def leibniz_step(a: int) -> LaurentDiffOp:
    """``D zeta^a`` rewritten once: ``zeta^a D + a zeta^(a-1)``."""
    return LaurentDiffOp({(a, 1): 1, (a - 1, 0): a})


def _chain(*ops: LaurentDiffOp) -> LaurentDiffOp:
    out = LaurentDiffOp.one()
    for op in ops:
        out = compose(out, op)
    return out


def base_kernel_operator(n: int) -> LaurentDiffOp:
    """``zeta^{-2n} D zeta^2 D zeta^{2n} D^{2n-1} zeta^{-2}``."""
    z, d = LaurentDiffOp.zeta, LaurentDiffOp.d
    return _chain(z(-2 * n), d(), z(2), d(), z(2 * n), d(2 * n - 1), z(-2))


def induction_intermediate(n: int) -> LaurentDiffOp:
    """``zeta^{-2} D^{2n+1} (zeta^2 D^2 - 2(2n+1) zeta^2 D zeta^{-1} + (2n+1)(2n))``."""
    z, d = LaurentDiffOp.zeta, LaurentDiffOp.d
    inner = (_chain(z(2), d(2))
             - _chain(z(2), d(), z(-1)) * (2 * (2 * n + 1))
             + LaurentDiffOp.one() * ((2 * n + 1) * 2 * n))
    return _chain(z(-2), d(2 * n + 1), inner)


def contour_kernel(n: int) -> LaurentDiffOp:
    """``(-1)^{2n+1} zeta^{-2(n+1)} (zeta^2 D)^{2n+1} zeta^{-2n}``.

    Its transpose is the kernel acting on the other test function and must
    equal ``D^{2n+1}``.
    """
    z, d = LaurentDiffOp.zeta, LaurentDiffOp.d
    return _chain(z(-2 * (n + 1)), _chain(z(2), d()) ** (2 * n + 1), z(-2 * n)) * (-1)


class KernelCheck(NamedTuple):
    n: int
    base_holds: bool
    step_holds: bool
    intermediate_holds: bool
    contour_holds: bool
    base_form: LaurentDiffOp
    step_form: LaurentDiffOp

    @property
    def holds(self) -> bool:
        return self.base_holds and self.step_holds and self.intermediate_holds and self.contour_holds

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "holds": self.holds,
            "base_holds": self.base_holds,
            "step_holds": self.step_holds,
            "intermediate_holds": self.intermediate_holds,
            "contour_holds": self.contour_holds,
            "base_form": str(self.base_form),
            "step_form": str(self.step_form),
        }


def kernel_identity_check(n: int) -> KernelCheck:
    """Normal-form the kernel identity at ``n`` and its induction step to ``n + 1``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = LaurentDiffOp.d
    base = base_kernel_operator(n)
    step = base_kernel_operator(n + 1)
    return KernelCheck(
        n=n,
        base_holds=base == d(2 * n + 1),
        step_holds=step == d(2 * n + 3),
        intermediate_holds=induction_intermediate(n) == d(2 * n + 3),
        contour_holds=contour_kernel(n).transpose() == d(2 * n + 1),
        base_form=base,
        step_form=step,
    )


def residue_pairing(p: int, q: int, order: int) -> int:
    """Residue at ``z = 0`` of ``z^q (d/dz)^order z^p``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if p + q - order != -1:
        return 0
    return falling_factorial(p, order)


def mode_commutator_via_kernel(n: int, m: int, mp: int) -> int:
    """``[a_m, a_mp]`` from the residue pairing with test functions ``z^{n+m}``, ``z^{n+mp}``."""
    return residue_pairing(n + m, n + mp, 2 * n + 1)


def check_mode_relations(n_max: int, m_max: int) -> bool:
    return all(
        mode_commutator_via_kernel(n, m, mp) == (structure_pi(n, m) if m + mp == 0 else 0)
        for n in range(n_max + 1)
        for m in range(-m_max, m_max + 1)
        for mp in range(-m_max, m_max + 1)
    )
