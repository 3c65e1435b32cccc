import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from derivcft.algebra import structure_pi
from derivcft.kernels import (LaurentDiffOp, base_kernel_operator, compose, contour_kernel, falling_factorial,
                              kernel_identity_check, leibniz_step, mode_commutator_via_kernel, residue_pairing)

Z, D, ONE = LaurentDiffOp.zeta, LaurentDiffOp.d, LaurentDiffOp.one


def test_compose_examples():
    assert compose(D(), Z()) == LaurentDiffOp({(1, 1): 1, (0, 0): 1})
    assert compose(Z(-1), Z()) == ONE()
    assert compose(D(), Z(2)) == LaurentDiffOp({(2, 1): 1, (1, 0): 2})


def test_canonical_commutator():
    assert compose(D(), Z()) - compose(Z(), D()) == ONE()


@pytest.mark.parametrize("a", range(-5, 6))
def test_leibniz_step_agrees_with_compose(a):
    assert compose(D(), Z(a)) == leibniz_step(a)


def test_iterated_leibniz_matches_closed_form():
    # D^3 zeta^a built by pushing one D at a time
    for a in range(-4, 5):
        op = Z(a)
        for _ in range(3):
            pushed = LaurentDiffOp()
            for (p, b), c in op.terms.items():
                pushed = pushed + compose(leibniz_step(p), D(b)) * c
            op = pushed
        assert op == compose(D(3), Z(a))


ops = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(0, 3)), st.integers(-3, 3), max_size=4
).map(LaurentDiffOp)


@settings(max_examples=150, deadline=None)
@given(ops, ops, ops)
def test_compose_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=150, deadline=None)
@given(ops, ops, st.integers(-6, 6))
def test_compose_matches_monomial_action(a, b, p):
    # (A B) zeta^p == A (B zeta^p)
    inner = b.apply_monomial(p)
    expected = {}
    for power, c in inner.items():
        for k, v in a.apply_monomial(power).items():
            expected[k] = expected.get(k, 0) + c * v
    expected = {k: v for k, v in expected.items() if v}
    assert compose(a, b).apply_monomial(p) == expected


def test_kernel_identity_n1():
    k = kernel_identity_check(1)
    assert k.base_holds and k.step_holds
    assert k.step_form == D(5)
    assert str(k.base_form) == "1 * z^0 * D^3"


@pytest.mark.parametrize("p", range(-3, 6))
def test_kernel_identity_monomial_oracle(p):
    lhs = base_kernel_operator(1).apply_monomial(p)
    rhs = D(3).apply_monomial(p)
    assert lhs == rhs


def test_kernel_identity_sympy_oracle():
    # apply the operator chain to a generic function, independent of the normal form
    zeta = sp.symbols("zeta")
    f = sp.Function("f")(zeta)
    for n in (1, 2, 3):
        g = zeta ** -2 * f
        g = sp.diff(g, zeta, 2 * n - 1)
        g = zeta ** (2 * n) * g
        g = sp.diff(g, zeta)
        g = zeta ** 2 * g
        g = sp.diff(g, zeta)
        g = zeta ** (-2 * n) * g
        assert sp.simplify(g - sp.diff(f, zeta, 2 * n + 1)) == 0


@pytest.mark.parametrize("n", range(1, 11))
def test_kernel_identity_all(n):
    k = kernel_identity_check(n)
    assert k.holds, k.to_dict()


def test_contour_kernel_is_not_symmetric():
    # the kernel itself differs from D^{2n+1}; only its transpose agrees
    assert contour_kernel(1) != D(3)
    assert contour_kernel(1).transpose() == D(3)


def test_kernel_check_rejects_zero():
    with pytest.raises(ValueError):
        kernel_identity_check(0)


@pytest.mark.parametrize("p, q, order, expected", [(3, -1, 3, 6), (3, 0, 3, 0), (0, -1, 0, 1)])
def test_residue_pairing_examples(p, q, order, expected):
    assert residue_pairing(p, q, order) == expected


def test_residue_pairing_against_sympy():
    z = sp.symbols("z")
    for p in range(-3, 6):
        for q in range(-6, 3):
            for order in range(4):
                expr = sp.expand(z ** q * sp.diff(z ** p, z, order))
                assert residue_pairing(p, q, order) == sp.residue(expr, z, 0)


@pytest.mark.parametrize("n, m, mp, expected", [(1, 2, -2, 6), (1, 2, -3, 0), (2, 3, -3, 120)])
def test_mode_commutator_examples(n, m, mp, expected):
    assert mode_commutator_via_kernel(n, m, mp) == expected


def test_mode_commutator_matches_structure_pi():
    for n in range(5):
        for m in range(-10, 11):
            for mp in range(-10, 11):
                expected = structure_pi(n, m) if m + mp == 0 else 0
                assert mode_commutator_via_kernel(n, m, mp) == expected


def test_falling_factorial():
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(-2, 2) == 6
    assert falling_factorial(2, 3) == 0


def test_text_form_order():
    op = LaurentDiffOp({(1, 2): 3, (2, 0): -1, (1, 0): 2})
    assert str(op) == "-1 * z^2 * D^0 + 2 * z^1 * D^0 + 3 * z^1 * D^2"
