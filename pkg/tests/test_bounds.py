import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from derivcft.algebra import StructureConstants
from derivcft.bounds import (SmearedFunction, TruncationError, annihilator_bound_check, bound_grid,
                             creator_bound_check, ladder_identity_holds, random_state, smeared_bound_check)
from derivcft.fock import FockVector, apply_mode, gram_matrix, inner_product, level_basis


def scipy_oracle(n, m, N):
    # float64 generalized eigenproblem on the nonzero-norm basis states
    c = StructureConstants(n)
    basis = level_basis(N)
    g = gram_matrix(n, N)
    keep = [i for i in range(len(basis)) if g.entries[i][i] != 0]
    if not keep:
        return 0.0
    imgs = [apply_mode(m, FockVector.basis(basis[i]), c) for i in keep]
    M = np.array([[float(inner_product(a, b, n)) for b in imgs] for a in imgs])
    G = np.array([[float(g.entries[i][j]) for j in keep] for i in keep])
    return float(scipy.linalg.eigh(M, G, eigvals_only=True).max())


@pytest.mark.parametrize("n, m, N, observed, bound", [(1, 2, 2, 6, 6), (1, 1, 5, 0, 0), (1, 7, 3, 0, 144)])
def test_annihilator_examples(n, m, N, observed, bound):
    r = annihilator_bound_check(n, m, N)
    assert r.passed
    assert abs(r.observed - observed) < 1e-20
    assert r.bound == bound


def test_annihilator_equality_effective_space():
    assert annihilator_bound_check(1, 2, 2).effective_dimension == 1


@pytest.mark.parametrize("n, m, N, observed, bound", [(1, 2, 0, 6, 6), (1, 2, 2, 12, 12), (2, 2, 0, 0, 0)])
def test_creator_examples(n, m, N, observed, bound):
    r = creator_bound_check(n, m, N)
    assert r.passed and r.identity_holds
    assert abs(r.observed - observed) < 1e-20
    assert r.bound == bound


def test_empty_effective_space_passes_with_note():
    r = annihilator_bound_check(3, 2, 2)
    assert r.passed and r.effective_dimension == 0
    assert "empty effective space" in r.notes[0]


@pytest.mark.parametrize("n", range(3))
@pytest.mark.parametrize("m", [1, 2, 3, 5])
@pytest.mark.parametrize("N", [2, 5, 7])
def test_generalized_eigenvalue_matches_scipy(n, m, N):
    for sign, check in ((1, annihilator_bound_check), (-1, creator_bound_check)):
        ours = float(check(n, m, N).observed)
        oracle = scipy_oracle(n, sign * m, N)
        assert ours == pytest.approx(oracle, rel=1e-12, abs=1e-12)


def test_rayleigh_quotients_do_not_exceed_maximum():
    rng = random.Random(7)
    n, m, N = 1, 2, 8
    top = annihilator_bound_check(n, m, N).observed
    c = StructureConstants(n)
    for _ in range(50):
        coeffs = {s: Fraction(rng.randint(-5, 5)) for s in level_basis(N)}
        v = FockVector(coeffs)
        den = inner_product(v, v, n)
        if den == 0:
            continue
        w = apply_mode(m, v, c)
        assert float(inner_product(w, w, n) / den) <= float(top) * (1 + 1e-12)


def test_ladder_identity_grid():
    for n in range(4):
        for m in range(1, 9):
            for N in range(9):
                assert ladder_identity_holds(n, m, N)


def test_bound_grid_and_eigenvalues_nonnegative():
    reports = bound_grid(2, 8, 8)
    assert all(r.passed for r in reports)
    assert all(r.min_eigenvalue >= -1e-9 for r in reports)


def test_lowered_bound_is_detected():
    from derivcft.bounds import _ladder_report

    assert _ladder_report("annihilator", 1, 2, 2, Fraction(6), 1e-9, 30).passed
    assert not _ladder_report("annihilator", 1, 2, 2, Fraction(5999, 1000), 1e-9, 30).passed


def test_smeared_example():
    f2 = 0.7 - 0.2j
    r = smeared_bound_check(1, SmearedFunction({2: f2}), FockVector.basis((2,)), normalize=True)
    assert r.passed
    assert float(r.observed) == pytest.approx(math.sqrt(6) * abs(f2), rel=1e-14)
    assert float(r.bound) == pytest.approx(18 * abs(f2), rel=1e-14)


def test_smeared_zero_function():
    r = smeared_bound_check(1, SmearedFunction({}), FockVector.basis((3,)))
    assert r.passed and r.observed == 0 and r.bound == 0


def test_smeared_zero_mode():
    r = smeared_bound_check(1, SmearedFunction({0: 1.5}), FockVector.basis((3,)), q=0)
    assert r.passed and r.observed == 0 and r.bound > 0


def test_smeared_with_charge():
    r = smeared_bound_check(0, SmearedFunction({0: 1.0}), FockVector.vacuum(), q=Fraction(5, 2))
    assert r.passed
    assert float(r.observed) == pytest.approx(2.5)


def test_smeared_truncation_is_explicit():
    with pytest.raises(TruncationError):
        smeared_bound_check(1, SmearedFunction({-5: 1.0}), FockVector.basis((4,)), max_level=8)
    with pytest.raises(TruncationError):
        smeared_bound_check(1, SmearedFunction({1: 1.0}), FockVector.basis((9,)), max_level=8)


def test_smeared_random():
    rng = random.Random(2024)
    for trial in range(40):
        n = trial % 3
        f = SmearedFunction.random(rng, support=5, real=bool(trial % 2))
        psi = random_state(rng, 8)
        assert smeared_bound_check(n, f, psi, max_level=13).passed


def test_real_smeared_function_validation():
    with pytest.raises(ValueError):
        SmearedFunction({1: 1 + 1j, -1: 1 + 1j}, real=True)
    SmearedFunction({1: 1 + 1j, -1: 1 - 1j}, real=True)


def test_bound_report_dict():
    d = creator_bound_check(1, 2, 2).to_dict()
    assert d["bound"] == "12" and d["passed"] and d["identity_holds"]


def test_bad_arguments():
    with pytest.raises(ValueError):
        annihilator_bound_check(1, 0, 2)
    with pytest.raises(ValueError):
        creator_bound_check(1, 2, -1)
