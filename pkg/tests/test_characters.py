import math

import mpmath
import pytest

from derivcft.characters import (PUBLISHED_THRESHOLD, default_beta_grid, eta, generating_identity_holds,
                                 modular_check, nuclearity_probe, partition_generating_value,
                                 partition_series, partition_sum_direct, reduced_character)
from derivcft.fock import effective_multiplicity, level_basis


def test_partition_series_examples():
    assert partition_series(6) == [1, 1, 2, 3, 5, 7, 11]
    assert partition_series(10)[10] == 42
    assert partition_series(1)[1] == 1


def test_partition_series_matches_enumeration():
    assert partition_series(20) == [len(level_basis(N)) for N in range(21)]
    assert partition_series(100)[100] == 190569292


def test_reduced_character_examples():
    assert reduced_character(1, 6).coefficients == (1, 0, 1, 1, 2, 2, 4)
    assert reduced_character(0, 12).coefficients == tuple(partition_series(12))
    for n in range(1, 6):
        d = reduced_character(n, 10).coefficients
        assert all(d[N] == 0 for N in range(1, n + 1))


@pytest.mark.parametrize("n", range(4))
def test_reduced_character_equals_gram_ranks(n):
    d = reduced_character(n, 10).coefficients
    assert list(d) == [effective_multiplicity(n, N) for N in range(11)]


@pytest.mark.parametrize("n", range(6))
def test_generating_identity(n):
    assert generating_identity_holds(reduced_character(n, 40))


def test_character_bounded_by_partitions():
    p = partition_series(30)
    for n in range(4):
        d = reduced_character(n, 30).coefficients
        assert d[0] == 1 and all(0 <= x <= y for x, y in zip(d, p))


def test_eta_consistency_with_partition_sum():
    with mpmath.workdps(40):
        e = eta(1, 30)
        direct, tail = partition_sum_direct(1, 400, 30)
        assert tail < mpmath.mpf(10) ** -20
        via_eta = mpmath.exp(-mpmath.mpf(1) / 24) / e.value
        assert abs(via_eta - direct) < 1e-12
        assert abs(partition_generating_value(1) - direct) < 1e-12


def test_eta_alternative_normalisation_is_off_by_exp_beta_over_12():
    # exp(+beta/24)/eta overshoots the partition sum by exactly exp(beta/12)
    with mpmath.workdps(40):
        e = eta(1, 30).value
        direct, _ = partition_sum_direct(1, 400, 30)
        printed = mpmath.exp(mpmath.mpf(1) / 24) / e
        assert abs(printed / direct - mpmath.exp(mpmath.mpf(1) / 12)) < 1e-20


def test_eta_large_beta_tends_to_leading_factor():
    b = 60
    e = eta(b, 30)
    with mpmath.workdps(40):
        assert abs(e.value / mpmath.exp(-mpmath.mpf(b) / 24) - 1) < 2 * mpmath.exp(-b)


def test_eta_tail_bound_is_honest():
    with mpmath.workdps(60):
        coarse = eta(0.7, 20)
        fine = eta(0.7, 50)
        assert abs(coarse.value / fine.value - 1) <= coarse.error_bound


def test_eta_rejects_nonpositive():
    with pytest.raises(ValueError):
        eta(0)
    with pytest.raises(ValueError):
        eta(-1.0)


def test_modular_fixed_point():
    assert modular_check(2 * mpmath.pi, 30) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("beta", [0.5, 1, 2, math.pi, 4, 5])
def test_modular_law(beta):
    assert modular_check(beta, 30) < 1e-10


def test_small_beta_route_matches_direct_product():
    # below 0.5 the dual route is used; compare against the slow direct product
    with mpmath.workdps(40):
        b = mpmath.mpf("0.3")
        direct = mpmath.exp(-b / 24) / eta(b, 30).value
        assert abs(partition_generating_value(b) / direct - 1) < 1e-25


def test_nuclearity_vanishes_above_pi2_over_6():
    r = nuclearity_probe(1.70, 1)
    assert r.verdict == "vanishing"
    assert r.values[-1] < r.values[0]
    assert abs(r.growth_constant - math.pi ** 2 / 6) < 1e-6
    assert any("open question" in note for note in r.notes)


def test_nuclearity_diverges_below_pi2_over_6():
    r = nuclearity_probe(1.60, 1)
    assert r.verdict == "diverging"
    assert any("published threshold" in note or "does not vanish" in note for note in r.notes)


def test_nuclearity_published_threshold_flagged_not_failed():
    r = nuclearity_probe(PUBLISHED_THRESHOLD + 0.01, 1)
    assert r.verdict == "diverging"
    assert any("does not vanish" in note for note in r.notes)


@pytest.mark.parametrize("beta0", [0.5, 1.0, 2.0])
def test_nuclearity_quadratic_exponent(beta0):
    grid = default_beta_grid(0.3, 0.005, 30)
    assert nuclearity_probe(beta0, 2, grid).verdict == "vanishing"


def test_nuclearity_refinement_stable():
    coarse = nuclearity_probe(1.70, 1, default_beta_grid(0.5, 0.02, 13))
    fine = nuclearity_probe(1.70, 1, default_beta_grid(0.5, 0.02, 49))
    assert coarse.verdict == fine.verdict
    assert abs(coarse.growth_constant - fine.growth_constant) < 1e-6
    # same value at a shared grid point
    assert abs(coarse.log_values[-1] - fine.log_values[-1]) < 1e-20


def test_nuclearity_rejects_bad_grid():
    with pytest.raises(ValueError):
        nuclearity_probe(1.7, 1, [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        nuclearity_probe(1.7, 0)


def test_nuclearity_report_dict():
    d = nuclearity_probe(1.70, 1).to_dict()
    assert set(d["table"][0]) == {"beta", "p", "f", "log_f"}
    assert d["verdict"] == "vanishing"
