import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from boson_kinetics import (
    InvalidParameterError,
    LatticeParams,
    Occupations,
    ReservoirParams,
    UndefinedDivergenceError,
    bose_einstein,
    build_modes,
    build_rate_context,
    compare_distributions,
    deformed_distribution,
    find_steady_state,
    fit_inverse_temperature,
    ground_vs_top,
    kl_divergence,
    kl_ratio,
    solve_chemical_potential,
    uniform_occupations,
)

positive_vectors = arrays(np.float64, 12, elements=st.floats(1e-6, 10.0))


def test_kl_identical_is_zero():
    n = np.array([0.3, 1.2, 2.5])
    assert kl_divergence(n, n) == 0.0


def test_kl_hand_computed_two_mode_value():
    value = kl_divergence(np.array([0.75, 0.25]), np.array([0.5, 0.5]))
    assert value == pytest.approx(0.13081203594113697, rel=1e-12)


def test_kl_asymmetric():
    p = np.array([0.75, 0.25])
    q = np.array([0.4, 0.6])
    assert kl_divergence(p, q) != kl_divergence(q, p)


@given(p=positive_vectors, q=positive_vectors)
@settings(max_examples=80, deadline=None)
def test_kl_gibbs_inequality(p, q):
    value = kl_divergence(p, q)
    assert value >= -1e-15


@given(p=positive_vectors, q=positive_vectors,
       sp=st.floats(0.1, 100.0), sq=st.floats(0.1, 100.0))
@settings(max_examples=40, deadline=None)
def test_kl_scale_invariance(p, q, sp, sq):
    assert kl_divergence(sp * p, sq * q) == pytest.approx(kl_divergence(p, q),
                                                          rel=1e-9, abs=1e-12)


def test_kl_zero_reference_modes_contribute_nothing():
    p = np.array([0.5, 0.0, 0.5])
    q = np.array([0.25, 0.5, 0.25])
    assert kl_divergence(p, q) == pytest.approx(math.log(2.0), rel=1e-12)


def test_kl_excludes_nonpositive_approximant_modes():
    p = np.array([0.5, 0.3, 0.2])
    q = np.array([0.5, -0.1, 0.4])
    value, excluded = kl_divergence(p, q, return_excluded=True)
    assert excluded == [1]
    assert np.isfinite(value)


def test_kl_undefined_when_support_vanishes():
    with pytest.raises(UndefinedDivergenceError):
        kl_divergence(np.array([1.0, 1.0]), np.array([-1.0, -1.0]))


def test_kl_reference_validation():
    with pytest.raises(InvalidParameterError):
        kl_divergence(np.array([-0.1, 1.0]), np.array([0.5, 0.5]))
    with pytest.raises(InvalidParameterError):
        kl_divergence(np.array([0.0, 0.0]), np.array([0.5, 0.5]))


def test_kl_ratio_degenerate_and_unit():
    n = np.array([2.0, 1.0, 0.5])
    q = np.array([1.9, 1.1, 0.5])
    assert kl_ratio(n, q, q) == 1.0
    assert kl_ratio(n, n, q) == math.inf


def test_ground_vs_top():
    assert ground_vs_top(np.array([2.0, 1.0, 0.5])) == 1.5
    assert ground_vs_top(np.full(8, 0.3)) == 0.0
    sp = build_modes(LatticeParams(L=30))
    n_be = bose_einstein(sp.omega, 1.1, solve_chemical_potential(sp, 9.0, 1.1))
    assert ground_vs_top(n_be) > 0
    with pytest.raises(InvalidParameterError):
        ground_vs_top(np.array([1.0]))


def test_fit_recovers_exact_bose_einstein():
    sp = build_modes(LatticeParams(L=50))
    for beta0, N in [(0.8, 20.0), (-1.4, 7.0)]:
        mu = solve_chemical_potential(sp, N, beta0)
        n_be = bose_einstein(sp.omega, beta0, mu)
        beta_fit, mu_fit = fit_inverse_temperature(n_be, sp)
        assert beta_fit == pytest.approx(beta0, rel=1e-10)
        assert mu_fit == pytest.approx(mu, rel=1e-9)


def test_fit_uniform_slope_zero():
    sp = build_modes(LatticeParams(L=20))
    beta_fit, mu_fit = fit_inverse_temperature(np.full(20, 0.4), sp)
    assert abs(beta_fit) < 1e-12


def test_fit_rejects_nonpositive():
    sp = build_modes(LatticeParams(L=4))
    with pytest.raises(InvalidParameterError):
        fit_inverse_temperature(np.array([1.0, 0.0, 1.0, 1.0]), sp)


def test_compare_distributions_report():
    sp = build_modes(LatticeParams(L=60))
    res = ReservoirParams(1e-3, 0.1, -4.0, 2.0)
    ctx = build_rate_context(sp, res)
    steady = find_steady_state(uniform_occupations(60, 30.0), ctx)
    sol = deformed_distribution(sp, 30.0, res)
    report = compare_distributions(steady, sp, sol)
    assert report.kl_vs_perturbative >= 0
    assert report.kl_vs_be >= 0
    assert report.ratio_R == pytest.approx(report.kl_vs_be / report.kl_vs_perturbative)
    assert report.delta_n > 0
    assert report.fitted_beta > 0
    assert report.reliable == (len(report.excluded_modes) == 0)


def test_fitted_beta_sign_tracks_detuning():
    sp = build_modes(LatticeParams(L=40))
    for delta in (-3.0, -1.5, 1.5, 3.0):
        res = ReservoirParams(1e-3, 0.1, delta, 1.0)
        ctx = build_rate_context(sp, res)
        steady = find_steady_state(uniform_occupations(40, 20.0), ctx)
        beta_fit, _ = fit_inverse_temperature(steady, sp)
        assert np.sign(beta_fit) == -np.sign(delta)
