import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singquad import specfun
from singquad.oracles import AdaptiveQuadSpec, adaptive_integrate_1d
from singquad.specfun import (
    J1_ZERO_14, M1_TAIL_START, RegimeKind, a_fun, a_fun_series, anchors, bessel_j, gen_cosine_integral, j0_integral,
    l_fun, l_fun_series, m1_tail, m2_tail, m_fun, m_fun_series, regimes, sine_integral,
)

mp.mp.dps = 40


def mp_a(m, t):
    return float(mp.hyp0f1(mp.mpf(m) / 2, -mp.mpf(t) ** 2 / 4))


def mp_l(m, rho):
    h = mp.mpf(m) / 2
    return float(mp.hyp1f2(h, h + 1, h + 1, -mp.mpf(rho) ** 2 / 4) / m)


def mp_m(mu, m, rho):
    mu = mp.mpf(mu)
    return float(m / mu * mp.hyp1f2(mu / 2, mp.mpf(m) / 2, 1 + mu / 2, -mp.mpf(rho) ** 2 / 4))


def env_a(m, t):
    return (1.0 + t) ** (-(m - 1) / 2.0)


def env_l(m, rho):
    return (1.0 + rho) ** (-min(m, (m + 3) / 2.0)) / m


def env_m(mu, m, rho):
    # smooth part ~ rho^-mu plus the oscillating boundary term ~ m rho^-(m+1)/2
    return m / mu * (1.0 + rho) ** -mu + m * (1.0 + rho) ** (-(m + 1) / 2.0)


def rel_env(value, ref, envelope):
    """Error relative to max(|ref|, local envelope): honest near zeros of oscillating functions."""
    return abs(value - ref) / max(abs(ref), envelope)


RHOS = [0.0, 1e-6, 0.3, 1.0, 2.5, 4.9, 7.0, 7.2, 12.0, 19.0, 30.0, 44.0, 45.0, 60.0, 99.0]


@pytest.mark.parametrize("m", range(1, 9))
def test_a_fun_against_hypergeometric(m):
    for t in RHOS:
        assert rel_env(a_fun(m, t), mp_a(m, t), env_a(m, t)) < 1e-14, (m, t)


@pytest.mark.parametrize("m", range(1, 9))
def test_l_fun_against_hypergeometric(m):
    for rho in RHOS:
        assert rel_env(l_fun(m, rho), mp_l(m, rho), env_l(m, rho)) < (1e-14 if m <= 4 else 5e-14), (m, rho)


@pytest.mark.parametrize("mu", [1.0, 2.0])
@pytest.mark.parametrize("m", range(1, 8))
def test_m_fun_integer_mu(mu, m):
    for rho in RHOS:
        assert rel_env(m_fun(mu, m, rho), mp_m(mu, m, rho), env_m(mu, m, rho)) < 1e-14, (mu, m, rho)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.75, 1.3, 1.7, 1.95])
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_m_fun_fractional_mu(mu, m):
    for rho in RHOS:
        # m >= 3 with mu near 2 runs through the recurrence, which loses a few digits
        tol = 1e-13 if m <= 2 else 1e-12
        assert rel_env(m_fun(mu, m, rho), mp_m(mu, m, rho), env_m(mu, m, rho)) < tol, (mu, m, rho)


def test_documented_values():
    assert a_fun(5, np.pi) == pytest.approx(3.0 / np.pi**2, rel=1e-14)
    assert a_fun(2, 3.3) == pytest.approx(bessel_j(0, 3.3), rel=1e-15)
    assert m_fun(1.0, 3, 2.2) == pytest.approx(3.0 * sine_integral(2.2) / 2.2, rel=1e-15)
    assert l_fun(1, 4.0) == pytest.approx(sine_integral(4.0) / 4.0, rel=1e-15)
    for rho in (1.0, 5.0, 20.0):
        assert m_fun(1.0, 2, rho) == pytest.approx(2.0 / rho * j0_integral(rho), rel=1e-14)


def test_values_at_zero():
    for m in range(1, 9):
        assert a_fun(m, 0.0) == 1.0
        assert l_fun(m, 0.0) == pytest.approx(1.0 / m, rel=1e-15)
        for mu in (0.3, 1.0, 1.6, 2.0):
            assert m_fun(mu, m, 0.0) == pytest.approx(m / mu, rel=1e-15)


def test_domain_errors():
    with pytest.raises(ValueError):
        a_fun(0, 1.0)
    with pytest.raises(ValueError):
        l_fun(-1, 1.0)
    with pytest.raises(ValueError):
        m_fun(0.0, 1, 1.0)
    with pytest.raises(ValueError):
        m_fun(2.5, 1, 1.0)
    with pytest.raises(ValueError):
        gen_cosine_integral(0.0, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
    with pytest.raises(ValueError):
        m1_tail(0.5, 10.0)
    with pytest.raises(ValueError):
        m2_tail(0.5, 40.0)


def test_a_bounded_on_dense_sample():
    t = np.linspace(0.0, 100.0, 10_000)
    for m in range(1, 9):
        assert np.max(np.abs(a_fun(m, t))) <= 1.0 + 1e-12


def test_array_and_scalar_agree():
    x = np.array([0.0, 0.7, 9.0, 70.0])
    for fn in (lambda v: a_fun(3, v), lambda v: l_fun(2, v), lambda v: m_fun(0.6, 1, v), lambda v: m_fun(1.4, 4, v)):
        arr = fn(x)
        assert arr.shape == x.shape
        assert all(arr[i] == fn(float(v)) for i, v in enumerate(x))
        assert isinstance(fn(1.0), float)


@pytest.mark.parametrize("m", range(1, 9))
def test_evaluation_paths_agree(m):
    """Public paths match the oracle on [0.25, 40]; series and recurrence agree
    across the crossover, where both are valid."""
    rho = np.linspace(0.25, 40.0, 24)
    for fn, ref, env in ((lambda x: a_fun(m, x), lambda x: mp_a(m, x), lambda x: env_a(m, x)),
                         (lambda x: l_fun(m, x), lambda x: mp_l(m, x), lambda x: env_l(m, x)),
                         (lambda x: m_fun(0.7, m, x), lambda x: mp_m(0.7, m, x), lambda x: env_m(0.7, m, x))):
        got = fn(rho)
        for r, g in zip(rho, got):
            assert rel_env(g, ref(r), env(r)) <= 1e-12, (m, r)
    near = np.linspace(0.25, 0.5 * m + 4.0, 40)
    for fn, ser, env in ((lambda x: a_fun(m, x), lambda x: a_fun_series(m, x), lambda x: env_a(m, x)),
                         (lambda x: l_fun(m, x), lambda x: l_fun_series(m, x), lambda x: env_l(m, x)),
                         (lambda x: m_fun(0.7, m, x), lambda x: m_fun_series(0.7, m, x),
                          lambda x: env_m(0.7, m, x))):
        a, b = fn(near), ser(near)
        assert np.all(np.abs(a - b) <= 1e-12 * np.maximum(np.abs(b), env(near)))


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 6), t=st.floats(0.5, 30.0))
def test_derivative_identity(m, t):
    # (t^m A_{m+2}(t))' = m t^(m-1) A_m(t)
    h = 1e-5
    f = lambda x: x**m * a_fun(m + 2, x)
    lhs = (f(t + h) - f(t - h)) / (2 * h)
    rhs = m * t ** (m - 1) * a_fun(m, t)
    assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(rhs), t**m)


@settings(max_examples=60, deadline=None)
@given(m=st.sampled_from([1, 2]), rho=st.floats(0.0, 80.0))
def test_m_with_mu_equal_m_is_a(m, rho):
    assert abs(m_fun(float(m), m, rho) - a_fun(m + 2, rho)) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(mu=st.floats(0.05, 1.95), m=st.integers(1, 6), rho=st.floats(0.0, 120.0))
def test_m_fun_finite_and_bounded(mu, m, rho):
    v = m_fun(mu, m, rho)
    assert np.isfinite(v)
    assert abs(v) <= m / mu * (1 + 1e-12)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("mu", [0.3, 0.9, 1.5])
def test_bridge_continuity_at_anchors(mu, m):
    # values are assembled from O(1) anchor integrals, hence the absolute floor
    anc = anchors(mu, m)
    for a in anc.anchor_points:
        left = m_fun(mu, m, np.nextafter(a, 0.0))
        right = m_fun(mu, m, np.nextafter(a, np.inf))
        assert abs(left - right) <= 1e-14 * max(abs(left), 0.1)


def test_anchor_points():
    a1 = anchors(0.5, 1).anchor_points
    assert np.allclose(a1, 2 * np.pi * np.arange(1, 8), rtol=0, atol=1e-14)
    a2 = anchors(0.5, 2).anchor_points
    assert a2[0] == pytest.approx(specfun.J1_ZERO_2, rel=1e-15)
    assert a2[-1] == pytest.approx(J1_ZERO_14, rel=1e-15)
    assert all(x < y for x, y in zip(a2, a2[1:]))


@pytest.mark.parametrize("m", [1, 2])
def test_regime_crossovers_agree(m):
    for reg in regimes(m)[:-1]:
        x = reg.crossover
        for mu in (0.4, 1.2):
            below = m_fun(mu, m, np.nextafter(x, 0.0))
            above = m_fun(mu, m, np.nextafter(x, np.inf))
            assert abs(below - above) <= 1e-14 * max(abs(below), 0.1)
    assert regimes(m)[-1].kind is RegimeKind.ASYMPTOTIC_TAIL


def _tail_oracle(mu, m, rho, a):
    """m I_a(mu, rho) = M(rho) - (a/rho)^mu M(a), exactly through the hypergeometric form."""
    r, a = mp.mpf(rho), mp.mpf(a)
    return mp_m_exact(mu, m, r) - (a / r) ** mp.mpf(mu) * mp_m_exact(mu, m, a)


def mp_m_exact(mu, m, rho):
    mu = mp.mpf(mu)
    return m / mu * mp.hyp1f2(mu / 2, mp.mpf(m) / 2, 1 + mu / 2, -mp.mpf(rho) ** 2 / 4)


@pytest.mark.parametrize("mu", [0.3, 0.5, 0.8, 1.2, 1.7])
@pytest.mark.parametrize("m", [1, 2])
def test_tail_relative_error(mu, m):
    """Truncated asymptotic tail against the exact tail, relative, at 20 points in
    [a, 4a] away from its sign changes (where a relative bound is meaningless)."""
    a = M1_TAIL_START if m == 1 else J1_ZERO_14
    tail = m1_tail if m == 1 else m2_tail
    cand = np.linspace(a, 4 * a, 400)[1:]
    exact = np.array([float(_tail_oracle(mu, m, r, a)) for r in cand])
    scale = m * cand ** (-(m + 1) / 2.0)
    keep = np.flatnonzero(np.abs(exact) >= 0.5 * scale)
    pick = keep[np.linspace(0, len(keep) - 1, 20).astype(int)]
    got = tail(mu, cand[pick])
    rel = np.abs(got - exact[pick]) / np.abs(exact[pick])
    assert rel.max() < 1e-15, rel.max()


@pytest.mark.parametrize("mu", [0.3, 0.8, 1.5])
@pytest.mark.parametrize("m", [1, 2])
def test_m_fun_in_tail_regime(mu, m):
    a = M1_TAIL_START if m == 1 else J1_ZERO_14
    for r in np.linspace(a, 4 * a, 20):
        assert rel_env(m_fun(mu, m, r), mp_m(mu, m, r), env_m(mu, m, r)) < 1e-14


def test_tails_against_quadrature():
    assert m1_tail(0.5, M1_TAIL_START) == pytest.approx(0.0, abs=1e-17)
    assert m2_tail(0.5, J1_ZERO_14) == pytest.approx(0.0, abs=1e-17)
    spec = AdaptiveQuadSpec(rel_tol=1e-15, abs_tol=1e-18)
    ref1 = adaptive_integrate_1d(lambda t: t**-0.5 * np.cos(t), M1_TAIL_START, 50.0, spec)[0] / 50.0**0.5
    assert m1_tail(0.5, 50.0) == pytest.approx(ref1, rel=1e-13)
    ref2 = adaptive_integrate_1d(lambda t: t**0.3 * bessel_j(0, t), J1_ZERO_14, 60.0, spec)[0] * 2 / 60.0**1.3
    assert m2_tail(1.3, 60.0) == pytest.approx(ref2, rel=1e-13)


def test_sine_integral_and_j0_integral():
    assert sine_integral(0.0) == 0.0
    # Si(x) = pi/2 - cos(x)/x - sin(x)/x^2 + O(x^-3); the gap to pi/2 is ~1e-6 at 1e6
    x = 1e6
    assert abs(sine_integral(x) - (np.pi / 2 - np.cos(x) / x - np.sin(x) / x**2)) < 1e-15
    assert abs(sine_integral(x) - np.pi / 2) <= 1.0 / x
    ref = adaptive_integrate_1d(lambda t: np.sinc(t / np.pi), 0.0, 1.5, AdaptiveQuadSpec(rel_tol=1e-15))[0]
    assert sine_integral(1.5) == pytest.approx(ref, rel=1e-15)
    assert j0_integral(0.0) == 0.0
    for x in (0.5, 7.5, 25.0, 60.0, 150.0):
        ref = float(mp.quad(lambda t: mp.besselj(0, t), mp.linspace(0, x, 20)))
        assert j0_integral(x) == pytest.approx(ref, rel=1e-14)


def test_gen_cosine_integral():
    assert gen_cosine_integral(1.0, 2.0) == pytest.approx(np.sin(2.0), rel=1e-15)
    assert gen_cosine_integral(0.7, 0.0) == 0.0
    ref = float(mp.quad(lambda t: t ** mp.mpf(-0.3) * mp.cos(t), mp.linspace(0, 12, 10)))
    assert gen_cosine_integral(0.7, 12.0) == pytest.approx(ref, rel=1e-14)
    # Ci(mu, rho) = Re((-i)^mu gamma(mu, i rho))
    mu, rho = mp.mpf("0.7"), mp.mpf(12)
    alt = mp.re((-1j) ** mu * mp.gammainc(mu, 0, 1j * rho))
    assert gen_cosine_integral(0.7, 12.0) == pytest.approx(float(alt), rel=1e-14)
    ref9 = float(mp.quad(lambda t: t ** mp.mpf(-0.5) * mp.cos(t), [0, 3, 6, 9]) / 3)
    assert m_fun(0.5, 1, 9.0) == pytest.approx(ref9, rel=1e-14)


def test_bessel_j():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-12
    for n in range(0, 9):
        for t in (0.1, 3.0, 17.0, 250.0, 1000.0):
            ref = float(mp.besselj(n, t))
            assert abs(bessel_j(n, t) - ref) <= 1e-14 * max(abs(ref), (1 + t) ** -0.5)


def test_l_fun_documented_quadrature_value():
    ref = adaptive_integrate_1d(lambda t: t**3 * a_fun(6, 3.7 * t), 0.0, 1.0, AdaptiveQuadSpec(rel_tol=1e-14))[0]
    assert l_fun(4, 3.7) == pytest.approx(ref, rel=1e-13)
