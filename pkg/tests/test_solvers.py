import numpy as np
import pytest
from scipy import special

from singquad.solvers import (
    GmresConfig, GmresError, Medium, angles_to_directions, circle, exterior_field, far_field, gmres, kite,
    single_bump_medium, solve_bie, solve_lippmann_schwinger,
)
from singquad.solvers.lippmann import bump, plane_wave, window_axes

rng = np.random.default_rng(3)


def test_gmres_identity_one_iteration():
    b = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    x, hist = gmres(lambda v: v, b)
    assert np.allclose(x, b, rtol=0, atol=1e-15)
    # initial residual, one Arnoldi estimate, the true residual after the update
    assert len(hist) == 3 and hist[-1] <= 1e-15


def test_gmres_diagonal_and_dense():
    d = np.arange(1.0, 41.0)
    b = rng.standard_normal(40)
    x, _ = gmres(lambda v: d * v, b)
    assert np.max(np.abs(x - b / d)) <= 1e-12 * np.max(np.abs(b / d))
    A = np.eye(20) * 4 + rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    b = rng.standard_normal(20) + 0j
    cfg = GmresConfig(tol=1e-13, restart=12)
    x, hist = gmres(lambda v: A @ v, b, cfg)
    assert np.linalg.norm(A @ x - b) <= 1e-12 * np.linalg.norm(b)
    assert np.allclose(x, np.linalg.solve(A, b), rtol=0, atol=1e-11)


def test_gmres_shapes_x0_and_errors():
    b = rng.standard_normal((4, 5))
    x, _ = gmres(lambda v: 2 * v, b, x0=np.ones((4, 5)))
    assert x.shape == (4, 5) and np.allclose(x, b / 2)
    x, hist = gmres(lambda v: v, np.zeros(5))
    assert not x.any() and hist == [0.0]
    with pytest.raises(ValueError):
        GmresConfig(tol=0.0)
    A = rng.standard_normal((50, 50))
    with pytest.raises(GmresError) as info:
        gmres(lambda v: A @ v, rng.standard_normal(50), GmresConfig(tol=1e-14, restart=3, max_iter=6))
    assert info.value.history[-1] > 1e-14


def test_medium_validation():
    with pytest.raises(ValueError):
        Medium(index=lambda x, y: x * 0 + 1, k=-1.0, L=3.0)
    m = Medium(index=lambda x, y: 1.0 + 0.0 * x, k=1.0, L=1.0)
    with pytest.raises(ValueError):
        solve_lippmann_schwinger(Medium(index=lambda x, y: 2.0 + 0.0 * x, k=1.0, L=1.0), 16)
    u, hist = solve_lippmann_schwinger(m, 16)
    ax = window_axes(1.0, 16)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    assert np.array_equal(u.samples, plane_wave(1.0, (1, 0), X, Y))
    assert hist == [0.0]


def test_bump_profile():
    assert bump(np.array([0.0]), np.array([0.0]))[0] == pytest.approx(1.0)
    assert bump(np.array([1.0]), np.array([0.0]))[0] == 0.0
    assert bump(np.array([0.5]), np.array([0.0]))[0] == pytest.approx(np.exp(2 * (1 - 1 / 0.75)))


def test_lippmann_schwinger_pde_residual():
    """Delta u + k^2 n u = 0 on the interior, checked with a fourth-order stencil."""
    med = single_bump_medium()
    N = 256
    u, hist = solve_lippmann_schwinger(med, N, cfg=GmresConfig(tol=1e-13, restart=50))
    assert hist[-1] <= 1e-13
    U = u.samples
    h = 2 * med.L / N
    ax = window_axes(med.L, N)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    n = med.index(X, Y)

    def d2(a, axis):
        s = lambda j: np.roll(a, j, axis=axis)
        return (-s(2) + 16 * s(1) - 30 * a + 16 * s(-1) - s(-2)) / (12 * h * h)

    res = (d2(U, 0) + d2(U, 1) + med.k**2 * n * U)[4:-4, 4:-4]
    assert np.max(np.abs(res)) <= 1e-4 * np.max(np.abs(U))


def _circle_far_field(k, theta, theta_d, terms=60):
    # sound-soft unit disk: u_inf = -sqrt(2 / (pi k)) e^(-i pi / 4) sum J_n(k) / H_n(k) e^(i n (theta - theta_d))
    n = np.arange(-terms, terms + 1)
    coef = special.jv(n, k) / special.hankel1(n, k)
    return -np.sqrt(2 / (np.pi * k)) * np.exp(-0.25j * np.pi) * np.exp(1j * np.outer(theta - theta_d, n)) @ coef


def test_circle_far_field_matches_series():
    k = 3.0
    d = (1 / np.sqrt(2), -1 / np.sqrt(2))
    psi, _ = solve_bie([circle()], k, 256, direction=d)
    theta = np.linspace(0, 2 * np.pi, 13)
    got = far_field([circle()], psi, k, angles_to_directions(theta))
    ref = _circle_far_field(k, theta, -np.pi / 4)
    assert np.max(np.abs(got - ref)) <= 1e-13 * np.max(np.abs(ref))


def test_point_source_is_reproduced_outside_kite():
    """Boundary data from a source inside the kite: the scattered field cancels it outside."""
    k = 5.0
    z = np.array([0.1, 0.2])
    src = lambda x: 0.25j * special.hankel1(0, k * np.linalg.norm(np.atleast_2d(x) - z, axis=-1))
    curves = [kite()]
    psi, _ = solve_bie(curves, k, 256, incident=src)
    pts = np.array([[3.0, 0.0], [0.0, -3.5], [-2.5, 2.5], [1.0, 4.0]])
    total = exterior_field(curves, psi, k, pts, incident=src)
    assert np.max(np.abs(total)) <= 1e-10 * np.max(np.abs(src(pts)))


def test_far_field_zero_and_linear():
    curves = [kite((-2.0, 0.0)), kite((2.0, 0.0))]
    dirs = angles_to_directions(np.linspace(0, 2 * np.pi, 9))
    zero = [np.zeros(32, dtype=complex), np.zeros(32, dtype=complex)]
    assert not far_field(curves, zero, 4.0, dirs).any()
    p = [rng.standard_normal(32) + 1j * rng.standard_normal(32) for _ in range(2)]
    q = [rng.standard_normal(32) + 1j * rng.standard_normal(32) for _ in range(2)]
    a, b = 1.5 - 0.5j, -2.0
    lhs = far_field(curves, [a * x + b * y for x, y in zip(p, q)], 4.0, dirs)
    rhs = a * far_field(curves, p, 4.0, dirs) + b * far_field(curves, q, 4.0, dirs)
    assert np.allclose(lhs, rhs, rtol=1e-13, atol=1e-14)


def test_far_field_rotation_invariance():
    k = 4.0
    angle = 0.7
    curves = [kite((-2.0, 0.0)), kite((2.0, 0.0))]
    rot = [c.rotated(angle) for c in curves]
    d = np.array([1.0, -1.0]) / np.sqrt(2)
    Q = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    theta = np.linspace(0, 2 * np.pi, 17)
    psi, _ = solve_bie(curves, k, 128, direction=d)
    psi_r, _ = solve_bie(rot, k, 128, direction=Q @ d)
    a = far_field(curves, psi, k, angles_to_directions(theta))
    b = far_field(rot, psi_r, k, angles_to_directions(theta + angle))
    assert np.max(np.abs(np.abs(a) - np.abs(b))) <= 1e-10


def test_exterior_field_zero_density_is_incident():
    curves = [kite()]
    pts = np.array([[3.0, 1.0], [-4.0, 0.5]])
    d = (0.6, 0.8)
    u = exterior_field(curves, [np.zeros(16)], 2.0, pts, direction=d)
    assert np.array_equal(u, plane_wave(2.0, d, pts[:, 0], pts[:, 1]))


def test_curve_geometry():
    c = circle((1.0, -1.0), 2.0)
    t = np.linspace(0, 2 * np.pi, 7)
    assert np.allclose(c.curvature(t), 0.5)
    assert np.allclose(c.speed(t), 2.0)
    assert np.allclose(np.einsum("ij,ij->i", c.normal(t), c.point(t) - [1.0, -1.0]), 2.0)
    kt = kite()
    assert np.all(kt.speed(np.linspace(0, 2 * np.pi, 1000)) > 0)
    for f in (kt.point, kt.d1, kt.d2):
        assert np.allclose(f(np.array([0.0])), f(np.array([2 * np.pi])), rtol=0, atol=1e-12)
