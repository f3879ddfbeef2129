"""Tension, bitension, Jacobi operator, and classification."""

import math

import numpy as np
import pytest

from liftgeom.bundle import (
    mus_gradient_metric, mus_sasaki_metric, sasaki_metric,
)
from liftgeom.findiff import fd_derivative
from liftgeom.geometry import (
    Chart, ExprMap, MetricField, ScalarField, grad_field, nabla_grad,
)
from liftgeom.jets import Jet
from liftgeom.maps import (
    SmoothMap, bitension, classify, jacobi, pullback_cov_deriv, tension,
    tension_field, tension_over_frame,
)


def euclid(names=("x", "y"), bounds=None):
    chart = Chart(names, bounds)
    return chart, MetricField.euclidean(chart)


def sphere():
    chart = Chart(("theta", "phi"), ((0.0, math.pi), (0.0, 2 * math.pi)))
    return chart, MetricField.diagonal(chart, ["1", "sin(theta)^2"])


def profile_setup():
    chart = Chart(("t", "x2"), ((1.0, None), (None, None)))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_gradient(chart, ["sqrt(t^4 - 1)", "0"], positive=True)
    return chart, g, f


def expr_field(chart, texts, constants=None):
    maps = [ExprMap(t, chart.names, constants) for t in texts]

    def field(seeds):
        out = []
        for m in maps:
            v = m(seeds)
            out.append(v if isinstance(v, Jet)
                       else Jet.constant(float(v), chart.dim, seeds[0].space.order))
        return out

    return field


# -- tension -------------------------------------------------------------------

def test_identity_tension_zero():
    chart, g = euclid()
    ident = SmoothMap.identity(g, g)
    np.testing.assert_allclose(tension(ident, [0.3, -0.8]), np.zeros(2),
                               atol=1e-12)


def test_identity_tension_zero_every_catalog_metric():
    catalog = []
    chart, g = euclid()
    catalog.append(g)
    _, gs = sphere()
    catalog.append(gs)
    ch2 = Chart(("x", "y"))
    catalog.append(MetricField.from_strings(ch2, [["1 + x^2", "x*y/4"],
                                                  ["x*y/4", "2 + sin(y)^2"]]))
    points = {2: [0.7, 0.9]}
    for g in catalog:
        ident = SmoothMap.identity(g, g)
        p = points[g.dim]
        assert np.max(np.abs(tension(ident, p))) <= 1e-10


def test_sphere_sasaki_projection_harmonic():
    chart, g = sphere()
    G = sasaki_metric(g)
    proj = SmoothMap.bundle_projection(G, g)
    rng = np.random.default_rng(4)
    for _ in range(10):
        p = np.concatenate([[rng.uniform(0.5, 2.6), rng.uniform(0.3, 6.0)],
                            rng.standard_normal(2)])
        assert np.max(np.abs(tension(proj, p))) <= 1e-7


def test_projection_gradient_deformed_profile():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    rng = np.random.default_rng(0)
    for t in (1.5, 2.0, 3.0):
        u = rng.standard_normal(2)
        p = np.concatenate([[t, 0.0], u])
        np.testing.assert_allclose(tension(proj, p), [2.0 / t, 0.0], atol=1e-10)


def brute_force_tension(phi, p):
    """FD route: all derivatives by central differences, no jets."""
    m = phi.dom.chart.dim
    n = phi.cod.chart.dim
    p = np.asarray(p, dtype=float)
    ginv = np.linalg.inv(phi.dom.at(p))
    q = phi.eval(p)

    def dom_entry(i, j):
        return lambda z: phi.dom.at(z)[i, j]

    def cod_entry(i, j):
        return lambda z: phi.cod.at(z)[i, j]

    def christoffel_fd(metric_at_fn, ginv_mat, z, dim):
        dg = np.empty((dim, dim, dim))
        for k in range(dim):
            mu = [0] * dim
            mu[k] = 1
            for i in range(dim):
                for j in range(dim):
                    dg[k, i, j] = fd_derivative(metric_at_fn(i, j), z, tuple(mu))
        G = np.empty((dim, dim, dim))
        for k in range(dim):
            for i in range(dim):
                for j in range(dim):
                    G[k, i, j] = 0.5 * sum(
                        ginv_mat[k, l] * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
                        for l in range(dim))
        return G

    Gdom = christoffel_fd(dom_entry, ginv, p, m)
    Gcod = christoffel_fd(cod_entry, np.linalg.inv(phi.cod.at(q)), q, n)
    dphi = np.empty((n, m))
    ddphi = np.empty((n, m, m))
    for c in range(n):
        comp = lambda z, c=c: phi.eval(z)[c]
        for i in range(m):
            mu = [0] * m
            mu[i] = 1
            dphi[c, i] = fd_derivative(comp, p, tuple(mu))
            for j in range(m):
                mu2 = [0] * m
                mu2[i] += 1
                mu2[j] += 1
                ddphi[c, i, j] = fd_derivative(comp, p, tuple(mu2))
    out = np.zeros(n)
    for c in range(n):
        acc = 0.0
        for i in range(m):
            for j in range(m):
                term = ddphi[c, i, j]
                term -= sum(Gdom[k, i, j] * dphi[c, k] for k in range(m))
                term += sum(Gcod[c, a, b] * dphi[a, i] * dphi[b, j]
                            for a in range(n) for b in range(n))
                acc += ginv[i, j] * term
        out[c] = acc
    return out


def test_tension_jet_route_vs_fd_route():
    # curved map between curved charts
    chart = Chart(("x", "y"))
    g = MetricField.from_strings(chart, [["1 + x^2/4", "0"],
                                         ["0", "1 + y^2/4"]])
    sch, gs = sphere()
    phi = SmoothMap.from_exprs(g, gs, ["1 + 0.3*sin(x)", "2 + 0.5*y"])
    for p in ([0.3, 0.7], [-0.5, 0.2]):
        jet_route = tension(phi, p)
        fd_route = brute_force_tension(phi, p)
        assert np.max(np.abs(jet_route - fd_route)) <= 1e-5


# -- pullback covariant derivative ----------------------------------------------

def test_pullback_constant_field_flat_codomain():
    chart, g = euclid()
    ident = SmoothMap.identity(g, g)
    field = expr_field(chart, ["3", "-2"])
    out = pullback_cov_deriv(ident, field, [1.0, 1.0], [0.2, 0.3])
    np.testing.assert_allclose(out, np.zeros(2), atol=1e-14)


def test_pullback_metric_compatibility():
    # W<V,V>_h = 2 <nabla^phi_W V, V>_h along the map
    chart, g = euclid()
    sch, gs = sphere()
    phi = SmoothMap.from_exprs(g, gs, ["1 + 0.3*sin(x)", "2 + 0.5*y"])
    V = expr_field(chart, ["cos(x)", "sin(y) + 1"])
    rng = np.random.default_rng(6)
    for _ in range(5):
        p = rng.uniform(-0.8, 0.8, 2)
        W = rng.standard_normal(2)
        nv = pullback_cov_deriv(phi, V, W, p)
        seeds = chart.seeds(p, 1)
        Vv = np.array([j.value for j in V(seeds)])
        h = gs.at(phi.eval(p))

        def s(z):
            seeds_z = [Jet.constant(float(c), 2, 1) for c in z]
            vv = np.array([j.value for j in V(seeds_z)])
            return float(vv @ gs.at(phi.eval(z)) @ vv)

        lhs = sum(W[a] * fd_derivative(s, p, tuple(1 if i == a else 0
                                                   for i in range(2)))
                  for a in range(2))
        rhs = 2.0 * float(nv @ h @ Vv)
        assert abs(lhs - rhs) <= 1e-7 * (1.0 + abs(lhs))


def test_pullback_matches_nabla_grad_for_identity():
    chart, g = sphere()
    f = ScalarField.from_value(chart, "theta^2 + sin(phi)")
    ident = SmoothMap.identity(g, g)
    p = [1.0, 2.0]
    W = np.array([0.4, -0.9])
    via_map = pullback_cov_deriv(ident, grad_field(f, g), W, p)
    direct = nabla_grad(f, g, p, W).components
    np.testing.assert_allclose(via_map, direct, atol=1e-9)


# -- bitension -------------------------------------------------------------------

def test_bitension_of_harmonic_identity_zero():
    chart, g = sphere()
    ident = SmoothMap.identity(g, g)
    np.testing.assert_allclose(bitension(ident, [1.1, 0.8]), np.zeros(2),
                               atol=1e-10)


def test_projection_profile_proper_biharmonic():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    rng = np.random.default_rng(1)
    for t in (1.5, 2.0, 3.0):
        p = np.concatenate([[t, 0.0], rng.standard_normal(2)])
        assert np.max(np.abs(bitension(proj, p))) <= 1e-5
        assert np.max(np.abs(tension(proj, p))) == pytest.approx(2.0 / t, abs=1e-9)


def test_identity_from_fiber_scaled_lift_bitension_value():
    # For f = x1 + 1 the honest bitension of the identity from the
    # fiber-scaled lift is -(x1+1)^{-3} d_1^H: nonzero, with |grad f| = 1.
    chart = Chart(("x1", "x2"), ((0.0, None), (None, None)))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_value(chart, "x1 + 1", positive=True)
    phi = SmoothMap.identity(mus_sasaki_metric(g, f), sasaki_metric(g))
    for x1 in (0.5, 1.0, 2.0):
        p = np.array([x1, 0.0, 0.4, -0.2])
        expected = np.array([-1.0 / (x1 + 1.0) ** 3, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(bitension(phi, p), expected, atol=1e-9)


def test_identity_from_gradient_lift_bitension_value():
    # f' = sqrt(exp(x^2+1) - 1): tension is +x d_1^H and the honest
    # bitension is -x d_1^H (the base Jacobi route gives zero instead).
    chart, g = euclid(("x", "x2"))
    f = ScalarField.from_gradient(chart, ["sqrt(exp(x^2 + 1) - 1)", "0"])
    phi = SmoothMap.identity(mus_gradient_metric(g, f), sasaki_metric(g))
    for x in (-0.5, 0.0, 0.5):
        p = np.array([x, 0.0, 0.4, -0.2])
        np.testing.assert_allclose(tension(phi, p), [x, 0, 0, 0], atol=1e-10)
        np.testing.assert_allclose(bitension(phi, p), [-x, 0, 0, 0], atol=1e-9)


# -- jacobi ------------------------------------------------------------------------

def test_jacobi_constant_field_flat():
    chart, g = euclid()
    ident = SmoothMap.identity(g, g)
    field = expr_field(chart, ["1", "2"])
    np.testing.assert_allclose(jacobi(ident, field, [0.1, 0.2]), np.zeros(2),
                               atol=1e-14)


def test_jacobi_of_tension_equals_bitension():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    p = np.array([1.7, 0.0, 0.5, 0.5])
    via_jacobi = jacobi(proj, tension_field(proj), p)
    np.testing.assert_allclose(via_jacobi, bitension(proj, p), atol=1e-9)


def test_jacobi_identity_gaussian_gradient_direction():
    # J_Id(W) with W = grad(alpha)/alpha and alpha = exp(x^2+1): zero on the base
    from liftgeom.closedform import bitension_id_alpha_closed
    chart, g = euclid(("x", "x2"))
    f = ScalarField.from_gradient(chart, ["sqrt(exp(x^2 + 1) - 1)", "0"])
    for x in (-0.5, 0.0, 0.5):
        out = bitension_id_alpha_closed(g, f, [x, 0.0])
        assert np.max(np.abs(out)) <= 1e-6


# -- frame independence ---------------------------------------------------------

def test_tension_frame_independence():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    p = np.array([1.8, 0.2, 0.4, 0.6])
    base = tension(proj, p)
    rng = np.random.default_rng(3)
    for _ in range(2):
        B = rng.standard_normal((4, 4)) + 4.0 * np.eye(4)
        over_frame = tension_over_frame(proj, p, B)
        np.testing.assert_allclose(over_frame, base, atol=1e-6)


def test_bitension_frame_independence():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    p = np.array([1.8, 0.2, 0.4, 0.6])
    base = bitension(proj, p)
    rng = np.random.default_rng(5)
    for _ in range(2):
        B = rng.standard_normal((4, 4)) + 4.0 * np.eye(4)
        np.testing.assert_allclose(bitension(proj, p, frame_basis=B), base,
                                   atol=1e-6)


# -- classification ---------------------------------------------------------------

def test_classify_identity_harmonic():
    chart, g = sphere()
    ident = SmoothMap.identity(g, g)
    out = classify(ident, [[1.0, 2.0], [0.7, 4.0]])
    assert out.verdict == "harmonic"
    assert out.max_tension <= 1e-10


def test_classify_projection_proper_biharmonic():
    chart, g, f = profile_setup()
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    pts = [np.array([t, 0.0, 0.3, -0.2]) for t in (1.5, 2.0, 3.0)]
    out = classify(proj, pts)
    assert out.verdict == "proper_biharmonic"
    assert out.max_tension > 1e-3


def test_classify_quadratic_profile_neither():
    chart = Chart(("t", "x2"), ((0.1, None), (None, None)))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_value(chart, "t^2", positive=True)
    proj = SmoothMap.bundle_projection(mus_gradient_metric(g, f), g)
    pts = [np.array([t, 0.0, 0.1, 0.4]) for t in (0.5, 1.0, 1.5)]
    out = classify(proj, pts)
    assert out.verdict == "neither"
    assert out.max_tension > 1e-3
    assert out.max_bitension > 1e-3
