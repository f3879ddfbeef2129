"""Tension and bitension fields of smooth maps between metric charts.

For a map phi: (M, g) -> (N, h) the tension field is the trace of the
second fundamental form,

    tau^c = g^ij (d_i d_j phi^c - Gamma(g)^k_ij d_k phi^c
            + Gamma(h)^c_ab d_i phi^a d_j phi^b),

and the bitension field is the Jacobi operator applied to tau,

    tau2 = J_phi(tau),
    J_phi(V) = -Tr_g R^N(V, dphi) dphi
               - Tr_g (nabla^phi nabla^phi V - nabla^phi_{nabla^M} V),

where nabla^phi is the pullback of the codomain connection.  Everything
is computed pointwise by jet differentiation: the tension components are
themselves jets in the domain coordinates, so the second covariant
derivative in J is one more round of exact Taylor arithmetic.  A map is
sampled, never solved for: "harmonic" below always means harmonic at the
supplied sample points at the supplied tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    ExprMap, christoffel, christoffel_jets, inverse_metric_at,
    inverse_metric_jets, metric_norm, orthonormal_frame_jets, riemann,
)
from .jets import Jet, jet_compose

DEFAULT_EPS_HARMONIC = 1e-7
DEFAULT_EPS_BIHARMONIC = 1e-5


class SmoothMap:
    """Coordinate map between charts, each carrying a metric."""

    def __init__(self, dom_metric, cod_metric, components):
        if len(components) != cod_metric.chart.dim:
            raise ValueError("one component per codomain coordinate required")
        self.dom = dom_metric
        self.cod = cod_metric
        self.components = components

    @classmethod
    def from_exprs(cls, dom_metric, cod_metric, exprs, constants=None):
        comps = [ExprMap(e, dom_metric.chart.names, constants) for e in exprs]
        return cls(dom_metric, cod_metric, comps)

    @classmethod
    def identity(cls, dom_metric, cod_metric):
        if dom_metric.chart.names != cod_metric.chart.names:
            raise ValueError("identity map needs a shared chart")
        return cls.from_exprs(dom_metric, cod_metric, list(dom_metric.chart.names))

    @classmethod
    def bundle_projection(cls, bundle_metric, base_metric):
        """(x, y) -> x with the given metrics on both sides."""
        return cls.from_exprs(bundle_metric, base_metric,
                              list(base_metric.chart.names))

    def eval(self, p):
        xs = [float(x) for x in np.asarray(p, dtype=float)]
        out = []
        for c in self.components:
            v = c(xs)
            out.append(v.value if isinstance(v, Jet) else float(v))
        return np.array(out)

    def jets(self, p, order):
        seeds = self.dom.chart.seeds(p, order)
        out = []
        for c in self.components:
            v = c(seeds)
            out.append(v if isinstance(v, Jet)
                       else Jet.constant(float(v), self.dom.chart.dim, order))
        return out


def _codomain_christoffel_along(phi, phi_jets, order):
    """Gamma(h)^c_ab composed with phi, as jets in the domain coordinates."""
    q = [j.value for j in phi_jets]
    gamma_n = christoffel_jets(phi.cod, q, order)
    args = [j.truncate(order) if j.space.order > order else j for j in phi_jets]
    n = phi.cod.chart.dim
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                composed = jet_compose(gamma_n[c][a][b], args)
                out[c][a][b] = out[c][b][a] = composed
    return out


def tension_jets(phi, p, order):
    """Tension components as jets of the given order in domain coordinates."""
    m = phi.dom.chart.dim
    n = phi.cod.chart.dim
    pj = phi.jets(p, order + 2)
    ginv = inverse_metric_jets(phi.dom, p, order)
    gamma_dom = christoffel_jets(phi.dom, p, order)
    gamma_cod = _codomain_christoffel_along(phi, pj, order)
    dphi = [[pj[c].diff(i) for i in range(m)] for c in range(n)]
    out = []
    for c in range(n):
        acc = None
        for i in range(m):
            for j in range(m):
                term = dphi[c][i].diff(j)
                for k in range(m):
                    term = term - gamma_dom[k][i][j] * dphi[c][k]
                for a in range(n):
                    for b in range(n):
                        term = term + gamma_cod[c][a][b] * dphi[a][i] * dphi[b][j]
                term = ginv[i][j] * term
                acc = term if acc is None else acc + term
        out.append(acc)
    return out


def tension(phi, p):
    """Tension field at a point (component values in the codomain chart)."""
    return np.array([j.value for j in tension_jets(phi, p, 1)])


def tension_field(phi):
    """The tension field as a jet-evaluable field along phi."""

    def field(seeds):
        order = seeds[0].space.order
        p = [s.value for s in seeds]
        return tension_jets(phi, p, order)

    return field


def pullback_cov_deriv(phi, V_field, w, p):
    """(nabla^phi_w V) at p for a field V along phi and a domain vector w."""
    m = phi.dom.chart.dim
    n = phi.cod.chart.dim
    w = np.asarray(w, dtype=float)
    seeds = phi.dom.chart.seeds(p, 1)
    Vj = V_field(seeds)
    pj = phi.jets(p, 2)
    gamma_cod = _codomain_christoffel_along(phi, pj, 1)
    dphi_w = np.array([sum(pj[a].diff(i).value * w[i] for i in range(m))
                       for a in range(n)])
    out = np.zeros(n)
    for c in range(n):
        out[c] = sum(w[i] * Vj[c].diff(i).value for i in range(m))
        out[c] += sum(gamma_cod[c][a][b].value * dphi_w[a] * Vj[b].value
                      for a in range(n) for b in range(n))
    return out


def jacobi(phi, V_field, p, frame_basis=None):
    """J_phi(V) at a point; coordinate-trace route unless a frame basis is given."""
    m = phi.dom.chart.dim
    n = phi.cod.chart.dim
    seeds = phi.dom.chart.seeds(p, 2)
    Vj = V_field(seeds)
    Vv = np.array([j.value for j in Vj])
    pj = phi.jets(p, 3)
    gamma_cod = _codomain_christoffel_along(phi, pj, 2)
    gc_val = np.array([[[gamma_cod[c][a][b].value for b in range(n)]
                        for a in range(n)] for c in range(n)])
    dphi = [[pj[c].diff(i) for i in range(m)] for c in range(n)]
    dphi_val = np.array([[dphi[c][i].value for i in range(m)] for c in range(n)])
    RN = riemann(phi.cod, [j.value for j in pj])

    def cov_along(U, k):
        """(nabla^phi_{d_k} U)^c as order-lowered jets, U given as jets."""
        out = []
        for c in range(n):
            acc = U[c].diff(k)
            for a in range(n):
                for b in range(n):
                    acc = acc + gamma_cod[c][a][b] * dphi[a][k] * U[b]
            out.append(acc)
        return out

    if frame_basis is None:
        ginv = inverse_metric_at(phi.dom, p)
        gamma_dom = christoffel(phi.dom, p)
        W = [cov_along(Vj, j) for j in range(m)]     # W[j][c], order-1 jets
        lap = np.zeros(n)
        for c in range(n):
            acc = 0.0
            for i in range(m):
                for j in range(m):
                    dW = W[j][c].diff(i).value
                    conn = sum(gc_val[c, a, b] * dphi_val[a, i] * W[j][b].value
                               for a in range(n) for b in range(n))
                    lower = sum(gamma_dom[k, i, j] * W[k][c].value
                                for k in range(m))
                    acc += ginv[i, j] * (dW + conn - lower)
            lap[c] = acc
        curv = np.zeros(n)
        for i in range(m):
            for j in range(m):
                gij = ginv[i, j]
                if gij == 0.0:
                    continue
                curv += gij * np.einsum("cabd,a,b,d->c", RN, Vv,
                                        dphi_val[:, i], dphi_val[:, j])
        return -curv - lap

    frame = orthonormal_frame_jets(phi.dom, p, 2, basis=frame_basis)
    gamma_dom = christoffel(phi.dom, p)
    total = np.zeros(n)
    curv = np.zeros(n)
    for E in frame:
        Ev = np.array([c.value for c in E])
        # inner = nabla^phi_E V as a field (order-1 jets)
        inner = []
        for c in range(n):
            acc = None
            for j in range(m):
                t = E[j] * (Vj[c].diff(j))
                acc = t if acc is None else acc + t
            for a in range(n):
                for b in range(n):
                    for j in range(m):
                        acc = acc + E[j] * gamma_cod[c][a][b] * dphi[a][j] * Vj[b]
            inner.append(acc)
        # outer = nabla^phi_E inner, values only
        outer = np.zeros(n)
        for c in range(n):
            val = 0.0
            for j in range(m):
                val += Ev[j] * inner[c].diff(j).value
                val += Ev[j] * sum(gc_val[c, a, b] * dphi_val[a, j] * inner[b].value
                                   for a in range(n) for b in range(n))
            outer[c] = val
        # direction nabla_E E on the domain
        direction = np.zeros(m)
        for k in range(m):
            direction[k] = sum(Ev[j] * E[k].diff(j).value for j in range(m))
            direction[k] += sum(gamma_dom[k, j, a] * Ev[j] * Ev[a]
                                for j in range(m) for a in range(m))
        corr = np.zeros(n)
        dphi_dir = dphi_val @ direction
        for c in range(n):
            corr[c] = sum(direction[k] * Vj[c].diff(k).value for k in range(m))
            corr[c] += sum(gc_val[c, a, b] * dphi_dir[a] * Vj[b].value
                           for a in range(n) for b in range(n))
        total += outer - corr
        dphi_E = dphi_val @ Ev
        curv += np.einsum("cabd,a,b,d->c", RN, Vv, dphi_E, dphi_E)
    return -curv - total


def bitension(phi, p, frame_basis=None):
    """Bitension field at a point: the Jacobi operator applied to the tension."""
    return jacobi(phi, tension_field(phi), p, frame_basis=frame_basis)


def tension_over_frame(phi, p, basis):
    """Tension recomputed as a sum over an explicit orthonormal frame field.

    Used to certify frame independence of the coordinate-trace route.
    """
    m = phi.dom.chart.dim
    n = phi.cod.chart.dim
    frame = orthonormal_frame_jets(phi.dom, p, 2, basis=basis)
    pj = phi.jets(p, 3)
    gamma_cod = _codomain_christoffel_along(phi, pj, 1)
    gamma_dom = christoffel(phi.dom, p)
    dphi = [[pj[c].diff(i) for i in range(m)] for c in range(n)]
    out = np.zeros(n)
    for E in frame:
        Ev = np.array([c.value for c in E])
        # dphi(E) as a field along phi (order-1 jets)
        dphiE = []
        for c in range(n):
            acc = None
            for j in range(m):
                t = E[j] * dphi[c][j]
                acc = t if acc is None else acc + t
            dphiE.append(acc)
        dphiE_val = np.array([j.value for j in dphiE])
        # nabla^phi_E (dphi(E))
        first = np.zeros(n)
        for c in range(n):
            v = sum(Ev[j] * dphiE[c].diff(j).value for j in range(m))
            v += sum(gamma_cod[c][a][b].value * dphiE_val[a] * dphiE_val[b]
                     for a in range(n) for b in range(n))
            first[c] = v
        # dphi(nabla_E E)
        direction = np.zeros(m)
        for k in range(m):
            direction[k] = sum(Ev[j] * E[k].diff(j).value for j in range(m))
            direction[k] += sum(gamma_dom[k, j, a] * Ev[j] * Ev[a]
                                for j in range(m) for a in range(m))
        second = np.array([sum(dphi[c][k].value * direction[k] for k in range(m))
                           for c in range(n)])
        out += first - second
    return out


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class MapClassification:
    verdict: str                  # harmonic | proper_biharmonic | neither
    max_tension: float
    max_bitension: float
    eps_harmonic: float
    eps_biharmonic: float
    samples: int

    def as_dict(self):
        return {"verdict": self.verdict,
                "max_tension": self.max_tension,
                "max_bitension": self.max_bitension,
                "eps_harmonic": self.eps_harmonic,
                "eps_biharmonic": self.eps_biharmonic,
                "samples": self.samples}


def classify(phi, points, eps_h=DEFAULT_EPS_HARMONIC, eps_b=DEFAULT_EPS_BIHARMONIC):
    """Classify a map over a sample set; norms taken in the codomain metric."""
    max_t = 0.0
    max_b = 0.0
    for p in points:
        q = phi.eval(p)
        t = metric_norm(phi.cod, q, tension(phi, p))
        b = metric_norm(phi.cod, q, bitension(phi, p))
        max_t = max(max_t, t)
        max_b = max(max_b, b)
    if max_t <= eps_h:
        verdict = "harmonic"
    elif max_b <= eps_b:
        verdict = "proper_biharmonic"
    else:
        verdict = "neither"
    return MapClassification(verdict, max_t, max_b, eps_h, eps_b, len(points))
