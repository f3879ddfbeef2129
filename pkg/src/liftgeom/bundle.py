"""Tangent-bundle charts and the three lifted metrics.

The induced chart on the bundle doubles the base chart: coordinates
(x^1..x^m, y^1..y^m), with y the fiber components of a tangent vector in
the coordinate basis.  A lifted metric is assembled blockwise from the
base metric g, the base Christoffel symbols (through
A^k_i(x, y) = y^j Gamma^k_ji, the vertical correction of the horizontal
distribution), and a vertical block v:

    G(d_xi, d_xj) = g_ij + v_kl A^k_i A^l_j
    G(d_xi, d_ya) = v_ka A^k_i
    G(d_ya, d_yb) = v_ab

with v = g (Sasaki lift), v = f*g (fiber scaling by a positive function),
or v = g + df x df (rank-one gradient deformation).  Horizontal and
vertical lifts of base vectors are metric-orthogonal by construction, and
the generic connection/curvature machinery consumes these metrics with no
special-casing: entries are evaluated as jets over the doubled chart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError
from .geometry import (
    Chart, MetricField, alpha, christoffel, grad, invert_jet_matrix,
    orthonormal_frame,
)
from .jets import Jet, jet_compose, seed_point

SASAKI = "sasaki"
MUS_SASAKI = "mus_sasaki"
MUS_GRADIENT = "mus_gradient"


@dataclass
class BundlePoint:
    """A point of the tangent bundle: base coordinates x, fiber components u."""

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        if self.x.shape != self.u.shape:
            raise ValueError("base and fiber parts must have equal length")
        if not np.all(np.isfinite(self.u)):
            raise GeometryError("non-finite fiber components")

    @property
    def coords(self):
        return np.concatenate([self.x, self.u])


@dataclass
class LiftedVector:
    """Tangent vector on the bundle, components in the induced coordinates."""

    point: BundlePoint
    components: np.ndarray

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=float)
        if self.components.shape != (2 * self.point.x.shape[0],):
            raise ValueError("lifted vector needs 2m components")


def tangent_chart(base):
    """The induced chart (x, y): base bounds inherited, fiber unconstrained."""
    fiber_names = tuple(f"y{i + 1}" for i in range(base.dim))
    if set(fiber_names) & set(base.names):
        raise ValueError("base coordinate names collide with fiber names")
    names = tuple(base.names) + fiber_names
    bounds = tuple(base.bounds) + tuple((None, None) for _ in fiber_names)
    return Chart(names, bounds)


# ---------------------------------------------------------------------------
# Blockwise assembly
# ---------------------------------------------------------------------------

def _base_christoffel_jets(g, seeds, m):
    """Base Christoffel jets over a doubled-chart jet space (one order lower)."""
    xseeds = seeds[:m]
    order = seeds[0].space.order
    gj = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            v = g.entries[i][j](xseeds)
            if not isinstance(v, Jet):
                v = Jet.constant(float(v), seeds[0].space.nvars, order)
            gj[i][j] = gj[j][i] = v
    ginv = invert_jet_matrix(gj)
    gamma = [[[None] * m for _ in range(m)] for _ in range(m)]
    for k in range(m):
        for i in range(m):
            for j in range(i, m):
                acc = None
                for l in range(m):
                    term = gj[j][l].diff(i) + gj[i][l].diff(j) - gj[i][j].diff(l)
                    t = ginv[k][l] * term
                    acc = t if acc is None else acc + t
                gamma[k][i][j] = gamma[k][j][i] = acc * 0.5
    return gj, gamma


class _BundleMetricCore:
    """Computes and caches all 2m x 2m entry jets of a lifted metric at a point."""

    def __init__(self, g, kind, f=None):
        if kind not in (SASAKI, MUS_SASAKI, MUS_GRADIENT):
            raise ValueError(f"unknown lift kind {kind!r}")
        if kind != SASAKI and f is None:
            raise ValueError(f"{kind} lift requires a scalar field")
        if kind == MUS_SASAKI and f is not None and f.gradient_specified:
            raise DomainError("fiber scaling requires a value-specified field")
        self.g = g
        self.kind = kind
        self.f = f
        self.m = g.dim
        self._cache = {}

    def entries_at(self, xs, order):
        key = (tuple(xs), order)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        m = self.m
        q = order + 1
        seeds = seed_point(np.asarray(xs, dtype=float), q)
        gj, gamma = _base_christoffel_jets(self.g, seeds, m)
        v = self._vertical_block(gj, seeds)
        # A^k_i = y^j Gamma^k_ji
        A = [[None] * m for _ in range(m)]
        for k in range(m):
            for i in range(m):
                acc = None
                for j in range(m):
                    t = seeds[m + j] * gamma[k][j][i]
                    acc = t if acc is None else acc + t
                A[k][i] = acc
        n = 2 * m
        M = [[None] * n for _ in range(n)]
        for i in range(m):
            for j in range(i, m):
                acc = gj[i][j].truncate(order)
                for k in range(m):
                    for l in range(m):
                        acc = acc + v[k][l] * A[k][i] * A[l][j]
                M[i][j] = M[j][i] = acc.truncate(order)
        for i in range(m):
            for a in range(m):
                acc = None
                for k in range(m):
                    t = v[k][a] * A[k][i]
                    acc = t if acc is None else acc + t
                M[i][m + a] = M[m + a][i] = acc.truncate(order)
        for a in range(m):
            for b in range(a, m):
                M[m + a][m + b] = M[m + b][m + a] = v[a][b].truncate(order)
        if len(self._cache) > 64:
            self._cache.clear()
        self._cache[key] = M
        return M

    def _vertical_block(self, gj, seeds):
        m = self.m
        if self.kind == SASAKI:
            return gj
        xseeds = seeds[:m]
        if self.kind == MUS_SASAKI:
            fj = self.f.value_map(xseeds)
            if not isinstance(fj, Jet):
                fj = Jet.constant(float(fj), seeds[0].space.nvars,
                                  seeds[0].space.order)
            if not fj.value > 0.0:
                raise DomainError(f"fiber scale must be positive, got {fj.value}")
            return [[gj[a][b] * fj for b in range(m)] for a in range(m)]
        # rank-one gradient deformation
        df = self._partials(xseeds)
        return [[gj[a][b] + df[a] * df[b] for b in range(m)] for a in range(m)]

    def _partials(self, xseeds):
        m = self.m
        nvars = xseeds[0].space.nvars
        order = xseeds[0].space.order
        if self.f.gradient_specified:
            out = []
            for gm in self.f.grad_maps:
                v = gm(xseeds)
                out.append(v if isinstance(v, Jet)
                           else Jet.constant(float(v), nvars, order))
            return out
        fj = self.f.value_map(xseeds)
        if not isinstance(fj, Jet):
            return [Jet.constant(0.0, nvars, order) for _ in range(m)]
        return [fj.diff(a) for a in range(m)]


class _BundleEntry:
    """One (i, j) entry of an assembled lift, evaluable over points or jets."""

    def __init__(self, core, i, j):
        self.core = core
        self.i = i
        self.j = j

    def __call__(self, args):
        if not any(isinstance(a, Jet) for a in args):
            xs = [float(a) for a in args]
            return self.core.entries_at(xs, 1)[self.i][self.j].value
        order = min(a.space.order for a in args if isinstance(a, Jet))
        xs = [a.value if isinstance(a, Jet) else float(a) for a in args]
        entry = self.core.entries_at(xs, order)[self.i][self.j]
        seeded = all(isinstance(a, Jet) and a.is_variable_seed(k)
                     for k, a in enumerate(args))
        if seeded:
            return entry
        jet_args = [a if isinstance(a, Jet)
                    else Jet.constant(float(a), args[0].space.nvars, order)
                    for a in args]
        return jet_compose(entry, jet_args)


def _assemble(g, kind, f=None):
    core = _BundleMetricCore(g, kind, f)
    chart = tangent_chart(g.chart)
    n = 2 * g.dim
    entries = [[_BundleEntry(core, i, j) for j in range(n)] for i in range(n)]
    return MetricField(chart, entries)


def sasaki_metric(g):
    """Lift with the base metric on both the horizontal and vertical blocks."""
    return _assemble(g, SASAKI)


def mus_sasaki_metric(g, f):
    """Lift with vertical block f(x) g; f must be value-specified and positive."""
    return _assemble(g, MUS_SASAKI, f)


def mus_gradient_metric(g, f):
    """Lift with vertical block g + df x df (always SPD where g is)."""
    return _assemble(g, MUS_GRADIENT, f)


# ---------------------------------------------------------------------------
# Lifts of base vectors
# ---------------------------------------------------------------------------

def _correction_matrix(g, p):
    """A[k, i] = u^j Gamma^k_ji at a bundle point."""
    G = christoffel(g, p.x)
    return np.einsum("j,kji->ki", p.u, G)


def horizontal_lift(g, X, p):
    X = np.asarray(X, dtype=float)
    A = _correction_matrix(g, p)
    return LiftedVector(p, np.concatenate([X, -A @ X]))


def vertical_lift(X, p):
    X = np.asarray(X, dtype=float)
    return LiftedVector(p, np.concatenate([np.zeros_like(X), X]))


def decompose(g, lv):
    """Split a lifted vector into base-vector horizontal/vertical parts."""
    m = lv.point.x.shape[0]
    a = lv.components[:m]
    b = lv.components[m:]
    A = _correction_matrix(g, lv.point)
    return a.copy(), b + A @ a


def horizontal_field(g, X):
    """The horizontal lift of a constant base vector as a jet-evaluable field.

    The fiber components involve the base Christoffel symbols, so the
    field recomputes them one order above the caller's seeds to keep the
    returned jets honest through that derivative.
    """
    X = np.asarray(X, dtype=float)
    m = X.shape[0]

    def field(seeds):
        nvars = seeds[0].space.nvars
        order = seeds[0].space.order
        inner = seed_point([s.value for s in seeds], order + 1)
        _, gamma = _base_christoffel_jets(g, inner, m)
        out = [Jet.constant(X[i], nvars, order) for i in range(m)]
        for k in range(m):
            acc = Jet.constant(0.0, nvars, order + 1)
            for j in range(m):
                for i in range(m):
                    if X[i] != 0.0:
                        acc = acc - inner[m + j] * gamma[k][j][i] * X[i]
            out.append(acc.truncate(order))
        return out

    return field


def vertical_field(X):
    X = np.asarray(X, dtype=float)
    m = X.shape[0]

    def field(seeds):
        nvars = seeds[0].space.nvars
        order = seeds[0].space.order
        zeros = [Jet.constant(0.0, nvars, order) for _ in range(m)]
        return zeros + [Jet.constant(X[a], nvars, order) for a in range(m)]

    return field


# ---------------------------------------------------------------------------
# Adapted orthonormal frames on the bundle
# ---------------------------------------------------------------------------

def adapted_frame(g, p, variant=SASAKI, f=None):
    """Orthonormal 2m-frame for the selected lift at a bundle point.

    Horizontal legs are lifts of a base orthonormal frame.  Vertical legs
    are scaled to unit length: by 1/sqrt(f) for the fiber-scaled lift, and
    for the gradient deformation the frame is aligned with grad f and its
    first vertical leg scaled by 1/sqrt(alpha).
    """
    if variant != SASAKI and f is None:
        raise ValueError(f"{variant} frame requires a scalar field")
    align = None
    if variant == MUS_GRADIENT:
        G = grad(f, g, p.x).components
        gmat = g.at(p.x)
        if float(G @ gmat @ G) <= 1e-20:
            raise GeometryError("vanishing gradient: no adapted frame")
        align = G
    base = orthonormal_frame(g, p.x, align=align)
    legs = [horizontal_lift(g, e, p) for e in base]
    if variant == SASAKI:
        scales = [1.0] * g.dim
    elif variant == MUS_SASAKI:
        s = 1.0 / np.sqrt(f.value(p.x))
        scales = [s] * g.dim
    else:
        scales = [1.0 / np.sqrt(alpha(f, g, p.x))] + [1.0] * (g.dim - 1)
    legs.extend(vertical_lift(s * e, p) for s, e in zip(scales, base))
    return legs


def fiber_samples(m, rng, n_random=3):
    """Deterministic fiber points (0 and e_1) plus standard-normal draws."""
    out = [np.zeros(m), np.eye(m)[0]]
    out.extend(rng.standard_normal(m) for _ in range(n_random))
    return out
