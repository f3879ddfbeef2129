"""Charts, metric fields, and intrinsic operators on the base manifold.

All operators are evaluated pointwise through jets: metric entries are
expanded as truncated Taylor series at the evaluation point, and the
Levi-Civita connection, curvature, gradients and Laplacians fall out of
exact arithmetic on those series.  Nothing here is specific to a
particular metric; the tangent-bundle metrics assembled elsewhere run
through the same code paths.

Index conventions:

    christoffel(g, p)[k, i, j]      Gamma^k_ij
    riemann(g, p)[l, i, j, k]       R(d_i, d_j) d_k = R^l_ijk d_l
    nabla_riemann(g, p)[a, l, i, j, k]   (nabla_a R)^l_ijk

with the curvature sign convention
R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, ParseError
from .expr import eval_expr, parse, symbols
from .jets import DEFAULT_ORDER, Jet, jet_apply, seed_point

_FRAME_TOL = 1e-10


# ---------------------------------------------------------------------------
# Charts and point/vector containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    """Coordinate chart: names plus optional open interval bounds."""

    names: tuple
    bounds: tuple = None     # per-coordinate (lo, hi), entries may be None

    def __post_init__(self):
        if len(self.names) < 1:
            raise ValueError("chart needs at least one coordinate")
        if self.bounds is None:
            object.__setattr__(self, "bounds", tuple((None, None) for _ in self.names))
        if len(self.bounds) != len(self.names):
            raise ValueError("bounds length must match coordinate count")

    @property
    def dim(self):
        return len(self.names)

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            return False
        for x, (lo, hi) in zip(p, self.bounds):
            if lo is not None and not x > lo:
                return False
            if hi is not None and not x < hi:
                return False
        return True

    def validate(self, p):
        if not self.contains(p):
            raise GeometryError(f"point {np.asarray(p)} outside chart domain "
                                f"{self.names} {self.bounds}")

    def seeds(self, p, order=DEFAULT_ORDER):
        self.validate(p)
        return seed_point(np.asarray(p, dtype=float), order)


@dataclass
class TangentVector:
    point: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        self.point = np.asarray(self.point, dtype=float)
        self.components = np.asarray(self.components, dtype=float)
        if not np.all(np.isfinite(self.components)):
            raise GeometryError("tangent vector with non-finite components")


@dataclass
class Frame:
    point: np.ndarray
    vectors: np.ndarray      # rows are frame vectors

    def __iter__(self):
        return iter(self.vectors)


# ---------------------------------------------------------------------------
# Scalar-valued entry maps
# ---------------------------------------------------------------------------

class ExprMap:
    """Expression evaluated over chart coordinates plus bound constants."""

    def __init__(self, expression, names, constants=None):
        self.expr = parse(expression) if isinstance(expression, str) else expression
        self.names = tuple(names)
        self.constants = dict(constants or {})
        unknown = symbols(self.expr) - set(self.names) - set(self.constants)
        if unknown:
            raise ParseError(f"unknown identifier(s) {sorted(unknown)} in "
                             f"{self.expr}")

    def __call__(self, args):
        env = dict(zip(self.names, args))
        env.update(self.constants)
        return eval_expr(self.expr, env)

    def __repr__(self):
        return f"ExprMap({self.expr})"


class ConstantMap:
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, args):
        return self.value

    def __repr__(self):
        return f"ConstantMap({self.value})"


# ---------------------------------------------------------------------------
# Scalar fields
# ---------------------------------------------------------------------------

class ScalarField:
    """Scalar field on a chart, either value-specified or gradient-specified.

    A gradient-specified field stores the partial derivatives d_i f as
    expressions with no closed-form antiderivative; value queries on such a
    field are a domain error, but every differential-geometric operator
    (gradient, Hessian, Laplacian) remains available.
    """

    def __init__(self, chart, value_map=None, grad_maps=None, positive=False):
        if (value_map is None) == (grad_maps is None):
            raise ValueError("provide exactly one of value_map / grad_maps")
        if grad_maps is not None and len(grad_maps) != chart.dim:
            raise ValueError("one gradient component per coordinate required")
        self.chart = chart
        self.value_map = value_map
        self.grad_maps = list(grad_maps) if grad_maps is not None else None
        self.positive = positive

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_value(cls, chart, expression, constants=None, positive=False):
        return cls(chart, value_map=ExprMap(expression, chart.names, constants),
                   positive=positive)

    @classmethod
    def from_gradient(cls, chart, expressions, constants=None, positive=False):
        maps = [ExprMap(e, chart.names, constants) for e in expressions]
        return cls(chart, grad_maps=maps, positive=positive)

    @classmethod
    def constant(cls, chart, value):
        return cls(chart, value_map=ConstantMap(value), positive=value > 0)

    # -- queries -----------------------------------------------------------

    @property
    def gradient_specified(self):
        return self.value_map is None

    def value(self, p):
        if self.gradient_specified:
            raise DomainError("value query on a gradient-specified field")
        self.chart.validate(p)
        v = self.value_map([float(x) for x in np.asarray(p, dtype=float)])
        if self.positive and not v > 0.0:
            raise DomainError(f"field declared positive evaluates to {v} at {p}")
        return float(v)

    def value_jet(self, p, order=DEFAULT_ORDER):
        if self.gradient_specified:
            raise DomainError("value query on a gradient-specified field")
        j = self.value_map(self.chart.seeds(p, order))
        if not isinstance(j, Jet):
            j = Jet.constant(float(j), self.chart.dim, order)
        if self.positive and not j.value > 0.0:
            raise DomainError(f"field declared positive evaluates to {j.value} at {p}")
        return j

    def partial_jets(self, p, order=DEFAULT_ORDER):
        """Jets of d_i f, one per coordinate."""
        if self.gradient_specified:
            seeds = self.chart.seeds(p, order)
            out = []
            for m in self.grad_maps:
                j = m(seeds)
                out.append(j if isinstance(j, Jet)
                           else Jet.constant(float(j), self.chart.dim, order))
            return out
        vj = self.value_jet(p, order + 1)
        return [vj.diff(i) for i in range(self.chart.dim)]

    def partials(self, p):
        return np.array([j.value for j in self.partial_jets(p, order=1)])


# ---------------------------------------------------------------------------
# Metric fields
# ---------------------------------------------------------------------------

class MetricField:
    """Symmetric matrix of scalar entry maps over a chart.

    Entries may be expression-backed or arbitrary callables (the assembled
    tangent-bundle metrics use the latter); every operator in this module
    only requires that entries evaluate over coordinate jets.
    """

    def __init__(self, chart, entries):
        m = chart.dim
        if len(entries) != m or any(len(row) != m for row in entries):
            raise ValueError("entry matrix shape must match chart dimension")
        self.chart = chart
        self.entries = entries

    @classmethod
    def from_strings(cls, chart, rows, constants=None):
        m = chart.dim
        maps = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric entries ({i},{j}) and ({j},{i}) differ")
                maps[i][j] = maps[j][i] = ExprMap(rows[i][j], chart.names, constants)
        return cls(chart, maps)

    @classmethod
    def euclidean(cls, chart):
        m = chart.dim
        one, zero = ConstantMap(1.0), ConstantMap(0.0)
        return cls(chart, [[one if i == j else zero for j in range(m)]
                           for i in range(m)])

    @classmethod
    def diagonal(cls, chart, diag, constants=None):
        m = chart.dim
        zero = ConstantMap(0.0)
        rows = [[zero] * m for _ in range(m)]
        for i, d in enumerate(diag):
            rows[i][i] = d if callable(d) else ExprMap(d, chart.names, constants)
        return cls(chart, rows)

    @property
    def dim(self):
        return self.chart.dim

    def entry_jets(self, p, order=DEFAULT_ORDER):
        seeds = self.chart.seeds(p, order)
        m = self.dim
        out = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                v = self.entries[i][j](seeds)
                if not isinstance(v, Jet):
                    v = Jet.constant(float(v), m, order)
                out[i][j] = out[j][i] = v
        return out

    def at(self, p):
        self.chart.validate(p)
        xs = [float(x) for x in np.asarray(p, dtype=float)]
        m = self.dim
        mat = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                v = self.entries[i][j](xs)
                mat[i, j] = mat[j, i] = float(v.value) if isinstance(v, Jet) else float(v)
        return mat


def metric_at(g, p):
    """Metric matrix at a point; raises GeometryError if not SPD."""
    mat = g.at(p)
    try:
        np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        raise GeometryError(f"metric not positive definite at {np.asarray(p)}") from None
    return mat


def inverse_metric_at(g, p):
    mat = metric_at(g, p)
    c = np.linalg.cholesky(mat)
    cinv = np.linalg.inv(c)
    return cinv.T @ cinv


def metric_norm(g, p, comps):
    mat = metric_at(g, p)
    comps = np.asarray(comps, dtype=float)
    return float(np.sqrt(comps @ mat @ comps))


# ---------------------------------------------------------------------------
# Jet-valued linear algebra
# ---------------------------------------------------------------------------

def invert_jet_matrix(mat):
    """Inverse of a square matrix with jet entries (Gauss-Jordan, pivot on value)."""
    n = len(mat)
    a = [row[:] for row in mat]
    sample = next((e for row in a for e in row if isinstance(e, Jet)), None)
    if sample is None:
        raise ValueError("matrix contains no jets")
    one = Jet.constant(1.0, sample.space.nvars, sample.space.order)
    inv = [[one * (1.0 if i == j else 0.0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not isinstance(a[i][j], Jet):
                a[i][j] = one * float(a[i][j])
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col].value))
        if abs(a[piv][col].value) < 1e-300:
            raise GeometryError("singular matrix in jet inversion")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        scale = a[col][col].reciprocal()
        a[col] = [e * scale for e in a[col]]
        inv[col] = [e * scale for e in inv[col]]
        for r in range(n):
            if r == col:
                continue
            factor = a[r][col]
            if np.all(factor.coeffs == 0.0):
                continue
            a[r] = [er - factor * ec for er, ec in zip(a[r], a[col])]
            inv[r] = [er - factor * ec for er, ec in zip(inv[r], inv[col])]
    return inv


def inverse_metric_jets(g, p, order):
    return invert_jet_matrix(g.entry_jets(p, order))


# ---------------------------------------------------------------------------
# Connection and curvature
# ---------------------------------------------------------------------------

def christoffel_jets(g, p, order):
    """Gamma^k_ij as order-``order`` jets, from the coordinate Koszul formula

    Gamma^k_ij = (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij).
    """
    m = g.dim
    gj = g.entry_jets(p, order + 1)
    ginv = invert_jet_matrix(gj)
    dg = [[[gj[i][j].diff(k) for k in range(m)] for j in range(m)] for i in range(m)]
    gamma = [[[None] * m for _ in range(m)] for _ in range(m)]
    for k in range(m):
        for i in range(m):
            for j in range(i, m):
                acc = None
                for l in range(m):
                    term = dg[j][l][i] + dg[i][l][j] - dg[i][j][l]
                    contrib = ginv[k][l] * term
                    acc = contrib if acc is None else acc + contrib
                acc = acc * 0.5
                gamma[k][i][j] = gamma[k][j][i] = acc
    return gamma


def _derivative_tables(g, p, depth):
    """Partial-derivative tables of the metric entries, up to order ``depth``.

    Returns (V, D, H, T): values, first, second and third partials, with
    derivative indices leading (D[a, i, j] = d_a g_ij and so on).  Unneeded
    tables come back as None.
    """
    m = g.dim
    gj = g.entry_jets(p, depth)
    V = np.empty((m, m))
    D = np.zeros((m, m, m))
    H = np.zeros((m, m, m, m)) if depth >= 2 else None
    T = np.zeros((m, m, m, m, m)) if depth >= 3 else None
    for i in range(m):
        for j in range(i, m):
            jet = gj[i][j]
            V[i, j] = V[j, i] = jet.value
            for a in range(m):
                mu = [0] * m
                mu[a] = 1
                d = jet.partial(tuple(mu))
                D[a, i, j] = D[a, j, i] = d
                if depth < 2:
                    continue
                for b in range(a, m):
                    mu2 = [0] * m
                    mu2[a] += 1
                    mu2[b] += 1
                    h = jet.partial(tuple(mu2))
                    for aa, bb in ((a, b), (b, a)):
                        H[aa, bb, i, j] = H[aa, bb, j, i] = h
                    if depth < 3:
                        continue
                    for c in range(b, m):
                        mu3 = list(mu2)
                        mu3[c] += 1
                        t = jet.partial(tuple(mu3))
                        from itertools import permutations
                        for perm in set(permutations((a, b, c))):
                            T[perm[0], perm[1], perm[2], i, j] = t
                            T[perm[0], perm[1], perm[2], j, i] = t
    return V, D, H, T


def _gamma_tables(g, p, depth):
    """Christoffel values and their first/second coordinate derivatives.

    Built from the entry tables by differentiating
    Gamma = (1/2) g^{-1} K with K[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    and the matrix-inverse perturbation d(g^{-1}) = -g^{-1} (dg) g^{-1}.
    """
    V, D, H, T = _derivative_tables(g, p, depth + 1)
    try:
        np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        raise GeometryError(f"metric not positive definite at {np.asarray(p)}") from None
    inv = np.linalg.inv(V)
    K = (np.einsum("ijl->lij", D) + np.einsum("jil->lij", D)
         - np.einsum("lij->lij", D))
    gamma = 0.5 * np.einsum("kl,lij->kij", inv, K)
    if depth == 0:
        return gamma, None, None
    dinv = -np.einsum("ka,rab,bl->rkl", inv, D, inv)
    dK = (np.einsum("rijl->rlij", H) + np.einsum("rjil->rlij", H)
          - np.einsum("rlij->rlij", H))
    dgamma = 0.5 * (np.einsum("rkl,lij->rkij", dinv, K)
                    + np.einsum("kl,rlij->rkij", inv, dK))
    if depth == 1:
        return gamma, dgamma, None
    ddinv = -(np.einsum("ska,rab,bl->srkl", dinv, D, inv)
              + np.einsum("ka,srab,bl->srkl", inv, H, inv)
              + np.einsum("ka,rab,sbl->srkl", inv, D, dinv))
    ddK = (np.einsum("srijl->srlij", T) + np.einsum("srjil->srlij", T)
           - np.einsum("srlij->srlij", T))
    ddgamma = 0.5 * (np.einsum("srkl,lij->srkij", ddinv, K)
                     + np.einsum("skl,rlij->srkij", dinv, dK)
                     + np.einsum("rkl,slij->srkij", dinv, dK)
                     + np.einsum("kl,srlij->srkij", inv, ddK))
    return gamma, dgamma, ddgamma


def christoffel(g, p):
    gamma, _, _ = _gamma_tables(g, p, 0)
    return gamma


def riemann_jets(g, p, order):
    """R^l_ijk as jets:

    R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik
              + Gamma^l_ia Gamma^a_jk - Gamma^l_ja Gamma^a_ik.
    """
    m = g.dim
    gamma = christoffel_jets(g, p, order + 1)
    R = [[[[None] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for l in range(m):
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if i == j:
                        R[l][i][j][k] = Jet.constant(0.0, m, order)
                        continue
                    if i > j:
                        R[l][i][j][k] = -R[l][j][i][k]
                        continue
                    acc = gamma[l][j][k].diff(i) - gamma[l][i][k].diff(j)
                    for a in range(m):
                        acc = acc + (gamma[l][i][a] * gamma[a][j][k]
                                     - gamma[l][j][a] * gamma[a][i][k])
                    R[l][i][j][k] = acc.truncate(order)
    return R


def _riemann_from_gamma(gamma, dgamma):
    return (np.einsum("iljk->lijk", dgamma) - np.einsum("jlik->lijk", dgamma)
            + np.einsum("lib,bjk->lijk", gamma, gamma)
            - np.einsum("ljb,bik->lijk", gamma, gamma))


def riemann(g, p):
    gamma, dgamma, _ = _gamma_tables(g, p, 1)
    return _riemann_from_gamma(gamma, dgamma)


def nabla_riemann(g, p):
    """(nabla_a R)^l_ijk: coordinate derivative plus four connection terms."""
    gamma, dgamma, ddgamma = _gamma_tables(g, p, 2)
    Rv = _riemann_from_gamma(gamma, dgamma)
    dR = (np.einsum("ailjk->alijk", ddgamma) - np.einsum("ajlik->alijk", ddgamma)
          + np.einsum("alib,bjk->alijk", dgamma, gamma)
          + np.einsum("lib,abjk->alijk", gamma, dgamma)
          - np.einsum("aljb,bik->alijk", dgamma, gamma)
          - np.einsum("ljb,abik->alijk", gamma, dgamma))
    out = dR.copy()
    out += np.einsum("lam,mijk->alijk", gamma, Rv)
    out -= np.einsum("mai,lmjk->alijk", gamma, Rv)
    out -= np.einsum("maj,limk->alijk", gamma, Rv)
    out -= np.einsum("mak,lijm->alijk", gamma, Rv)
    return out


def curvature_apply(R, X, Y, Z):
    """R(X, Y)Z from the component tensor."""
    return np.einsum("lijk,i,j,k->l", R, np.asarray(X, dtype=float),
                     np.asarray(Y, dtype=float), np.asarray(Z, dtype=float))


def ricci_operator(g, p, X, frame=None):
    """Ricci(X) = sum_i R(X, E_i)E_i over a g-orthonormal frame."""
    R = riemann(g, p)
    comps = X.components if isinstance(X, TangentVector) else np.asarray(X, dtype=float)
    if frame is None:
        ginv = inverse_metric_at(g, p)
        return np.einsum("labc,a,bc->l", R, comps, ginv)
    acc = np.zeros(g.dim)
    for e in frame:
        acc += curvature_apply(R, comps, e, e)
    return acc


# ---------------------------------------------------------------------------
# Gradient, Hessian, Laplacian
# ---------------------------------------------------------------------------

def grad_jets(f, g, p, order):
    """Contravariant gradient components g^ij d_j f as jets."""
    m = g.dim
    ginv = inverse_metric_jets(g, p, order)
    df = f.partial_jets(p, order)
    out = []
    for k in range(m):
        acc = None
        for j in range(m):
            t = ginv[k][j] * df[j]
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def grad(f, g, p):
    return TangentVector(np.asarray(p, dtype=float),
                         np.array([j.value for j in grad_jets(f, g, p, 1)]))


def hessian_operator(f, g, p):
    """S[k, i] = (nabla_{d_i} grad f)^k = d_i (grad f)^k + Gamma^k_ia (grad f)^a."""
    m = g.dim
    Gj = grad_jets(f, g, p, 1)
    Gv = np.array([j.value for j in Gj])
    Gamma = christoffel(g, p)
    S = np.empty((m, m))
    for k in range(m):
        for i in range(m):
            S[k, i] = Gj[k].diff(i).value + sum(Gamma[k, i, a] * Gv[a]
                                                for a in range(m))
    return S


def nabla_grad(f, g, p, X):
    """Covariant Hessian applied to X: nabla_X grad f."""
    comps = X.components if isinstance(X, TangentVector) else np.asarray(X, dtype=float)
    return TangentVector(np.asarray(p, dtype=float), hessian_operator(f, g, p) @ comps)


def laplacian(f, g, p):
    """Trace of the covariant Hessian: g^ij (d_i d_j f - Gamma^k_ij d_k f)."""
    m = g.dim
    df = f.partial_jets(p, 2)
    ginv = inverse_metric_at(g, p)
    Gamma = christoffel(g, p)
    acc = 0.0
    for i in range(m):
        for j in range(m):
            second = df[i].diff(j).value
            acc += ginv[i, j] * (second - sum(Gamma[k, i, j] * df[k].value
                                              for k in range(m)))
    return acc


def laplacian_jet(f, g, p, order):
    """The Laplacian of f as a jet (for gradients of Laplacians)."""
    m = g.dim
    df = f.partial_jets(p, order + 1)
    ginv = inverse_metric_jets(g, p, order)
    Gamma = christoffel_jets(g, p, order)
    acc = None
    for i in range(m):
        for j in range(m):
            term = df[i].diff(j)
            for k in range(m):
                term = term - Gamma[k][i][j] * df[k]
            term = ginv[i][j] * term
            acc = term if acc is None else acc + term
    return acc


def trace_hessian_vec(V_field, g, p):
    """Rough Laplacian of a vector field: Tr_g nabla^2 V.

    ``V_field`` takes the chart's seeded coordinate jets and returns the
    component jets of V.
    """
    m = g.dim
    seeds = g.chart.seeds(p, 2)
    Vj = V_field(seeds)
    Gammaj = christoffel_jets(g, p, 1)
    Gv = christoffel(g, p)
    ginv = inverse_metric_at(g, p)
    # W[j][k] = (nabla_{d_j} V)^k as order-1 jets
    W = [[None] * m for _ in range(m)]
    for j in range(m):
        for k in range(m):
            acc = Vj[k].diff(j)
            for l in range(m):
                acc = acc + Gammaj[k][j][l] * Vj[l]
            W[j][k] = acc
    out = np.zeros(m)
    for k in range(m):
        acc = 0.0
        for i in range(m):
            for j in range(m):
                dW = W[j][k].diff(i).value
                conn = sum(Gv[k, i, a] * W[j][a].value for a in range(m))
                lower = sum(Gv[c, i, j] * W[c][k].value for c in range(m))
                acc += ginv[i, j] * (dW + conn - lower)
        out[k] = acc
    return out


def grad_field(f, g):
    """The gradient of f as a jet-evaluable vector field."""

    def field(seeds):
        order = seeds[0].space.order
        p = [s.value for s in seeds]
        return grad_jets(f, g, p, order)

    return field


# ---------------------------------------------------------------------------
# The deformation weight alpha = 1 + |grad f|^2
# ---------------------------------------------------------------------------

def alpha_jet(f, g, p, order):
    m = g.dim
    ginv = inverse_metric_jets(g, p, order)
    df = f.partial_jets(p, order)
    acc = Jet.constant(1.0, m, order)
    for i in range(m):
        for j in range(m):
            acc = acc + ginv[i][j] * df[i] * df[j]
    return acc


def alpha(f, g, p):
    return alpha_jet(f, g, p, 1).value


def log_alpha_jet(f, g, p, order):
    return jet_apply("ln", alpha_jet(f, g, p, order))


# ---------------------------------------------------------------------------
# Orthonormal frames
# ---------------------------------------------------------------------------

def orthonormal_frame(g, p, align=None, basis=None):
    """Gram-Schmidt frame at a point, optionally aligned so E_1 = align/|align|."""
    m = g.dim
    mat = metric_at(g, p)
    candidates = []
    if align is not None:
        a = align.components if isinstance(align, TangentVector) else np.asarray(align, dtype=float)
        if float(a @ mat @ a) <= _FRAME_TOL ** 2:
            raise GeometryError("degenerate alignment vector")
        candidates.append(a)
    base = np.eye(m) if basis is None else np.asarray(basis, dtype=float)
    candidates.extend(base)
    vectors = []
    for c in candidates:
        v = c.astype(float).copy()
        for e in vectors:
            v -= float(e @ mat @ v) * e
        norm2 = float(v @ mat @ v)
        if norm2 <= 1e-18:
            continue
        vectors.append(v / np.sqrt(norm2))
        if len(vectors) == m:
            break
    if len(vectors) < m:
        raise GeometryError("could not complete an orthonormal frame")
    return Frame(np.asarray(p, dtype=float), np.array(vectors))


def orthonormal_frame_jets(g, p, order, basis=None):
    """Frame field components as jets (Gram-Schmidt in jet arithmetic)."""
    m = g.dim
    gj = g.entry_jets(p, order)
    base = np.eye(m) if basis is None else np.asarray(basis, dtype=float)

    def inner(u, v):
        acc = None
        for i in range(m):
            for j in range(m):
                t = gj[i][j] * u[i] * v[j]
                acc = t if acc is None else acc + t
        return acc

    frame = []
    for row in base:
        v = [Jet.constant(c, m, order) for c in row]
        for e in frame:
            proj = inner(e, v)
            v = [vi - proj * ei for vi, ei in zip(v, e)]
        nrm = jet_apply("sqrt", inner(v, v))
        inv = nrm.reciprocal()
        frame.append([vi * inv for vi in v])
    return frame


# ---------------------------------------------------------------------------
# Covariant derivative of a vector field along a direction
# ---------------------------------------------------------------------------

def cov_deriv_field(g, direction, V_field, p):
    """(nabla_u V)^k at p for a jet-evaluable field V and a direction u."""
    m = g.dim
    u = np.asarray(direction, dtype=float)
    seeds = g.chart.seeds(p, 1)
    Vj = V_field(seeds)
    Vv = np.array([j.value for j in Vj])
    Gamma = christoffel(g, p)
    out = np.zeros(m)
    for k in range(m):
        out[k] = sum(u[a] * Vj[k].diff(a).value for a in range(m))
        out[k] += sum(Gamma[k, a, b] * u[a] * Vv[b] for a in range(m) for b in range(m))
    return out
