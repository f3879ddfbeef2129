"""Verification scenarios: builtin examples and the scenario file format.

A scenario bundles one base metric, one deformation function, one map
selector, sample points and tolerances: everything a verification run
needs to be reproducible.  The builtin catalog carries the worked
examples (half-line profile, gaussian-profile identity, linear and
logarithmic fiber scalings) plus auxiliary scenarios used by the full
suite.  Each builtin records both the published verdict for its map and
the engine-stable verdict, which the harness compares on the record.

Scenario files are sectioned key-value text (see ``from_file``)::

    [base]
    coords = t x2
    bounds = (1, inf); (-inf, inf)
    metric = euclidean            ; or "sphere", or g_1_1 = ... entries

    [function]
    grad = sqrt(t^4 - 1), 0       ; or value = <expr>
    positive = true

    [constants]
    a = 1.0

    [map]
    type = pi_alpha               ; pi | pi_alpha | id_alpha | id_f | id_hat_f

    [samples]
    points = 1.5 0; 2 0; 3 0
    fiber_random = 2

    [tolerances]
    harmonic = 1e-7
    biharmonic = 1e-5

    [einstein]
    lambda = 0
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .bundle import (
    BundlePoint, fiber_samples, mus_gradient_metric, mus_sasaki_metric,
    sasaki_metric,
)
from .errors import ScenarioError
from .geometry import Chart, MetricField, ScalarField, riemann
from .maps import SmoothMap

MAP_NAMES = ("pi", "pi_alpha", "id_alpha", "id_f", "id_hat_f")


@dataclass
class Scenario:
    name: str
    base_chart: Chart
    metric: MetricField
    f: ScalarField | None
    map_name: str
    base_points: list
    n_random_fiber: int = 2
    eps_harmonic: float = 1e-7
    eps_biharmonic: float = 1e-5
    einstein_lambda: float | None = None
    constants: dict = field(default_factory=dict)
    claimed_verdict: str | None = None
    expected_verdict: str | None = None
    description: str = ""

    def __post_init__(self):
        if self.map_name not in MAP_NAMES:
            raise ScenarioError(f"unknown map selector {self.map_name!r}")
        if self.map_name != "pi" and self.f is None:
            raise ScenarioError(f"map {self.map_name} requires a function")
        self.base_points = [np.asarray(p, dtype=float) for p in self.base_points]
        for p in self.base_points:
            if not self.base_chart.contains(p):
                raise ScenarioError(f"sample point {p} outside the base domain")

    # -- derived objects ------------------------------------------------------

    def lifted_metrics(self):
        """The lifted metrics this scenario's map needs, keyed by role."""
        out = {}
        if self.map_name == "pi":
            out["domain"] = sasaki_metric(self.metric)
        elif self.map_name == "pi_alpha":
            out["domain"] = mus_gradient_metric(self.metric, self.f)
        elif self.map_name == "id_alpha":
            out["domain"] = mus_gradient_metric(self.metric, self.f)
            out["codomain"] = sasaki_metric(self.metric)
        elif self.map_name == "id_f":
            out["domain"] = mus_sasaki_metric(self.metric, self.f)
            out["codomain"] = sasaki_metric(self.metric)
        else:                       # id_hat_f
            out["domain"] = sasaki_metric(self.metric)
            out["codomain"] = mus_sasaki_metric(self.metric, self.f)
        return out

    def smooth_map(self):
        lifted = self.lifted_metrics()
        if self.map_name in ("pi", "pi_alpha"):
            return SmoothMap.bundle_projection(lifted["domain"], self.metric)
        return SmoothMap.identity(lifted["domain"], lifted["codomain"])

    def reverse_map(self):
        """The opposite identity direction (meaningful for id_f / id_hat_f)."""
        lifted = self.lifted_metrics()
        if "codomain" not in lifted:
            return None
        return SmoothMap.identity(lifted["codomain"], lifted["domain"])

    def bundle_points(self, rng):
        m = self.base_chart.dim
        out = []
        for x in self.base_points:
            for u in fiber_samples(m, rng, self.n_random_fiber):
                out.append(BundlePoint(x, u))
        return out

    def base_is_flat(self):
        return all(np.max(np.abs(riemann(self.metric, p))) <= 1e-10
                   for p in self.base_points)

    def scenario_hash(self):
        h = hashlib.sha256()
        h.update(self.describe().encode())
        return h.hexdigest()[:16]

    def describe(self):
        parts = [self.name, ",".join(self.base_chart.names),
                 repr(self.base_chart.bounds), self.map_name,
                 repr([list(p) for p in self.base_points]),
                 str(self.n_random_fiber), f"{self.eps_harmonic:.3e}",
                 f"{self.eps_biharmonic:.3e}", str(self.einstein_lambda),
                 repr(sorted(self.constants.items()))]
        return "|".join(parts)


# ---------------------------------------------------------------------------
# Builtin catalog
# ---------------------------------------------------------------------------

def _halfline_chart(m=2):
    names = ("t",) + tuple(f"x{i}" for i in range(2, m + 1))
    bounds = ((1.0, None),) + ((None, None),) * (m - 1)
    return Chart(names, bounds)


def example_ex4_1(m=2):
    """Half-line profile: df = (sqrt(t^4 - 1), 0, ...) on (1, inf) x R^{m-1}.

    The projection from the gradient-deformed lift has tension (2/t) d_t
    and vanishing bitension: a proper biharmonic projection, confirmed by
    the engine.
    """
    chart = _halfline_chart(m)
    g = MetricField.euclidean(chart)
    f = ScalarField.from_gradient(chart, ["sqrt(t^4 - 1)"] + ["0"] * (m - 1),
                                  positive=True)
    points = [np.array([t] + [0.0] * (m - 1)) for t in (1.5, 2.0, 3.0)]
    return Scenario("ex4_1", chart, g, f, "pi_alpha", points,
                    einstein_lambda=0.0,
                    claimed_verdict="proper_biharmonic",
                    expected_verdict="proper_biharmonic",
                    description="half-line profile, projection from the "
                                "gradient-deformed lift")


def example_ex4_2(a=1.0, b=0.0, c=1.0):
    """Gaussian-type profile: df = (sqrt(exp(a x^2 + b x + c) - 1), 0).

    (alpha'/2alpha)'' vanishes identically, and the base Jacobi route
    gives zero, but the honest bitension of the identity from the
    gradient-deformed lift is -x d_1^H: the engine classifies "neither".
    """
    chart = Chart(("x", "x2"))
    g = MetricField.euclidean(chart)
    consts = {"a": a, "b": b, "c": c}
    f = ScalarField.from_gradient(chart, ["sqrt(exp(a*x^2 + b*x + c) - 1)", "0"],
                                  constants=consts, positive=True)
    points = [np.array([x, 0.0]) for x in (-0.5, 0.0, 0.5)]
    return Scenario("ex4_2", chart, g, f, "id_alpha", points,
                    constants=consts,
                    claimed_verdict="proper_biharmonic",
                    expected_verdict="neither",
                    description="gaussian-type profile, identity from the "
                                "gradient-deformed lift onto the Sasaki lift")


def example_ex5_1(m=2, p=1, a1=1.0, b1=1.0):
    """Linear fiber scale f = a1 x1 + b1 on (0, inf)^p x R^{m-p}.

    |grad f| is a positive constant, so the tension (m/2f)(grad f)^H never
    vanishes; the honest bitension works out to
    (m(m - 4)/4) a1^3 f^{-3} d_1^H, nonzero for m = 2, so the engine
    classifies "neither".
    """
    names = tuple(f"x{i}" for i in range(1, m + 1))
    bounds = tuple((0.0, None) if i < p else (None, None) for i in range(m))
    chart = Chart(names, bounds)
    g = MetricField.euclidean(chart)
    consts = {"a1": a1, "b1": b1}
    f = ScalarField.from_value(chart, "a1*x1 + b1", constants=consts,
                               positive=True)
    points = [np.array([x] + [0.0] * (m - 1)) for x in (0.5, 1.0, 2.0)]
    return Scenario("ex5_1", chart, g, f, "id_f", points,
                    constants=consts,
                    claimed_verdict="proper_biharmonic",
                    expected_verdict="neither",
                    description="linear fiber scale, identity from the "
                                "fiber-scaled lift onto the Sasaki lift")


def example_ex5_2(m=2, c=1.0):
    """Logarithmic fiber scale f = (4/m) ln(m x1 + c) on (0, inf) x R^{m-1}.

    Both sides of the univariate reduction f''' = (m/4)((f')^2)' agree in
    magnitude and differ in sign for this profile; the engine records the
    sign outcome and evaluates both identity directions.
    """
    names = tuple(f"x{i}" for i in range(1, m + 1))
    bounds = ((0.0, None),) + ((None, None),) * (m - 1)
    chart = Chart(names, bounds)
    g = MetricField.euclidean(chart)
    consts = {"c": c, "m": float(m)}
    f = ScalarField.from_value(chart, "(4/m)*ln(m*x1 + c)", constants=consts,
                               positive=True)
    points = [np.array([x] + [0.0] * (m - 1)) for x in (0.5, 1.0, 2.0)]
    return Scenario("ex5_2", chart, g, f, "id_hat_f", points,
                    constants=consts,
                    claimed_verdict="proper_biharmonic",
                    expected_verdict="neither",
                    description="logarithmic fiber scale, identity between "
                                "the Sasaki and fiber-scaled lifts")


def scenario_sphere_sasaki():
    """Round-sphere base with the plain Sasaki lift; projection is harmonic."""
    chart = Chart(("theta", "phi"), ((0.0, math.pi), (0.0, 2 * math.pi)))
    g = MetricField.diagonal(chart, ["1", "sin(theta)^2"])
    points = [np.array(p) for p in ((0.8, 1.0), (1.3, 2.5), (2.1, 4.2))]
    return Scenario("sphere_sasaki", chart, g, None, "pi", points,
                    expected_verdict="harmonic",
                    description="sphere base, Sasaki lift, canonical projection")


def scenario_sphere_musgrad():
    """Sphere base with f = theta: curvature and deformation terms together."""
    chart = Chart(("theta", "phi"), ((0.0, math.pi), (0.0, 2 * math.pi)))
    g = MetricField.diagonal(chart, ["1", "sin(theta)^2"])
    f = ScalarField.from_value(chart, "theta", positive=True)
    points = [np.array(p) for p in ((0.9, 1.1), (1.4, 3.0), (2.0, 5.0))]
    return Scenario("sphere_musgrad", chart, g, f, "pi_alpha", points,
                    description="sphere base, gradient-deformed lift")


def scenario_flat_fiber_scale():
    """Affine fiber scale on the plane, for the flat-base closed forms."""
    chart = Chart(("x1", "x2"), ((-1.5, None), (None, None)))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_value(chart, "x1 + 2", positive=True)
    points = [np.array(p) for p in ((-0.5, 0.0), (0.0, 0.7), (1.0, -0.4))]
    return Scenario("flat_fiber_scale", chart, g, f, "id_f", points,
                    expected_verdict="neither",
                    description="affine fiber scale over the plane")


def scenario_linear_profile():
    """f = x1 + 3: constant gradient norm, all deformation tensions vanish."""
    chart = Chart(("x1", "x2"))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_value(chart, "x1 + 3", positive=True)
    points = [np.array(p) for p in ((0.0, 0.0), (0.7, -0.4), (-0.6, 1.1))]
    return Scenario("linear_profile", chart, g, f, "pi_alpha", points,
                    expected_verdict="harmonic",
                    description="linear profile, projection from the "
                                "gradient-deformed lift")


def scenario_quadratic_profile():
    """f = t^2: generic profile, neither harmonic nor biharmonic."""
    chart = Chart(("t", "x2"), ((0.1, None), (None, None)))
    g = MetricField.euclidean(chart)
    f = ScalarField.from_value(chart, "t^2", positive=True)
    points = [np.array(p) for p in ((0.5, 0.0), (1.0, 0.0), (1.5, 0.0))]
    return Scenario("quadratic_profile", chart, g, f, "pi_alpha", points,
                    expected_verdict="neither",
                    description="quadratic profile, projection from the "
                                "gradient-deformed lift")


BUILTIN_EXAMPLES = {
    "ex4_1": example_ex4_1,
    "ex4_2": example_ex4_2,
    "ex5_1": example_ex5_1,
    "ex5_2": example_ex5_2,
}

SUITE_SCENARIOS = {
    "sphere_sasaki": scenario_sphere_sasaki,
    "sphere_musgrad": scenario_sphere_musgrad,
    "flat_fiber_scale": scenario_flat_fiber_scale,
    "linear_profile": scenario_linear_profile,
    "quadratic_profile": scenario_quadratic_profile,
}


def example(name):
    """Builtin scenario by name; raises ScenarioError for unknown names."""
    factories = dict(BUILTIN_EXAMPLES)
    factories.update(SUITE_SCENARIOS)
    if name not in factories:
        raise ScenarioError(f"unknown builtin scenario {name!r}; "
                            f"choices: {', '.join(sorted(factories))}")
    return factories[name]()


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

def _parse_bound(text):
    text = text.strip()
    if text in ("", "-inf", "inf", "none"):
        return None
    return float(text)


def _parse_bounds(text, dim):
    out = []
    for part in text.split(";"):
        part = part.strip().strip("()")
        lo, hi = (p.strip() for p in part.split(","))
        out.append((_parse_bound(lo), _parse_bound(hi)))
    if len(out) != dim:
        raise ScenarioError(f"expected {dim} bounds, got {len(out)}")
    return tuple(out)


def from_file(path):
    """Parse a scenario file; raises ScenarioError on malformed input."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from None
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from None

    try:
        base = cp["base"]
    except KeyError:
        raise ScenarioError("missing [base] section") from None
    names = tuple(base.get("coords", "").split())
    if not names:
        raise ScenarioError("[base] coords is required")
    dim = len(names)
    if "dim" in base and int(base["dim"]) != dim:
        raise ScenarioError("[base] dim does not match the coordinate list")
    bounds = (_parse_bounds(base["bounds"], dim) if "bounds" in base else None)
    chart = Chart(names, bounds)

    constants = {}
    if cp.has_section("constants"):
        for key, val in cp["constants"].items():
            constants[key] = float(val)

    metric_kind = base.get("metric", "entries").strip()
    if metric_kind == "euclidean":
        metric = MetricField.euclidean(chart)
    elif metric_kind == "sphere":
        if names != ("theta", "phi"):
            raise ScenarioError("builtin sphere metric expects coords "
                                "'theta phi'")
        metric = MetricField.diagonal(chart, ["1", "sin(theta)^2"])
    else:
        rows = [[None] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(dim):
                key = f"g_{i + 1}_{j + 1}"
                alt = f"g_{j + 1}_{i + 1}"
                text = base.get(key, base.get(alt))
                if text is None:
                    raise ScenarioError(f"missing metric entry {key}")
                rows[i][j] = text
        try:
            metric = MetricField.from_strings(chart, rows, constants)
        except Exception as exc:
            raise ScenarioError(f"bad metric entry: {exc}") from None

    f = None
    if cp.has_section("function"):
        sec = cp["function"]
        positive = sec.get("positive", "true").strip().lower() in ("1", "true", "yes")
        try:
            if "value" in sec:
                f = ScalarField.from_value(chart, sec["value"], constants,
                                           positive=positive)
            elif "grad" in sec:
                comps = [c.strip() for c in sec["grad"].split(",")]
                if len(comps) != dim:
                    raise ScenarioError("one gradient component per "
                                        "coordinate required")
                f = ScalarField.from_gradient(chart, comps, constants,
                                              positive=positive)
            else:
                raise ScenarioError("[function] needs 'value' or 'grad'")
        except ScenarioError:
            raise
        except Exception as exc:
            raise ScenarioError(f"bad function expression: {exc}") from None

    try:
        map_name = cp["map"]["type"].strip()
    except KeyError:
        raise ScenarioError("missing [map] type") from None

    points = []
    n_random = 2
    if cp.has_section("samples"):
        sec = cp["samples"]
        if "points" in sec:
            for chunk in sec["points"].split(";"):
                chunk = chunk.strip()
                if chunk:
                    points.append(np.array([float(v) for v in chunk.split()]))
        n_random = int(sec.get("fiber_random", "2"))
    if not points:
        raise ScenarioError("[samples] points is required")
    for p in points:
        if p.shape != (dim,):
            raise ScenarioError(f"sample point {p} has wrong dimension")

    eps_h, eps_b = 1e-7, 1e-5
    if cp.has_section("tolerances"):
        sec = cp["tolerances"]
        eps_h = float(sec.get("harmonic", eps_h))
        eps_b = float(sec.get("biharmonic", eps_b))

    lam = None
    if cp.has_section("einstein"):
        lam = float(cp["einstein"].get("lambda", "0"))

    name = cp["map"].get("name", "scenario")
    return Scenario(name, chart, metric, f, map_name, points,
                    n_random_fiber=n_random, eps_harmonic=eps_h,
                    eps_biharmonic=eps_b, einstein_lambda=lam,
                    constants=constants,
                    expected_verdict=cp["map"].get("expect"),
                    description=f"scenario file {path}")
