"""Command-line front end.

Subcommands::

    verify     run every applicable check for a scenario, emit a report
    tension    print tension components, generic and closed-form
    bitension  print bitension components, generic and closed-form
    curvature  max |R| of the scenario's lifted metric, flat verdict
    suite      the full builtin battery with one line per check

Exit status: 0 all checks passed, 1 check failures, 2 parse/usage errors,
3 domain or geometry errors.  Reports are deterministic for a fixed
scenario and seed, up to the timestamp field.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import closedform as cf
from .bundle import (
    BundlePoint, mus_gradient_metric, mus_sasaki_metric, sasaki_metric,
)
from .errors import DomainError, GeometryError, ParseError, ScenarioError
from .geometry import riemann
from .maps import bitension, tension
from .scenarios import BUILTIN_EXAMPLES, SUITE_SCENARIOS, example, from_file
from .verify import suite, verify

FLAT_VERDICT_TOL = 1e-8


def _load_scenario(args):
    if getattr(args, "example", None):
        return example(args.example)
    if getattr(args, "scenario", None):
        return from_file(args.scenario)
    raise ScenarioError("provide --example NAME or --scenario PATH")


def _parse_point(scn, text):
    if text is None:
        return scn.base_points[0]
    values = dict(scn.constants)
    assignments = {}
    for chunk in text.split(","):
        if "=" not in chunk:
            raise ScenarioError(f"bad point assignment {chunk!r}; "
                                "use name=value,...")
        name, val = chunk.split("=", 1)
        assignments[name.strip()] = float(val)
    try:
        point = np.array([assignments[n] for n in scn.base_chart.names])
    except KeyError as exc:
        raise ScenarioError(f"point is missing coordinate {exc}") from None
    return point


def _parse_fiber(scn, text):
    if text is None:
        return np.zeros(scn.base_chart.dim)
    vals = np.array([float(v) for v in text.split(",")])
    if vals.shape != (scn.base_chart.dim,):
        raise ScenarioError("fiber needs one component per base coordinate")
    return vals


def _emit_report(rep, args):
    fmt = getattr(args, "format", "text")
    payload = rep.to_json() if fmt == "machine" else rep.render_text()
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(payload + "\n")
        s = rep.summary()
        print(f"{rep.scenario_name}: {s['checks']} checks, "
              f"{s['failed']} failed, {s['measurements']} measurements "
              f"-> {out}")
    else:
        print(payload)
    return 0 if rep.all_passed else 1


def cmd_verify(args):
    scn = _load_scenario(args)
    rep = verify(scn, seed=args.seed, eps_harmonic=args.tol_harmonic,
                 eps_biharmonic=args.tol_biharmonic,
                 group_filter=args.filter)
    return _emit_report(rep, args)


def _closed_tension(scn, x, bp):
    g, f = scn.metric, scn.f
    if scn.map_name == "pi":
        return np.zeros(g.dim), "harmonic projection (closed form: 0)"
    if scn.map_name == "pi_alpha":
        _, form2 = cf.tension_pi_alpha_closed(g, f, x)
        return form2, "grad(a)/(2a)"
    if scn.map_name == "id_alpha":
        return (cf.tension_id_alpha_closed(g, f, x, bp=bp, sign=+1.0),
                "+[grad(a)/2a]^H (resolved sign)")
    if scn.map_name == "id_f":
        return cf.tension_id_f_closed(g, f, x, bp=bp), "(m/2f)(grad f)^H"
    return cf.tension_idhat_closed(g, f, x, bp=bp), "-(m/2)(grad f)^H"


def _closed_bitension(scn, x, bp):
    g, f = scn.metric, scn.f
    if scn.map_name == "pi":
        return [(np.zeros(g.dim), "0")]
    if scn.map_name == "pi_alpha":
        return [(-cf.biharm_residual_pi_alpha(g, f, x),
                 "-(Ricci + grad lap/2 + grad norm^2/8)(ln a)")]
    if scn.map_name == "id_alpha":
        j = cf.bitension_id_alpha_closed(g, f, x)
        lifted = np.concatenate([j, np.zeros(g.dim)])
        return [(lifted, "[J_Id(grad a / a)]^H (closed route)")]
    if scn.map_name == "id_f":
        return [(cf.bitension_id_f_closed(g, f, x, bp=bp,
                                          variant="with_vertical"),
                 "with-vertical-term variant"),
                (cf.bitension_id_f_closed(g, f, x, bp=bp,
                                          variant="horizontal_only"),
                 "horizontal-only variant")]
    out = [(cf.bitension_idhat_closed(g, f, x, bp=bp),
            "-(m^2/8)(grad|grad f|^2)^H + (m/2)(Tr nabla^2 grad f)^H")]
    lhs, rhs = cf.idhat_ode_sides(f, g, x, m=g.dim)
    print(f"  univariate reduction sides: f''' = {lhs:.9g}, "
          f"(m/4)((f')^2)' = {rhs:.9g}")
    return out


def _fmt_vec(v):
    return "(" + ", ".join(f"{c:.9g}" for c in v) + ")"


def cmd_tension(args, bitension_mode=False):
    scn = _load_scenario(args)
    x = _parse_point(scn, args.point)
    u = _parse_fiber(scn, args.fiber)
    scn.base_chart.validate(x)
    bp = BundlePoint(x, u)
    phi = scn.smooth_map()
    p = bp.coords
    label = "bitension" if bitension_mode else "tension"
    print(f"{scn.name}: map {scn.map_name} at base {_fmt_vec(x)}, "
          f"fiber {_fmt_vec(u)}")
    if bitension_mode:
        generic = bitension(phi, p)
        print(f"  generic {label}: {_fmt_vec(generic)}")
        for closed, desc in _closed_bitension(scn, x, bp):
            print(f"  closed [{desc}]: {_fmt_vec(closed)}")
    else:
        generic = tension(phi, p)
        print(f"  generic {label}: {_fmt_vec(generic)}")
        closed, desc = _closed_tension(scn, x, bp)
        print(f"  closed [{desc}]: {_fmt_vec(closed)}")
    return 0


def cmd_curvature(args):
    scn = _load_scenario(args)
    x = _parse_point(scn, args.point)
    u = _parse_fiber(scn, args.fiber)
    bp = BundlePoint(x, u)
    lift = args.lift
    if lift is None:
        lift = {"pi": "sasaki", "pi_alpha": "mus-gradient",
                "id_alpha": "mus-gradient", "id_f": "mus-sasaki",
                "id_hat_f": "mus-sasaki"}[scn.map_name]
    if lift == "sasaki":
        G = sasaki_metric(scn.metric)
    elif lift == "mus-sasaki":
        G = mus_sasaki_metric(scn.metric, scn.f)
    else:
        G = mus_gradient_metric(scn.metric, scn.f)
    R = riemann(G, bp.coords)
    worst = float(np.max(np.abs(R)))
    verdict = "flat" if worst <= args.tol else "non-flat"
    print(f"{scn.name}: {lift} lift at base {_fmt_vec(x)}, fiber {_fmt_vec(u)}")
    print(f"  max |R| = {worst:.6e}  ->  {verdict} (tolerance {args.tol:.1e})")
    return 0


def cmd_suite(args):
    rep = suite(seed=args.seed, group_filter=args.filter)
    return _emit_report(rep, args)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liftgeom",
        description="Verification of lifted-metric geometry on tangent "
                    "bundles: closed formulas against a generic jet engine.")
    sub = parser.add_subparsers(dest="command", required=True)
    known = ", ".join(sorted(list(BUILTIN_EXAMPLES) + list(SUITE_SCENARIOS)))

    def add_scenario_opts(p):
        p.add_argument("--example", help=f"builtin scenario ({known})")
        p.add_argument("--scenario", help="path to a scenario file")

    def add_report_opts(p):
        p.add_argument("--out", help="write the report to this path")
        p.add_argument("--format", choices=("text", "machine"),
                       default="text", help="report format")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for the random samples")
        p.add_argument("--filter", help="restrict to one check group "
                                        "(exact match, e.g. 'sasaki')")

    p = sub.add_parser("verify", help="run all applicable checks")
    add_scenario_opts(p)
    add_report_opts(p)
    p.add_argument("--tol-harmonic", type=float, default=None,
                   help="harmonicity tolerance override")
    p.add_argument("--tol-biharmonic", type=float, default=None,
                   help="biharmonicity tolerance override")
    p.set_defaults(func=cmd_verify)

    for name, bit in (("tension", False), ("bitension", True)):
        p = sub.add_parser(name, help=f"print {name} components")
        add_scenario_opts(p)
        p.add_argument("--point", help="base point, e.g. 't=2,x2=0'")
        p.add_argument("--fiber", help="fiber components, e.g. '0,1'")
        p.set_defaults(func=lambda a, b=bit: cmd_tension(a, bitension_mode=b))

    p = sub.add_parser("curvature", help="max |R| of the lifted metric")
    add_scenario_opts(p)
    p.add_argument("--point", help="base point, e.g. 't=2,x2=0'")
    p.add_argument("--fiber", help="fiber components, e.g. '0,1'")
    p.add_argument("--lift", choices=("sasaki", "mus-sasaki", "mus-gradient"),
                   help="lift override (default: the scenario map's domain)")
    p.add_argument("--tol", type=float, default=FLAT_VERDICT_TOL,
                   help="flatness verdict tolerance")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("suite", help="run the full builtin battery")
    add_report_opts(p)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
