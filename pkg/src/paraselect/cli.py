"""Command line front end.

Every subcommand writes one report to ``--out`` (standard output by default)
in the format chosen with ``--format``. Exit statuses: 0 success, 2 a
violated inequality was found, 3 bad input, 4 budget exhausted or no
convergence.
"""
import argparse
import sys

import numpy as np

from . import __version__
from .errors import CertificationError, InputError, ParaselectError, ResourceError
from .multimap import build_cover_chain
from .paraconvexity import defect, profile
from .selection import (SelectionConfig, demo_glue_failure, demo_glue_repaired, glue, run,
                        verify_trace)
from .semenov import ScalarFunction, check_ps, h_iterates, run_functional
from .serialization import (dumps, load_cloud, load_function, load_map, load_trace,
                            svg_polyline, svg_scatter, write_text)

EXIT_OK, EXIT_CERT, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3, 4


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="paraselect", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="output file (default: standard output)")
        sp.add_argument("--format", choices=("json", "csv", "svg"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    def grid_flags(sp):
        sp.add_argument("--set", required=True, help="point cloud JSON file")
        sp.add_argument("--budget", type=int, default=512, help="number of grid centres")
        sp.add_argument("--resolution", type=float, help="centre grid spacing (overrides --budget)")
        sp.add_argument("--radius-count", type=int, default=16)
        sp.add_argument("--sampling-radius", type=float, default=0.0)
        sp.add_argument("--hull-samples", type=int, default=32)

    def run_flags(sp):
        sp.add_argument("--map", required=True, help="set-valued map JSON file")
        sp.add_argument("--g", required=True, help="starting function JSON file")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--delta", type=float)
        sp.add_argument("--r0", type=float, help="default: 1.1 * max d(g, phi)")
        sp.add_argument("--tol-stop", type=float, default=1e-8)
        sp.add_argument("--max-iters", type=int, default=10_000)

    sp = command("analyze", "estimate the paraconvexity defect of a point cloud")
    grid_flags(sp)
    sp.add_argument("--no-refine", action="store_true")

    sp = command("profile", "estimate h(r) on a radius grid")
    grid_flags(sp)
    sp.add_argument("--radii", type=_floats, help="comma-separated radii")

    sp = command("select", "successive approximation with certification")
    run_flags(sp)
    sp.add_argument("--h", help="paraconvexity function; with --H runs the radius-resolved variant")
    sp.add_argument("--H", dest="H", help="dominating function for --h")
    sp.add_argument("--check-paraconvexity", action="store_true")
    sp.add_argument("--sampling-radius", type=float, default=0.0)

    sp = command("glue", "selections on a cover chain, glued level by level")
    run_flags(sp)
    sp.add_argument("--beta", type=float, default=2.0)

    sp = command("hseries", "iterates H_n(t) of the damping recursion")
    sp.add_argument("--H", dest="H", required=True)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--n-max", type=int, default=10_000)

    sp = command("checkps", "check property (PS) for a pair (h, H)")
    sp.add_argument("--h", required=True)
    sp.add_argument("--H", dest="H", required=True)
    sp.add_argument("--t", type=_floats, default=[1.0], help="comma-separated arguments")
    sp.add_argument("--n-max", type=int, default=10_000)

    sp = command("demo-glue-failure", "glue sin(1/x) over non-open closed sets")
    sp.add_argument("--n-max", type=int, default=50)
    sp.add_argument("--step", type=float, default=1e-4)
    sp.add_argument("--oscillation-tol", type=float, default=0.1)
    sp.add_argument("--repaired", action="store_true", help="use the closure-of-open-cover variant")

    sp = command("verify", "replay the inequalities of a saved trace")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--map", required=True)
    return p


# ---------------------------------------------------------------------------
# commands; each returns (report dict, csv text or None, svg text or None, status)


def _grid_kwargs(a):
    return dict(budget=a.budget, resolution=a.resolution, radius_count=a.radius_count,
                sampling_radius=a.sampling_radius, hull_samples=a.hull_samples, seed=a.seed)


def cmd_analyze(a):
    P = load_cloud(a.set)
    rep = defect(P, refine=not a.no_refine, **_grid_kwargs(a))
    c, r, q = rep.witness
    csv = "alpha_hat,radius,center,hull_point\n" + \
        f"{rep.alpha_hat!r},{r!r},{' '.join(repr(float(v)) for v in c)},{' '.join(repr(float(v)) for v in q)}\n"
    svg = svg_scatter(P.points, title=f"alpha_hat={rep.alpha_hat:.4f}", circles=[(c, r)]) \
        if P.dim <= 2 else None
    return {"set": _cloud_summary(P), **rep.to_dict()}, csv, svg, EXIT_OK


def cmd_profile(a):
    P = load_cloud(a.set)
    kw = _grid_kwargs(a)
    kw.pop("budget")
    prof = profile(P, radii=a.radii, budget=a.budget, **kw)
    svg = svg_polyline([("h_hat", prof.radii, prof.values)], title="h_hat(r)")
    return {"set": _cloud_summary(P), **prof.to_dict()}, prof.to_csv(), svg, EXIT_OK


def _cloud_summary(P):
    return {"n_points": len(P), "dim": P.dim, "label": P.label}


def _auto_r0(a, phi, g):
    if a.r0 is not None:
        return a.r0
    res = float(phi.distances(g.values).max(initial=0.0))
    return 1.1 * res if res > 0 else 1.0


def _config(a, phi, g):
    kw = dict(r0=_auto_r0(a, phi, g), delta=a.delta, tol_stop=a.tol_stop, max_iters=a.max_iters)
    if a.gamma is not None and a.alpha is None:
        return SelectionConfig.from_gamma(a.gamma, **kw)
    return SelectionConfig(alpha=0.0 if a.alpha is None else a.alpha, gamma=a.gamma, **kw)


def _trace_outputs(trace, phi, extra):
    cert = verify_trace(trace, phi)
    ok = trace.certified and cert.ok
    report = {**extra, "certified": bool(ok), "verification": cert.to_dict(),
              "final_drift": trace.final_drift(), "n_steps": trace.n_steps,
              "trace": trace.to_dict()}
    n = np.arange(len(trace.residuals))
    svg = svg_polyline([("log10 residual", n, np.log10(np.maximum(trace.residuals, 1e-300))),
                        ("log10 bound", n, np.log10(trace.radii[:len(n)]))],
                       title="residuals and radii")
    return report, trace.to_csv(), svg, EXIT_OK if ok else EXIT_CERT


def cmd_select(a):
    phi = load_map(a.map)
    g = load_function(a.g, phi.domain)
    if (a.h is None) != (a.H is None):
        raise InputError("--h and --H must be given together")
    if a.h is not None:
        h, H = ScalarFunction.from_spec(a.h), ScalarFunction.from_spec(a.H)
        r0 = _auto_r0(a, phi, g)
        trace = run_functional(phi, g, h, H, r0, a.tol_stop, delta=a.delta,
                               max_iters=a.max_iters, strict=False)
        extra = {"mode": "functional", "h": h.to_dict(), "H": H.to_dict(), "r0": r0}
    else:
        cfg = _config(a, phi, g)
        trace = run(phi, g, cfg, strict=False, check_paraconvexity=a.check_paraconvexity,
                    sampling_radius=a.sampling_radius)
        extra = {"mode": "constant", "config": cfg.to_dict()}
    return _trace_outputs(trace, phi, extra)


def cmd_glue(a):
    phi = load_map(a.map)
    g = load_function(a.g, phi.domain)
    cfg = _config(a, phi, g)
    chain = build_cover_chain(phi, a.beta)
    rep = glue(chain, phi, g, cfg)
    violations = chain.violations(phi)
    report = {"config": cfg.to_dict(), "beta": a.beta, "chain_levels": len(chain.levels),
              "chain_violations": [str(v) for v in violations], **rep.to_dict()}
    ok = rep.certified and not violations
    # one row per vertex: first level, coordinates, glued value
    rows = ["vertex,level," + ",".join(f"x{j}" for j in range(phi.domain.coords.shape[1]))
            + "," + ",".join(f"f{j}" for j in range(phi.ambient_dim))]
    level_of = {}
    for piece in rep.pieces:
        for v in piece.vertices:
            level_of.setdefault(v, piece.level)
    for i, (x, f) in enumerate(zip(phi.domain.coords, rep.glued.values)):
        rows.append(f"{i},{level_of.get(i, '')}," + ",".join(repr(float(v)) for v in x)
                    + "," + ",".join(repr(float(v)) for v in f))
    return report, "\n".join(rows) + "\n", None, EXIT_OK if ok else EXIT_CERT


def cmd_hseries(a):
    H = ScalarFunction.from_spec(a.H)
    hs = h_iterates(H, a.t, a.n_max)
    n = np.arange(len(hs.iterates))
    svg = svg_polyline([("H_n", n, hs.iterates)], title="H_n(t)")
    return {"H": H.to_dict(), **hs.to_dict()}, hs.to_csv(), svg, EXIT_OK


def cmd_checkps(a):
    h, H = ScalarFunction.from_spec(a.h), ScalarFunction.from_spec(a.H)
    rep = check_ps(h, H, a.t, a.n_max)
    rows = ["t,delta"] + [f"{t!r},{d!r}" for t, d in rep.deltas.items()]
    return ({"h": h.to_dict(), "H": H.to_dict(), **rep.to_dict()}, "\n".join(rows) + "\n",
            None, EXIT_OK if rep.holds else EXIT_CERT)


def cmd_demo_glue_failure(a):
    fn = demo_glue_repaired if a.repaired else demo_glue_failure
    rep = fn(a.n_max, a.step, a.oscillation_tol)
    w = rep.discontinuity_witness
    csv = w.to_csv() if w is not None else "vertex,x,value\n"
    report = {"variant": "repaired" if a.repaired else "naive", "n_max": a.n_max,
              "step": a.step, "oscillation_tol": a.oscillation_tol, **rep.to_dict()}
    # the glued values are long and add nothing to the verdict
    report.pop("glued")
    status = EXIT_OK if (rep.certified and w is None) else EXIT_CERT
    return report, csv, None, status


def cmd_verify(a):
    phi = load_map(a.map)
    trace = load_trace(a.trace)
    cert = verify_trace(trace, phi)
    rows = ["inequality,iteration,vertex,slack"] + [
        f"{v.inequality},{v.iterate},{v.vertex},{v.slack!r}" for v in cert.violations]
    return cert.to_dict(), "\n".join(rows) + "\n", None, EXIT_OK if cert.ok else EXIT_CERT


COMMANDS = {
    "analyze": cmd_analyze,
    "profile": cmd_profile,
    "select": cmd_select,
    "glue": cmd_glue,
    "hseries": cmd_hseries,
    "checkps": cmd_checkps,
    "demo-glue-failure": cmd_demo_glue_failure,
    "verify": cmd_verify,
}


def dispatch(args):
    """Run a parsed command line; returns the exit status."""
    try:
        report, csv, svg, status = COMMANDS[args.command](args)
        report = {"command": args.command, "version": __version__, "status": status, **report}
        if args.format == "json":
            text = dumps(report)
        elif args.format == "csv":
            if csv is None:
                raise InputError(f"{args.command} has no CSV output")
            text = csv
        else:
            if svg is None:
                raise InputError(f"{args.command} has no SVG output")
            text = svg
        if args.out:
            write_text(args.out, text)
        else:
            sys.stdout.write(text)
        return status
    except CertificationError as exc:
        print(f"paraselect: certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    except InputError as exc:
        print(f"paraselect: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"paraselect: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ParaselectError as exc:
        print(f"paraselect: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main(argv=None):
    args = build_parser().parse_args(argv)
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
