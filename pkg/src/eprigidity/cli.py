"""Command line interface.

Every output is a pure function of the inputs, flags and seed. Errors are
reported as a JSON object on stderr with exit code 2 (invalid input, not
an EP) or 3 (numerical failure).
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .ensemble import EnsembleConfig, matrix_heatmap, random_ep_sample, run_experiment
from .estimator import DEFAULT_KICK, DEFAULT_TAU, EstimateConfig, estimate_xi
from .exceptions import EPError, InvalidInput, NotAnEP
from .hatano import HatanoParams, build_model, default_eps_grid, rigidity_sweep
from .io import file_digest, load_matrix
from .jordan import EPSpec, build_chain, check_left_orthogonality, xi_from_chain
from .linalg import spectral_norm
from .modes import analyze_modes, modes_to_csv
from .response import response_report
from .svg import heatmap_svg, histogram_svg, line_plot_svg, scatter_svg
from .validation import parse_complex

EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_INVALID, "UsageError", message)


def _fail(code, kind, message, **extra):
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")
    sys.exit(code)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _manifest(args, config, inputs=()):
    return {
        "tool": "eprigidity",
        "version": __version__,
        "subcommand": args.command,
        "config": _jsonable(config),
        "seed": args.seed,
        "inputs": {path: file_digest(path) for path in inputs},
    }


def _emit(args, text, manifest, kind):
    """Write to --out or stdout; CSV files get a sidecar manifest."""
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if kind == "csv":
            with open(args.out + ".manifest.json", "w") as fh:
                fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _emit_json(args, payload, manifest):
    doc = _jsonable({**payload, "manifest": manifest})
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n", manifest, "json")


def _format(args, allowed, default):
    fmt = args.format or default
    if fmt not in allowed:
        raise InvalidInput(f"{args.command} supports --format {', '.join(allowed)}, not {fmt!r}")
    return fmt


def _complex_arg(text):
    try:
        return parse_complex(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_exact(args):
    _format(args, ("json",), "json")
    H = load_matrix(args.matrix)
    ep = EPSpec(H, args.eep, args.order)
    detunings = [float(v) for v in args.detunings.split(",")] if args.detunings else []
    rep = response_report(ep, detunings=detunings, eps=args.eps, normH1=args.norm_h1, dE=args.de)
    chain = build_chain(ep)
    xi_chain = xi_from_chain(chain)
    ortho = check_left_orthogonality(chain)
    payload = {
        **rep.to_dict(),
        "xi_norm": rep.xi,
        "xi_chain": xi_chain,
        "relative_gap": abs(xi_chain - rep.xi) / rep.xi,
        "nilpotency_norms": ep.nilpotency,
        "left_orthogonality": {"overlaps": ortho.overlaps, "last_length": ortho.last_length, "passed": ortho.passed},
    }
    config = {"matrix": args.matrix, "eep": args.eep, "order": ep.n, "eps": args.eps, "norm_h1": args.norm_h1,
              "de": args.de, "detunings": detunings}
    _emit_json(args, payload, _manifest(args, config, [args.matrix]))


def cmd_modes(args):
    fmt = _format(args, ("csv", "json"), "csv")
    H = load_matrix(args.matrix)
    modes = analyze_modes(H)
    manifest = _manifest(args, {"matrix": args.matrix}, [args.matrix])
    if fmt == "csv":
        _emit(args, modes_to_csv(modes), manifest, "csv")
    else:
        rows = [{"l": m.index, "E": m.E, "r": m.r, "K": m.K, "overlap": m.overlap} for m in modes]
        _emit_json(args, {"modes": rows}, manifest)


def cmd_hatano(args):
    fmt = _format(args, ("csv", "svg", "json"), "csv")
    grid = default_eps_grid(args.eps_min, args.eps_max, args.points)
    p = HatanoParams(n=args.order, E0=args.E0, A=args.A, eps_grid=grid)
    table = rigidity_sweep(p)
    config = {"order": p.n, "E0": p.E0, "A": p.A, "eps_min": args.eps_min, "eps_max": args.eps_max,
              "points": args.points}
    manifest = _manifest(args, config)
    if fmt == "csv":
        _emit(args, table.to_csv(), manifest, "csv")
    elif fmt == "json":
        H_EP, H_1 = build_model(p)
        _emit_json(args, {"xi": p.xi, "norm_H1": spectral_norm(H_1), "table": table.to_dict()}, manifest)
    else:
        svg = line_plot_svg(
            table.eps,
            {"r exact": table.r_exact, "r predicted": table.r_pred, "K exact": table.K_exact,
             "K predicted": table.K_pred},
            xlabel="perturbation strength eps",
            ylabel="r, K",
            title=f"hopping chain n={p.n}, A={args.A}, E0={args.E0}",
            dashed=("r predicted", "K predicted"),
            metadata=json.dumps(manifest, sort_keys=True),
        )
        _emit(args, svg, manifest, "svg")


def cmd_estimate(args):
    _format(args, ("json",), "json")
    H = load_matrix(args.matrix)
    cfg = EstimateConfig(E_EP=args.eep, n=args.order, tau=args.tau, degenerate_kick=args.kick,
                         seed=args.seed, average=args.average)
    rep = estimate_xi(H, cfg)
    config = {"matrix": args.matrix, "eep": args.eep, "order": args.order, "tau": args.tau, "kick": args.kick,
              "average": args.average}
    _emit_json(args, rep.to_dict(), _manifest(args, config, [args.matrix]))


def _ensemble_cfg(args, realizations=1):
    return EnsembleConfig(m=args.m, n=args.order, E_EP=args.eep, realizations=realizations,
                          master_seed=args.seed, tau=args.tau)


def cmd_randexp(args):
    _format(args, ("json",), "json")
    cfg = _ensemble_cfg(args, args.count)
    rep = run_experiment(cfg, workers=args.workers)
    manifest = _manifest(args, cfg.to_dict())
    _emit_json(args, rep.to_dict(), manifest)
    if args.hist_csv:
        with open(args.hist_csv, "w") as fh:
            fh.write(rep.histogram_csv())
        with open(args.hist_csv + ".manifest.json", "w") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if args.hist_svg:
        svg = histogram_svg(rep.histogram["edges"], rep.histogram["density"], xlabel="relative error dxi",
                            title=f"m={cfg.m}, n={cfg.n}, {len(rep.records)} realizations",
                            metadata=json.dumps(manifest, sort_keys=True))
        with open(args.hist_svg, "w") as fh:
            fh.write(svg)


def _matrix_source(args):
    """Matrix from --matrix, or one ensemble realization."""
    if args.matrix:
        return load_matrix(args.matrix), {"matrix": args.matrix}, [args.matrix]
    cfg = _ensemble_cfg(args)
    sample = random_ep_sample(cfg, args.index)
    H = sample.block_diagonal if getattr(args, "pre", False) else sample.H
    config = {**cfg.to_dict(), "index": args.index, "pre_unitary": getattr(args, "pre", False)}
    return H, config, []


def cmd_matshow(args):
    _format(args, ("svg", "json"), "svg")
    H, config, inputs = _matrix_source(args)
    manifest = _manifest(args, config, inputs)
    gray = matrix_heatmap(H)
    if (args.format or "svg") == "svg":
        _emit(args, heatmap_svg(gray, metadata=json.dumps(manifest, sort_keys=True)), manifest, "svg")
    else:
        _emit_json(args, {"gray": gray}, manifest)


def cmd_eigs(args):
    fmt = _format(args, ("csv", "svg", "json"), "csv")
    H, config, inputs = _matrix_source(args)
    manifest = _manifest(args, config, inputs)
    E = np.linalg.eigvals(H)
    E = E[np.lexsort((E.imag, E.real))]
    if fmt == "csv":
        text = "re,im\n" + "".join(f"{z.real!r},{z.imag!r}\n" for z in E)
        _emit(args, text, manifest, "csv")
    elif fmt == "svg":
        _emit(args, scatter_svg(E, title="eigenvalues", metadata=json.dumps(manifest, sort_keys=True)),
              manifest, "svg")
    else:
        _emit_json(args, {"eigenvalues": list(E)}, manifest)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "svg"))

    parser = _Parser(prog="eprigidity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", parents=[common], help="xi by both formulas, predictions and bounds")
    p.add_argument("--matrix", required=True)
    p.add_argument("--eep", type=_complex_arg, required=True, help="EP eigenvalue as RE,IM")
    p.add_argument("--order", "--n", type=int, default=None)
    p.add_argument("--eps", type=float)
    p.add_argument("--norm-h1", type=float)
    p.add_argument("--de", type=float, help="detuning for the passive Petermann bound")
    p.add_argument("--detunings", help="comma-separated detunings to tabulate r and K at")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("modes", parents=[common], help="phase rigidity and Petermann factor per eigenstate")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("hatano", parents=[common], help="exact versus predicted r and K for the hopping chain")
    p.add_argument("--order", "--n", type=int, default=3)
    p.add_argument("--A", type=_complex_arg, default=1 + 0j)
    p.add_argument("--E0", type=_complex_arg, default=0j)
    p.add_argument("--eps-min", type=float, default=1e-10)
    p.add_argument("--eps-max", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=40)
    p.set_defaults(func=cmd_hatano)

    p = sub.add_parser("estimate", parents=[common], help="estimate xi of an embedded EP")
    p.add_argument("--matrix", required=True)
    p.add_argument("--eep", type=_complex_arg, required=True)
    p.add_argument("--order", "--n", type=int, required=True)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--kick", type=float, default=DEFAULT_KICK)
    p.add_argument("--average", action="store_true")
    p.set_defaults(func=cmd_estimate)

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument("--m", type=int, default=20)
    ens.add_argument("--n", "--order", dest="order", type=int, default=3)
    ens.add_argument("--eep", type=_complex_arg, default=complex(0.0, -0.05))
    ens.add_argument("--tau", type=float, default=DEFAULT_TAU)

    p = sub.add_parser("randexp", parents=[common, ens], help="random-ensemble validation of the estimator")
    p.add_argument("--count", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--hist-csv")
    p.add_argument("--hist-svg")
    p.set_defaults(func=cmd_randexp)

    for name, func, text in (("matshow", cmd_matshow, "grayscale |H_ij| map"),
                             ("eigs", cmd_eigs, "eigenvalues of a matrix")):
        p = sub.add_parser(name, parents=[common, ens], help=text)
        p.add_argument("--matrix", help="matrix file; otherwise one ensemble realization is used")
        p.add_argument("--index", type=int, default=0, help="ensemble realization index")
        p.add_argument("--pre", action="store_true", help="show the block-diagonal matrix before U")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NotAnEP as exc:
        _fail(EXIT_INVALID, "NotAnEP", str(exc), norms=exc.norms)
    except InvalidInput as exc:
        _fail(EXIT_INVALID, "InvalidInput", str(exc))
    except EPError as exc:
        _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))
    except OSError as exc:
        _fail(EXIT_INVALID, "OSError", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
