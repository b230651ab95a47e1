"""``cv-damp`` command-line front end."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from . import __version__
from .chi import evolve_chi_general, gaussian_chi, initial_gaussian_chi
from .config import CHANNEL_KEYS, PRESETS, RunConfig, load_config
from .density import (adaptive_L_block, coherent_info, density_block_eigenvalues, entropy,
                      reduced_entropy)
from .errors import CvDampError, InvalidArgument
from .fock import gaussian_fock, integrate_master, oracle_measures
from .params import coefficients, evolve_params
from .ppt import block_eigenvalues, build_M_block, negativity
from .prover import StructureViolation, verify_structure
from .separability import classify, crossing_times, margins

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_STRUCTURE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_pair(text: str) -> complex:
    try:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("state and channel")
    g.add_argument("--config", help="YAML or JSON run configuration")
    g.add_argument("--preset", choices=PRESETS)
    for name in ("r", "n0", "A10", "A20"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--B0-re", dest="B0_re", type=float)
    g.add_argument("--B0-im", dest="B0_im", type=float)
    for base in ("gamma_amp", "gamma_phase", "nbar"):
        flag = base.replace("_", "-")
        g.add_argument(f"--{flag}", dest=base, type=float, help="both modes")
        g.add_argument(f"--{flag}-1", dest=f"{base}_1", type=float)
        g.add_argument(f"--{flag}-2", dest=f"{base}_2", type=float)
    g.add_argument("--t", type=float, help="evolution time")
    g.add_argument("--eps", type=float, help="trace tolerance for block sums")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cv-damp", description="Damped two-mode Gaussian states: spectra, entanglement, checks.")
    parser.add_argument("--version", action="version", version=f"cv-damp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chi", help="evaluate the characteristic function")
    _common(p)
    p.add_argument("--mu1", type=_complex_pair, required=True)
    p.add_argument("--mu2", type=_complex_pair, required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of one block")
    _common(p)
    p.add_argument("--block", type=int, required=True)
    p.add_argument("--kind", choices=("ppt", "density"), default="ppt")
    p.add_argument("--csv", metavar="PATH", help="also write m,index,value rows")

    for name, text in (("negativity", "negativity of the partial transpose"),
                       ("ln", "log-negativity"), ("classify", "separability region")):
        _common(sub.add_parser(name, help=text))

    for name, text in (("entropy", "von Neumann entropy"), ("coherent-info", "coherent informations")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--bits", action="store_true")

    p = sub.add_parser("crossings", help="zero-crossing times of the three margins and CI")
    _common(p)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--grid", type=int, default=200)

    p = sub.add_parser("curves", help="margins, LN and CI on a time grid, as CSV")
    _common(p)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", metavar="PATH", help="CSV path (stdout if omitted)")

    p = sub.add_parser("prove-det", help="exact check of the boundary minor structure")
    p.add_argument("--m-max", type=int, default=12)
    p.add_argument("--json", metavar="PATH", dest="json_path", help="write the full report")

    p = sub.add_parser("oracle", help="integrate the master equation in a truncated Fock basis")
    _common(p)
    p.add_argument("--cutoff", type=int, default=14)
    p.add_argument("--compare", action="store_true", help="side-by-side with the analytic values")
    return parser


def _merge(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    state = dict(cfg.state)
    if args.preset is not None:
        if args.preset != state.get("preset"):
            state = {}
        state["preset"] = args.preset
    for key in ("r", "n0", "A10", "A20", "B0_re", "B0_im"):
        val = getattr(args, key)
        if val is not None:
            state[key] = val
    cfg.state = state
    channel = dict(cfg.channel)
    for base in ("gamma_amp", "gamma_phase", "nbar"):
        both = getattr(args, base)
        for i in (1, 2):
            key = f"{base}_{i}"
            val = getattr(args, key)
            if val is not None:
                channel[key] = val
            elif both is not None:
                channel[key] = both
    assert set(channel) <= CHANNEL_KEYS
    cfg.channel = channel
    if args.t is not None:
        cfg.time = args.t
    if args.eps is not None:
        cfg.eps_trace = args.eps
    cfg.validate()
    return cfg


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, complex):
        return f"{x.real!r},{x.imag!r}"
    return str(x)


def _emit(report: dict[str, Any], as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(report, sort_keys=True, default=_fmt) + "\n")
        return
    for key, val in report.items():
        if key == "params":
            continue
        if isinstance(val, (list, tuple)):
            val = " ".join(_fmt(v) for v in val)
        out.write(f"{key}: {_fmt(val)}\n")


def _cmd_chi(args, cfg, out):
    p, ch = cfg.gaussian_state(), cfg.channel_params()
    e = evolve_params(p, ch, cfg.time)
    series = gaussian_chi(e, args.mu1, args.mu2)
    quad = evolve_chi_general(initial_gaussian_chi(p), ch, cfg.time, args.mu1, args.mu2)
    return {"chi": series, "chi_quadrature": quad, "abs_diff": abs(series - quad)}


def _spectrum(args, cfg):
    d = coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time)
    if args.kind == "ppt":
        if args.block < 0:
            raise InvalidArgument("block index must be non-negative")
        ev = block_eigenvalues(build_M_block(d, args.block))
    else:
        ev = density_block_eigenvalues(adaptive_L_block(d, args.block, cfg.eps_trace))
    return [float(v) for v in ev]


def _cmd_spectrum(args, cfg, out):
    ev = _spectrum(args, cfg)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            fh.write(f"# cv-damp v{__version__} spectrum kind={args.kind}\n")
            w.writerow(("m", "index", "value"))
            for i, v in enumerate(ev):
                w.writerow((args.block, i, repr(v)))
    return {"kind": args.kind, "block": args.block, "eigenvalues": ev}


def _cmd_negativity(args, cfg, out):
    d = coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time)
    res = negativity(d, cfg.eps_trace)
    return {"negativity": res.negativity, "log_negativity": res.log_negativity,
            "blocks_used": res.blocks_used, "trace": res.trace_accumulated, "tail_bound": res.tail_bound}


def _cmd_ln(args, cfg, out):
    d = coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time)
    return {"log_negativity": negativity(d, cfg.eps_trace).log_negativity}


def _cmd_entropy(args, cfg, out):
    d = coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time)
    return {"entropy": entropy(d, cfg.eps_trace, args.bits),
            "reduced_entropies": [reduced_entropy(d.A1, args.bits), reduced_entropy(d.A2, args.bits)],
            "unit": "bits" if args.bits else "nats"}


def _cmd_coherent_info(args, cfg, out):
    d = coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time)
    ci = coherent_info(d, cfg.eps_trace, args.bits)
    return {"coherent_info_1": ci[0], "coherent_info_2": ci[1], "unit": "bits" if args.bits else "nats"}


def _cmd_classify(args, cfg, out):
    v = classify(coefficients(cfg.gaussian_state(), cfg.channel_params(), cfg.time))
    return {"region": v.region.value, "m_simon": v.m_simon, "m_ppt": v.m_ppt, "m_sep": v.m_sep}


def _cmd_crossings(args, cfg, out):
    if args.grid < 2:
        raise InvalidArgument("grid needs at least 2 points")
    ct = crossing_times(cfg.gaussian_state(), cfg.channel_params(), args.t_max, args.grid,
                        rtol=cfg.root_tol, eps=cfg.eps_trace)
    return {"t0": ct.t0, "t1": ct.t1, "t2": ct.t2, "t3": ct.t3, "ordered": ct.ordered()}


def curve_rows(cfg: RunConfig, t_max: float, steps: int):
    """(t, m_simon, m_ppt, m_sep, LN, CI) for t on an even grid of ``steps`` + 1 points."""
    if steps < 1 or not t_max > 0:
        raise InvalidArgument("need steps >= 1 and t_max > 0")
    p, ch = cfg.gaussian_state(), cfg.channel_params()
    for i in range(steps + 1):
        t = t_max * i / steps
        d = coefficients(p, ch, t)
        ms = margins(d)
        ln = negativity(d, cfg.eps_trace).log_negativity
        ci = max(coherent_info(d, cfg.eps_trace))
        yield (t, *ms, ln, ci)


def _cmd_curves(args, cfg, out):
    buf = io.StringIO()
    buf.write(f"# cv-damp v{__version__} curves\n")
    params = cfg.echo()
    params.update(t_max=args.t_max, steps=args.steps)
    buf.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in params.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("t", "m_simon", "m_ppt", "m_sep", "LN", "CI"))
    for row in curve_rows(cfg, args.t_max, args.steps):
        w.writerow([repr(float(x)) for x in row])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        return {"rows": args.steps + 1, "out": args.out}
    out.write(buf.getvalue())
    return None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CV_DAMP_THREADS", "1")))
    except ValueError:
        raise InvalidArgument("CV_DAMP_THREADS must be an integer") from None


def _timed_structure(m: int):
    start = time.perf_counter()
    reports = verify_structure(m)
    return m, reports, time.perf_counter() - start


def _cmd_prove(args, out):
    if args.m_max < 1:
        raise InvalidArgument("--m-max must be at least 1")
    ms = range(1, args.m_max + 1)
    workers = min(_threads(), args.m_max)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_timed_structure, ms))
    else:
        results = [_timed_structure(m) for m in ms]
    rows, violations = [], 0
    for m, reports, wall in results:
        for rep in reports:
            violations += not rep.ok
            rows.append(rep.as_dict())
        out.write(f"m={m:2d} minors={len(reports):2d} "
                  f"failed={sum(not r.ok for r in reports)} wall={wall:.3f}s\n")
    out.write(f"violations: {violations}\n")
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump({"version": __version__, "m_max": args.m_max, "violations": violations,
                       "minors": rows}, fh, indent=1, sort_keys=True)
    return violations


def _cmd_oracle(args, cfg, out):
    p, ch = cfg.gaussian_state(), cfg.channel_params()
    rho0 = gaussian_fock(p.A10, p.A20, p.B0, args.cutoff)
    rho = integrate_master(rho0, ch, cfg.time)
    om = oracle_measures(rho)
    report = {"cutoff": args.cutoff, "t": cfg.time, "edge_population": rho.edge_population(),
              "negativity": om.negativity, "log_negativity": om.log_negativity, "entropy": om.entropy,
              "coherent_info_1": om.coherent_infos[0], "coherent_info_2": om.coherent_infos[1]}
    if not args.compare:
        return report
    d = coefficients(p, ch, cfg.time)
    neg = negativity(d, cfg.eps_trace)
    ci = coherent_info(d, cfg.eps_trace)
    analytic = {"negativity": neg.negativity, "log_negativity": neg.log_negativity,
                "entropy": entropy(d, cfg.eps_trace), "coherent_info_1": ci[0], "coherent_info_2": ci[1]}
    if args.json:
        report["analytic"] = analytic
        return report
    out.write(f"{'quantity':<18}{'analytic':>22}{'oracle':>22}{'abs diff':>12}\n")
    for k, a in analytic.items():
        o = report[k]
        out.write(f"{k:<18}{a:>22.15g}{o:>22.15g}{abs(a - o):>12.3g}\n")
    out.write(f"edge_population: {rho.edge_population():.3g}\n")
    return None


COMMANDS = {
    "chi": _cmd_chi, "spectrum": _cmd_spectrum, "negativity": _cmd_negativity, "ln": _cmd_ln,
    "entropy": _cmd_entropy, "coherent-info": _cmd_coherent_info, "classify": _cmd_classify,
    "crossings": _cmd_crossings, "curves": _cmd_curves, "oracle": _cmd_oracle,
}


def _error(out, kind: str, message: str, as_json: bool, extra: dict | None = None) -> None:
    if as_json:
        payload = {"error": kind, "message": message}
        if extra:
            payload.update(extra)
        out.write(json.dumps(payload, sort_keys=True, default=_fmt) + "\n")
    else:
        sys.stderr.write(f"cv-damp: {kind}: {message}\n")


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _error(out, "usage", str(exc), want_json)
        return EXIT_USAGE
    try:
        if args.command == "prove-det":
            return EXIT_STRUCTURE if _cmd_prove(args, out) else EXIT_OK
        cfg = _merge(args)
        report = COMMANDS[args.command](args, cfg, out)
        if report is not None:
            if args.json:
                report = {"command": args.command, **report, "params": cfg.echo()}
            _emit(report, args.json, out)
        return EXIT_OK
    except StructureViolation as exc:
        _error(out, "structure-violation", str(exc), want_json)
        return EXIT_STRUCTURE
    except InvalidArgument as exc:
        _error(out, exc.kind, str(exc), want_json)
        return EXIT_USAGE
    except CvDampError as exc:
        _error(out, exc.kind, str(exc), want_json, exc.as_dict())
        return EXIT_NUMERICAL
    except (OSError, ValueError) as exc:
        _error(out, "usage", str(exc), want_json)
        return EXIT_USAGE
    except ArithmeticError as exc:
        _error(out, "numerical", str(exc), want_json)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())
