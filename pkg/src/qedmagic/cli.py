"""Command-line entry point: ``qedmagic <command> ...``.

Exit codes: 0 success, 1 a verification or reproduction failed, 2 usage error.
Global flags can also be set through the environment: QEDMAGIC_THREADS,
QEDMAGIC_SEED and QEDMAGIC_MODE (a flag on the command line wins).
Angles are radians and magic is in nats throughout.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import engine as eng
from .engine import LAMBDA_DEFAULT, LAMBDA_PHYSICAL, KinematicsError, Process, Regime
from .qlinalg import ContractError
from .stabilizers import concurrence, stabilizer_catalog

SCHEMA = 1
MODES = {"paper": LAMBDA_DEFAULT, "physical": LAMBDA_PHYSICAL}
ENV_PREFIX = "QEDMAGIC_"
TABLE_CHOICES = ("I", "II", "III", "IV", "V", "VI", "VII", "all")
FIGURE_CHOICES = ("2", "3", "4", "5", "6", "7", "8", "all")


class UsageError(Exception):
    pass


def _env(name, default):
    return os.environ.get(ENV_PREFIX + name, default)


def _dump_json(obj, fh=None):
    fh = fh or sys.stdout
    json.dump({"schema": SCHEMA, **obj}, fh, indent=2, sort_keys=False, allow_nan=True)
    fh.write("\n")


def _lambda(args) -> float:
    if getattr(args, "lam", None) is not None:
        return args.lam
    return MODES[args.mode]


def _fmt(x: float) -> str:
    return repr(float(x))


# --- commands -------------------------------------------------------------------

def cmd_stabilizers_list(args):
    rows = []
    for s in stabilizer_catalog():
        amps = [[float(c.real), float(c.imag)] for c in s.state]
        rows.append({"id": s.id, "amplitudes": amps, "entangled": s.entangled,
                     "concurrence": round(concurrence(s.state), 12)})
    if args.format == "json":
        _dump_json({"basis": ["uu", "ud", "du", "dd"], "states": rows})
        return 0
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["id"] + [f"{part}_{b}" for b in ("uu", "ud", "du", "dd") for part in ("re", "im")] + ["entangled"])
    for r in rows:
        w.writerow([r["id"]] + [_fmt(v) for pair in r["amplitudes"] for v in pair] + [int(r["entangled"])])
    return 0


def cmd_stabilizers_verify(args):
    from .stabilizers import verify_catalog

    rep = verify_catalog()
    for line in rep.lines():
        print(line)
    return 0 if rep.ok else 1


def cmd_magic_eval(args):
    from .magic import sre, xi2

    c = args.coeffs
    if len(c) not in (4, 8):
        raise UsageError("--coeffs takes 8 reals (re, im for each of 4 amplitudes) or 4 for one qubit")
    psi = np.array(c[0::2]) + 1j * np.array(c[1::2])
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise UsageError("--coeffs: the zero vector is not a state")
    psi = psi / norm
    out = {"alpha": args.alpha, "xi2": float(xi2(psi)), f"m{args.alpha}_nats": sre(psi, args.alpha),
           "input_norm": float(norm)}
    if args.format == "json":
        _dump_json(out)
    else:
        print(f"xi2 = {out['xi2']:.15g}")
        print(f"M_{args.alpha} = {out[f'm{args.alpha}_nats']:.15g} nats")
    return 0


def _matrix_payload(a):
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def _print_matrix(a, title):
    print(title)
    print("rows: final state, columns: initial state, order uu ud du dd")
    for row in a:
        print("  " + "  ".join(f"{z.real:+.9e}{z.imag:+.9e}j" for z in row))


def cmd_amplitude(args):
    lam = _lambda(args)
    point = eng.KinematicPoint(Process.parse(args.process), args.theta, lam, args.mu)
    a = eng.amplitude_matrix(point, xi=args.xi).entries
    if args.format == "json":
        _dump_json({"process": point.process.value, "theta_rad": args.theta, "lambda": lam,
                    "mu": args.mu, "units": "momentum in electron masses", "layout": "A[final][initial]",
                    "basis": ["uu", "ud", "du", "dd"], "matrix": _matrix_payload(a)})
    else:
        _print_matrix(a, f"{point.process.value} theta={args.theta} lambda={lam} mu={args.mu}")
    return 0


def cmd_limit_matrix(args):
    from .limits import limit_matrix

    lam = _lambda(args)
    a = limit_matrix(args.process, args.regime, args.theta, lam, order=args.order)
    if args.format == "json":
        _dump_json({"process": Process.parse(args.process).value, "regime": Regime.parse(args.regime).value,
                    "theta_rad": args.theta, "lambda": lam, "order": args.order,
                    "layout": "A[final][initial]", "basis": ["uu", "ud", "du", "dd"],
                    "matrix": _matrix_payload(a)})
    else:
        _print_matrix(a, f"{args.process} {args.regime} theta={args.theta} lambda={lam} order={args.order}")
    return 0


def _parse_initial(text):
    if text == "all":
        return list(range(1, 61))
    try:
        ids = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise UsageError(f"--initial: expected an id 1..60, a comma list or 'all', got {text!r}") from None
    if not all(1 <= i <= 60 for i in ids):
        raise UsageError(f"--initial: ids must lie in 1..60, got {text!r}")
    return ids


def cmd_scan(args):
    from .scan import magic_distribution, theta_grid

    lam = _lambda(args)
    ids = _parse_initial(args.initial)
    grid = theta_grid(args.grid)
    regime = Regime.parse(args.regime)
    if regime not in eng.valid_regimes(Process.parse(args.process)):
        raise UsageError(f"--regime: {regime.value} is not available for {args.process}")

    def one(i):
        return magic_distribution(args.process, args.regime, i, lam, args.source, grid,
                                  mu=args.mu, eps=args.eps, extrapolate=args.extrapolate)

    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            dists = list(pool.map(one, ids))
    else:
        dists = [one(i) for i in ids]

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["initial_id", "theta_rad", "xi2", "m2_nats", "status"])
        for d in dists:
            for t, x, m in d.samples:
                w.writerow([d.initial_id, _fmt(t), _fmt(x), _fmt(m), d.status])
    finally:
        if args.out:
            fh.close()
    if args.out:
        counts = {}
        for d in dists:
            counts[d.status] = counts.get(d.status, 0) + 1
        print(f"wrote {len(dists)} distributions x {len(grid)} angles to {args.out}; status {counts}",
              file=sys.stderr)
    return 0


def cmd_classify(args):
    from .scan import classify

    lam = _lambda(args)
    rep = classify(args.process, args.regime, lam, source=args.source)
    if args.format == "json":
        _dump_json({**rep.to_dict(), "units": {"angle": "rad", "magic": "nats"}})
    else:
        print(f"{rep.process.value} {rep.regime.value} lambda={lam}: {len(rep.classes)} classes")
        for c in rep.classes:
            m = c.maximum
            if m is None:
                tail = ""
            elif m.flat:
                tail = f"  M2 = {m.value:.9f} (flat)"
            else:
                tail = f"  M2_max = {m.value:.9f} at {c.variable} = {', '.join(f'{x:.9f}' for x in m.argmax)}"
            print(f"  [{c.status}] {c.members}{tail}")
    return 0


def cmd_tables_reproduce(args):
    from .tables import TABLE_KEYS, reproduce

    keys = TABLE_KEYS if args.which == "all" else (args.which,)
    ok = True
    for k in keys:
        r = reproduce(k, _lambda(args))
        ok &= r.ok
        for line in r.lines():
            print(line)
    return 0 if ok else 1


def cmd_figures_emit(args):
    from .figures import FIGURES, emit

    which = FIGURES if args.which == "all" else (args.which,)
    for w in which:
        for p in emit(w, args.out, _lambda(args), n_theta=args.grid):
            print(p)
    return 0


def cmd_verify_all(args):
    from . import verify

    start = time.perf_counter()
    ok = True
    for number, _, _ in verify.CRITERIA:
        c = verify.run_criterion(number)
        ok &= c.ok
        print(c.line())
    print(f"{'all checks passed' if ok else 'FAILURES'} in {time.perf_counter() - start:.1f} s")
    return 0 if ok else 1


# --- parser -----------------------------------------------------------------------

def _add_process(p, regime=True):
    p.add_argument("--process", required=True, choices=[x.value for x in Process] + ["ee-to-mumu", "mumu-to-ee"],
                   help="ee-mumu, moller, bhabha, emu or mumu-ee")
    if regime:
        p.add_argument("--regime", required=True, choices=["threshold", "low", "high"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qedmagic", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=int(_env("THREADS", "1")),
                        help="worker threads for scans (env QEDMAGIC_THREADS, default 1)")
    parser.add_argument("--seed", type=int, default=int(_env("SEED", "0")),
                        help="seed for randomized checks (env QEDMAGIC_SEED, default 0)")
    parser.add_argument("--mode", choices=sorted(MODES), default=_env("MODE", "paper"),
                        help="default mass ratio m_e/m_mu: paper = 0.005, physical = 0.004836")
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("stabilizers", help="the 60 two-qubit stabilizer states").add_subparsers(
        dest="action", required=True)
    p = st.add_parser("list")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_stabilizers_list)
    st.add_parser("verify").set_defaults(func=cmd_stabilizers_verify)

    mg = sub.add_parser("magic", help="stabilizer Renyi entropy of a state").add_subparsers(
        dest="action", required=True)
    p = mg.add_parser("eval")
    p.add_argument("--coeffs", type=float, nargs="+", required=True, metavar="X",
                   help="re im pairs of the amplitudes in the uu ud du dd basis (normalized on input)")
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_magic_eval)

    p = sub.add_parser("amplitude", help="tree-level spin amplitude matrix from the Dirac engine")
    _add_process(p, regime=False)
    p.add_argument("--theta", type=float, required=True, help="scattering angle, rad")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="m_e / m_mu")
    p.add_argument("--mu", type=float, required=True, help="|p| of the incoming pair in electron masses")
    p.add_argument("--xi", type=float, default=0.0, help="photon gauge parameter (result must not depend on it)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("limit-matrix", help="analytic amplitude matrix in a kinematic limit")
    _add_process(p)
    p.add_argument("--theta", type=float, default=math.pi / 2)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--order", type=int, choices=[0, 1], default=0, help="1: coefficient of 1/mu")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_limit_matrix)

    p = sub.add_parser("scan", help="M2(theta) per initial stabilizer state, as CSV")
    _add_process(p)
    p.add_argument("--initial", default="all", help="id, comma list or 'all'")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--grid", type=int, default=180, help="N: angles k pi / N, k = 1..N-1")
    p.add_argument("--source", choices=["limit", "engine"], default="limit")
    p.add_argument("--mu", type=float, default=None, help="engine momentum (default per regime)")
    p.add_argument("--eps", type=float, default=None, help="engine distance above threshold")
    p.add_argument("--extrapolate", type=int, default=0, help="Richardson steps for the engine")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="group the 60 inputs by final-state magic distribution")
    _add_process(p)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--source", choices=["limit", "engine"], default="limit")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_classify)

    tb = sub.add_parser("tables", help="published class tables").add_subparsers(dest="action", required=True)
    p = tb.add_parser("reproduce")
    p.add_argument("--which", choices=TABLE_CHOICES, default="all")
    p.set_defaults(func=cmd_tables_reproduce)

    fg = sub.add_parser("figures", help="figure data as CSV").add_subparsers(dest="action", required=True)
    p = fg.add_parser("emit")
    p.add_argument("--which", choices=FIGURE_CHOICES, default="all")
    p.add_argument("--out", default="figures")
    p.add_argument("--grid", type=int, default=180)
    p.set_defaults(func=cmd_figures_emit)

    vf = sub.add_parser("verify", help="run the acceptance checks").add_subparsers(dest="action", required=True)
    vf.add_parser("all").set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the offending flag
        return int(exc.code or 0)
    if args.threads < 1:
        print("qedmagic: error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except BrokenPipeError:  # e.g. piped into head
        sys.stderr.close()
        return 0
    except (UsageError, ContractError, KinematicsError, ValueError) as exc:
        print(f"qedmagic: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
