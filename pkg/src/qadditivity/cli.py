"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 infeasible state, 3 no additivity
solution, 4 oracle-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import additivity, entanglement, entropy, state, sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_NO_SOLUTION = 3
EXIT_ORACLE = 4

ORACLE_BOUND = 1e-8

CSV_COLUMNS = [
    "p", "q", "z", "solvable", "kappa", "n_roots", "concurrence",
    "mutual_cl", "mutual_qu", "deficit", "sq_joint", "sq_marginal",
]
# CSV column -> SweepRecord attribute
_CSV_FIELDS = {
    "p": "p", "q": "q", "z": "z_mag", "kappa": "kappa_star",
    "concurrence": "concurrence", "mutual_cl": "mutual_cl", "mutual_qu": "mutual_qu",
    "deficit": "deficit", "sq_joint": "s_q_joint", "sq_marginal": "s_q_marginal",
}

FIGURES = {
    "fig1a": ("figure1", 0.0),
    "fig1b": ("figure1", 0.2),
    "fig2": ("figure23", 0.5),
    "fig3": ("figure23", 0.7),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def parse_values(text: str) -> list[float]:
    """Comma-separated items, each a number or an inclusive ``start:step:end`` range."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        try:
            nums = [float(s) for s in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number or range: {item!r}") from None
        if len(nums) == 1:
            out.append(nums[0])
        elif len(nums) == 3:
            start, step, end = nums
            if step <= 0 or end < start:
                raise argparse.ArgumentTypeError(f"bad range {item!r}")
            out.extend(sweep.frange(start, end, step))
        else:
            raise argparse.ArgumentTypeError(f"expected start:step:end, got {item!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty value list")
    return out


# --- record I/O ------------------------------------------------------------


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        row = []
        for col in CSV_COLUMNS:
            if col == "solvable":
                row.append(fmt(r.solvable))
            elif col == "n_roots":
                row.append(fmt(r.n_roots))
            else:
                row.append(fmt(getattr(r, _CSV_FIELDS[col])))
        w.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> list[sweep.SweepRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        kwargs = {attr: (float(row[col]) if row[col] != "" else None) for col, attr in _CSV_FIELDS.items()}
        out.append(
            sweep.SweepRecord(
                solvable=row["solvable"] == "true", n_roots=int(row["n_roots"]), **kwargs
            )
        )
    return out


def records_to_json(records) -> str:
    return json.dumps([r.as_dict() for r in records], indent=2) + "\n"


def diagnostics_text(records) -> str:
    lines = ["p,q,z,roots"]
    for r in records:
        if r.n_roots > 1:
            roots = ";".join(fmt(k) for k in r.all_roots)
            lines.append(f"{fmt(r.p)},{fmt(r.q)},{fmt(r.z_mag)},{roots}")
    return "\n".join(lines) + "\n"


def plot_script(data_path: str, kind: str) -> str:
    """gnuplot script for a CSV written by ``sweep`` or ``figure``."""
    head = [
        "# gnuplot script; run: gnuplot -p <this file>",
        "set datafile separator ','",
        "set key autotitle columnhead",
    ]
    if kind == "figure1":
        body = [
            "set xlabel 'p'",
            "set ylabel 'kappa*'",
            f"plot for [q in '0.1 0.3 0.5 0.7 0.9'] '{data_path}' "
            "using 1:($2==q+0 && strcol(4) eq 'true' ? $5 : 1/0) with lines title 'q='.q",
        ]
    else:
        body = [
            "set xlabel 'p'",
            "set ylabel '|z|'",
            "set multiplot layout 1,2",
            "set zlabel 'kappa*'",
            f"splot '{data_path}' using 1:3:(strcol(4) eq 'true' ? $5 : 1/0) with points pt 7 ps 0.3 notitle",
            "set zlabel 'C(A,B)'",
            f"splot '{data_path}' using 1:3:(strcol(4) eq 'true' ? $7 : 1/0) with points pt 7 ps 0.3 notitle",
            "unset multiplot",
        ]
    return "\n".join(head + body) + "\n"


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _emit(records, args, kind):
    text = records_to_json(records) if args.format == "json" else records_to_csv(records)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(args.output, text)
    if args.diagnostics:
        _write(args.diagnostics, diagnostics_text(records))
    if args.plot_script:
        _write(args.plot_script, plot_script(args.output or "data.csv", kind))


# --- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    params = state.StateParams(args.p, args.kappa, args.z, args.z_phase)
    ok, violations = state.is_feasible(params)
    rep = {
        "p": params.p,
        "kappa": params.kappa,
        "z_mag": params.z_mag,
        "z_phase": params.z_phase,
        "q": args.q,
        "feasible": ok,
        "violations": violations,
        "diagonal_probs": list(state.diagonal_probs(params)),
        "spectrum": list(state.eigenvalues(params)),
    }
    spin = state.spin_decomposition(params)
    rep["spin"] = {"s_z": spin.s_z, "c_zz": spin.c_zz, "c_pm": [spin.c_pm.real, spin.c_pm.imag]}
    cc = entanglement.concurrence_closed_form(params)
    rep["concurrence"] = cc.value
    rep["concurrence_branch"] = cc.branch.value
    if ok:
        rep["sq_joint"] = entropy.joint_q_entropy(params, args.q)
        rep["sq_marginal"] = entropy.marginal_q_entropy(params.p, args.q)
        rep["additivity_residual"] = rep["sq_joint"] - 2.0 * rep["sq_marginal"]
        rep["mutual_cl"] = entropy.mutual_entropy_classical(params)
        rep["mutual_qu"] = entropy.mutual_entropy_quantum(params)
        rep["deficit"] = entropy.quantum_deficit(params)
        rep["concurrence_oracle"] = entanglement.concurrence_wootters(
            state.build_density_matrix(params)
        )
    _print_report(rep, args.json)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def _print_report(rep, as_json):
    if as_json:
        print(json.dumps(rep, indent=2))
        return
    for key, val in rep.items():
        if isinstance(val, dict):
            val = ", ".join(f"{k}={_fmt_any(v)}" for k, v in val.items())
        elif isinstance(val, list):
            val = "; ".join(_fmt_any(v) for v in val) if val else "none"
        else:
            val = _fmt_any(val)
        print(f"{key}: {val}")


def _fmt_any(v):
    if isinstance(v, list):
        return "(" + ", ".join(_fmt_any(x) for x in v) + ")"
    if isinstance(v, str):
        return v
    return fmt(v)


def cmd_solve(args) -> int:
    sols = additivity.solve_kappa(args.p, args.q, args.z, tol=args.tol)
    if sols is None:
        print(f"no solution at p={fmt(args.p)}, q={fmt(args.q)}, z={fmt(args.z)}")
        return EXIT_NO_SOLUTION
    best = additivity.canonical_root(sols)
    rep = {
        "p": args.p,
        "q": args.q,
        "z": args.z,
        "kappa": best.kappa_star,
        "residual": best.residual_at_root,
        "bracket": list(best.bracket),
        "iterations": best.iterations,
        "n_roots": len(sols),
        "roots": [s.kappa_star for s in sols],
    }
    _print_report(rep, args.json)
    return EXIT_OK


def cmd_sweep(args) -> int:
    ps = sorted(set(args.p))
    if not args.include_endpoints:
        ps = [p for p in ps if 0.0 < p < 1.0]
    points = [(p, q, z) for q in args.q for z in args.z for p in ps]
    records = sweep.run_points(points, args.workers)
    _emit(records, args, "figure1" if len(args.z) == 1 else "figure23")
    return EXIT_OK


def cmd_figure(args) -> int:
    kind, value = FIGURES[args.name]
    if kind == "figure1":
        records = sweep.figure1_dataset(value, p_step=args.p_step, workers=args.workers)
    else:
        records = sweep.figure23_dataset(
            value, p_step=args.p_step, z_step=args.z_step, workers=args.workers
        )
    _emit(records, args, kind)
    return EXIT_OK


def oracle_check(n_samples: int, seed: int) -> tuple[float, state.StateParams]:
    rng = np.random.default_rng(seed)
    worst, worst_params = -1.0, None
    for params in state.sample_feasible(rng, n_samples):
        closed = entanglement.concurrence_closed_form(params).value
        oracle = entanglement.concurrence_wootters(state.build_density_matrix(params))
        dev = abs(closed - oracle)
        if dev > worst:
            worst, worst_params = dev, params
    return worst, worst_params


def cmd_oracle_check(args) -> int:
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    worst, params = oracle_check(args.n, args.seed)
    passed = worst <= ORACLE_BOUND
    print(f"samples: {args.n}")
    print(f"seed: {args.seed}")
    print(f"max_deviation: {worst!r}")
    print(f"bound: {ORACLE_BOUND!r}")
    print(
        f"worst: p={params.p!r} kappa={params.kappa!r} "
        f"z_mag={params.z_mag!r} z_phase={params.z_phase!r}"
    )
    print(f"status: {'pass' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_ORACLE


# --- parser -----------------------------------------------------------------


def _add_output_flags(sp):
    sp.add_argument("-o", "--output", help="output path (default stdout)")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--workers", type=int, default=1, help="worker processes")
    sp.add_argument("--diagnostics", help="write every root of multi-root points here")
    sp.add_argument("--plot-script", help="also write a gnuplot script to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qadditivity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="all quantities at one (p, kappa, z)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--kappa", type=float, default=0.0)
    sp.add_argument("--z", type=float, default=0.0, help="|z|")
    sp.add_argument("--z-phase", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=0.5)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("solve", help="solve the additivity condition for kappa")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--z", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=additivity.DEFAULT_TOL)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="grid sweep; values as x, a:step:b or comma lists")
    sp.add_argument("--p", type=parse_values, default=parse_values("0.01:0.01:0.99"))
    sp.add_argument("--q", type=parse_values, required=True)
    sp.add_argument("--z", type=parse_values, default=[0.0])
    sp.add_argument("--include-endpoints", action="store_true")
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="datasets behind the kappa* and region figures")
    sp.add_argument("name", choices=sorted(FIGURES))
    sp.add_argument("--p-step", type=float, default=0.01)
    sp.add_argument("--z-step", type=float, default=0.005)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("oracle-check", help="closed-form vs Wootters concurrence")
    sp.add_argument("-n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_oracle_check)
    return parser


def _validate(args):
    for name in ("p", "q", "z", "kappa", "z_phase", "tol", "p_step", "z_step"):
        val = getattr(args, name, None)
        vals = val if isinstance(val, list) else [val]
        for v in vals:
            if v is not None and not math.isfinite(v):
                raise UsageError(f"--{name} must be finite")
    if args.command in ("analyze", "solve") and not 0.0 <= args.p <= 1.0:
        raise UsageError("--p must lie in [0, 1]")
    if args.command in ("sweep",) and any(not 0.0 <= p <= 1.0 for p in args.p):
        raise UsageError("--p values must lie in [0, 1]")
    qs = args.q if isinstance(getattr(args, "q", None), list) else [getattr(args, "q", 0.5)]
    if any(not 0.0 < q <= 1.0 for q in qs):
        raise UsageError("--q must lie in (0, 1]")
    zs = args.z if isinstance(getattr(args, "z", None), list) else [getattr(args, "z", 0.0)]
    if any(z < 0 for z in zs):
        raise UsageError("--z must be >= 0")
    if getattr(args, "tol", 1.0) <= 0:
        raise UsageError("--tol must be > 0")
    if args.command == "figure" and not (0 < args.p_step <= 0.5 and 0 < args.z_step <= 0.25):
        raise UsageError("bad --p-step/--z-step")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qadditivity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
