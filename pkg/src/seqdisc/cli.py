"""Command-line interface.

Exit codes: 0 success, 2 parse/usage error, 3 not unitary, 4 operators not
different, 5 orthogonality failure, 6 dimension mismatch, 7 property violation.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .arc import PHASE_TOL, min_runs, relative_operator, theta
from .errors import (
    DimensionMismatch,
    DiscriminationError,
    NotDifferent,
    NotUnitary,
    OrthogonalityFailure,
    ParseError,
)
from .linalg import U_TOL, eigenphases
from .schemes import plan_mixed, resource_report, validate_plan
from .simulator import eliminate_tournament, pauli_matrix, pauli_one_run_impossible, pauli_two_run_protocol, run_protocol
from .synthesis import ORTH_TOL, synthesize_protocol
from .verify import (
    SearchConfig,
    criterion_sweep,
    optimality_search,
    random_multi_run_pair,
    subadditivity_sweep,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_UNITARY = 3
EXIT_NOT_DIFFERENT = 4
EXIT_ORTHOGONALITY = 5
EXIT_DIMENSION = 6
EXIT_VIOLATION = 7

GLOBAL_DEFAULTS = {
    "seed": 0,
    "tol_unitary": U_TOL,
    "tol_orth": ORTH_TOL,
    "tol_phase": PHASE_TOL,
    "out": None,
    "quiet": False,
}


class PropertyViolation(Exception):
    pass


def _fmt(x):
    return f"{x:.9f}"


def _global_options(default):
    p = argparse.ArgumentParser(add_help=False)
    kw = {} if default else {"default": argparse.SUPPRESS}
    p.add_argument("--seed", type=int, **kw)
    p.add_argument("--tol-unitary", type=float, **kw)
    p.add_argument("--tol-orth", type=float, **kw)
    p.add_argument("--tol-phase", type=float, **kw)
    p.add_argument("--out", type=Path, **kw)
    p.add_argument("--quiet", action="store_true", **kw)
    return p


class Context:
    def __init__(self, args):
        for key, value in GLOBAL_DEFAULTS.items():
            setattr(self, key, getattr(args, key, None) if getattr(args, key, None) is not None else value)
        for key in ("tol_unitary", "tol_orth", "tol_phase"):
            if getattr(self, key) <= 0:
                raise ParseError(f"--{key.replace('_', '-')} must be positive")

    def say(self, *parts):
        if not self.quiet:
            print(*parts)

    def emit(self, obj):
        """Write JSON to --out when given, else print it."""
        text = io.write_json(obj, self.out)
        if self.out is None:
            sys.stdout.write(text)
        return text

    def unitary(self, path):
        return io.load_unitary(path, self.tol_unitary)


def cmd_theta(args, ctx):
    u = ctx.unitary(args.matrix)
    print(f"theta = {_fmt(theta(u))}")
    phases = np.sort(eigenphases(u))
    print("phases = [" + ", ".join(_fmt(p) for p in phases) + "]")


def cmd_plan(args, ctx):
    u, v = ctx.unitary(args.u), ctx.unitary(args.v)
    w = relative_operator(u, v)
    n = min_runs(u, v, ctx.tol_phase)
    print(f"theta = {_fmt(theta(w))}")
    print(f"N = {n}")
    if args.copies is not None:
        plan = plan_mixed(n, args.copies)
        report = resource_report(n, args.copies)
        valid = validate_plan(w, plan)
        print(f"parts = ({', '.join(str(k) for k in plan.parts)})")
        print(f"length = {plan.length}")
        print(f"steps = {report.steps}")
        print(f"circuits = {report.circuits}")
        print(f"entangled_width = {report.entangled_width}")
        print(f"valid = {str(valid).lower()}")
        if ctx.out is not None:
            io.write_json(io.plan_to_json(plan, valid), ctx.out)


def cmd_synthesize(args, ctx):
    u, v = ctx.unitary(args.u), ctx.unitary(args.v)
    protocol = synthesize_protocol(u, v, orth_tol=ctx.tol_orth, phase_tol=ctx.tol_phase)
    out = args.protocol_out or ctx.out
    if out is None:
        raise ParseError("an output path is required")
    io.write_json(io.protocol_to_json(protocol), out)
    print(f"N = {protocol.num_runs}")
    print(f"orth_defect = {protocol.orth_defect:.3e}")
    if protocol.bumped:
        print("bumped = true")


def cmd_simulate(args, ctx):
    protocol = io.protocol_from_json(io.read_json(args.protocol), ctx.tol_unitary)
    truth = ctx.unitary(args.truth)
    if truth.dim != protocol.dim:
        raise DimensionMismatch(f"truth has dim {truth.dim}, protocol has dim {protocol.dim}")
    records = run_protocol(protocol, truth, args.shots, ctx.seed)
    for r in records:
        ctx.say(f"{r.label:>5}  p={r.probability:.9f}  counts={r.counts}")
    ctx.emit(io.shots_to_json(records, ctx.seed, args.shots))


def _dump_counterexample(path, payload):
    io.write_json(payload, path)
    print(f"counterexample written to {path}", file=sys.stderr)


def cmd_verify_subadd(args, ctx):
    violations, worst, example = subadditivity_sweep(args.d, args.trials, ctx.seed)
    report = {"check": "subadd", "d": args.d, "trials": args.trials, "seed": ctx.seed,
              "violations": violations, "worst_slack": worst, "pass": violations == 0}
    ctx.emit(report)
    if violations:
        u, v, lhs, rhs = example
        _dump_counterexample(args.counterexample, {"u": io.matrix_to_json(u.matrix), "v": io.matrix_to_json(v.matrix),
                                                   "lhs": lhs, "rhs": rhs})
        raise PropertyViolation(f"{violations} subadditivity violations")


def cmd_verify_optimality(args, ctx):
    cfg = SearchConfig(restarts=args.restarts, iterations=args.iterations, seed=ctx.seed, samples=args.samples)
    if args.u is not None or args.v is not None:
        if args.u is None or args.v is None:
            raise ParseError("--u and --v must be given together")
        instances = [(ctx.unitary(args.u), ctx.unitary(args.v))]
    else:
        rng = np.random.default_rng([ctx.seed, 7])
        instances = [random_multi_run_pair(args.d, rng) for _ in range(args.instances)]
    reports = []
    for u, v in instances:
        n = min_runs(u, v, ctx.tol_phase)
        k = args.k if args.k is not None else n - 1
        report = optimality_search(u, v, k, cfg, ctx.tol_phase)
        reports.append(io.optimality_to_json(report) | {"num_runs": n})
        if not report.passed:
            ctx.emit({"check": "optimality", "reports": reports, "pass": False})
            _dump_counterexample(args.counterexample, {"u": io.matrix_to_json(u.matrix),
                                                       "v": io.matrix_to_json(v.matrix), "report": reports[-1]})
            raise PropertyViolation("optimality search exceeded the bound")
    ctx.emit({"check": "optimality", "reports": reports, "pass": True})


def cmd_verify_criterion(args, ctx):
    bad, example = criterion_sweep(args.trials, ctx.seed, args.adversarial)
    ctx.emit({"check": "criterion", "trials": args.trials, "adversarial": args.adversarial,
              "seed": ctx.seed, "disagreements": bad, "pass": bad == 0})
    if bad:
        u, v, flags = example
        _dump_counterexample(args.counterexample, {"u": io.matrix_to_json(u.matrix), "v": io.matrix_to_json(v.matrix),
                                                   "flags": list(flags)})
        raise PropertyViolation(f"{bad} pairs where the qubit criteria disagree")


def cmd_pauli(args, ctx):
    d = args.d
    if d < 2:
        raise ParseError("d must be at least 2")
    protocol = pauli_two_run_protocol(d)
    if args.truth is None:
        failures = []
        for m in range(d):
            for n in range(d):
                readout, prob = protocol.identify(pauli_matrix(d, m, n))
                if readout != (m, n) or abs(prob - 1) > 1e-10:
                    failures.append([m, n])
        one_run = pauli_one_run_impossible(d, args.trials, ctx.seed)
        report = {"d": d, "operators": d * d, "identified": d * d - len(failures), "runs": protocol.runs,
                  "failures": failures, "one_run_impossible": one_run, "pass": not failures and one_run}
        ctx.emit(report)
        if not report["pass"]:
            raise PropertyViolation("Pauli identification failed")
        return
    m, n = args.truth
    if not (0 <= m < d and 0 <= n < d):
        raise ParseError(f"truth indices must lie in [0, {d})")
    counts = protocol.sample(pauli_matrix(d, m, n), args.shots, ctx.seed)
    readout = tuple(int(i) for i in np.unravel_index(int(np.argmax(counts)), counts.shape))
    print(f"readout = ({readout[0]}, {readout[1]})")
    ctx.say(f"runs = {protocol.runs}")
    ctx.say(f"correct = {counts[m, n]}/{args.shots}")
    if ctx.out is not None:
        io.write_json({"d": d, "truth": [m, n], "readout": list(readout), "shots": args.shots, "seed": ctx.seed,
                       "counts": counts.tolist()}, ctx.out)


def cmd_eliminate(args, ctx):
    files = sorted(Path(args.candidates).glob("*.json"), key=lambda p: p.name)
    if len(files) < 2:
        raise ParseError(f"need at least two candidate files in {args.candidates}")
    candidates = [ctx.unitary(f) for f in files]
    if not 0 <= args.truth_index < len(candidates):
        raise ParseError(f"truth index {args.truth_index} outside [0, {len(candidates)})")
    t = eliminate_tournament(candidates, args.truth_index, ctx.seed, ctx.tol_orth, ctx.tol_phase)
    bound = (len(candidates) - 1) * t.max_pair_runs
    print(f"survivor = {t.survivor} ({files[t.survivor].name})")
    print(f"total_runs = {t.total_runs} (bound {bound})")
    if ctx.out is not None:
        io.write_json(io.transcript_to_json(t), ctx.out)


def build_parser():
    common = _global_options(default=False)
    parser = argparse.ArgumentParser(prog="seqdisc", parents=[_global_options(default=True)],
                                     description="Sequential perfect discrimination of unitary operations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", parents=[common], help="spectral arc width of a unitary")
    p.add_argument("matrix", type=Path)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("plan", parents=[common], help="run count and mixed-scheme plan for a pair")
    p.add_argument("u", type=Path)
    p.add_argument("v", type=Path)
    p.add_argument("--copies", "-m", type=int)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("synthesize", parents=[common], help="write a sequential protocol for a pair")
    p.add_argument("u", type=Path)
    p.add_argument("v", type=Path)
    p.add_argument("protocol_out", type=Path, nargs="?")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", parents=[common], help="sample a protocol against a true box")
    p.add_argument("protocol", type=Path)
    p.add_argument("truth", type=Path)
    p.add_argument("--shots", type=int, default=100)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="numerical property checks")
    vsub = p.add_subparsers(dest="check", required=True)
    q = vsub.add_parser("subadd", parents=[common])
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--d", type=int, default=3)
    q.add_argument("--counterexample", type=Path, default=Path("counterexample.json"))
    q.set_defaults(func=cmd_verify_subadd)
    q = vsub.add_parser("optimality", parents=[common])
    q.add_argument("--u", type=Path)
    q.add_argument("--v", type=Path)
    q.add_argument("--k", type=int)
    q.add_argument("--restarts", type=int, default=50)
    q.add_argument("--iterations", type=int, default=40)
    q.add_argument("--samples", type=int, default=10_000)
    q.add_argument("--instances", type=int, default=1)
    q.add_argument("--d", type=int, default=2)
    q.add_argument("--counterexample", type=Path, default=Path("counterexample.json"))
    q.set_defaults(func=cmd_verify_optimality)
    q = vsub.add_parser("criterion", parents=[common])
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--adversarial", type=int, default=100)
    q.add_argument("--counterexample", type=Path, default=Path("counterexample.json"))
    q.set_defaults(func=cmd_verify_criterion)

    p = sub.add_parser("pauli", parents=[common], help="two-run identification of generalized Pauli operators")
    p.add_argument("d", type=int)
    p.add_argument("--truth", type=int, nargs=2, metavar=("M", "N"))
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_pauli)

    p = sub.add_parser("eliminate", parents=[common], help="n-candidate elimination tournament")
    p.add_argument("candidates", type=Path, help="directory of matrix JSON files")
    p.add_argument("truth_index", type=int)
    p.set_defaults(func=cmd_eliminate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = Context(args)
        args.func(args, ctx)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotUnitary as exc:
        print(f"error: {exc} (defect = {exc.defect:.9e})", file=sys.stderr)
        return EXIT_NOT_UNITARY
    except NotDifferent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DIFFERENT
    except OrthogonalityFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORTHOGONALITY
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except PropertyViolation as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except DiscriminationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
