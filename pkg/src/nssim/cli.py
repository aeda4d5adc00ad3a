"""Command-line entry point: ``nssim <command> ...``.

Exit status is 0 on success, 1 for malformed input and 2 when a computed
result violates a physical invariant.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import algebra, channels, code, experiments, nmr, tomography
from .qmat import operator_to_dict

EXIT_BAD_INPUT = 1
EXIT_INVARIANT = 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_algebra(args) -> int:
    if args.action == "dump":
        span = algebra.named_span(args.which)
        print(json.dumps({"name": args.which, "dim": span.dim, "basis": [operator_to_dict(b) for b in span.basis]}))
        return 0
    print("model,dim,commutant_dim")
    for model in algebra.ErrorModel:
        span = algebra.error_model_span(model)
        print(f"{model.value},{span.dim},{algebra.commutant(span).dim}")
    for name in ("ac", "ax", "ay", "az"):
        span = algebra.named_span(name)
        print(f"{name},{span.dim},{algebra.commutant(span).dim}")
    return 0


def cmd_channel(args) -> int:
    if args.action == "weak":
        ch = channels.weak_collective_dephasing(args.rate, args.time, args.axis).check()
        out = {
            "name": f"weak-{args.axis}",
            "m": list(channels.COLLECTIVE_M),
            "damping_factors": channels.damping_factors(args.rate, args.time).tolist(),
            "kraus": [operator_to_dict(k) for k in ch.kraus],
        }
    else:
        ch = channels.named_channel(args.name).check()
        out = {"name": args.name, "kraus": [operator_to_dict(k) for k in ch.kraus]}
    print(json.dumps(out))
    return 0


def cmd_code(args) -> int:
    summary = code.verify_summary()
    summary["heisenberg_literature_match"] = summary["jh_deviation"] < 1e-10
    ok = (
        summary["qec_residual_Ac"] < 1e-10
        and summary["leakage_max"] < 1e-10
        and summary["pauli_algebra_residual"] < 1e-10
        and summary["jh_deviation_derived"] < 1e-10
    )
    summary["ok"] = ok
    print(json.dumps(summary, indent=2))
    return 0 if ok else EXIT_INVARIANT


def cmd_tomo(args) -> int:
    res = experiments.run(experiments.ExperimentSpec.from_label(args.channel))
    lines = ["input,I,x,y,z"]
    for name, row in zip(("I", "x", "y", "z"), res.ptm):
        lines.append(",".join([name, *(f"{v:.6f}" for v in row)]))
    print("\n".join(lines))
    print()
    report = {"label": res.label, **res.report.to_dict()}
    reported = experiments.reported_ptms().get(args.channel)
    if reported is not None:
        report["reported_ptm"] = reported.tolist()
        report["reported_trace_over_4"] = tomography.entanglement_fidelity_ptm(reported)
    print(json.dumps(report, indent=2))
    return 0


def cmd_noop(args) -> int:
    sched = nmr.PulseSchedule.load(args.schedule) if args.schedule else nmr.reference_noop_schedule()
    h = nmr.InternalHamiltonian()
    if args.j13_zero:
        h = h.with_couplings(j13=0.0)
    u = nmr.schedule_propagator(sched, h)
    print(json.dumps({"duration": sched.duration, "distance_to_identity": nmr.distance_to_identity(u)}))
    return 0


def _load_specs(path: str) -> list[experiments.ExperimentSpec]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data.get("experiments", [data])
    return [experiments.ExperimentSpec.from_dict(d) for d in data]


def cmd_run(args) -> int:
    results = experiments.run_many(_load_specs(args.spec))
    buf = io.StringIO()
    experiments.write_csv([r.row() for r in results], buf)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_table(args) -> int:
    buf = io.StringIO()
    experiments.write_csv(experiments.strong_noise_table(), buf)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_sweep(args) -> int:
    grid = np.linspace(0.0, args.max, args.points)
    pts = experiments.weak_noise_sweep(args.axis, grid, args.tau)
    for p in pts:
        if not (p.fe_unencoded <= 1 + 1e-9 and p.fe_encoded <= 1 + 1e-9):
            raise experiments.InvariantViolation(f"fidelity above 1 at t/tau = {p.t_over_tau}")
    buf = io.StringIO()
    experiments.write_csv([p.row() for p in pts], buf)
    _emit(buf.getvalue(), args.out)
    if args.points >= 3:
        for name in ("fe_unencoded", "fe_encoded"):
            fit = experiments.fit_exponential([(p.t_over_tau, getattr(p, name)) for p in pts])
            print(f"{name}: A={fit.A:.6g} B={fit.B:.6g} tau={fit.tau}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nssim", description="Three-qubit noiseless-subsystem simulator")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", help="error-model dimension table, or dump a span basis")
    a_sub = a.add_subparsers(dest="action")
    d = a_sub.add_parser("dump")
    d.add_argument("--which", required=True, help="ac, ax, ay, az, <name>_commutant or an error-model name")
    a.set_defaults(func=cmd_algebra, action=None)

    c = sub.add_parser("channel", help="dump Kraus operators")
    c_sub = c.add_subparsers(dest="action", required=True)
    cd = c_sub.add_parser("dump")
    cd.add_argument("--name", required=True, help="e0, ex, ezx, eyzx, ...")
    cw = c_sub.add_parser("weak")
    cw.add_argument("--rate", type=float, required=True, help="1/tau")
    cw.add_argument("--time", type=float, required=True)
    cw.add_argument("--axis", default="z", choices=algebra.AXES)
    c.set_defaults(func=cmd_channel)

    k = sub.add_parser("code", help="verify the code construction")
    k.add_argument("action", choices=["verify"])
    k.set_defaults(func=cmd_code)

    t = sub.add_parser("tomo", help="PTM and fidelity report for a labelled channel")
    t.add_argument("--channel", required=True, help="e.g. x-un, zx-un, yzx-ns, 0-ns")
    t.set_defaults(func=cmd_tomo)

    n = sub.add_parser("noop", help="distance to identity of a refocusing schedule")
    n.add_argument("--schedule", help="schedule JSON; default is the built-in reference")
    n.add_argument("--j13-zero", action="store_true", help="drop the J13 coupling")
    n.set_defaults(func=cmd_noop)

    r = sub.add_parser("run", help="run experiments from a JSON spec")
    r.add_argument("--spec", required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    tb = sub.add_parser("table", help="strong-noise table: ideal values next to reported ones")
    tb.add_argument("--out")
    tb.set_defaults(func=cmd_table)

    s = sub.add_parser("sweep", help="weak-noise decay curve over t/tau")
    s.add_argument("--axis", default="y", choices=algebra.AXES)
    s.add_argument("--points", type=int, default=12)
    s.add_argument("--tau", type=float, default=1.0)
    s.add_argument("--max", type=float, default=5.0, help="largest t/tau")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except experiments.InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except tomography.NotCompletelyPositiveError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
