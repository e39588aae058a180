"""Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input error,
3 size cap / feasibility / I/O error, 4 restart cap exhausted.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .amplify import Sampler, build_branches, evolve, probability_trace
from .config import AlgorithmConfig
from .dense import conditioned_run, dense_trace, layout_for, run_full_circuit
from .errors import CapacityError, GraphError, NoAmplifiableBranchError, RestartLimitError
from .graph import ENUMERATION_CAP, brute_force_bisection, read_graph

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP, EXIT_RESTART = 0, 1, 2, 3, 4
VERIFY_QUBIT_CAP = 16
VERIFY_TOL = 1e-9


class UsageError(Exception):
    pass


def _mu(value: str):
    if value == "auto":
        return "auto"
    try:
        mu = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("must be 'auto' or a non-negative integer") from None
    if mu < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return mu


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbisect", description=__doc__.splitlines()[0])
    p.add_argument("--input", required=True, help="graph file (edge-list format)")
    p.add_argument("--mode", choices=("max", "min"), default="max")
    p.add_argument("--kind", choices=("trace", "sample", "oracle", "verify"), default="trace")
    p.add_argument("--backend", choices=("structured", "dense"), default="structured")
    p.add_argument("--mu", type=_mu, default=0, help="dummy constraint qubits: 'auto' or an integer")
    p.add_argument("--delta", type=float, default=0.9, help="target first-round Pr(ax2=1) for --mu auto")
    p.add_argument("--lambda", dest="lam", type=float, default=4.0, help="precision exponent, eps = 10^-lambda")
    p.add_argument("--phi", type=float, default=AlgorithmConfig.phi)
    p.add_argument("--iterations", type=int, default=None, help="fix the number of Q rounds")
    p.add_argument("--restart-cap", type=int, default=10_000)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace-out", help="write per-round trace CSV here")
    p.add_argument("--dist-out", help="write per-round distance-class masses CSV here")
    p.add_argument("--json-out", help="write the JSON result here")
    p.add_argument("--dump-graph", action="store_true", help="print the parsed graph and continue")
    return p


def _oracle(g, mode):
    if g.n > ENUMERATION_CAP:
        return None
    res = brute_force_bisection(g, mode)
    return {"value": res.optimal_value, "assignment": str(res.assignment)}


def _trace_summary(pr_ax2) -> dict:
    if len(pr_ax2) == 0:
        return {"first_pr_ax2": None, "final_pr_ax2": None, "iterations": 0}
    return {"first_pr_ax2": float(pr_ax2[0]), "final_pr_ax2": float(pr_ax2[-1]), "iterations": len(pr_ax2)}


def _is_better(mode, cut, best):
    return best is None or (cut > best if mode == "max" else cut < best)


def run(args) -> tuple[int, dict, list[str]]:
    """Execute one CLI invocation; returns ``(exit_code, json_result, summary_lines)``."""
    try:
        g = read_graph(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from None
    if args.dump_graph:
        sys.stdout.write(g.to_text())
    cfg = AlgorithmConfig(
        mode=args.mode,
        mu=args.mu,
        delta=args.delta,
        lam=args.lam,
        phi=args.phi,
        iterations=args.iterations,
        restart_cap=args.restart_cap,
    )
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    mu = cfg.resolve_mu(g.n)
    oracle = _oracle(g, cfg.mode)
    out = {
        "config": {
            "input": args.input,
            "kind": args.kind,
            "backend": args.backend,
            **cfg.to_dict(),
            "mu_resolved": mu,
            "trials": args.trials,
        },
        "graph": {"n": g.n, "m": g.m},
        "oracle": oracle,
        "result": None,
        "trace": None,
        "restarts": {"stage1": 0, "stage3": 0},
        "seed": args.seed,
    }
    lines = [f"graph: n={g.n} m={g.m}  mode={cfg.mode}  mu={mu}  m_ext={g.m + mu}"]
    if oracle is not None:
        lines.append(f"oracle optimum: {oracle['value']} at {oracle['assignment']}")
    code = EXIT_OK

    if args.kind == "oracle":
        if oracle is None:
            raise CapacityError(f"n = {g.n} exceeds the enumeration cap of {ENUMERATION_CAP}")
        out["result"] = {"assignment": oracle["assignment"], "cut": oracle["value"], "match": True}

    elif args.kind == "trace":
        if args.backend == "dense":
            pr_ax2, pr_target = dense_trace(g, cfg)
            io_trace = (pr_ax2, pr_target)
            trace = None
        else:
            trace = probability_trace(g, cfg)
            pr_ax2, pr_target = trace.pr_ax2, trace.pr_target
            io_trace = trace
            lines.append(f"limit sin^2(d_s pi / 2 m_ext) = {trace.limit:.4f}  converged={trace.converged}")
        out["trace"] = _trace_summary(pr_ax2)
        if args.trace_out:
            io.emit_trace_csv(io_trace, args.trace_out)
        if args.dist_out and trace is not None:
            io.emit_distribution_csv(trace, args.dist_out)
        lines.append(
            f"Pr(ax2=1): first {pr_ax2[0]:.4f}, final {pr_ax2[-1]:.4f} after {len(pr_ax2)} rounds; "
            f"Pr(target) final {pr_target[-1]:.4f}"
        )

    elif args.kind == "sample":
        best = None
        hits = 0
        stage1 = stage3 = 0
        pr_ax2 = []
        sampler = Sampler(g, cfg) if args.backend == "structured" else None
        if sampler is not None:
            pr_ax2 = sampler.trace.pr_ax2[: sampler.rounds]
            if args.trace_out:
                io.emit_trace_csv((pr_ax2, sampler.trace.pr_target[: sampler.rounds]), args.trace_out)
            if args.dist_out:
                io.emit_distribution_csv(sampler.trace, args.dist_out)
        for t in range(args.trials):
            rng = np.random.default_rng(args.seed + t)
            if sampler is not None:
                res = sampler.run(rng)
                x, cut, s1, s3 = res.assignment, res.cut, res.stage1_restarts, res.stage3_restarts
            else:
                x, z, diag = run_full_circuit(g, cfg, rng)
                cut, s1, s3 = z.ones, diag.stage1_restarts, diag.stage3_restarts
                pr_ax2 = diag.pr_ax2
            stage1 += s1
            stage3 += s3
            if oracle is not None and cut == oracle["value"]:
                hits += 1
            if _is_better(cfg.mode, cut, None if best is None else best[1]):
                best = (x, cut)
        x, cut = best
        match = oracle is not None and cut == oracle["value"]
        out["result"] = {"assignment": str(x), "cut": cut, "match": match}
        out["trace"] = _trace_summary(pr_ax2)
        out["restarts"] = {"stage1": stage1, "stage3": stage3}
        out["trials"] = {"count": args.trials, "optimal_hits": hits, "frequency": hits / args.trials}
        lines.append(f"best cut {cut} at {x} (match={match}); optimal in {hits}/{args.trials} trials")
        lines.append(f"restarts: preparation {stage1}, amplification {stage3}")

    elif args.kind == "verify":
        layout = layout_for(g, cfg)
        if layout.total_qubits > VERIFY_QUBIT_CAP:
            raise CapacityError(f"verify needs n + m_ext + 2 <= {VERIFY_QUBIT_CAP}, got {layout.total_qubits}")
        trace = probability_trace(g, cfg)
        rounds = cfg.iterations or trace.iterations
        structured, probs = evolve(build_branches(g, cfg), rounds)
        dense = conditioned_run(g, cfg, rounds)
        p, q = structured.joint_distribution(), dense.joint_distribution()
        tv = 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in set(p) | set(q))
        dp = max((abs(a - b) for a, b in zip(probs, dense.pr_ax2)), default=0.0)
        agree = tv <= VERIFY_TOL and dp <= VERIFY_TOL
        out["trace"] = _trace_summary(probs)
        out["verify"] = {"rounds": rounds, "total_variation": tv, "max_pr_ax2_diff": dp, "agree": agree}
        lines.append(f"verify over {rounds} rounds: TV = {tv:.3e}, max |dPr(ax2)| = {dp:.3e}, agree={agree}")
        code = EXIT_OK if agree else EXIT_MISMATCH

    if args.json_out:
        io.emit_result_json(out, args.json_out)
    return code, out, lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        code, _, lines = run(args)
    except (CapacityError, NoAmplifiableBranchError, OSError) as exc:
        print(f"qbisect: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GraphError, UsageError, ValueError) as exc:
        print(f"qbisect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RestartLimitError as exc:
        probs = ", ".join(f"{p:.4f}" for p in exc.pr_ax2[:10])
        print(f"qbisect: error: {exc}; per-round Pr(ax2=1): {probs}", file=sys.stderr)
        return EXIT_RESTART
    for line in lines:
        print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
