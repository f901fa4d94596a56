"""Command-line front end: validate, compile, simulate, verify, bench.

Exit codes: 0 success, 1 verification failure, 2 bad input (unreadable file,
syntax error, invalid circuit, malformed model).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .circuit import Circuit
from .config import DEFAULT_TOL
from .emit import emit_qpmc, reparse_model
from .errors import QmcForgeError, SizeOutOfRange
from .evaluate import check_equivalence, random_kets, run_qmc
from .normalize import translate
from .parser import parse_circuit
from .qmc import build_qmc, verify_row_stochasticity

__all__ = ["main", "RunConfig", "gen_test_circuit"]

log = logging.getLogger("qmcforge")

STRATEGIES = ("composed", "direct", "naive-adjacent")


@dataclass(frozen=True)
class RunConfig:
    """Resolved options shared by the subcommands."""

    strategy: str = "composed"
    emit_swaps_as_gates: bool = False
    tol: float = DEFAULT_TOL.pipeline
    seed: int = 0
    fmt: str = "text"
    output: str | None = None


def gen_test_circuit(size: int) -> Circuit:
    """Deterministic stress circuit on ``size`` wires for benchmarking.

    A cycle of CNOTs: wire order follows a stride that is coprime to the
    register size, and each gate lists its wires high-to-low, so consecutive
    gates always share a wire and every gate needs a nontrivial rearrangement.
    No measurements.
    """
    if not 3 <= size <= 12:
        raise SizeOutOfRange(f"test circuit size must be in 3..12, got {size}")
    stride = max(s for s in range(1, size // 2 + 1) if math.gcd(s, size) == 1)
    walk = [(i * stride) % size + 1 for i in range(size + 1)]
    lines = [f"qubits {size}"]
    for i in range(size):
        lines.append(f"gate CNOT {walk[i + 1]} {walk[i]}")
    return parse_circuit("\n".join(lines))


def _read_circuit(path: str) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def _write_or_print(text: str, output: str | None) -> None:
    if output and output != "-":
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _load_ket(args, k: int) -> np.ndarray:
    dim = 2 ** k
    if args.state_file:
        with open(args.state_file, "r", encoding="utf-8") as fh:
            pairs = json.load(fh)
        v = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
        if v.shape != (dim,):
            raise QmcForgeError(
                f"state file holds {v.shape[0]} amplitudes, need {dim}")
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-9:
            raise QmcForgeError(f"state file norm is {n:.6f}, expected 1")
        return v
    bits = args.input or "0" * k
    if len(bits) != k or any(b not in "01" for b in bits):
        raise QmcForgeError(f"--input wants {k} bits, got {bits!r}")
    v = np.zeros(dim, dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def _compile(path: str, cfg: RunConfig):
    c = _read_circuit(path)
    s, account = translate(c, strategy=cfg.strategy,
                           emit_swaps_as_gates=cfg.emit_swaps_as_gates)
    q = build_qmc(s)
    violations = verify_row_stochasticity(q)
    if violations:
        worst = max(v.deviation for v in violations)
        raise QmcForgeError(
            f"compiled chain is not row-stochastic ({len(violations)} states, "
            f"worst deviation {worst:.3e})")
    return c, s, account, q


def cmd_validate(args, cfg: RunConfig) -> int:
    c = _read_circuit(args.circuit)
    info = {"valid": True, "qubits": c.k,
            "nodes": len(c.nodes), "edges": len(c.edges)}
    if cfg.fmt == "json":
        _write_or_print(json.dumps(info, indent=2) + "\n", cfg.output)
    else:
        _write_or_print(
            f"ok: {c.k} qubits, {len(c.nodes)} nodes, {len(c.edges)} edges\n",
            cfg.output)
    return 0


def cmd_compile(args, cfg: RunConfig) -> int:
    _, s, account, q = _compile(args.circuit, cfg)
    text = emit_qpmc(q, name=args.name)
    if cfg.fmt == "json":
        payload = {
            "qubits": s.k, "steps": s.n, "measured": s.h,
            "swap_account": {"per_gate": list(account.per_gate),
                             "total": account.total,
                             "strategy": account.strategy},
            "model": text,
        }
        _write_or_print(json.dumps(payload, indent=2) + "\n", cfg.output)
    else:
        _write_or_print(text, cfg.output)
    log.info("compiled %s: %d wires, %d steps, %d outcomes, %d swaps (%s)",
             args.circuit, s.k, s.n, 2 ** s.h, account.total, account.strategy)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    c, s, _, q = _compile(args.circuit, cfg)
    tau = _load_ket(args, s.k)
    report = run_qmc(q, np.outer(tau, tau.conj()), tol=cfg.tol)
    if cfg.fmt == "json":
        payload = {
            "qubits": s.k, "measured": s.h,
            "outcomes": [{"bits": o.bits, "probability": o.probability}
                         for o in report.outcomes],
        }
        _write_or_print(json.dumps(payload, indent=2) + "\n", cfg.output)
        return 0
    lines = [f"outcome probabilities ({s.h} measured of {s.k} wires):"]
    for o in report.outcomes:
        shown = round(o.probability, 10) + 0.0  # drop the sign of a rounded-away -0
        lines.append(f"  {o.bits or '(none)'}  {shown:.10f}")
    _write_or_print("\n".join(lines) + "\n", cfg.output)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    c, s, _, q = _compile(args.circuit, cfg)
    if args.against:
        with open(args.against, "r", encoding="utf-8") as fh:
            q = reparse_model(fh.read())
    dim = 2 ** s.k
    inputs = [np.eye(dim, dtype=np.complex128)[:, i] for i in range(dim)]
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        inputs += random_kets(s.k, args.random, rng)
    rep = check_equivalence(c, s, q, inputs, tol=cfg.tol)
    if cfg.fmt == "json":
        payload = {"passed": rep.passed, "inputs": len(inputs),
                   "deviations": {"state": rep.state, "chain": rep.chain,
                                  "probability": rep.prob,
                                  "support": rep.support},
                   "failures": list(rep.failures)}
        _write_or_print(json.dumps(payload, indent=2) + "\n", cfg.output)
    else:
        lines = [f"checked {len(inputs)} input states",
                 f"  state deviation       {rep.state:.3e}",
                 f"  chain deviation       {rep.chain:.3e}",
                 f"  probability deviation {rep.prob:.3e}",
                 f"  support leakage       {rep.support:.3e}",
                 "PASS" if rep.passed else "FAIL"]
        lines.extend(f"  {f}" for f in rep.failures)
        _write_or_print("\n".join(lines) + "\n", cfg.output)
    return 0 if rep.passed else 1


def _parse_sizes(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p]


def cmd_bench(args, cfg: RunConfig) -> int:
    sizes = _parse_sizes(args.sizes)
    rows = []
    for size in sizes:
        c = gen_test_circuit(size)

        def pipeline():
            s, account = translate(c, strategy=cfg.strategy,
                                   emit_swaps_as_gates=cfg.emit_swaps_as_gates)
            emit_qpmc(build_qmc(s))
            return account

        account = pipeline()  # warmup, excluded from timing
        times = []
        for _ in range(args.runs):
            t0 = time.perf_counter()
            pipeline()
            times.append(time.perf_counter() - t0)
        rows.append({"size": size, "mean_s": float(np.mean(times)),
                     "stddev_s": float(np.std(times)),
                     "runs": args.runs, "swaps": account.total,
                     "strategy": account.strategy})
        log.info("bench size %d: %.4fs mean", size, rows[-1]["mean_s"])

    header = f"{'size':>4}  {'mean (s)':>10}  {'stddev (s)':>10}  {'swaps':>6}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r['size']:>4}  {r['mean_s']:>10.4f}  "
                     f"{r['stddev_s']:>10.4f}  {r['swaps']:>6}")
    print("\n".join(lines))

    report = {"format": "qmcforge-bench/1", "strategy": cfg.strategy,
              "emit_swaps_as_gates": cfg.emit_swaps_as_gates, "results": rows}
    out = cfg.output or "qmcforge-bench.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"report written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmcforge",
        description="Compile quantum circuits into superoperator-weighted "
                    "Markov chains and check the two semantics against "
                    "each other.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--strategy", choices=STRATEGIES, default="composed",
                        help="swap synthesis strategy (default: composed)")
        sp.add_argument("--emit-swaps-as-gates", action="store_true",
                        help="keep rearrangements as standalone chain steps")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL.pipeline,
                        help="numerical tolerance for end-to-end checks")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for randomized inputs")
        sp.add_argument("--format", choices=("text", "json"), default="text",
                        dest="fmt", help="stdout format")
        sp.add_argument("--output", help="write result to this file instead "
                                         "of stdout ('-' forces stdout)")

    sp = sub.add_parser("validate", help="parse a circuit file and check the "
                                         "structural rules")
    sp.add_argument("circuit")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("compile", help="translate a circuit into a chain "
                                        "model and print it")
    sp.add_argument("circuit")
    sp.add_argument("--name", default="model", help="module name in the output")
    common(sp)
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("simulate", help="run the compiled chain on an input "
                                         "state and print outcome probabilities")
    sp.add_argument("circuit")
    sp.add_argument("--input", help="basis-state bits, wire 1 first (default all zeros)")
    sp.add_argument("--state-file", help="JSON list of [re, im] amplitude pairs")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="check circuit semantics against the "
                                       "compiled chain on a battery of inputs")
    sp.add_argument("circuit")
    sp.add_argument("--against", help="reparse this model file instead of the "
                                      "freshly compiled chain")
    sp.add_argument("--random", type=int, default=0, metavar="N",
                    help="add N random unit kets to the basis-state battery")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="time the pipeline on generated circuits")
    sp.add_argument("--sizes", default="3..8",
                    help="'A..B' range or comma list (default 3..8)")
    sp.add_argument("--runs", type=int, default=5,
                    help="timed runs per size after one warmup (default 5)")
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    level = os.environ.get("QMCFORGE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = RunConfig(strategy=args.strategy,
                    emit_swaps_as_gates=args.emit_swaps_as_gates,
                    tol=args.tol, seed=args.seed, fmt=args.fmt,
                    output=args.output)
    try:
        return args.func(args, cfg)
    except (QmcForgeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
