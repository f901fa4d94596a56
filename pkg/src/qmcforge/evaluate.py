"""Dual semantics: state-vector circuit runs vs density-matrix chain runs.

The circuit side walks the DAG directly, applying each gate to its wires by
tensor contraction; it never touches the normalizer's padded matrices, so it
serves as an independent oracle for the compiled chain. The chain side
propagates a density matrix through the superoperators. ``check_equivalence``
compares the two along every clause that the translation promises to
preserve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import MEASURE, UNITARY, Circuit, topo_order, validate, wire_positions
from .config import DEFAULT_TOL
from .errors import (BadInitialState, BitLengthMismatch, DimensionMismatch,
                     ValidationFailed)
from .linalg import generalized_swap
from .normalize import SnfCircuit
from .qmc import Qmc

__all__ = ["EvalReport", "OutcomeRecord", "EquivalenceReport",
           "simulate_circuit", "outcome_probability", "run_qmc",
           "check_equivalence", "global_phase_distance", "random_kets",
           "measured_wires"]


def _as_ket(psi, k: int) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape != (2 ** k,):
        raise DimensionMismatch(f"ket has {v.shape[0]} amplitudes, register needs {2 ** k}")
    return v


def _apply_gate(state: np.ndarray, u: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    d = len(axes)
    g = u.reshape((2,) * (2 * d))
    state = np.tensordot(g, state, axes=(tuple(range(d, 2 * d)), axes))
    return np.moveaxis(state, tuple(range(d)), axes)


def measured_wires(c: Circuit) -> tuple[int, ...]:
    """Wire positions that end in a measurement node, ascending."""
    positions = wire_positions(c)
    return tuple(sorted(positions[m][0] for m in c.nodes_of_kind(MEASURE)))


def simulate_circuit(c: Circuit, psi) -> np.ndarray:
    """Run the circuit on a ket, returning the register state just before
    the measure/terminate sinks (wire 1 is the most significant bit).
    """
    problems = validate(c)
    if problems:
        raise ValidationFailed(problems)
    v = _as_ket(psi, c.k)
    positions = wire_positions(c)
    state = v.reshape((2,) * c.k)
    for nid in topo_order(c):
        node = c.nodes[nid]
        if node.kind != UNITARY:
            continue
        axes = tuple(p - 1 for p in positions[nid])
        state = _apply_gate(state, node.matrix, axes)
    return state.reshape(-1)


def _normalize_bits(bits, h: int) -> tuple[int, ...]:
    if isinstance(bits, str):
        values = tuple(int(b) for b in bits)
    else:
        values = tuple(int(b) for b in bits)
    if len(values) != h or any(b not in (0, 1) for b in values):
        raise BitLengthMismatch(f"expected {h} outcome bits, got {bits!r}")
    return values


def outcome_probability(c: Circuit, psi, bits) -> float:
    """Born-rule probability of reading ``bits`` off the measured wires.

    Bit j belongs to the j-th measured wire in ascending wire order.
    """
    wires = measured_wires(c)
    values = _normalize_bits(bits, len(wires))
    final = simulate_circuit(c, psi)
    probs = np.abs(final.reshape((2,) * c.k)) ** 2
    for wire, bit in sorted(zip(wires, values), reverse=True):
        probs = np.take(probs, bit, axis=wire - 1)
    return float(np.sum(probs))


@dataclass(frozen=True)
class OutcomeRecord:
    """One measurement branch: its outcome bits, the unnormalized
    post-measurement density matrix, and the probability (its trace)."""

    index: int
    bits: str
    probability: float
    density: np.ndarray


@dataclass(frozen=True)
class EvalReport:
    """Everything a chain run produces."""

    outcomes: tuple[OutcomeRecord, ...]
    accumulated: np.ndarray
    densities: tuple[np.ndarray, ...]

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(o.probability for o in self.outcomes)


def run_qmc(q: Qmc, rho0: np.ndarray,
            tol: float = DEFAULT_TOL.pipeline) -> EvalReport:
    """Propagate a density matrix through the chain.

    Returns per-outcome terminal records, the accumulated product of the
    internal unitaries (last step leftmost), and the density after every
    internal state.
    """
    dim = 2 ** q.k
    rho = np.asarray(rho0, dtype=np.complex128)
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"density {rho.shape}, register needs {dim}x{dim}")
    if np.max(np.abs(rho - rho.conj().T)) > tol or abs(np.trace(rho) - 1.0) > tol:
        raise BadInitialState("initial state is not a unit-trace Hermitian matrix")

    internal = q.internal_states()
    densities = [rho]
    accumulated = np.eye(dim, dtype=np.complex128)
    for i in range(len(internal) - 1):
        so = q.transitions[(internal[i], internal[i + 1])]
        rho = so.apply(rho)
        densities.append(rho)
        if len(so.kraus) == 1:
            accumulated = so.kraus[0] @ accumulated

    outcomes = []
    for i, t in enumerate(q.terminal_states()):
        so = q.transitions[(internal[-1], t)]
        post = so.apply(rho)
        bits = format(i, f"0{q.h}b") if q.h else ""
        outcomes.append(OutcomeRecord(index=i, bits=bits,
                                      probability=float(np.trace(post).real) + 0.0,
                                      density=post))
    return EvalReport(outcomes=tuple(outcomes), accumulated=accumulated,
                      densities=tuple(densities))


def global_phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over theta of the 2-norm distance between a and e^{i theta} b.

    The minimizing phase aligns b with a; subtracting the aligned vectors
    directly stays accurate when the two states agree to machine precision,
    where the closed-form norm expression loses half its digits.
    """
    va, vb = np.asarray(a).reshape(-1), np.asarray(b).reshape(-1)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"cannot compare shapes {va.shape} and {vb.shape}")
    overlap = np.vdot(vb, va)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.linalg.norm(va - phase * vb))


def random_kets(k: int, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Haar-ish random unit kets: normalized complex Gaussians."""
    dim = 2 ** k
    out = []
    for _ in range(count):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        out.append(v / np.linalg.norm(v))
    return out


@dataclass(frozen=True)
class EquivalenceReport:
    """Worst-case deviations per clause over all checked inputs.

    ``state``   final state-vector vs chain product (global phase ignored);
    ``chain``   rank-1 preservation along the internal chain;
    ``prob``    Born-rule vs terminal-trace probabilities;
    ``support`` post-measurement mass outside the outcome's block.
    """

    passed: bool
    state: float
    chain: float
    prob: float
    support: float
    failures: tuple[str, ...]


def check_equivalence(c: Circuit, s: SnfCircuit, q: Qmc, inputs=None,
                      tol: float = DEFAULT_TOL.pipeline,
                      support_tol: float = DEFAULT_TOL.algebraic) -> EquivalenceReport:
    """Compare circuit semantics against the compiled chain, clause by clause.

    Args:
        c: source circuit (the independent oracle side).
        s: its strong normal form (for the recorded wire reordering).
        q: the chain under test; may come from reparse_model.
        inputs: kets to try; defaults to every computational basis state.

    Only rank-1 inputs make the clause-1 comparison meaningful, so inputs
    are kets, not densities.
    """
    k, h = s.k, s.h
    dim = 2 ** k
    if inputs is None:
        inputs = [np.eye(dim, dtype=np.complex128)[:, i] for i in range(dim)]

    reorder, _ = generalized_swap(s.wire_map, "direct")
    worst = {"state": 0.0, "chain": 0.0, "prob": 0.0, "support": 0.0}
    failures: list[str] = []

    block = dim // (2 ** h)
    for idx, psi in enumerate(inputs):
        tau = _as_ket(psi, k)
        final_dag = simulate_circuit(c, tau)
        report = run_qmc(q, np.outer(tau, tau.conj()), tol=tol)

        # clause: product form agrees with the DAG walk after reordering
        product_state = report.accumulated @ tau
        dev = global_phase_distance(reorder @ final_dag, product_state)
        worst["state"] = max(worst["state"], dev)
        if dev > tol:
            failures.append(f"state clause: input {idx} deviates by {dev:.3e}")

        # clause: the chain preserves rank-1 states step by step
        vec = tau.copy()
        for step, rho in enumerate(report.densities[1:], start=1):
            so = q.transitions[(f"s{step}", f"s{step + 1}")]
            if len(so.kraus) == 1:
                vec = so.kraus[0] @ vec
            cdev = float(np.max(np.abs(rho - np.outer(vec, vec.conj()))))
            worst["chain"] = max(worst["chain"], cdev)
            if cdev > tol:
                failures.append(
                    f"chain clause: input {idx} step {step} deviates by {cdev:.3e}")
                break

        # clause: Born probabilities match terminal traces; mass stays in block
        for rec in report.outcomes:
            p_circuit = outcome_probability(c, tau, rec.bits)
            pdev = abs(p_circuit - rec.probability)
            worst["prob"] = max(worst["prob"], pdev)
            if pdev > tol:
                failures.append(
                    f"probability clause: input {idx} outcome {rec.bits or '-'} "
                    f"deviates by {pdev:.3e}")
            mask = np.ones((dim, dim), dtype=bool)
            lo, hi = rec.index * block, (rec.index + 1) * block
            mask[lo:hi, lo:hi] = False
            sdev = float(np.max(np.abs(rec.density[mask]))) if mask.any() else 0.0
            worst["support"] = max(worst["support"], sdev)
            if sdev > support_tol:
                failures.append(
                    f"support clause: input {idx} outcome {rec.bits or '-'} "
                    f"leaks {sdev:.3e} outside its block")

    return EquivalenceReport(passed=not failures, state=worst["state"],
                             chain=worst["chain"], prob=worst["prob"],
                             support=worst["support"], failures=tuple(failures))
