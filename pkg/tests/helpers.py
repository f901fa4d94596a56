"""Shared test utilities: random circuit generation and common fixtures."""

import numpy as np

from qmcforge import parse_circuit

SINGLE = ("I", "X", "Y", "Z", "H", "S", "T")
DOUBLE = ("CNOT", "CZ", "SWAP")
PARAM = ("RX", "RY", "RZ", "PHASE")


def random_circuit_text(rng, max_wires=4, max_gates=6):
    """Build a random well-formed circuit as source text.

    Wire count, gate list, and the measured subset are all drawn from the
    generator, so a seeded rng makes the circuit reproducible.
    """
    k = int(rng.integers(1, max_wires + 1))
    n_gates = int(rng.integers(1, max_gates + 1))
    lines = [f"qubits {k}"]
    for _ in range(n_gates):
        choice = rng.random()
        if k >= 3 and choice < 0.1:
            wires = rng.choice(k, size=3, replace=False) + 1
            lines.append(f"gate CCNOT {wires[0]} {wires[1]} {wires[2]}")
        elif k >= 2 and choice < 0.45:
            name = DOUBLE[int(rng.integers(len(DOUBLE)))]
            wires = rng.choice(k, size=2, replace=False) + 1
            lines.append(f"gate {name} {wires[0]} {wires[1]}")
        elif choice < 0.75:
            name = SINGLE[int(rng.integers(len(SINGLE)))]
            lines.append(f"gate {name} {int(rng.integers(1, k + 1))}")
        else:
            name = PARAM[int(rng.integers(len(PARAM)))]
            angle = float(rng.uniform(-np.pi, np.pi))
            lines.append(f"gate {name}({angle:.6f}) {int(rng.integers(1, k + 1))}")
    n_measured = int(rng.integers(0, k + 1))
    if n_measured:
        measured = sorted(rng.choice(k, size=n_measured, replace=False) + 1)
        lines.extend(f"measure {w}" for w in measured)
    return "\n".join(lines) + "\n"


def random_circuit(rng, max_wires=4, max_gates=6):
    return parse_circuit(random_circuit_text(rng, max_wires, max_gates))


def basis_state(k, index):
    v = np.zeros(2 ** k, dtype=np.complex128)
    v[index] = 1.0
    return v
