"""Dense complex linear algebra for register-sized operators.

Conventions
-----------
All matrices are numpy ``complex128`` arrays. A k-wire register lives in a
2^k dimensional space where wire 1 is the most significant tensor factor:
the basis ket |b1 b2 ... bk> sits at row index ``int("b1b2...bk", 2)``.
Kets are 1-D arrays under the same indexing.

Permutations of wires are given as 1-based maps ``perm`` with ``perm[i-1]``
the destination position of wire i.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL
from .errors import DimensionMismatch, NonSquare, NotAPermutation, WireOutOfRange

__all__ = [
    "tensor",
    "dagger",
    "trace",
    "matmul",
    "apply_superop",
    "is_unitary",
    "is_hermitian",
    "is_density",
    "binary_swap",
    "generalized_swap",
    "swap_decomposition",
    "lesssim_at",
    "basis_ket",
    "require_square",
    "check_finite",
]


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


def require_square(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Return ``a`` as complex128, raising NonSquare unless it is n x n."""
    m = _as_complex(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"{what} has shape {m.shape}, expected square")
    return m


def check_finite(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Reject NaN/inf entries; they silently poison everything downstream."""
    m = _as_complex(a)
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise DimensionMismatch(f"{what} contains non-finite entries")
    return m


def basis_ket(index: int, dim: int) -> np.ndarray:
    """Computational basis ket |index> in a ``dim``-dimensional space."""
    if not 0 <= index < dim:
        raise DimensionMismatch(f"basis index {index} outside 0..{dim - 1}")
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices (or kets), left factor most
    significant.

    Examples
    --------
    tensor(X, I) maps |00> to |10>: the left factor acts on wire 1.
    """
    if not ops:
        raise DimensionMismatch("tensor() needs at least one operand")
    out = _as_complex(ops[0])
    for op in ops[1:]:
        out = np.kron(out, _as_complex(op))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return _as_complex(a).conj().T


def trace(a: np.ndarray) -> complex:
    """Matrix trace as a complex scalar."""
    m = require_square(a, "trace operand")
    return complex(np.trace(m))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product (or matrix-vector product) with shape checking."""
    ma, mb = _as_complex(a), _as_complex(b)
    if ma.shape[-1] != mb.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {ma.shape} and {mb.shape}")
    return ma @ mb


def apply_superop(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply the superoperator of a single operator: u rho u^dagger."""
    mu = require_square(u, "superoperator matrix")
    mr = require_square(rho, "density operand")
    if mu.shape != mr.shape:
        raise DimensionMismatch(f"operator {mu.shape} vs density {mr.shape}")
    return mu @ mr @ mu.conj().T


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOL.algebraic) -> bool:
    """True when a^dagger a = I within ``tol`` (max-norm)."""
    m = require_square(a, "is_unitary operand")
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(m.conj().T @ m - eye)) <= tol)


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL.algebraic) -> bool:
    m = require_square(a, "is_hermitian operand")
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_density(a: np.ndarray, tol: float = DEFAULT_TOL.algebraic,
               psd_slack: float = DEFAULT_TOL.psd_slack) -> bool:
    """Hermitian, unit trace, positive semidefinite (within slack)."""
    m = require_square(a, "is_density operand")
    if not is_hermitian(m, tol):
        return False
    if abs(trace(m) - 1.0) > max(tol, 1e-12):
        return False
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return bool(evals.min() >= -psd_slack)


def _check_wire(k: int, w: int) -> None:
    if not 1 <= w <= k:
        raise WireOutOfRange(f"wire {w} outside 1..{k}")


def _permute_indices(k: int, perm: Sequence[int]) -> np.ndarray:
    """For each basis index, the index after moving wire i's bit to perm[i-1]."""
    idx = np.arange(2 ** k, dtype=np.int64)
    out = np.zeros_like(idx)
    for wire in range(1, k + 1):
        src_shift = k - wire
        dst_shift = k - perm[wire - 1]
        out |= ((idx >> src_shift) & 1) << dst_shift
    return out


def binary_swap(k: int, i: int, j: int) -> np.ndarray:
    """2^k x 2^k permutation matrix exchanging wires i and j.

    Self-inverse and equal to its own dagger.
    """
    _check_wire(k, i)
    _check_wire(k, j)
    perm = list(range(1, k + 1))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    new_index = _permute_indices(k, perm)
    mat = np.zeros((2 ** k, 2 ** k), dtype=np.complex128)
    mat[new_index, np.arange(2 ** k)] = 1.0
    return mat


def _validate_perm(perm: Sequence[int]) -> int:
    k = len(perm)
    if sorted(perm) != list(range(1, k + 1)):
        raise NotAPermutation(f"{tuple(perm)} is not a permutation of 1..{k}")
    return k


def swap_decomposition(perm: Sequence[int], strategy: str = "composed") -> list[tuple[int, int]]:
    """Transpositions whose product realizes ``perm``, in application order.

    ``composed`` uses selection sort (at most k-1 swaps of arbitrary wire
    pairs); ``naive-adjacent`` uses bubble sort (adjacent pairs only, up to
    k(k-1)/2 swaps, one per inversion). ``direct`` decomposes nothing and
    returns the empty list.
    """
    k = _validate_perm(perm)
    if strategy == "direct":
        return []
    if strategy not in ("composed", "naive-adjacent"):
        raise NotAPermutation(f"unknown swap strategy {strategy!r}")

    # arrangement[p-1] = wire whose bit currently sits at position p
    arrangement = list(range(1, k + 1))
    position = {w: w for w in arrangement}
    swaps: list[tuple[int, int]] = []

    def do_swap(p: int, q: int) -> None:
        wp, wq = arrangement[p - 1], arrangement[q - 1]
        arrangement[p - 1], arrangement[q - 1] = wq, wp
        position[wp], position[wq] = q, p
        swaps.append((p, q))

    if strategy == "composed":
        inverse = {perm[w - 1]: w for w in range(1, k + 1)}
        for p in range(1, k + 1):
            q = position[inverse[p]]
            if q != p:
                do_swap(p, q)
    else:
        # one adjacent swap per inversion of the destination sequence
        changed = True
        while changed:
            changed = False
            for p in range(1, k):
                if perm[arrangement[p - 1] - 1] > perm[arrangement[p] - 1]:
                    do_swap(p, p + 1)
                    changed = True
    return swaps


def generalized_swap(perm: Sequence[int], strategy: str = "composed") -> tuple[np.ndarray, int]:
    """Permutation matrix realizing a wire permutation, plus its swap cost.

    ``perm[i-1]`` is the destination of wire i: the result P satisfies
    P |b1...bk> = |c1...ck> with c_{perm(i)} = b_i.

    Strategies:
      * ``composed``       selection-sort decomposition into at most k-1
                           binary swaps, multiplied together;
      * ``direct``         one-pass index permutation, cost reported as 0;
      * ``naive-adjacent`` bubble decomposition into adjacent swaps, up to
                           k(k-1)/2 of them (the worst case the composed
                           route is designed to avoid).

    Returns (matrix, number_of_binary_swaps). All strategies produce the
    same 0/1 matrix exactly.
    """
    k = _validate_perm(perm)
    dim = 2 ** k
    if strategy == "direct":
        new_index = _permute_indices(k, perm)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[new_index, np.arange(dim)] = 1.0
        return mat, 0
    swaps = swap_decomposition(perm, strategy)
    mat = np.eye(dim, dtype=np.complex128)
    for (p, q) in swaps:
        mat = binary_swap(k, p, q) @ mat
    return mat, len(swaps)


def _apply_kraus(ops: Iterable[np.ndarray], rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for kmat in ops:
        km = require_square(kmat, "Kraus operator")
        if km.shape != rho.shape:
            raise DimensionMismatch(f"Kraus {km.shape} vs density {rho.shape}")
        out = out + km @ rho @ km.conj().T
    return out


def lesssim_at(e: Sequence[np.ndarray], f: Sequence[np.ndarray], rho: np.ndarray,
               tol: float = DEFAULT_TOL.algebraic) -> bool:
    """Pointwise trace comparison of two Kraus maps at one density matrix.

    True when tr(E(rho)) <= tr(F(rho)) + tol. This is the only fragment of
    the superoperator preorder the package exposes; no global ordering is
    decided here.
    """
    r = require_square(rho, "density operand")
    te = trace(_apply_kraus(e, r)).real
    tf = trace(_apply_kraus(f, r)).real
    return te <= tf + tol
