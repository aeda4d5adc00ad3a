"""Dense complex matrix kernel for small qubit registers.

Operators are plain ``numpy`` complex arrays of shape ``(2**n, 2**n)``.
Qubit 1 is the most significant tensor factor, so ``ket("011")`` puts
qubit 1 in ``|0>`` and qubits 2, 3 in ``|1>``.  All qubit indices in the
public API are 1-based to match ket labels.
"""

from __future__ import annotations

import json
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

# Absolute elementwise tolerance for exact-math identities.
TOL_EXACT = 1e-12
# Tolerance wherever an eigen- or singular-value decomposition is involved.
TOL_EIG = 1e-10
# Smallest eigenvalue accepted for a density matrix.
TOL_PSD = -1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}
PAULI_LIST = (I2, X, Y, Z)


def num_qubits(op: np.ndarray) -> int:
    dim = op.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def as_operator(a) -> np.ndarray:
    """Coerce ``a`` to a finite complex square matrix of power-of-two size."""
    op = np.asarray(a, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    num_qubits(op)
    if not np.all(np.isfinite(op)):
        raise ValueError("operator has non-finite entries")
    return op


def kron(*ops: np.ndarray) -> np.ndarray:
    """Tensor product, first argument most significant."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, ops)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^dagger b)``."""
    a, b = np.asarray(a), np.asarray(b)
    _check_same_shape(a, b)
    return complex(np.vdot(a, b))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_shape(a, b)
    return a @ b - b @ a


def ket(bits: str) -> np.ndarray:
    """Computational basis vector for a bit string such as ``"010"``."""
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Place a one-qubit ``op`` on ``qubit`` (1-based) of an ``n``-qubit register."""
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    factors = [I2] * n
    factors[qubit - 1] = op
    return kron(*factors)


def pauli_string(letters: str) -> np.ndarray:
    return kron(*(PAULIS[c] for c in letters.upper()))


def tensor_power(u: np.ndarray, n: int) -> np.ndarray:
    return kron(*([u] * n))


def single_qubit_rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    """``exp(-i angle (axis . sigma) / 2)`` in closed form."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > TOL_EXACT:
        raise ValueError(f"rotation axis must be a unit 3-vector, got {axis!r}")
    gen = n[0] * X + n[1] * Y + n[2] * Z
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * gen


def swap(i: int, j: int, n: int) -> np.ndarray:
    """Permutation operator exchanging qubits ``i`` and ``j`` (1-based)."""
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        bits = list(format(idx, f"0{n}b"))
        bits[i - 1], bits[j - 1] = bits[j - 1], bits[i - 1]
        out[int("".join(bits), 2), idx] = 1.0
    return out


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep`` (1-based, order ignored).

    Kept qubits stay in ascending order in the result.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"qubit indices {keep} out of range 1..{n}")
    traced = [q for q in range(1, n + 1) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # trace highest index first so remaining axis numbers stay valid
    for q in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=q - 1, axis2=q - 1 + m)
    d = 1 << len(keep)
    return t.reshape(d, d)


def is_hermitian(a: np.ndarray, tol: float = TOL_EXACT) -> bool:
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_unitary(u: np.ndarray, tol: float = TOL_EXACT) -> bool:
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol)


def check_density_matrix(
    rho,
    herm_tol: float = TOL_EXACT,
    trace_tol: float = TOL_EXACT,
    psd_tol: float = TOL_PSD,
) -> np.ndarray:
    """Validate and return ``rho`` as a density matrix.

    Raises ``ValueError`` when Hermiticity, unit trace or positivity fail
    beyond the given tolerances.
    """
    rho = as_operator(rho)
    herm_err = float(np.max(np.abs(rho - dagger(rho))))
    if herm_err > herm_tol:
        raise ValueError(f"density matrix not Hermitian (deviation {herm_err:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr:.15g}, expected 1")
    lam_min = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0])
    if lam_min < psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3g}")
    return rho


def operator_to_dict(op: np.ndarray) -> dict:
    op = np.asarray(op, dtype=complex)
    return {
        "dim": int(op.shape[0]),
        "re": op.real.tolist(),
        "im": op.imag.tolist(),
    }


def operator_from_dict(d: dict) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d["im"], dtype=float)
    op = re + 1j * im
    if op.shape != (d["dim"], d["dim"]):
        raise ValueError(f"declared dim {d['dim']} does not match entries {op.shape}")
    return as_operator(op)


def dumps_operator(op: np.ndarray) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(operator_to_dict(op))


def loads_operator(s: str) -> np.ndarray:
    return operator_from_dict(json.loads(s))
