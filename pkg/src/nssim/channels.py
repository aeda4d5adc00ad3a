"""Kraus channels for collective noise on three qubits.

Cascade names follow operator order: ``"zx"`` is ``E_z E_x``, so the x
block acts first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np
from scipy.stats import unitary_group

from .algebra import (
    AXES,
    DIM,
    N_QUBITS,
    collective_axis_change,
    collective_generator,
    symmetrize,
)
from .qmat import (
    TOL_EIG,
    check_density_matrix,
    dagger,
    pauli_string,
    partial_trace,
    projector,
    single_qubit_rotation,
    tensor_power,
)

COLLECTIVE_M = (1.5, 0.5, -0.5, -1.5)


@dataclass(frozen=True)
class KrausChannel:
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ks[0].shape[0]
        if any(k.shape != (d, d) for k in ks):
            raise ValueError("Kraus operators must share one square shape")
        object.__setattr__(self, "kraus", ks)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)

    def __call__(self, op: np.ndarray) -> np.ndarray:
        """Linear action on an arbitrary operator (not only states)."""
        return sum(k @ op @ dagger(k) for k in self.kraus)

    def completeness_error(self) -> float:
        total = sum(dagger(k) @ k for k in self.kraus)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def unitality_error(self) -> float:
        return float(np.max(np.abs(self(np.eye(self.dim)) - np.eye(self.dim))))

    def check(self, tol: float = TOL_EIG) -> "KrausChannel":
        err = self.completeness_error()
        if err > tol:
            raise ValueError(f"Kraus completeness violated by {err:.3g}")
        return self


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply ``ch`` to a density matrix, validating input and output."""
    rho = check_density_matrix(rho)
    if rho.shape[0] != ch.dim:
        raise ValueError(f"state dim {rho.shape[0]} does not match channel dim {ch.dim}")
    out = ch(rho)
    try:
        return check_density_matrix(out, herm_tol=1e-11, trace_tol=1e-11, psd_tol=-1e-9)
    except ValueError as exc:
        raise ValueError(f"channel output is not a state, channel is malformed: {exc}") from exc


def identity_channel(dim: int = DIM) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((u,))


def compose(first: KrausChannel, then: KrausChannel) -> KrausChannel:
    """``then`` after ``first``; keeps every pairwise product ``B A``."""
    if first.dim != then.dim:
        raise ValueError(f"dimension mismatch: {first.dim} vs {then.dim}")
    return KrausChannel(tuple(b @ a for b in then.kraus for a in first.kraus))


def mixture(channels: Sequence[KrausChannel], weights: Sequence[float]) -> KrausChannel:
    """Convex combination ``sum_i w_i E_i``."""
    w = np.asarray(weights, dtype=float)
    if len(channels) != len(w) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector matching the channels")
    return KrausChannel(tuple(np.sqrt(wi) * k for ch, wi in zip(channels, w) if wi > 0 for k in ch.kraus))


def crusher_z() -> KrausChannel:
    """Full-strength collective z dephasing from I, Jz, ZZ-hat and ZZZ-hat."""
    one = np.eye(DIM, dtype=complex)
    jz2 = 2 * collective_generator("z")
    zz = symmetrize("ZZI")
    zzz = symmetrize("ZZZ")
    return KrausChannel(
        (
            (one + jz2 + zz + zzz) / 8,
            (one - jz2 + zz - zzz) / 8,
            (3 * one + jz2 - zz - 3 * zzz) / 8,
            (3 * one - jz2 - zz + 3 * zzz) / 8,
        )
    )


def rotate_channel(ch: KrausChannel, axis: str) -> KrausChannel:
    """Re-reference a z-axis channel to ``axis`` by collective conjugation."""
    u = collective_axis_change(axis)
    if ch.dim != u.shape[0]:
        raise ValueError("rotate_channel acts on three-qubit channels")
    return KrausChannel(tuple(u @ k @ dagger(u) for k in ch.kraus))


def crusher(axis: str) -> KrausChannel:
    return rotate_channel(crusher_z(), axis)


def cascade(axes: str, block: Callable[[str], KrausChannel] = crusher) -> KrausChannel:
    """Compose single-axis blocks; ``cascade("yzx")`` is ``E_y E_z E_x``."""
    if not axes or any(a not in AXES for a in axes):
        raise ValueError(f"axes must be a nonempty string over xyz, got {axes!r}")
    ch = block(axes[-1])
    for a in reversed(axes[:-1]):
        ch = compose(ch, block(a))
    return ch


def named_channel(name: str) -> KrausChannel:
    """``"ex"``, ``"ezx"``, ``"eyzx"`` and so on; ``"e0"`` is the identity."""
    if not name.startswith("e"):
        raise KeyError(f"unknown channel {name!r}")
    axes = name[1:]
    if set(axes) <= {"0"}:
        return identity_channel()
    return cascade(axes)


# --- weak gradient-diffusion dephasing ------------------------------------


@dataclass(frozen=True)
class WeakNoiseParams:
    """Gradient-diffusion settings in SI units.

    D: diffusion coefficient (m^2/s); gamma: gyromagnetic ratio (rad/(s T));
    grad: dBz/dz (T/m); delta: gradient pulse length (s); Delta: holding time (s).
    """

    D: float
    gamma: float
    grad: float
    delta: float
    Delta: float

    def __post_init__(self):
        vals = (self.D, self.gamma, self.grad, self.delta, self.Delta)
        if any(v < 0 for v in vals) or self.delta + self.Delta <= 0:
            raise ValueError("noise parameters must be nonnegative with delta + Delta > 0")

    @property
    def elapsed(self) -> float:
        return self.Delta + 2 * self.delta


def gradient_attenuation(p: WeakNoiseParams) -> float:
    """Coherence attenuation of a gradient / diffusion / inverse-gradient block."""
    return float(np.exp(-p.D * p.gamma**2 * p.grad**2 * p.delta**2 * (p.Delta + 2 * p.delta / 3)))


def weak_noise_rate(p: WeakNoiseParams) -> float:
    """Effective dephasing rate ``1/tau`` such that ``exp(-t/tau)`` matches the attenuation."""
    return p.D * p.gamma**2 * p.grad**2 * p.delta**2 * (p.Delta + 2 * p.delta / 3) / (p.Delta + 2 * p.delta)


def damping_factors(rate: float, t: float) -> np.ndarray:
    """Coherence multipliers ``exp(-(m - m')^2 t/tau)`` over collective m = 3/2..-3/2."""
    s = rate * t
    if s < 0:
        raise ValueError(f"rate * t must be nonnegative, got {s}")
    m = np.asarray(COLLECTIVE_M)
    return np.exp(-((m[:, None] - m[None, :]) ** 2) * s)


def weak_collective_dephasing(rate: float, t: float, axis: str = "z") -> KrausChannel:
    """Gaussian-averaged collective rotation about ``axis`` with phase variance ``2 t/tau``.

    Kraus operators come from the eigendecomposition of the (positive
    semidefinite) damping-factor matrix, each one a combination of the
    collective eigenprojectors.
    """
    factors = damping_factors(rate, t)
    k0, k1, k2, k3 = crusher_z().kraus
    projectors = (k0, k2, k3, k1)  # m = 3/2, 1/2, -1/2, -3/2
    lam, vec = np.linalg.eigh(factors)
    kraus = []
    for lk, vk in zip(lam, vec.T):
        if lk <= 0:
            continue
        kraus.append(np.sqrt(lk) * sum(v * p for v, p in zip(vk, projectors)))
    return rotate_channel(KrausChannel(tuple(kraus)), axis)


def random_collective_unitary(seed=None, angles: Sequence[float] | None = None) -> KrausChannel:
    """A single collective rotation ``u (x) u (x) u``.

    With ``angles = (theta_x, theta_y, theta_z)`` the one-qubit factor is
    ``exp(-i theta . sigma / 2)``; otherwise ``u`` is Haar random from ``seed``.
    """
    if angles is not None:
        theta = np.asarray(angles, dtype=float)
        norm = float(np.linalg.norm(theta))
        u = np.eye(2, dtype=complex) if norm == 0 else single_qubit_rotation(theta / norm, norm)
    else:
        u = unitary_group.rvs(2, random_state=np.random.default_rng(seed))
    return unitary_channel(tensor_power(u, N_QUBITS))


def one_qubit_map(
    ch: KrausChannel, data_qubit: int = 2, ancilla_state: np.ndarray | None = None
) -> Callable[[np.ndarray], np.ndarray]:
    """``rho -> Tr_ancillae E(rho (x) |a1 a2><a1 a2|)`` with the data on ``data_qubit``."""
    if ch.dim != DIM:
        raise ValueError("one_qubit_map reduces three-qubit channels")
    if not 1 <= data_qubit <= N_QUBITS:
        raise ValueError(f"data qubit {data_qubit} out of range")
    a = np.zeros(4, dtype=complex) if ancilla_state is None else np.asarray(ancilla_state, dtype=complex)
    if ancilla_state is None:
        a[0] = 1.0
    if a.shape != (4,) or abs(np.linalg.norm(a) - 1.0) > 1e-12:
        raise ValueError("ancilla state must be a normalized two-qubit vector")
    # permute the ancilla pair (ordered by qubit index) around the data slot
    anc = projector(a).reshape(2, 2, 2, 2)

    def q(rho: np.ndarray) -> np.ndarray:
        full = np.einsum("ab,cdef->acdbef", rho, anc).reshape(DIM, DIM)
        # full is ordered (data, anc_lo, anc_hi); move data into place
        perm = _move_first_to(data_qubit)
        full = full.reshape([2] * 6).transpose(perm + [p + 3 for p in perm]).reshape(DIM, DIM)
        return partial_trace(ch(full), keep=[data_qubit])

    return q


def _move_first_to(pos: int) -> list[int]:
    """Axis order placing tensor factor 0 at 1-based position ``pos`` of three."""
    order = [1, 2]
    order.insert(pos - 1, 0)
    return order


def reduce_to_one_qubit(
    ch: KrausChannel, data_qubit: int = 2, ancilla_state: np.ndarray | None = None
) -> np.ndarray:
    """Pauli transfer matrix of the data-qubit channel induced by ``ch``."""
    from .tomography import ptm_of_map

    return ptm_of_map(one_qubit_map(ch, data_qubit, ancilla_state))


def global_depolarizing(p: float, n: int = N_QUBITS) -> KrausChannel:
    """``rho -> (1 - p) rho + p I/d`` on ``n`` qubits."""
    if not 0 <= p <= 1:
        raise ValueError("depolarizing strength must lie in [0, 1]")
    d2 = 4**n
    kraus = [np.sqrt(1 - p + p / d2) * np.eye(2**n, dtype=complex)]
    if p > 0:
        kraus += [np.sqrt(p / d2) * pauli_string("".join(w)) for w in product("IXYZ", repeat=n) if set(w) != {"I"}]
    return KrausChannel(tuple(kraus))
