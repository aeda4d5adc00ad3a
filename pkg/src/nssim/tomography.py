"""One-qubit process characterization.

Pauli transfer matrices use the row-per-input layout: row ``u`` holds the
Pauli decomposition of the output for input operator ``sigma_u``, so
``r[u][v] = Tr(sigma_v Q(sigma_u)) / 2`` with ``u, v`` running over
``I, x, y, z``.  This is the transpose of the column-per-input layout used
by many other tools.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channels import KrausChannel
from .qmat import PAULI_LIST, check_density_matrix, dagger, ket, projector

PLUS_X = np.array([1, 1], dtype=complex) / np.sqrt(2)
PLUS_Y = np.array([1, 1j], dtype=complex) / np.sqrt(2)
ZERO = ket("0")
ONE = ket("1")

# Inputs for reconstruction, in the order process_tomography expects.
TOMOGRAPHY_INPUTS = {"+x": PLUS_X, "+y": PLUS_Y, "0": ZERO, "1": ONE}

CHOI_TOL = -1e-9
KRAUS_CUTOFF = 1e-10


class NotCompletelyPositiveError(ValueError):
    def __init__(self, min_eigenvalue: float):
        super().__init__(f"Choi matrix has eigenvalue {min_eigenvalue:.3g} below {CHOI_TOL}")
        self.min_eigenvalue = min_eigenvalue


def ptm_of_map(q: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Pauli transfer matrix of a linear one-qubit map evaluated directly."""
    r = np.empty((4, 4))
    for u, su in enumerate(PAULI_LIST):
        out = q(su)
        for v, sv in enumerate(PAULI_LIST):
            r[u, v] = np.real(np.trace(sv @ out)) / 2
    return r


def ptm_of_channel(ch: KrausChannel) -> np.ndarray:
    if ch.dim != 2:
        raise ValueError("expected a one-qubit channel")
    return ptm_of_map(ch)


def ptm_apply(ptm: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Act with the map described by ``ptm`` on a one-qubit operator."""
    coeffs = [np.trace(s @ rho) / 2 for s in PAULI_LIST]
    out_coeffs = np.asarray(coeffs) @ np.asarray(ptm)
    return sum(c * s for c, s in zip(out_coeffs, PAULI_LIST))


def tomography_outputs(q: Callable[[np.ndarray], np.ndarray]) -> list[np.ndarray]:
    """Outputs of ``q`` for the inputs ``|+x>, |+y>, |0>, |1>``."""
    return [q(projector(psi)) for psi in TOMOGRAPHY_INPUTS.values()]


def process_tomography(outputs: Sequence[np.ndarray]) -> np.ndarray:
    """Reconstruct the PTM from the outputs for ``|+x>, |+y>, |0>, |1>``.

    Trace preservation is assumed (first column fixed to ``(1, 0, 0, 0)``);
    unitality is not, so the first row is measured.
    """
    if len(outputs) != 4:
        raise ValueError("need outputs for exactly four inputs")
    out_px, out_py, out_0, out_1 = (check_density_matrix(o, herm_tol=1e-10, trace_tol=1e-10) for o in outputs)
    q_id = out_0 + out_1
    q_ops = (q_id, 2 * out_px - q_id, 2 * out_py - q_id, out_0 - out_1)
    r = np.array([[np.real(np.trace(sv @ qu)) / 2 for sv in PAULI_LIST] for qu in q_ops])
    r[0, 0] = 1.0
    r[1:, 0] = 0.0
    return r


def choi_matrix(ptm: np.ndarray) -> np.ndarray:
    """``sum_ij |i><j| (x) Q(|i><j|)``."""
    c = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            eij = np.zeros((2, 2), dtype=complex)
            eij[i, j] = 1.0
            c[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = ptm_apply(ptm, eij)
    return c


def kraus_from_ptm(ptm: np.ndarray) -> KrausChannel:
    """Kraus operators from the eigendecomposition of the Choi matrix.

    Raises ``NotCompletelyPositiveError`` if any Choi eigenvalue is below
    ``CHOI_TOL``; small negative values above it are treated as zero.
    """
    c = choi_matrix(ptm)
    lam, vec = np.linalg.eigh((c + dagger(c)) / 2)
    if lam[0] < CHOI_TOL:
        raise NotCompletelyPositiveError(float(lam[0]))
    kraus = tuple(np.sqrt(lk) * vk.reshape(2, 2).T for lk, vk in zip(lam, vec.T) if lk > KRAUS_CUTOFF)
    return KrausChannel(kraus)


def entanglement_fidelity_kraus(ch: KrausChannel, rho: np.ndarray | None = None) -> float:
    """``sum_mu Tr(rho A_mu) Tr(rho A_mu^dagger)``; ``rho`` defaults to ``I/2``."""
    if rho is None:
        rho = np.eye(ch.dim) / ch.dim
    return float(sum(np.real(np.trace(rho @ a) * np.trace(rho @ dagger(a))) for a in ch.kraus))


def entanglement_fidelity_purestates(f_x: float, f_y: float, f_z: float) -> float:
    return (f_x + f_y + f_z - 1) / 2


def entanglement_fidelity_polarizations(p_x: float, p_y: float, p_z: float) -> float:
    return (1 + p_x + p_y + p_z) / 4


def entanglement_fidelity_ptm(ptm: np.ndarray) -> float:
    return float(np.trace(ptm)) / 4


def pure_state_fidelities(outputs: Sequence[np.ndarray]) -> dict[str, float]:
    """``<psi|Q(|psi><psi|)|psi>`` for the +x, +y and +z inputs."""
    out_px, out_py, out_0, _ = outputs
    return {
        "x": float(np.real(np.vdot(PLUS_X, out_px @ PLUS_X))),
        "y": float(np.real(np.vdot(PLUS_Y, out_py @ PLUS_Y))),
        "z": float(np.real(np.vdot(ZERO, out_0 @ ZERO))),
    }


@dataclass
class FidelityReport:
    fe_kraus: float
    fe_purestate: float
    fe_polarization: float
    p_x: float
    p_y: float
    p_z: float
    unitality_deviation: float
    purities: list[float] = field(default_factory=list)
    row_norms: list[float] = field(default_factory=list)

    def __post_init__(self):
        for name in ("fe_kraus", "fe_purestate", "fe_polarization"):
            value = getattr(self, name)
            if not np.isnan(value) and not -0.5 - 1e-9 <= value <= 1 + 1e-9:
                raise ValueError(f"{name} = {value} outside [-0.5, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


def diagnostics(ptm: np.ndarray, outputs: Sequence[np.ndarray] | None = None) -> FidelityReport:
    """Fidelities, polarizations, unitality and purity figures for one channel.

    ``outputs`` are the tomography outputs (``|+x>, |+y>, |0>, |1>``); if
    omitted they are regenerated from ``ptm``.  ``purities`` are
    ``Tr(rho_out^2)`` for those four outputs, while ``row_norms`` are the raw
    sums of squared entries of each PTM row (I, x, y, z).
    """
    ptm = np.asarray(ptm, dtype=float)
    if outputs is None:
        outputs = tomography_outputs(lambda rho: ptm_apply(ptm, rho))
    try:
        fe_kraus = entanglement_fidelity_kraus(kraus_from_ptm(ptm))
    except NotCompletelyPositiveError:
        fe_kraus = float("nan")
    f = pure_state_fidelities(outputs)
    p_x, p_y, p_z = (float(ptm[k, k]) for k in (1, 2, 3))
    return FidelityReport(
        fe_kraus=fe_kraus,
        fe_purestate=entanglement_fidelity_purestates(f["x"], f["y"], f["z"]),
        fe_polarization=entanglement_fidelity_polarizations(p_x, p_y, p_z),
        p_x=p_x,
        p_y=p_y,
        p_z=p_z,
        unitality_deviation=float(np.max(np.abs(ptm[0, 1:]))),
        purities=[float(np.real(np.trace(o @ o))) for o in outputs],
        row_norms=[float(np.sum(row**2)) for row in ptm],
    )
