"""Internal Hamiltonian, ideal-pulse refocusing schedules and pseudo-pure states.

Frequencies are in Hz; the Hamiltonian is returned in rad/s so that
``exp(-i H t)`` takes ``t`` in seconds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import KrausChannel, compose, unitary_channel
from .qmat import check_density_matrix, embed, projector, single_qubit_rotation

N = 3


@dataclass(frozen=True)
class InternalHamiltonian:
    """Chemical shifts ``nu`` (nu_1..nu_3) and couplings ``j`` (J12, J23, J13), all in Hz.

    Defaults are the 13C-alanine values in a frame rotating at nu_0.
    """

    nu: tuple[float, float, float] = (7167.0, -2286.5, -4881.4)
    j: tuple[float, float, float] = (54.1, 35.0, -1.3)

    def with_couplings(self, j12: float | None = None, j23: float | None = None, j13: float | None = None):
        old = self.j
        return InternalHamiltonian(
            self.nu,
            (
                old[0] if j12 is None else j12,
                old[1] if j23 is None else j23,
                old[2] if j13 is None else j13,
            ),
        )


_PAIRS = ((1, 2), (2, 3), (1, 3))


def hamiltonian_diagonal(h: InternalHamiltonian) -> np.ndarray:
    z = np.array([[1 - 2 * int(b) for b in format(i, f"0{N}b")] for i in range(2**N)], dtype=float)
    diag = np.pi * z @ np.asarray(h.nu, dtype=float)
    for (a, b), jab in zip(_PAIRS, h.j):
        diag += np.pi / 2 * jab * z[:, a - 1] * z[:, b - 1]
    return diag


def hamiltonian_matrix(h: InternalHamiltonian) -> np.ndarray:
    return np.diag(hamiltonian_diagonal(h)).astype(complex)


def free_propagator(h: InternalHamiltonian, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"delay must be nonnegative, got {t}")
    return np.diag(np.exp(-1j * hamiltonian_diagonal(h) * t))


# --- schedules ---------------------------------------------------------------

_PULSE_AXES = {
    "x": (1.0, 0.0, 0.0),
    "-x": (-1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "-y": (0.0, -1.0, 0.0),
}


@dataclass(frozen=True)
class Delay:
    seconds: float


@dataclass(frozen=True)
class Pulse:
    qubits: tuple[int, ...]
    axis: str = "x"
    angle: float = np.pi

    def unitary(self) -> np.ndarray:
        r = single_qubit_rotation(_PULSE_AXES[self.axis], self.angle)
        u = np.eye(2**N, dtype=complex)
        for q in self.qubits:
            u = embed(r, q, N) @ u
        return u


@dataclass(frozen=True)
class PulseSchedule:
    events: tuple = ()
    noise_window: int | None = None

    def __post_init__(self):
        for ev in self.events:
            if isinstance(ev, Delay):
                if ev.seconds < 0:
                    raise ValueError("delays must be nonnegative")
            elif isinstance(ev, Pulse):
                if ev.axis not in _PULSE_AXES or not ev.qubits or any(not 1 <= q <= N for q in ev.qubits):
                    raise ValueError(f"bad pulse {ev}")
            else:
                raise TypeError(f"unknown schedule event {ev!r}")
        if self.noise_window is not None:
            if not 0 <= self.noise_window < len(self.events) or not isinstance(self.events[self.noise_window], Delay):
                raise ValueError("noise_window must index a delay event")

    @property
    def duration(self) -> float:
        return sum(ev.seconds for ev in self.events if isinstance(ev, Delay))

    @classmethod
    def from_dict(cls, d: dict | list) -> "PulseSchedule":
        if isinstance(d, list):
            d = {"events": d}
        events = []
        for ev in d["events"]:
            if "delay" in ev:
                events.append(Delay(float(ev["delay"])))
            elif "pulse" in ev:
                p = ev["pulse"]
                events.append(Pulse(tuple(p["qubits"]), p.get("axis", "x"), float(p.get("angle", np.pi))))
            else:
                raise ValueError(f"event needs 'delay' or 'pulse': {ev}")
        return cls(tuple(events), d.get("noise_window"))

    def to_dict(self) -> dict:
        events = [
            {"delay": ev.seconds}
            if isinstance(ev, Delay)
            else {"pulse": {"qubits": list(ev.qubits), "axis": ev.axis, "angle": ev.angle}}
            for ev in self.events
        ]
        return {"events": events, "noise_window": self.noise_window}

    @classmethod
    def load(cls, path: str | Path) -> "PulseSchedule":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _event_unitary(ev, h: InternalHamiltonian) -> np.ndarray:
    return free_propagator(h, ev.seconds) if isinstance(ev, Delay) else ev.unitary()


def schedule_propagator(sched: PulseSchedule, h: InternalHamiltonian) -> np.ndarray:
    """Time-ordered product of the schedule's delays and instantaneous pulses."""
    u = np.eye(2**N, dtype=complex)
    for ev in sched.events:
        u = _event_unitary(ev, h) @ u
    return u


def distance_to_identity(u: np.ndarray) -> float:
    """``min_phi max_ij |U - exp(i phi) I|``."""
    d = np.diag(u)
    off = np.max(np.abs(u - np.diag(d)))

    def worst(phi: float) -> float:
        return float(np.max(np.abs(d - np.exp(1j * phi))))

    grid = np.linspace(-np.pi, np.pi, 721)
    step = grid[1] - grid[0]
    candidates = [float(np.angle(np.sum(d))), float(grid[np.argmin([worst(p) for p in grid])])]
    best = min(candidates, key=worst)
    res = minimize_scalar(worst, bounds=(best - step, best + step), method="bounded", options={"xatol": 1e-12})
    return float(max(off, min(res.fun, worst(best))))


def schedule_with_noise(sched: PulseSchedule, h: InternalHamiltonian, noise: KrausChannel) -> KrausChannel:
    """The schedule as a channel, with ``noise`` inserted right after its noise window."""
    if sched.noise_window is None:
        raise ValueError("schedule has no noise window")
    ch = unitary_channel(np.eye(2**N, dtype=complex))
    for i, ev in enumerate(sched.events):
        ch = compose(ch, unitary_channel(_event_unitary(ev, h)))
        if i == sched.noise_window:
            ch = compose(ch, noise)
    return ch


def reference_noop_schedule(total: float = 0.022) -> PulseSchedule:
    """Four equal windows with pi_x pulses arranged so every shift and coupling averages out.

    Toggling-frame signs per window: qubit 1 (+,-,-,+), qubit 2 (+,+,-,-),
    qubit 3 (+,-,+,-).  Each sign pattern and each pairwise product sums to
    zero, which cancels all chemical shifts and all three couplings.  The
    first window is unperturbed and serves as the noise window.
    """
    q = total / 4
    return PulseSchedule(
        (
            Delay(q),
            Pulse((1, 3)),
            Delay(q),
            Pulse((2, 3)),
            Delay(q),
            Pulse((1, 3)),
            Delay(q),
            Pulse((2, 3)),
        ),
        noise_window=0,
    )


def pseudo_pure(epsilon: float, base: np.ndarray) -> np.ndarray:
    """``(1 - epsilon) I/d + epsilon |base><base|``."""
    if not 0 < epsilon <= 1:
        raise ValueError(f"polarization must lie in (0, 1], got {epsilon}")
    base = np.asarray(base, dtype=complex)
    base = base / np.linalg.norm(base)
    d = base.shape[0]
    return check_density_matrix((1 - epsilon) * np.eye(d) / d + epsilon * projector(base))


__all__ = [
    "Delay",
    "InternalHamiltonian",
    "Pulse",
    "PulseSchedule",
    "distance_to_identity",
    "free_propagator",
    "hamiltonian_matrix",
    "pseudo_pure",
    "reference_noop_schedule",
    "schedule_propagator",
    "schedule_with_noise",
]
