"""End-to-end fidelity experiments on the three-qubit code.

Noise blocks in an ``ExperimentSpec`` are listed in the order they act.
Channel labels such as ``"zx-ns"`` use operator order instead (``E_z E_x``,
x acts first), so ``from_label`` reverses the letters.

The unencoded pipeline puts the data on qubit 2 between ``|0>`` ancillas
on qubits 1 and 3.  The encoded pipeline follows ``code.encoded_data_map``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from . import code
from .algebra import AXES
from .channels import (
    KrausChannel,
    compose,
    crusher,
    identity_channel,
    mixture,
    one_qubit_map,
    random_collective_unitary,
    weak_collective_dephasing,
)
from .qmat import partial_trace, projector
from .tomography import (
    PLUS_X,
    PLUS_Y,
    ONE,
    ZERO,
    FidelityReport,
    diagnostics,
    process_tomography,
    tomography_outputs,
)

INPUT_STATES = {
    "+x": PLUS_X,
    "-x": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "+y": PLUS_Y,
    "-y": np.array([1, -1j], dtype=complex) / np.sqrt(2),
    "0": ZERO,
    "1": ONE,
}
DEFAULT_INPUTS = ("0", "+x", "+y")
MODES = ("crusher", "weak", "random", "identity")
PIPELINES = ("encoded", "unencoded")


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class NoiseBlock:
    axis: str = "z"
    mode: str = "crusher"
    rate: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.mode in ("crusher", "weak") and self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")
        if self.rate < 0 or self.duration < 0:
            raise ValueError("rate and duration must be nonnegative")

    def channel(self, rng: np.random.Generator | None = None, repetitions: int = 1) -> KrausChannel:
        if self.mode == "crusher":
            return crusher(self.axis)
        if self.mode == "weak":
            return weak_collective_dephasing(self.rate, self.duration, self.axis)
        if self.mode == "random":
            rng = rng if rng is not None else np.random.default_rng()
            draws = [random_collective_unitary(rng) for _ in range(repetitions)]
            return mixture(draws, [1 / repetitions] * repetitions)
        return identity_channel()


@dataclass(frozen=True)
class ExperimentSpec:
    pipeline: str = "encoded"
    noise: tuple[NoiseBlock, ...] = ()
    inputs: tuple[str, ...] = DEFAULT_INPUTS
    repetitions: int = 1
    seed: int | None = 0
    imperfection: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.pipeline not in PIPELINES:
            raise ValueError(f"pipeline must be one of {PIPELINES}, got {self.pipeline!r}")
        if not self.noise:
            raise ValueError("noise list is empty; use an 'identity' block for an explicit no-op")
        bad = [s for s in self.inputs if s not in INPUT_STATES]
        if bad or not self.inputs:
            raise ValueError(f"unknown input labels {bad}; known: {sorted(INPUT_STATES)}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if not 0 <= self.imperfection <= 1:
            raise ValueError("imperfection must lie in [0, 1]")

    @classmethod
    def from_label(cls, label: str, **kw) -> "ExperimentSpec":
        """``"yzx-ns"``, ``"x-un"``, ``"00-ns"`` (two identity windows) and so on."""
        try:
            axes, tag = label.split("-")
            pipeline = {"ns": "encoded", "un": "unencoded"}[tag]
        except (ValueError, KeyError):
            raise ValueError(f"bad channel label {label!r}") from None
        if not axes or any(a not in (*AXES, "0") for a in axes):
            raise ValueError(f"bad channel label {label!r}")
        blocks = tuple(NoiseBlock(a, "crusher") if a != "0" else NoiseBlock(mode="identity") for a in reversed(axes))
        return cls(pipeline=pipeline, noise=blocks, label=label, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        if "channel" in d:
            label = d.pop("channel")
            kw = {k: d[k] for k in ("inputs", "repetitions", "seed", "imperfection") if k in d}
            if "inputs" in kw:
                kw["inputs"] = tuple(kw["inputs"])
            spec = cls.from_label(label, **kw)
            if "label" in d:
                spec = cls(**{**spec.__dict__, "label": d["label"]})
            return spec
        unknown = set(d) - {"pipeline", "noise", "inputs", "repetitions", "seed", "imperfection", "label"}
        if unknown:
            raise ValueError(f"unknown spec fields {sorted(unknown)}")
        noise = tuple(NoiseBlock(**b) for b in d.pop("noise", ()))
        if "inputs" in d:
            d["inputs"] = tuple(d["inputs"])
        return cls(noise=noise, **d)


@dataclass
class ExperimentResult:
    label: str
    pipeline: str
    ptm: np.ndarray
    report: FidelityReport
    input_fidelities: dict[str, float]
    a2_fidelity: float

    @property
    def fe(self) -> float:
        return self.report.fe_polarization

    def row(self) -> dict:
        out = {
            "label": self.label,
            "pipeline": self.pipeline,
            "fe": self.fe,
            "fe_kraus": self.report.fe_kraus,
            "fe_purestate": self.report.fe_purestate,
            "p_x": self.report.p_x,
            "p_y": self.report.p_y,
            "p_z": self.report.p_z,
            "unitality_deviation": self.report.unitality_deviation,
            "a2_fidelity": self.a2_fidelity,
        }
        out.update({f"F[{k}]": v for k, v in self.input_fidelities.items()})
        out.update({f"r{u}{v}": float(self.ptm[u, v]) for u in range(4) for v in range(4)})
        return out


def build_channel(spec: ExperimentSpec) -> KrausChannel:
    """Three-qubit noise channel: blocks applied in list order."""
    rng = np.random.default_rng(spec.seed)
    ch = spec.noise[0].channel(rng, spec.repetitions)
    for block in spec.noise[1:]:
        ch = compose(ch, block.channel(rng, spec.repetitions))
    return ch


def data_map(spec: ExperimentSpec, noise: KrausChannel | None = None):
    """The one-qubit data map realized by ``spec``."""
    noise = noise if noise is not None else build_channel(spec)
    if spec.pipeline == "unencoded":
        return one_qubit_map(noise, data_qubit=code.QUBIT_ROLES["data"])
    if spec.imperfection > 0:
        # depolarize after the encoder and after the decoder, applied in closed form
        p = spec.imperfection
        cu = code.build_code_unitaries()
        anc = projector(np.eye(4)[0])

        def dep(rho):
            return (1 - p) * rho + p * np.trace(rho) * np.eye(8) / 8

        def q(rho):
            mid = noise(dep(cu.u_enc @ np.kron(anc, rho) @ cu.u_enc.conj().T))
            return partial_trace(dep(cu.u_dec @ mid @ cu.u_dec.conj().T), keep=[code.QUBIT_ROLES["data"]])

        return q
    return code.encoded_data_map(noise)


def _a2_fidelity(spec: ExperimentSpec, noise: KrausChannel) -> float:
    return code.ancilla2_average_fidelity(noise, encoded=spec.pipeline == "encoded")


def run(spec: ExperimentSpec) -> ExperimentResult:
    """Build, reduce, reconstruct by tomography and score one experiment.

    Raises ``InvariantViolation`` if the reconstructed channel is not
    completely positive or a fidelity leaves [-1/2, 1].
    """
    noise = build_channel(spec)
    q = data_map(spec, noise)
    outputs = tomography_outputs(q)
    ptm = process_tomography(outputs)
    try:
        report = diagnostics(ptm, outputs)
    except ValueError as exc:
        raise InvariantViolation(str(exc)) from exc
    if np.isnan(report.fe_kraus):
        raise InvariantViolation("reconstructed data channel is not completely positive")
    fids = {}
    for name in spec.inputs:
        psi = INPUT_STATES[name]
        fids[name] = float(np.real(np.vdot(psi, q(projector(psi)) @ psi)))
    a2 = _a2_fidelity(spec, noise)
    if not -1e-9 <= a2 <= 1 + 1e-9:
        raise InvariantViolation(f"ancilla fidelity {a2} outside [0, 1]")
    return ExperimentResult(spec.label or _auto_label(spec), spec.pipeline, ptm, report, fids, a2)


def _auto_label(spec: ExperimentSpec) -> str:
    letters = "".join({"crusher": b.axis, "weak": b.axis, "random": "r", "identity": "0"}[b.mode] for b in spec.noise)
    return f"{letters[::-1]}-{'ns' if spec.pipeline == 'encoded' else 'un'}"


def run_many(specs: Sequence[ExperimentSpec]) -> list[ExperimentResult]:
    return [run(s) for s in specs]


# --- weak-noise sweeps ------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    t_over_tau: float
    fe_encoded: float
    fe_unencoded: float
    a2_fidelity: float

    def row(self) -> dict:
        return self.__dict__.copy()


def weak_noise_sweep(axis: str, t_over_tau: Sequence[float], tau: float = 1.0) -> list[SweepPoint]:
    """Fidelities under weak collective dephasing about ``axis``.

    The horizontal variable is the dimensionless ``t/tau``; ``tau`` only
    sets the physical time handed to the channel.  ``a2_fidelity`` is the
    average fidelity of qubit 3 with ``|0>`` in the encoded pipeline.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    points = []
    for s in t_over_tau:
        if s < 0:
            raise ValueError("sweep times must be nonnegative")
        ch = weak_collective_dephasing(1 / tau, s * tau, axis)
        enc = diagnostics(process_tomography(tomography_outputs(code.encoded_data_map(ch))))
        un = diagnostics(process_tomography(tomography_outputs(one_qubit_map(ch))))
        points.append(SweepPoint(float(s), enc.fe_polarization, un.fe_polarization, code.ancilla2_average_fidelity(ch)))
    return points


class FitError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3g})")
        self.residual = residual


@dataclass(frozen=True)
class ExponentialFit:
    """``F = A exp(-t/tau) + B``; ``tau`` is None when the data show no decay."""

    A: float
    B: float
    tau: float | None
    residual: float
    stderr: tuple[float, ...] = field(default=())

    def __iter__(self):
        return iter((self.A, self.B, self.tau))


AMPLITUDE_FLOOR = 1e-6


def _constant_fit(f: np.ndarray) -> ExponentialFit:
    b = float(np.mean(f))
    return ExponentialFit(0.0, b, None, float(np.sqrt(np.mean((f - b) ** 2))))


def fit_exponential(points: Sequence[tuple[float, float]]) -> ExponentialFit:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise ValueError("need at least three (t, F) points")
    t, f = pts[:, 0], pts[:, 1]
    if np.ptp(f) < AMPLITUDE_FLOOR:
        return _constant_fit(f)

    def model(t, a, b, tau):
        return a * np.exp(-t / tau) + b

    a0 = f[np.argmin(t)] - f[np.argmax(t)]
    p0 = (a0, f[np.argmax(t)], max(np.ptp(t) / 3, 1e-12))
    try:
        popt, pcov = curve_fit(model, t, f, p0=p0, ftol=1e-15, xtol=1e-15, gtol=1e-15, maxfev=20000)
    except RuntimeError as exc:
        raise FitError(str(exc), float(np.sqrt(np.mean((f - np.mean(f)) ** 2)))) from exc
    a, b, tau = (float(v) for v in popt)
    if abs(a) < AMPLITUDE_FLOOR:
        return _constant_fit(f)
    residual = float(np.sqrt(np.mean((model(t, a, b, tau) - f) ** 2)))
    stderr = tuple(float(v) for v in np.sqrt(np.abs(np.diag(pcov)))) if np.all(np.isfinite(pcov)) else ()
    return ExponentialFit(a, b, tau, residual, stderr)


# --- reported reference data -------------------------------------------------


def _read_csv(name: str) -> list[dict]:
    text = resources.files("nssim").joinpath("data").joinpath(name).read_text()
    return list(csv.DictReader(io.StringIO(text)))


def reported_strong_noise() -> list[dict]:
    """Hardware-reported strong-noise fidelities, for side-by-side display only."""
    return [{k: (v if k == "label" else float(v)) for k, v in row.items()} for row in _read_csv("strong_noise_reported.csv")]


def reported_ptms() -> dict[str, np.ndarray]:
    """Hardware-reported one-qubit PTMs (row per input), keyed by label."""
    out = {}
    for row in _read_csv("ptm_reported.csv"):
        out[row["label"]] = np.array([[float(row[f"r{u}{v}"]) for v in range(4)] for u in range(4)])
    return out


STRONG_NOISE_LABELS = tuple(r["label"] for r in _read_csv("strong_noise_reported.csv"))


def strong_noise_table() -> list[dict]:
    """Ideal simulation of every strong-noise channel next to the reported values."""
    rows = []
    for rep in reported_strong_noise():
        res = run(ExperimentSpec.from_label(rep["label"], inputs=("0", "+x", "+y")))
        rows.append(
            {
                "label": rep["label"],
                "f_z": res.input_fidelities["0"],
                "f_x": res.input_fidelities["+x"],
                "f_y": res.input_fidelities["+y"],
                "fe": res.fe,
                "reported_f_z": rep["f_z"],
                "reported_f_x": rep["f_x"],
                "reported_f_y": rep["f_y"],
                "reported_fe": rep["fe"],
            }
        )
    return rows


def write_csv(rows: Sequence[dict], fh) -> None:
    """CSV with ``repr`` floats so identical runs give identical bytes."""
    if not rows:
        return
    fields = list(rows[0])
    for r in rows[1:]:
        fields += [k for k in r if k not in fields]
    w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
