import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_ket
from nssim.channels import apply, crusher_z, named_channel, weak_collective_dephasing
from nssim.code import build_code_unitaries, leakage_population
from nssim.nmr import (
    Delay,
    InternalHamiltonian,
    Pulse,
    PulseSchedule,
    distance_to_identity,
    free_propagator,
    hamiltonian_matrix,
    pseudo_pure,
    reference_noop_schedule,
    schedule_propagator,
    schedule_with_noise,
)
from nssim.qmat import dagger, ket, partial_trace, projector
from nssim.tomography import process_tomography, TOMOGRAPHY_INPUTS

H0 = InternalHamiltonian()
ZERO_H = InternalHamiltonian((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def test_hamiltonian_zero():
    assert np.array_equal(hamiltonian_matrix(ZERO_H), np.zeros((8, 8)))


def test_hamiltonian_000_entry():
    h = hamiltonian_matrix(H0)
    nu, j = H0.nu, H0.j
    assert np.isclose(h[0, 0], np.pi * sum(nu) + np.pi / 2 * sum(j), rtol=0, atol=1e-9)


def test_hamiltonian_diagonal_hermitian():
    h = hamiltonian_matrix(H0)
    assert np.array_equal(h, np.diag(np.diag(h)))
    assert np.array_equal(h, h.conj().T)


def test_hamiltonian_matches_pauli_sum():
    from nssim.qmat import Z, embed

    h = InternalHamiltonian((10.0, -3.0, 5.0), (2.0, 1.0, -0.5))
    expected = np.pi * sum(n * embed(Z, k, 3) for k, n in enumerate(h.nu, start=1))
    for (a, b), jab in zip(((1, 2), (2, 3), (1, 3)), h.j):
        expected = expected + np.pi / 2 * jab * embed(Z, a, 3) @ embed(Z, b, 3)
    assert np.max(np.abs(hamiltonian_matrix(h) - expected)) < 1e-12


def test_free_propagator():
    assert np.array_equal(free_propagator(H0, 0.0), np.eye(8))
    u = free_propagator(H0, 0.0123)
    assert np.max(np.abs(np.abs(np.diag(u)) - 1)) < 1e-12
    assert np.max(np.abs(dagger(u) @ u - np.eye(8))) < 1e-12
    with pytest.raises(ValueError):
        free_propagator(H0, -1.0)


def test_free_evolution_leaks_encoded_state():
    cu = build_code_unitaries()
    rho = cu.u_enc @ np.kron(projector(ket("00")), projector(ket("0"))) @ dagger(cu.u_enc)
    u = free_propagator(H0, 0.005)
    assert leakage_population(u @ rho @ dagger(u)) > 1e-3


def test_empty_schedule_is_identity():
    assert np.array_equal(schedule_propagator(PulseSchedule(), H0), np.eye(8))


def test_hahn_echo():
    h = InternalHamiltonian((321.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    t = 0.0017
    sched = PulseSchedule((Delay(t), Pulse((1,)), Delay(t), Pulse((1,))))
    assert distance_to_identity(schedule_propagator(sched, h)) < 1e-12


def test_reference_noop():
    sched = reference_noop_schedule()
    assert distance_to_identity(schedule_propagator(sched, H0.with_couplings(j13=0.0))) < 1e-6
    assert distance_to_identity(schedule_propagator(sched, H0)) < 1e-6


def test_unrefocused_schedule_is_far_from_identity():
    sched = PulseSchedule((Delay(0.011),))
    assert distance_to_identity(schedule_propagator(sched, H0)) > 0.1


def test_distance_to_identity_global_phase():
    assert distance_to_identity(np.exp(0.7j) * np.eye(8)) < 1e-12
    d = np.exp(1j * np.array([0.0, 0.2, 0, 0, 0, 0, 0, 0]))
    assert abs(distance_to_identity(np.diag(d)) - 2 * np.sin(0.05)) < 1e-8


def test_schedule_json_round_trip(tmp_path):
    sched = reference_noop_schedule(0.01)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(sched.to_dict()))
    assert PulseSchedule.load(path) == sched
    as_list = PulseSchedule.from_dict([{"delay": 0.001}, {"pulse": {"qubits": [2], "axis": "-y", "angle": 1.0}}])
    assert as_list.events == (Delay(0.001), Pulse((2,), "-y", 1.0))


@pytest.mark.parametrize(
    "events,window",
    [
        ((Delay(-1.0),), None),
        ((Pulse((4,)),), None),
        ((Pulse((1,), "z"),), None),
        ((Delay(1.0), Pulse((1,))), 1),
        ((Delay(1.0),), 3),
    ],
)
def test_invalid_schedules(events, window):
    with pytest.raises(ValueError):
        PulseSchedule(events, window)


pulse_events = st.builds(
    Pulse,
    st.lists(st.integers(1, 3), min_size=1, max_size=3, unique=True).map(tuple),
    st.sampled_from(["x", "-x", "y", "-y"]),
    st.floats(-2 * np.pi, 2 * np.pi),
)
events = st.lists(st.one_of(st.builds(Delay, st.floats(0, 0.05)), pulse_events), max_size=12)


@settings(max_examples=50, deadline=None)
@given(events)
def test_schedule_propagator_unitary(evs):
    u = schedule_propagator(PulseSchedule(tuple(evs)), H0)
    assert np.max(np.abs(dagger(u) @ u - np.eye(8))) < 1e-11


@given(st.floats(0, 0.05), st.floats(0, 5))
def test_z_noise_commutes_with_free_evolution(t, s):
    u = free_propagator(H0, t)
    for k in (*crusher_z().kraus, *weak_collective_dephasing(1.0, s).kraus):
        assert np.max(np.abs(u @ k - k @ u)) < 1e-11


def test_schedule_with_noise_in_window():
    sched = reference_noop_schedule()
    ch = schedule_with_noise(sched, H0, crusher_z())
    # noise in the identity-frame window of a no-op schedule acts like the bare noise
    rng = np.random.default_rng(0)
    rho = projector(random_ket(rng, 8))
    assert np.max(np.abs(ch(rho) - crusher_z()(rho))) < 1e-6
    with pytest.raises(ValueError):
        schedule_with_noise(PulseSchedule((Delay(1.0),)), H0, crusher_z())


def test_pseudo_pure():
    psi = ket("010")
    assert np.allclose(pseudo_pure(1.0, psi), projector(psi))
    for eps in (0.0, 1.5):
        with pytest.raises(ValueError):
            pseudo_pure(eps, psi)


def test_unital_channel_fixes_identity_part():
    psi = random_ket(np.random.default_rng(2), 8)
    eps = 0.2
    lhs = apply(crusher_z(), pseudo_pure(eps, psi))
    rhs = (1 - eps) * np.eye(8) / 8 + eps * apply(crusher_z(), projector(psi))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def pseudo_pure_decoded_ptm(eps, ch):
    cu = build_code_unitaries()
    outs = []
    for psi in TOMOGRAPHY_INPUTS.values():
        rho = pseudo_pure(eps, np.kron(ket("00"), psi))
        out = partial_trace(cu.u_dec @ ch(cu.u_enc @ rho @ dagger(cu.u_enc)) @ dagger(cu.u_dec), keep={2})
        # strip the identity background to get the deviation-normalized output
        outs.append((out - (1 - eps) * np.eye(2) / 2) / eps)
    return process_tomography(outs)


@pytest.mark.parametrize("name", ["ez", "ezx", "eyzx"])
def test_decoded_ptm_independent_of_polarization(name):
    ch = named_channel(name)
    ptms = [pseudo_pure_decoded_ptm(eps, ch) for eps in (0.1, 0.5, 1.0)]
    assert all(np.max(np.abs(p - ptms[-1])) < 1e-10 for p in ptms)
