import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchtherm.channels import (
    ChannelError,
    CollisionParams,
    KrausChannel,
    apply_channel,
    canonical_phase,
    collision_unitary,
    compose,
    dilation_output,
    identity_channel,
    is_cptp,
    is_energy_conserving,
    is_gibbs_preserving,
    kraus_from_dilation,
    partial_cnot_channel,
    partial_cnot_unitary,
    rotate_channel,
    system_hamiltonian,
    thermal_qubit_channel,
    tilde_u,
)
from switchtherm.matcore import SWAP, SX, SY, SZ, FactorLayout, dag, kron, max_abs, unitarity_residual
from switchtherm.states import DensityMatrix, qubit_thermal, random_state, thermal_state

GRID = [(s, q) for s in (0.0, 0.25, 0.5, 0.75, 1.0) for q in (0.5, 0.75, 1.0)]
unit = st.floats(0.0, 1.0)
half_to_one = st.floats(0.5, 1.0)


def nonzero(ops):
    return [k for k in ops if max_abs(k) > 1e-14]


def random_axis(rng):
    v = rng.normal(size=3)
    return tuple(v / np.linalg.norm(v))


@pytest.mark.parametrize("s,q", GRID)
def test_thermal_channel_is_cptp_gibbs_and_energy_conserving(s, q):
    ch = thermal_qubit_channel(s, q)
    assert is_cptp(ch, tol=1e-9)
    assert is_gibbs_preserving(ch, qubit_thermal(q), tol=1e-9)
    u = collision_unitary(CollisionParams.from_strength(s))
    assert is_energy_conserving(u, -SZ, -SZ, tol=1e-9)


@given(unit, half_to_one, st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_thermal_channel_action_on_qubit(s, q, seed):
    # populations relax as p -> c^2 p + s^2 q; coherences scale by c (c + i s (2q - 1))
    rho = random_state(2, np.random.default_rng(seed))
    c = math.sqrt(1 - s * s)
    out = thermal_qubit_channel(s, q)(rho)
    assert abs(out[0, 0] - (c * c * rho[0, 0] + s * s * q)) < 1e-12
    assert abs(out[0, 1] - c * (c + 1j * s * (2 * q - 1)) * rho[0, 1]) < 1e-12


@given(unit, half_to_one, st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_kraus_channel_matches_dilation_trace(s, q, seed):
    rho = random_state(2, np.random.default_rng(seed))
    u = collision_unitary(CollisionParams.from_strength(s))
    ref = dilation_output(u, rho, qubit_thermal(q))
    assert max_abs(thermal_qubit_channel(s, q)(rho) - ref) < 1e-12


@pytest.mark.parametrize("s,q", GRID)
def test_extracted_kraus_match_closed_form_up_to_phase(s, q):
    u = collision_unitary(CollisionParams.from_strength(s))
    got = nonzero(kraus_from_dilation(u, qubit_thermal(q)).kraus_ops)
    want = nonzero(thermal_qubit_channel(s, q).kraus_ops)
    assert len(got) == len(want)
    for a, b in zip(got, want):
        assert max_abs(canonical_phase(a) - canonical_phase(b)) < 1e-12


def test_canonical_phase_removes_global_phase(rng):
    k = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert max_abs(canonical_phase(k) - canonical_phase(np.exp(0.7j) * k)) < 1e-14


def test_kraus_from_nondiagonal_environment(rng):
    env = random_state(2, rng)
    u = collision_unitary(CollisionParams(0.9, 0.4))
    ch = kraus_from_dilation(u, env)
    assert is_cptp(ch)
    rho = random_state(2, rng)
    assert max_abs(ch(rho) - dilation_output(u, rho, env)) < 1e-12


def test_collision_unitary_is_partial_swap_at_z_axis():
    th = 0.37
    u = collision_unitary(CollisionParams(th))
    assert max_abs(u - (math.cos(th) * np.eye(4) + 1j * math.sin(th) * SWAP)) < 1e-12


def test_energy_conservation_random_draws(rng):
    for _ in range(100):
        axis = random_axis(rng)
        p = CollisionParams(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi), axis)
        u = collision_unitary(p)
        assert unitarity_residual(u) < 1e-12
        r = is_energy_conserving(u, system_hamiltonian(axis), -SZ)
        assert r.residuals["commutator"] < 1e-10


def test_tilde_u_rotates_z_onto_axis(rng):
    for _ in range(20):
        n = random_axis(rng)
        t = tilde_u(n)
        ndots = n[0] * SX + n[1] * SY + n[2] * SZ
        assert max_abs(t @ SZ @ dag(t) - ndots) < 1e-12
    assert max_abs(tilde_u((0, 0, 1)) - np.eye(2)) < 1e-15


@pytest.mark.parametrize("s,q", GRID)
def test_theta2_drops_out_for_diagonal_inputs(rng, s, q):
    x = rng.uniform()
    rho = DensityMatrix(np.diag([x, 1 - x]), FactorLayout((2,), ("M",)))
    outs = [
        apply_channel(kraus_from_dilation(collision_unitary(CollisionParams.from_strength(s, t2)), qubit_thermal(q)), rho, "M").matrix
        for t2 in (0.0, 0.4, 1.3, 2.9)
    ]
    assert all(max_abs(o - outs[0]) < 1e-12 for o in outs[1:])


def test_theta2_does_change_coherent_inputs():
    # the zz phase acts on off-diagonal terms, so diagonal inputs are essential above
    rho = DensityMatrix(np.full((2, 2), 0.5), FactorLayout((2,), ("M",)))
    a = apply_channel(kraus_from_dilation(collision_unitary(CollisionParams.from_strength(0.5, 0.0)), qubit_thermal(0.75)), rho, "M")
    b = apply_channel(kraus_from_dilation(collision_unitary(CollisionParams.from_strength(0.5, 1.0)), qubit_thermal(0.75)), rho, "M")
    assert max_abs(a.matrix - b.matrix) > 1e-3


@pytest.mark.parametrize("s,q", GRID)
def test_second_law_sampling(rng, s, q):
    r = is_gibbs_preserving(thermal_qubit_channel(s, q), qubit_thermal(q), samples=1000, rng=rng, rank=1)
    assert r.ok and r.residuals["max_entropy_increase"] <= 1e-9


def test_gibbs_check_fails_for_wrong_temperature():
    assert not is_gibbs_preserving(thermal_qubit_channel(0.6, 0.9), qubit_thermal(0.6))


def test_rotated_channel_preserves_rotated_gibbs_state(rng):
    axis = random_axis(rng)
    ch = rotate_channel(thermal_qubit_channel(0.7, 0.8), tilde_u(axis))
    beta = 0.5 * math.log(0.8 / 0.2)
    tau = thermal_state(system_hamiltonian(axis), beta).matrix
    assert is_cptp(ch) and is_gibbs_preserving(ch, tau)


def test_partial_cnot_is_thermal_looking_but_not_energy_conserving():
    # the induced channel only dephases, so every diagonal state is a fixed point
    for s in (0.3, 0.8, 1.0):
        ch = partial_cnot_channel(s)
        assert is_cptp(ch)
        for q in (0.5, 0.9):
            assert is_gibbs_preserving(ch, qubit_thermal(q))
        assert not is_energy_conserving(partial_cnot_unitary(s), SZ, SZ)


def test_perturbed_kraus_fails_cptp():
    ops = list(thermal_qubit_channel(0.5, 0.75).kraus_ops)
    ops[0] = ops[0] + 1e-3
    r = is_cptp(KrausChannel(tuple(ops)))
    assert not r and r.residuals["completeness"] > 1e-4


def test_choi_of_identity():
    omega = np.array([1, 0, 0, 1], dtype=complex)
    assert max_abs(identity_channel(2).choi() - np.outer(omega, omega)) < 1e-15


def test_compose_and_apply_channel(rng):
    c1, c2 = thermal_qubit_channel(0.4, 0.9), partial_cnot_channel(0.6)
    rho = random_state(2, rng)
    assert max_abs(compose(c2, c1)(rho) - c2(c1(rho))) < 1e-14
    a, m = random_state(3, rng), random_state(2, rng)
    am = DensityMatrix(kron(a, m), FactorLayout((3, 2), ("A", "M")))
    out = apply_channel(c1, am, "M")
    assert max_abs(out.matrix - kron(a, c1(m))) < 1e-14


def test_channel_construction_errors():
    with pytest.raises(ChannelError):
        KrausChannel(())
    with pytest.raises(ChannelError):
        KrausChannel((np.eye(2), np.eye(3)))
    with pytest.raises(ChannelError):
        thermal_qubit_channel(0.5, 0.5)(np.eye(3) / 3)
    with pytest.raises(ValueError):
        thermal_qubit_channel(1.2, 0.5)
    with pytest.raises(ValueError):
        thermal_qubit_channel(0.5, 0.2)
    with pytest.raises(ChannelError):
        kraus_from_dilation(np.ones((4, 4)), qubit_thermal(0.5))
