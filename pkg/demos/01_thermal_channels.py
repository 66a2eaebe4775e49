"""
Thermal qubit channels from a collision model.

A message qubit M meets one bath qubit E through a partial swap. Tracing out
E gives a four-operator Kraus channel that pulls M towards the bath state.
"""
import numpy as np

from switchtherm.channels import (
    CollisionParams,
    collision_unitary,
    is_cptp,
    is_energy_conserving,
    is_gibbs_preserving,
    kraus_from_dilation,
    thermal_qubit_channel,
)
from switchtherm.matcore import SZ
from switchtherm.states import q_from_beta, qubit_thermal, random_state, relative_entropy

np.set_printoptions(precision=4, suppress=True)

s, beta = 0.6, 0.8
q = q_from_beta(beta)
print(f"strength s={s}, beta={beta} -> ground population q={q:.4f}")

ch = thermal_qubit_channel(s, q)
for i, k in enumerate(ch.kraus_ops, 1):
    print(f"K{i} =\n{k}")

# The same channel, pulled out of the collision unitary
u = collision_unitary(CollisionParams.from_strength(s))
print("Kraus from dilation agrees:", np.allclose(kraus_from_dilation(u, qubit_thermal(q))(np.eye(2) / 2), ch(np.eye(2) / 2)))

print("CPTP:", is_cptp(ch).residuals)
print("Gibbs preserving:", is_gibbs_preserving(ch, qubit_thermal(q)).residuals)
print("energy conserving:", is_energy_conserving(u, -SZ, -SZ).residuals)

# Repeated collisions walk any state towards tau, never away from it
rng = np.random.default_rng(1)
rho = random_state(2, rng, rank=1)
tau = qubit_thermal(q)
for step in range(6):
    print(f"step {step}: D(rho||tau) = {relative_entropy(rho, tau):.5f}")
    rho = ch(rho)
