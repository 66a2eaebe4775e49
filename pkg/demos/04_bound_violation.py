"""
A channel that looks thermal but is not energy conserving.

The partial CNOT leaves every diagonal state alone, so it passes the
Gibbs-preservation test. Its dilation does not commute with the total
energy, and switched with a thermal channel it carries more information than
the bound allows.
"""
import math

from switchtherm.channels import (
    is_cptp,
    is_energy_conserving,
    is_gibbs_preserving,
    partial_cnot_channel,
    partial_cnot_unitary,
    thermal_qubit_channel,
)
from switchtherm.infobound import achieved_information, bound_theorem1
from switchtherm.matcore import SZ
from switchtherm.states import qubit_thermal
from switchtherm.switch import ScenarioParams, switch_action

LN2 = math.log(2)
q = 0.5

cnot = partial_cnot_channel(0.8)
print("CPTP:", bool(is_cptp(cnot)), " Gibbs preserving:", bool(is_gibbs_preserving(cnot, qubit_thermal(q))))
print("energy conserving:", is_energy_conserving(partial_cnot_unitary(0.8), SZ, SZ))

print("\n s    achieved  bound   excess (bits)")
for s in [i / 10 for i in range(1, 11)]:
    params = ScenarioParams(s=s, q=q)
    out = switch_action(partial_cnot_channel(s), thermal_qubit_channel(s, q), params.control.matrix(), params.input_am())
    got = achieved_information(out) / LN2
    bound = bound_theorem1(s, 1.0, q, 0.5, params.rho_a0, params.rho_a1).bound_value / LN2
    print(f"{s:4.1f}  {got:8.4f}  {bound:6.4f}  {got - bound:+.4f}")
