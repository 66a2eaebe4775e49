"""
How much of a one-bit message survives the switched thermal channels.

The record A holds which basis state was sent through M. After the switch we
measure I(A:CM) and compare it with the thermodynamic upper bound.
"""
import math

from switchtherm.infobound import achieved_information, bound_theorem1
from switchtherm.switch import ControlState, ScenarioParams, apply_switch

LN2 = math.log(2)

print(" s    q     lambda  achieved  bound   (bits)")
for q in (0.5, 1.0):
    for lam in (0.0, 1.0):
        for s in (0.0, 0.5, 0.8, 1.0):
            params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam))
            got = achieved_information(apply_switch(params)) / LN2
            b = bound_theorem1(s, lam, q, params.p, params.rho_a0, params.rho_a1)
            print(f"{s:4.1f} {q:5.2f} {lam:6.1f}  {got:8.4f}  {b.bound_value / LN2:6.4f}")

# Components of the bound at one point
b = bound_theorem1(0.9, 1.0, 0.75, 0.5, params.rho_a0, params.rho_a1)
print("\ncoefficient", round(b.coefficient, 4), "I_in", round(b.i_in / LN2, 4), "bits")
print("P0, P1 =", round(b.P0, 4), round(b.P1, 4), " p0, p1 =", b.p0, b.p1)
print("ancilla term", round(b.g_term / LN2, 4), "bits")
