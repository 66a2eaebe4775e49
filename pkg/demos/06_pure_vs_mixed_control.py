"""
Mixed versus pure control states.

A mixed control lambda|+><+| + (1-lambda)|0><0| and a pure control
sqrt(alpha)|0> + sqrt(1-alpha)|1> agree at the ends (alpha = 1/2 with
lambda = 1, alpha = 0 with lambda = 0). In between they are plotted against
lambda = 2 alpha. The agreement is close for weak thermalisation and
loosens as s grows.
"""
import math

from switchtherm.infobound import achieved_information
from switchtherm.switch import ControlState, ScenarioParams, apply_switch

LN2 = math.log(2)


def mi(s, ctl):
    return achieved_information(apply_switch(ScenarioParams(s=s, q=1.0, control=ctl))) / LN2


for s in (0.3, 0.6, 1.0):
    print(f"s = {s}")
    print("  lambda  mixed   pure(alpha=lambda/2)")
    for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
        print(f"  {lam:5.2f}  {mi(s, ControlState.mixed(lam)):.4f}  {mi(s, ControlState.pure(lam / 2)):.4f}")
