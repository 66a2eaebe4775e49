"""
The control's coherence is the resource.

The switch keeps tau fixed when both channels do, so no free energy comes
from the message side. What the control brings is free energy locked in
coherence between its energy levels.
"""
import math

import numpy as np

from switchtherm.channels import thermal_qubit_channel
from switchtherm.infobound import fcoh_floor
from switchtherm.matcore import SZ, FactorLayout
from switchtherm.states import DensityMatrix, control_mixed, free_energy_of_coherence, qubit_thermal
from switchtherm.switch import swap_and_trace, switch_action, verify_theorem2

H_C = -SZ
print("lambda  F_coh/kT  floor")
for lam in np.linspace(0, 1, 6):
    print(f"{lam:5.2f}  {free_energy_of_coherence(control_mixed(lam), H_C):8.4f}  {fcoh_floor(lam):.4f}")
print("ln 2 =", round(math.log(2), 4))

ch = thermal_qubit_channel(0.7, 0.8)
print("\nswitched channels keep tau, residual:", verify_theorem2(ch, ch, qubit_thermal(0.8), control_mixed(1.0)))

# At infinite temperature and full strength the control leaves biased
full = thermal_qubit_channel(1.0, 0.5)
out = switch_action(full, full, control_mixed(1.0), DensityMatrix(qubit_thermal(0.5), FactorLayout((2,), ("M",))))
moved = swap_and_trace(out)
print("swap C into M, spectrum:", np.linalg.eigvalsh(moved.matrix).round(6))
