"""
Sweeps, figure tables and config files.

Everything the command line does is a thin layer over these calls.
"""
import tempfile
from pathlib import Path

from switchtherm import sweep, verify

out = Path(tempfile.mkdtemp())

cfg = sweep.parse_config("""
# cold bath, switch fully on and off
s = 0:1:0.25
lambda = 0, 1
q = 1
""")
rows = sweep.run_sweep(sweep.grid_from_config(cfg), out / "sweep.csv", jobs=2)
print((out / "sweep.csv").read_text())

for fig in ("fig2", "figA1", "figA2"):
    path = sweep.figure(fig, out)
    print(fig, "->", path, sum(1 for _ in open(path)) - 1, "rows")

verify.report(verify.run_checks(only=["cptp", "swapback"]))
