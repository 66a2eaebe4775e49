"""Named numerical self-checks across the package.

Every check reports a residual and the tolerance it must stay within. Checks
are grouped; ``run_checks(only=...)`` selects groups by name.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import channels as ch
from .infobound import (
    achieved_information,
    bound_infinite_temperature,
    bound_theorem1,
    bound_zero_temperature,
    conditional_mutual_information,
    fcoh_floor,
    mutual_information,
    product_mixture_dpi_check,
)
from .matcore import (
    SZ,
    FactorLayout,
    dag,
    eigh,
    embed,
    herm_func,
    kron,
    max_abs,
    partial_trace,
    proj,
    KET0,
    KET1,
)
from .states import (
    DensityMatrix,
    control_mixed,
    dephase,
    free_energy,
    free_energy_of_coherence,
    qubit_thermal,
    random_hermitian,
    random_state,
    relative_entropy,
    thermal_state,
    von_neumann_entropy,
)
from .switch import (
    ControlState,
    ScenarioParams,
    apply_switch,
    closed_form_final_state,
    dilation_unitary_L,
    simulate_full,
    swap_and_trace,
    switch_action,
    verify_theorem2,
)

LN2 = math.log(2)
DEFAULT_SEED = 42
SEED_ENV = "SWITCHTHERM_SEED"

CHANNEL_GRID = tuple(product((0.0, 0.25, 0.5, 0.75, 1.0), (0.5, 0.75, 1.0)))
SWITCH_GRID = tuple(product((0.0, 0.25, 0.5, 0.75, 1.0), (0.5, 0.75, 1.0), (0.0, 0.5, 1.0), (0.25, 0.5)))
BOUND_GRID = tuple(product([i / 10 for i in range(11)], (0.0, 0.5, 1.0), (0.5, 0.75, 1.0), (0.25, 0.5)))


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    residual: float
    tol: float
    # tunable checks are identity residuals whose tolerance ``--tol`` may override
    tunable: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)  # NaN fails

    def with_tol(self, tol: Optional[float]) -> "Check":
        if tol is None or not self.tunable:
            return self
        return Check(self.group, self.name, self.residual, tol, self.tunable)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.group:<11} {self.name:<44} residual={self.residual:.3e}  tol={self.tol:.1e}"


def seed_from_env() -> int:
    raw = os.environ.get(SEED_ENV)
    return DEFAULT_SEED if raw in (None, "") else int(raw)


def _worst(values: Iterable[float]) -> float:
    return max(values, default=0.0)


def _unit_vector(rng) -> tuple:
    v = rng.normal(size=3)
    return tuple(v / np.linalg.norm(v))


# -- groups -------------------------------------------------------------------

def check_matcore(rng) -> list[Check]:
    herm = [random_hermitian(d, rng) for d in (2, 3, 4, 8, 16, 32)]
    a, b, c = (random_hermitian(2, rng) for _ in range(3))
    assoc = max_abs(kron(kron(a, b), c) - kron(a, kron(b, c)))
    lay = FactorLayout((2, 4), ("A", "B"))
    pt = _worst(
        max_abs(partial_trace(kron(x, y), lay, ["A"]) - x * np.trace(y))
        for x, y in ((random_hermitian(2, rng), random_hermitian(4, rng)) for _ in range(20))
    )
    recon = _worst(max_abs(h - (v * w) @ dag(v)) for h in herm for w, v in [eigh(h)])
    ident = _worst(max_abs(herm_func(h, lambda w: w) - h) for h in herm)
    return [
        Check("matcore", "kron associativity", assoc, 1e-12),
        Check("matcore", "partial trace of product", pt, 1e-12),
        Check("matcore", "eigh reconstruction", recon, 1e-10),
        Check("matcore", "herm_func identity", ident, 1e-12),
    ]


def check_states(rng, samples: int = 1000) -> list[Check]:
    fixed = []
    for d in (2, 3, 4):
        h = random_hermitian(d, rng)
        for beta in (0.0, 0.7, 3.0, math.inf):
            t = thermal_state(h, beta)
            fixed.append(max_abs(dephase(t, h).matrix - t.matrix))
    base = _worst(
        abs(von_neumann_entropy(r, 2) - von_neumann_entropy(r) / LN2)
        for r in (random_state(d, rng) for d in (2, 3, 4, 8) for _ in range(10))
    )
    h = -SZ
    ident, minimal = [], []
    for beta in (0.5, 1.0, 2.0, 5.0, 50.0):
        tau = thermal_state(h, beta)
        kT = 1.0 / beta
        for _ in range(samples):
            rho = random_state(2, rng)
            df = (free_energy(rho, h, kT) - free_energy(tau, h, kT)) / kT
            if beta < 10:
                # at beta=50 tau's excited weight is below the clip, so S(rho||tau) is inf
                ident.append(abs(relative_entropy(rho, tau) - df))
            minimal.append(free_energy(tau, h, kT) - free_energy(rho, h, kT))
    # at beta = 0 minimising F is maximising entropy
    s_max = von_neumann_entropy(thermal_state(h, 0.0))
    minimal += [von_neumann_entropy(random_state(2, rng)) - s_max for _ in range(samples)]
    return [
        Check("states", "thermal state is dephasing-invariant", _worst(fixed), 1e-12),
        Check("states", "entropy base conversion", base, 1e-12),
        Check("states", "relative entropy = free energy gap / kT", _worst(ident), 1e-10),
        Check("states", "thermal state minimises free energy", max(0.0, _worst(minimal)), 1e-12),
    ]


def check_cptp(rng, chans: Optional[Sequence] = None) -> list[Check]:
    """Completeness and Choi positivity; ``chans`` defaults to the thermal grid."""
    if chans is None:
        chans = [(f"s={s} q={q}", ch.thermal_qubit_channel(s, q)) for s, q in CHANNEL_GRID]
        chans.append(("partial CNOT s=0.7", ch.partial_cnot_channel(0.7)))
    comp = _worst(c.completeness_residual() for _, c in chans)
    neg = _worst(ch.is_cptp(c).residuals["choi_negativity"] for _, c in chans)
    return [
        Check("cptp", "Kraus completeness", comp, ch.COMPLETENESS_TOL),
        Check("cptp", "Choi positivity", neg, ch.CHOI_TOL),
    ]


def check_gibbs(rng, samples: int = 1000) -> list[Check]:
    fixed, mono = [], []
    for s, q in CHANNEL_GRID:
        c = ch.thermal_qubit_channel(s, q)
        r = ch.is_gibbs_preserving(c, qubit_thermal(q), samples=samples, rng=rng, rank=1)
        fixed.append(r.residuals["fixed_point"])
        mono.append(max(0.0, r.residuals["max_entropy_increase"]))
    return [
        Check("gibbs", "thermal state is a fixed point", _worst(fixed), 1e-9),
        Check("gibbs", "relative entropy to tau never grows", _worst(mono), 1e-9),
    ]


def check_energy(rng, draws: int = 100) -> list[Check]:
    h_c = -SZ
    coll, big = [], []
    for _ in range(draws):
        axis = _unit_vector(rng)
        p = ch.CollisionParams(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi), axis)
        u = ch.collision_unitary(p)
        h_m = ch.system_hamiltonian(axis)
        coll.append(ch.is_energy_conserving(u, h_m, -SZ).residuals["commutator"])
        L = dilation_unitary_L(u, u)
        lay = FactorLayout((2, 2, 2, 2), ("C", "M", "E1", "E2"))
        total = sum(embed(h, lay, [k]) for h, k in ((h_c, "C"), (h_m, "M"), (-SZ, "E1"), (-SZ, "E2")))
        big.append(max_abs(L @ total - total @ L))
    return [
        Check("energy", "collision unitary conserves energy", _worst(coll), 1e-10),
        Check("energy", "switched dilation conserves energy", _worst(big), 1e-10),
    ]


def _nonzero(ops):
    return [k for k in ops if max_abs(k) > 1e-14]


def check_kraus(rng) -> list[Check]:
    worst = 0.0
    for s, q in CHANNEL_GRID:
        a = _nonzero(ch.kraus_from_dilation(ch.collision_unitary(ch.CollisionParams.from_strength(s)), qubit_thermal(q)).kraus_ops)
        b = _nonzero(ch.thermal_qubit_channel(s, q).kraus_ops)
        if len(a) != len(b):
            worst = math.inf
            break
        worst = max(worst, _worst(max_abs(ch.canonical_phase(x) - ch.canonical_phase(y)) for x, y in zip(a, b)))
    # theta2 drops out for diagonal inputs and a diagonal environment
    theta = 0.0
    for s, q in CHANNEL_GRID:
        x = rng.uniform()
        rho = DensityMatrix(np.diag([x, 1 - x]), FactorLayout((2,), ("M",)))
        outs = [
            ch.apply_channel(
                ch.kraus_from_dilation(ch.collision_unitary(ch.CollisionParams.from_strength(s, t2)), qubit_thermal(q)),
                rho, "M",
            ).matrix
            for t2 in (0.0, 0.4, 1.3, 2.9)
        ]
        theta = max(theta, _worst(max_abs(o - outs[0]) for o in outs[1:]))
    return [
        Check("kraus", "dilation Kraus match closed form", worst, 1e-12),
        Check("kraus", "theta2 independence on diagonal inputs", theta, 1e-12),
    ]


def check_switch(rng) -> list[Check]:
    paths, bystander, marginal = [], [], []
    for s, q, lam, p in SWITCH_GRID:
        params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p)
        a = apply_switch(params).matrix
        paths.append(max(max_abs(a - simulate_full(params).matrix), max_abs(a - closed_form_final_state(params).matrix)))
        out = DensityMatrix(a, FactorLayout((2, 2, 2), ("C", "A", "M")))
        bystander.append(max_abs(out.ptrace(["A"]).matrix - params.rho_a()))
        for alpha in (0.0, 1.0):
            diag_ctl = params.replace(control=ControlState.pure(alpha))
            got = apply_switch(diag_ctl).ptrace(["C"]).matrix
            marginal.append(max_abs(got - diag_ctl.control.matrix()))
    return [
        Check("switch", "three simulation paths agree", _worst(paths), 1e-11),
        Check("switch", "record A is untouched", _worst(bystander), 1e-12),
        Check("switch", "diagonal control is unchanged", _worst(marginal), 1e-12),
    ]


def _control_samples(rng, n: int = 20) -> list[np.ndarray]:
    out = [ControlState.mixed(x).matrix() for x in (0.0, 0.3, 0.7, 1.0)]
    out += [ControlState.pure(x).matrix() for x in (0.0, 0.25, 0.5, 1.0)]
    out += [random_state(2, rng, rank=1) for _ in range(6)]
    out += [random_state(2, rng) for _ in range(n - len(out))]
    return out


def check_fixedpoint(rng) -> list[Check]:
    worst = 0.0
    for s, q in CHANNEL_GRID:
        c = ch.thermal_qubit_channel(s, q)
        for sigma in _control_samples(rng):
            worst = max(worst, verify_theorem2(c, c, qubit_thermal(q), sigma))
    return [Check("fixedpoint", "switched thermal channels keep tau", worst, 1e-10)]


def check_swapback(rng) -> list[Check]:
    c = ch.thermal_qubit_channel(1.0, 0.5)
    tau = DensityMatrix(qubit_thermal(0.5), FactorLayout((2,), ("M",)))
    out = swap_and_trace(switch_action(c, c, control_mixed(1.0), tau))
    w = np.sort(np.linalg.eigvalsh(out.matrix))
    spec_err = max_abs(w - np.array([3 / 8, 5 / 8]))
    dist = 0.5 * np.abs(np.linalg.eigvalsh(out.matrix - np.eye(2) / 2)).sum()
    return [
        Check("swapback", "spectrum {3/8, 5/8}", spec_err, 1e-12),
        Check("swapback", "trace distance to I/2 is 1/8", abs(dist - 1 / 8), 1e-12),
    ]


def check_bound(rng) -> list[Check]:
    dom, tight, dpi = [], [], []
    for s, lam, q, p in BOUND_GRID:
        params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p)
        out = apply_switch(params)
        got = achieved_information(out) / LN2
        b = bound_theorem1(s, lam, q, p, params.rho_a0, params.rho_a1).bound_value / LN2
        dom.append(got - b)
        if s == 0:
            tight.append(abs(got - b))
        dpi.append(mutual_information(out, ["A"], ["M"]) - achieved_information(out))
    special = []
    for s, lam, _, p in BOUND_GRID:
        r0, r1 = random_state(2, rng), random_state(2, rng)
        half = bound_theorem1(s, lam, 0.5, p, r0, r1)
        special.append(abs(half.bound_value - bound_infinite_temperature(s, lam, half.i_in)))
        zero = bound_theorem1(s, lam, 1.0, p, r0, r1)
        special.append(abs(zero.bound_value - bound_zero_temperature(s, lam, p, r0, r1)))
    r0, r1 = proj(KET0), proj(KET1)
    on = bound_theorem1(1.0, 1.0, 0.5, 0.5, r0, r1)
    off = bound_theorem1(1.0, 0.0, 0.5, 0.5, r0, r1)
    gap = abs(on.bound_value - off.bound_value - on.i_in / 4)
    return [
        Check("bound", "achieved MI never exceeds the bound (bits)", max(0.0, _worst(dom)), 1e-9),
        Check("bound", "bound is tight at s=0 (bits)", _worst(tight), 1e-9),
        Check("bound", "q=1/2 and q=1 closed forms", _worst(special), 1e-12),
        Check("bound", "switch-on gap is I_in/4 at s=1, q=1/2", gap, 1e-12),
        Check("bound", "discarding C cannot raise MI", max(0.0, _worst(dpi)), 1e-10),
    ]


def check_violation(rng) -> list[Check]:
    """The partial CNOT is Gibbs preserving at q=1/2 yet not energy conserving,
    and switching it breaks the bound."""
    excess = []
    for s in [i / 10 for i in range(1, 11)]:
        params = ScenarioParams(s=s, q=0.5, control=ControlState.mixed(1.0))
        out = switch_action(ch.partial_cnot_channel(s), ch.thermal_qubit_channel(s, 0.5), params.control.matrix(), params.input_am())
        b = bound_theorem1(s, 1.0, 0.5, 0.5, params.rho_a0, params.rho_a1).bound_value
        excess.append((achieved_information(out) - b) / LN2)
    cnot = ch.partial_cnot_channel(0.8)
    comm = ch.is_energy_conserving(ch.partial_cnot_unitary(0.8), SZ, SZ).residuals["commutator"]
    gibbs = ch.is_gibbs_preserving(cnot, qubit_thermal(0.5), samples=200, rng=rng)
    return [
        # residual <= 0 means some s beats the bound by more than 0.01 bits
        Check("violation", "partial CNOT beats the bound by > 0.01 bit", 0.01 - max(excess), 0.0, tunable=False),
        Check("violation", "partial CNOT dilation breaks energy", 1e-10 - comm, 0.0, tunable=False),
        Check("violation", "partial CNOT is CPTP", cnot.completeness_residual(), ch.COMPLETENESS_TOL),
        Check("violation", "partial CNOT is Gibbs preserving", max(gibbs.residuals["fixed_point"], gibbs.residuals["max_entropy_increase"], 0.0), 1e-9),
    ]


def check_fcoh(rng) -> list[Check]:
    h_c = -SZ
    gaps = [fcoh_floor(lam) - free_energy_of_coherence(control_mixed(lam), h_c) for lam in [i / 20 for i in range(21)]]
    top = abs(free_energy_of_coherence(control_mixed(1.0), h_c) - LN2)
    return [
        Check("fcoh", "coherence free energy above its floor", max(0.0, _worst(gaps)), 0.0, tunable=False),
        Check("fcoh", "F_coh of |+> is kT ln 2", top, 1e-10),
    ]


def check_identities(rng, samples: int = 200) -> list[Check]:
    chain = []
    for s, q, lam, p in SWITCH_GRID:
        out = apply_switch(ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p))
        lhs = mutual_information(out, ["A"], ["C", "M"])
        rhs = mutual_information(out, ["A"], ["C"]) + conditional_mutual_information(out, ["A"], ["M"], ["C"])
        chain.append(abs(lhs - rhs))
    dpi = []
    lay = FactorLayout((2, 2), ("A", "B"))
    for _ in range(samples):
        rho = DensityMatrix(random_state(4, rng), lay)
        lhs, rhs = product_mixture_dpi_check(rho, random_state(2, rng), rng.uniform())
        dpi.append(lhs - rhs)
    return [
        Check("identities", "MI chain rule", _worst(chain), 1e-10),
        Check("identities", "mixing with a product state shrinks MI", max(0.0, _worst(dpi)), 1e-10),
    ]


GROUPS: dict[str, Callable] = {
    "matcore": check_matcore,
    "states": check_states,
    "cptp": check_cptp,
    "gibbs": check_gibbs,
    "energy": check_energy,
    "kraus": check_kraus,
    "switch": check_switch,
    "fixedpoint": check_fixedpoint,
    "swapback": check_swapback,
    "bound": check_bound,
    "violation": check_violation,
    "fcoh": check_fcoh,
    "identities": check_identities,
}


def run_checks(only: Optional[Sequence[str]] = None, tol: Optional[float] = None, seed: Optional[int] = None) -> list[Check]:
    names = list(GROUPS) if not only else list(only)
    unknown = [n for n in names if n not in GROUPS]
    if unknown:
        raise ValueError(f"unknown check group(s) {unknown}; choose from {sorted(GROUPS)}")
    seed = seed_from_env() if seed is None else seed
    results = []
    for name in names:
        # one stream per group so filtering does not shift the others
        rng = np.random.default_rng([seed, list(GROUPS).index(name)])
        results += [c.with_tol(tol) for c in GROUPS[name](rng)]
    return results


def report(results: Sequence[Check], out=None) -> int:
    """Print one line per check; return the process exit status."""
    import sys

    out = sys.stdout if out is None else out
    for c in results:
        print(c.line(), file=out)
    failed = sum(not c.passed for c in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return 1 if failed else 0
