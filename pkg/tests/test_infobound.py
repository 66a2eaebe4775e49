import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchtherm.infobound import (
    BoundDomainError,
    _clamp,
    achieved_information,
    bound_infinite_temperature,
    bound_theorem1,
    bound_zero_temperature,
    conditional_mutual_information,
    fcoh_floor,
    input_state,
    mutual_information,
    product_mixture_dpi_check,
)
from switchtherm.matcore import KET0, KET1, FactorLayout, kron, proj
from switchtherm.states import DensityMatrix, control_mixed, free_energy_of_coherence, random_state
from switchtherm.matcore import SZ
from switchtherm.switch import ControlState, ScenarioParams, apply_switch

LN2 = math.log(2)
R0, R1 = proj(KET0), proj(KET1)


def shannon(p):
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def classical_mi(joint):
    joint = np.asarray(joint, dtype=float)
    return shannon(joint.sum(1)) + shannon(joint.sum(0)) - shannon(joint)


def test_mi_of_product_is_zero(rng):
    rho = DensityMatrix(kron(random_state(2, rng), random_state(3, rng)), FactorLayout((2, 3), ("A", "B")))
    assert abs(mutual_information(rho, ["A"], ["B"])) < 1e-12


def test_mi_of_bell_state_is_two_bits():
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho = DensityMatrix(proj(bell), FactorLayout((2, 2), ("A", "B")))
    assert mutual_information(rho, ["A"], ["B"], base=2) == pytest.approx(2.0, abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
@settings(max_examples=40, deadline=None)
def test_input_state_mi_matches_classical_joint(p, a0, a1):
    r0, r1 = np.diag([a0, 1 - a0]), np.diag([a1, 1 - a1])
    rho = input_state(p, r0, r1)
    joint = np.array([[p * a0, (1 - p) * a1], [p * (1 - a0), (1 - p) * (1 - a1)]])
    assert mutual_information(rho, ["A"], ["M"]) == pytest.approx(classical_mi(joint), abs=1e-10)


def test_default_input_carries_one_bit():
    assert mutual_information(input_state(0.5, R0, R1), ["A"], ["M"], base=2) == pytest.approx(1.0, abs=1e-12)


def test_overlapping_parts_rejected():
    rho = DensityMatrix(np.eye(4) / 4, FactorLayout((2, 2), ("A", "B")))
    with pytest.raises(ValueError):
        mutual_information(rho, ["A"], ["A", "B"])
    with pytest.raises(ValueError):
        conditional_mutual_information(rho, ["A"], ["B"], ["B"])


def test_cmi_of_product_is_zero(rng):
    lay = FactorLayout((2, 2, 2), ("A", "B", "C"))
    rho = DensityMatrix(kron(*(random_state(2, rng) for _ in range(3))), lay)
    assert abs(conditional_mutual_information(rho, ["A"], ["B"], ["C"])) < 1e-12


def test_cmi_of_classically_conditioned_state(rng):
    # rho = sum_c w_c |c><c| (x) rho_AB^c gives I(A:B|C) = sum_c w_c I(A:B)_c
    w = [0.3, 0.7]
    parts = [random_state(4, rng) for _ in w]
    rho = sum(wc * kron(proj(np.eye(2)[c]), parts[c]) for c, wc in enumerate(w))
    full = DensityMatrix(rho, FactorLayout((2, 2, 2), ("C", "A", "B")))
    expected = sum(wc * mutual_information(DensityMatrix(parts[c], FactorLayout((2, 2), ("A", "B"))), ["A"], ["B"]) for c, wc in enumerate(w))
    assert conditional_mutual_information(full, ["A"], ["B"], ["C"]) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("s,q,lam,p", list(product((0.0, 0.5, 1.0), (0.5, 1.0), (0.0, 1.0), (0.25, 0.5))))
def test_chain_rule_on_switched_states(s, q, lam, p):
    out = apply_switch(ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p))
    lhs = mutual_information(out, ["A"], ["C", "M"])
    rhs = mutual_information(out, ["A"], ["C"]) + conditional_mutual_information(out, ["A"], ["M"], ["C"])
    assert abs(lhs - rhs) < 1e-10
    # discarding C cannot raise the information
    assert mutual_information(out, ["A"], ["M"]) <= lhs + 1e-10


def test_product_mixture_shrinks_information(rng):
    lay = FactorLayout((2, 2), ("A", "B"))
    for _ in range(200):
        rho = DensityMatrix(random_state(4, rng), lay)
        lhs, rhs = product_mixture_dpi_check(rho, random_state(2, rng), rng.uniform())
        assert lhs <= rhs + 1e-10


def test_product_mixture_edge_weights(rng):
    rho = DensityMatrix(random_state(4, rng), FactorLayout((2, 2), ("A", "B")))
    lhs, rhs = product_mixture_dpi_check(rho, random_state(2, rng), 1.0)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    lhs, rhs = product_mixture_dpi_check(rho, random_state(2, rng), 0.0)
    assert abs(lhs) < 1e-12 and rhs == 0
    with pytest.raises(ValueError):
        product_mixture_dpi_check(rho, np.eye(2) / 2, 1.5)


@pytest.mark.parametrize("s,lam", list(product((0.0, 0.3, 0.6, 1.0), (0.0, 0.5, 1.0))))
def test_bound_at_infinite_temperature(s, lam):
    b = bound_theorem1(s, lam, 0.5, 0.5, R0, R1)
    c4 = (1 - s * s) ** 2
    assert b.bound_value == pytest.approx((c4 + lam * s ** 4 / 4) * b.i_in, abs=1e-12)
    assert abs(b.g_term) < 1e-12
    if lam > 0:
        assert b.p0 == pytest.approx(1.0) and (b.p1 is None or b.p1 == pytest.approx(1.0))


def test_bound_at_full_strength_infinite_temperature_is_quarter():
    b = bound_theorem1(1.0, 1.0, 0.5, 0.5, R0, R1)
    assert b.bound_value == pytest.approx(b.i_in / 4, abs=1e-15)
    off = bound_theorem1(1.0, 0.0, 0.5, 0.5, R0, R1)
    assert b.bound_value - off.bound_value == pytest.approx(b.i_in / 4, abs=1e-12)


@given(st.floats(0, 1), st.floats(0.5, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_bound_is_tight_without_interaction(lam, q, p, seed):
    rng = np.random.default_rng(seed)
    b = bound_theorem1(0.0, lam, q, p, random_state(2, rng), random_state(2, rng))
    assert b.bound_value == pytest.approx(b.i_in, abs=1e-12)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_bound_special_cases_agree(s, lam, p, seed):
    rng = np.random.default_rng(seed)
    r0, r1 = random_state(2, rng), random_state(2, rng)
    half = bound_theorem1(s, lam, 0.5, p, r0, r1)
    assert half.bound_value == pytest.approx(bound_infinite_temperature(s, lam, half.i_in), abs=1e-12)
    zero = bound_theorem1(s, lam, 1.0, p, r0, r1)
    assert zero.bound_value == pytest.approx(bound_zero_temperature(s, lam, p, r0, r1), abs=1e-12)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.5, 1), st.floats(0, 1))
@settings(max_examples=100, deadline=None)
def test_bound_result_invariants(s, lam, q, p):
    b = bound_theorem1(s, lam, q, p, R0, R1)
    assert b.P0 + b.P1 == pytest.approx(lam, abs=1e-12)
    assert b.P0 >= -1e-12 and b.P1 >= -1e-12
    for w in (b.p0, b.p1):
        assert w is None or 0.0 <= w <= 1.0
    total = b.coefficient * b.i_in + (b.P0 * b.I_AD0 if b.p0 is not None else 0) + (b.P1 * b.I_AD1 if b.p1 is not None else 0)
    assert b.bound_value == pytest.approx(total, abs=1e-12)
    assert b.g_term >= -1e-12


def test_degenerate_weights_are_dropped():
    b = bound_theorem1(0.7, 0.0, 0.8, 0.5, R0, R1)
    assert b.p0 is None and b.p1 is None and b.g_term == 0.0
    b = bound_theorem1(0.0, 1.0, 0.8, 0.5, R0, R1)
    assert b.p1 is None and b.p0 == pytest.approx(1.0)


def test_clamp():
    assert _clamp(-5e-10, "x") == 0.0 and _clamp(1 + 5e-10, "x") == 1.0
    with pytest.raises(BoundDomainError):
        _clamp(1.01, "x")


def test_bound_domain_errors():
    with pytest.raises(ValueError):
        bound_theorem1(1.1, 1, 0.5, 0.5, R0, R1)
    with pytest.raises(ValueError):
        bound_theorem1(0.5, 1, 0.4, 0.5, R0, R1)
    with pytest.raises(ValueError):
        bound_theorem1(0.5, -0.1, 0.5, 0.5, R0, R1)


@pytest.mark.parametrize("s,lam,q,p", list(product([i / 10 for i in range(11)], (0.0, 0.5, 1.0), (0.5, 0.75, 1.0), (0.25, 0.5))))
def test_bound_dominates_simulation(s, lam, q, p):
    params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p)
    got = achieved_information(apply_switch(params)) / LN2
    assert got <= bound_theorem1(s, lam, q, p, R0, R1).bound_value / LN2 + 1e-9


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.5, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_bound_dominates_simulation_for_mixed_records(s, lam, q, p, seed):
    rng = np.random.default_rng(seed)
    params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p,
                            rho_a0=random_state(2, rng), rho_a1=random_state(2, rng))
    got = achieved_information(apply_switch(params))
    assert got <= bound_theorem1(s, lam, q, p, params.rho_a0, params.rho_a1).bound_value + 1e-9


def test_fcoh_floor_values():
    assert fcoh_floor(0.0) == 0.0
    assert fcoh_floor(1.0) == pytest.approx(1 / math.log(16))
    assert fcoh_floor(1.0, kT=2.0) == pytest.approx(2 / math.log(16))
    with pytest.raises(ValueError):
        fcoh_floor(1.1)


@pytest.mark.parametrize("lam", [i / 20 for i in range(21)])
def test_fcoh_floor_below_coherence(lam):
    assert fcoh_floor(lam) <= free_energy_of_coherence(control_mixed(lam), -SZ) + 1e-15
