"""Mutual-information functionals and the thermodynamic capacity bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .matcore import FactorLayout, as_matrix, kron, proj
from .states import DensityMatrix, von_neumann_entropy

WEIGHT_EPS = 1e-12
CLAMP_TOL = 1e-9


class BoundDomainError(ValueError):
    """A conditional weight fell outside [0, 1] by more than round-off."""


def _entropy_of(rho: DensityMatrix, part: Iterable[str], base) -> float:
    part = list(part)
    if not part:
        return 0.0
    return von_neumann_entropy(rho.ptrace(part), base)


def _check_disjoint(*parts) -> list[set]:
    sets = [set(p) for p in parts]
    for i, a in enumerate(sets):
        for b in sets[i + 1 :]:
            if a & b:
                raise ValueError(f"parts overlap: {sorted(a & b)}")
    return sets


def mutual_information(rho: DensityMatrix, part_a, part_b, base="e") -> float:
    """``I(A:B) = S(A) + S(B) - S(AB)``; other factors are traced out first."""
    a, b = _check_disjoint(part_a, part_b)
    return (
        _entropy_of(rho, a, base)
        + _entropy_of(rho, b, base)
        - _entropy_of(rho, a | b, base)
    )


def conditional_mutual_information(rho: DensityMatrix, part_a, part_b, part_c, base="e") -> float:
    """``I(A:B|C) = S(AC) + S(BC) - S(C) - S(ABC)``."""
    a, b, c = _check_disjoint(part_a, part_b, part_c)
    return (
        _entropy_of(rho, a | c, base)
        + _entropy_of(rho, b | c, base)
        - _entropy_of(rho, c, base)
        - _entropy_of(rho, a | b | c, base)
    )


def product_mixture_dpi_check(rho_in: DensityMatrix, sigma_b, p: float, base="e") -> tuple[float, float]:
    """Compare ``I(A:B)`` of ``p rho_in + (1-p) rho_A (x) sigma_B`` against ``p I(A:B)_in``.

    ``rho_in`` must have a two-factor layout ``(A, B)``. Returns ``(lhs, rhs)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    la, lb = rho_in.layout.labels
    ra = rho_in.ptrace([la]).matrix
    fin = p * rho_in.matrix + (1 - p) * kron(ra, as_matrix(sigma_b))
    fin = DensityMatrix(fin, rho_in.layout)
    lhs = mutual_information(fin, [la], [lb], base)
    rhs = p * mutual_information(rho_in, [la], [lb], base)
    return lhs, rhs


def input_state(p: float, rho_a0, rho_a1) -> DensityMatrix:
    """The A (x) M input ensemble in the energy frame of M."""
    r0, r1 = as_matrix(rho_a0), as_matrix(rho_a1)
    m = p * kron(r0, proj([1, 0])) + (1 - p) * kron(r1, proj([0, 1]))
    return DensityMatrix(m, FactorLayout((r0.shape[0], 2), ("A", "M")))


def holevo_like(weight: float, rho_a, rho_k, base="e") -> float:
    """``S(w rho_A + (1-w) rho_k) - w S(rho_A) - (1-w) S(rho_k)``."""
    mix = weight * rho_a + (1 - weight) * rho_k
    return (
        von_neumann_entropy(mix, base)
        - weight * von_neumann_entropy(rho_a, base)
        - (1 - weight) * von_neumann_entropy(rho_k, base)
    )


def _clamp(x: float, name: str) -> float:
    if -CLAMP_TOL <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + CLAMP_TOL:
        return 1.0
    if not 0.0 <= x <= 1.0:
        raise BoundDomainError(f"{name}={x} outside [0, 1]")
    return x


@dataclass(frozen=True)
class BoundResult:
    """Value and components of the capacity bound.

    ``p0``/``p1`` are ``None`` when their weight ``P0``/``P1`` vanishes; the
    matching term then contributes nothing.
    """

    bound_value: float
    coefficient: float
    g_term: float
    i_in: float
    P0: float
    P1: float
    p0: Optional[float]
    p1: Optional[float]
    I_AD0: float
    I_AD1: float


def bound_theorem1(s: float, lam: float, q: float, p: float, rho_a0, rho_a1, base="e") -> BoundResult:
    """Upper bound on ``I(A:CM)`` after two switched energy-preserving thermal channels.

    ``coefficient * I(A:M_in) + P0 I(A:D0) + P1 I(A:D1)`` where the last two
    terms (together ``lam * G``) come from the virtual ancillas that record
    which control branch produced the output.
    """
    for name, v in (("s", s), ("lambda", lam), ("p", p)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    if not 0.5 <= q <= 1.0:
        raise ValueError(f"q={q} outside [1/2, 1]")
    r0, r1 = as_matrix(rho_a0), as_matrix(rho_a1)
    ra = p * r0 + (1 - p) * r1

    rin = input_state(p, r0, r1)
    i_in = mutual_information(rin, ["A"], ["M"], base)

    c2 = 1.0 - s * s
    s4 = s ** 4
    coefficient = c2 * c2 + lam * (q * q - q + 0.5) * s4

    leak = (1 - q * q) + (2 * q - 1) * (1 - p)
    P0 = lam * (1 - leak / 2 * s4)
    # lam - P0 written out, which avoids cancellation when s^4 is tiny
    P1 = lam * leak / 2 * s4

    p0 = p1 = None
    I_AD0 = I_AD1 = 0.0
    if P0 > WEIGHT_EPS:
        p0 = _clamp(lam * (1 + (q * q - 2 * q) * s4 / 2) / P0, "p0")
        I_AD0 = holevo_like(p0, ra, r0, base)
    if P1 > WEIGHT_EPS:
        p1 = _clamp((1 - q * q) / leak, "p1")
        I_AD1 = holevo_like(p1, ra, r1, base)
    g_term = (P0 * I_AD0 if p0 is not None else 0.0) + (P1 * I_AD1 if p1 is not None else 0.0)

    return BoundResult(
        bound_value=coefficient * i_in + g_term,
        coefficient=coefficient,
        g_term=g_term,
        i_in=i_in,
        P0=P0,
        P1=P1,
        p0=p0,
        p1=p1,
        I_AD0=I_AD0,
        I_AD1=I_AD1,
    )


def bound_infinite_temperature(s: float, lam: float, i_in: float) -> float:
    """Closed form at ``q = 1/2``: ``(c^4 + lam s^4 / 4) I_in``."""
    c2 = 1.0 - s * s
    return (c2 * c2 + lam * s ** 4 / 4) * i_in


def bound_zero_temperature(s: float, lam: float, p: float, rho_a0, rho_a1, base="e") -> float:
    """Closed form at ``q = 1``: ``(c^4 + lam s^4 / 2) I_in + P0 I(A:D0)``."""
    r0, r1 = as_matrix(rho_a0), as_matrix(rho_a1)
    ra = p * r0 + (1 - p) * r1
    i_in = mutual_information(input_state(p, r0, r1), ["A"], ["M"], base)
    c2 = 1.0 - s * s
    P0 = lam * (1 - (1 - p) / 2 * s ** 4)
    extra = 0.0
    if P0 > WEIGHT_EPS:
        extra = P0 * holevo_like(lam * (1 - s ** 4 / 2) / P0, ra, r0, base)
    return (c2 * c2 + lam * s ** 4 / 2) * i_in + extra


def fcoh_floor(lam: float, kT: float = 1.0) -> float:
    """``kT lam^2 / ln 16``, a lower bound on the control's coherence free energy."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1]")
    return kT * lam * lam / math.log(16)


def achieved_information(final_cam: DensityMatrix, base="e") -> float:
    """``I(A:CM)`` of a final C (x) A (x) M state."""
    return mutual_information(final_cam, ["A"], ["C", "M"], base)
