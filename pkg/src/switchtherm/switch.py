"""The quantum switch of two qubit channels, its five-system dilation, and
closed-form final states used as independent oracles.

Tensor order is ``C, A, M`` for switch outputs and ``C, A, M, E1, E2`` for
the full dilation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .channels import (
    CollisionParams,
    KrausChannel,
    collision_unitary,
    kraus_from_dilation,
    rotate_channel,
    thermal_qubit_channel,
    tilde_u,
)
from .matcore import (
    I2,
    KET0,
    KET1,
    KETM,
    KETP,
    SWAP,
    SX,
    FactorLayout,
    as_matrix,
    dag,
    embed,
    kron,
    max_abs,
    partial_trace,
    proj,
    unitarity_residual,
)
from .states import DensityMatrix, control_mixed, control_pure, qubit_thermal

CAM = ("C", "A", "M")


class PreconditionError(ValueError):
    """Inputs violate a stated precondition (reported, never silently passed)."""


@dataclass(frozen=True)
class ControlState:
    """State of the switch control: mixed ``lambda`` or pure ``alpha`` family."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("mixed_lambda", "pure_alpha"):
            raise ValueError(f"unknown control kind {self.kind!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"control parameter {self.value} outside [0, 1]")

    @classmethod
    def mixed(cls, lam: float) -> "ControlState":
        return cls("mixed_lambda", lam)

    @classmethod
    def pure(cls, alpha: float) -> "ControlState":
        return cls("pure_alpha", alpha)

    def matrix(self) -> np.ndarray:
        if self.kind == "mixed_lambda":
            return control_mixed(self.value)
        return control_pure(self.value)


def _as_state(rho, dim: int = 2) -> np.ndarray:
    m = as_matrix(rho)
    DensityMatrix(m)  # validates
    return m


@dataclass(frozen=True, eq=False)
class ScenarioParams:
    """One point of the experiment: channel strength, bath, control, and input ensemble."""

    s: float
    q: float
    control: ControlState = field(default_factory=lambda: ControlState.mixed(1.0))
    p: float = 0.5
    rho_a0: np.ndarray = field(default_factory=lambda: proj(KET0))
    rho_a1: np.ndarray = field(default_factory=lambda: proj(KET1))
    axis: tuple = (0.0, 0.0, 1.0)
    theta2: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s={self.s} outside [0, 1]")
        if not 0.5 <= self.q <= 1.0:
            raise ValueError(f"q={self.q} outside [1/2, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        r0, r1 = _as_state(self.rho_a0), _as_state(self.rho_a1)
        if r0.shape != r1.shape:
            raise ValueError("rho_a0 and rho_a1 must share a dimension")
        n = np.asarray(self.axis, dtype=float)
        if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-12:
            raise ValueError(f"axis {self.axis} is not a unit 3-vector")
        object.__setattr__(self, "rho_a0", r0)
        object.__setattr__(self, "rho_a1", r1)
        object.__setattr__(self, "axis", tuple(float(x) for x in n))

    @property
    def d_a(self) -> int:
        return self.rho_a0.shape[0]

    @property
    def c(self) -> float:
        return math.sqrt(1.0 - self.s * self.s)

    def rho_a(self) -> np.ndarray:
        return self.p * self.rho_a0 + (1 - self.p) * self.rho_a1

    def m_basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Ground and excited eigenvectors ``|phi>, |phi_perp>`` of ``H_M``."""
        u = tilde_u(self.axis)
        return u[:, 0], u[:, 1]

    def tau_m(self) -> np.ndarray:
        u = tilde_u(self.axis)
        return u @ qubit_thermal(self.q) @ dag(u)

    def input_am(self) -> DensityMatrix:
        """``p rho_A^0 (x) |phi><phi| + (1-p) rho_A^1 (x) |phi_perp><phi_perp|``."""
        phi, phi_perp = self.m_basis()
        m = self.p * kron(self.rho_a0, proj(phi)) + (1 - self.p) * kron(self.rho_a1, proj(phi_perp))
        return DensityMatrix(m, FactorLayout((self.d_a, 2), ("A", "M")))

    def channel(self) -> KrausChannel:
        """The thermal channel on M, in the frame of ``H_M``.

        With ``theta2 != 0`` the Kraus set is extracted from the collision
        unitary; the switch is sensitive to that choice of Kraus operators.
        """
        if self.theta2 != 0.0:
            return kraus_from_dilation(collision_unitary(self.collision()), qubit_thermal(self.q))
        ch = thermal_qubit_channel(self.s, self.q)
        if self.axis == (0.0, 0.0, 1.0):
            return ch
        return rotate_channel(ch, tilde_u(self.axis))

    def collision(self) -> CollisionParams:
        return CollisionParams.from_strength(self.s, self.theta2, self.axis)

    def replace(self, **changes) -> "ScenarioParams":
        from dataclasses import replace

        return replace(self, **changes)


# -- supermap ----------------------------------------------------------------

def switched_kraus(c1: KrausChannel, c2: KrausChannel) -> KrausChannel:
    """Kraus operators ``|0><0| (x) K2_j K1_i + |1><1| (x) K1_i K2_j`` on C (x) target."""
    if (c1.dim_in, c1.dim_out) != (c2.dim_in, c2.dim_out) or c1.dim_in != c1.dim_out:
        raise ValueError("switched channels must share one square dimension")
    p0, p1 = proj(KET0), proj(KET1)
    ops = []
    for k1, k2 in product(c1.kraus_ops, c2.kraus_ops):
        ops.append(kron(p0, k2 @ k1) + kron(p1, k1 @ k2))
    return KrausChannel(tuple(ops))


def switch_action(c1: KrausChannel, c2: KrausChannel, sigma_c, rho: DensityMatrix, target: str = "M") -> DensityMatrix:
    """Apply the switched channel to ``sigma_c (x) rho``, acting on factor ``target`` of ``rho``.

    The output layout is ``C`` followed by ``rho``'s layout. Factors other
    than ``target`` are bystanders.
    """
    sig = as_matrix(sigma_c)
    layout = FactorLayout((2,) + rho.layout.dims, ("C",) + rho.layout.labels)
    sw = switched_kraus(c1, c2)
    state = kron(sig, rho.matrix)
    out = np.zeros_like(state)
    for k in sw.kraus_ops:
        big = embed(k, layout, ["C", target])
        out += big @ state @ dag(big)
    return DensityMatrix(out, layout)


def apply_switch(params: ScenarioParams) -> DensityMatrix:
    """Final C (x) A (x) M state via the switched Kraus operators."""
    ch = params.channel()
    return switch_action(ch, ch, params.control.matrix(), params.input_am(), "M")


# -- dilation ----------------------------------------------------------------

def dilation_unitary_L(u1, u2, control_basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Switched dilation on C (x) M (x) E1 (x) E2.

    ``u1`` acts on M (x) E1 and ``u2`` on M (x) E2. The branches are the
    eigenvectors of the control Hamiltonian, given as the columns of
    ``control_basis`` (computational basis by default, i.e. ``H_C = -sigma_z``).
    """
    u1, u2 = as_matrix(u1), as_matrix(u2)
    for u in (u1, u2):
        res = unitarity_residual(u)
        if res > 1e-10:
            raise ValueError(f"input is not unitary (residual {res:.2e})")
    lay = FactorLayout((2, 2, 2), ("M", "E1", "E2"))
    U1 = embed(u1, lay, ["M", "E1"])
    U2 = embed(u2, lay, ["M", "E2"])
    basis = np.eye(2, dtype=complex) if control_basis is None else as_matrix(control_basis)
    psi, psi_perp = basis[:, 0], basis[:, 1]
    return kron(proj(psi), U2 @ U1) + kron(proj(psi_perp), U1 @ U2)


def simulate_full(params: ScenarioParams) -> DensityMatrix:
    """Final C (x) A (x) M state via ``L (sigma_C (x) rho_AM (x) tau_E1 (x) tau_E2) L^dagger``."""
    u = collision_unitary(params.collision())
    L = dilation_unitary_L(u, u)
    full = FactorLayout((2, params.d_a, 2, 2, 2), ("C", "A", "M", "E1", "E2"))
    # L lives on C, M, E1, E2; A is a bystander
    Lf = embed(L, full, ["C", "M", "E1", "E2"])
    tau_e = qubit_thermal(params.q)
    rho = kron(params.control.matrix(), params.input_am().matrix, tau_e, tau_e)
    out = Lf @ rho @ dag(Lf)
    return DensityMatrix(partial_trace(out, full, CAM), full.sub(CAM))


# -- closed forms ------------------------------------------------------------

def _closed_pieces(params: ScenarioParams):
    """Blocks of the final state in the z frame, before any control structure."""
    s, q, p = params.s, params.q, params.p
    c2 = 1.0 - s * s
    c4, s4 = c2 * c2, s ** 4
    r0, r1, ra = params.rho_a0, params.rho_a1, params.rho_a()
    P0, P1 = proj(KET0), proj(KET1)
    tau = qubit_thermal(q)
    rin = p * kron(r0, P0) + (1 - p) * kron(r1, P1)
    XM = kron(np.eye(params.d_a), SX)
    # definite order: C o C on an M-diagonal input
    definite = c4 * rin + (1 - c4) * kron(ra, tau)
    # branch blocks of the fully-ON control, in the |+>, |-> basis of C
    plus = (
        (c4 + (1 - q) ** 2 / 2 * s4) * rin
        + (2 * c2 * s * s + s4 / 2) * kron(ra, tau)
        + s4 * (2 * q - 1) / 2 * p * kron(r0, P0)
    )
    minus = s4 * (
        (1 - q) ** 2 / 2 * XM @ rin @ XM
        + q * (1 - q) * kron(ra, I2 / 2)
        + (2 * q - 1) / 2 * (1 - p) * kron(r1, P0)
    )
    # coherence block sum_ij K_j K_i rho (K_i K_j)^dagger, term by term
    cs2 = c2 * s * s
    coherent = (
        (c2 + s * s * q) ** 2 * p * kron(r0, P0)
        + (c2 + s * s * (1 - q)) ** 2 * (1 - p) * kron(r1, P1)
        + 2 * cs2 * (1 - q) * p * kron(r0, P1)
        + 2 * cs2 * q * (1 - p) * kron(r1, P0)
    )
    return definite, plus, minus, coherent


def closed_form_final_state(params: ScenarioParams) -> DensityMatrix:
    """Analytic C (x) A (x) M final state, evaluated without applying any channel.

    Mixed control uses ``lam * rho_ON + (1 - lam) |0><0| (x) definite``; pure
    control uses the diagonal/coherence decomposition in the computational
    basis of C. For a tilted axis the z-frame result is rotated on M. Only
    valid for ``theta2 = 0``.
    """
    if params.theta2 != 0.0:
        raise ValueError("closed forms assume theta2 = 0")
    definite, plus, minus, coherent = _closed_pieces(params)
    if params.control.kind == "mixed_lambda":
        lam = params.control.value
        on = kron(proj(KETM), minus) + kron(proj(KETP), plus)
        m = lam * on + (1 - lam) * kron(proj(KET0), definite)
    else:
        a = params.control.value
        diag_c = np.diag([a, 1 - a]).astype(complex)
        m = kron(diag_c, definite) + math.sqrt(a * (1 - a)) * kron(SX, coherent)
    if params.axis != (0.0, 0.0, 1.0):
        rot = kron(I2, np.eye(params.d_a), tilde_u(params.axis))
        m = rot @ m @ dag(rot)
    return DensityMatrix(m, FactorLayout((2, params.d_a, 2), CAM))


def branch_weights(params: ScenarioParams) -> dict:
    """Probabilities of the ``|+>`` and ``|->`` control branches at full switch-ON."""
    _, plus, minus, _ = _closed_pieces(params)
    return {"+": float(np.trace(plus).real), "-": float(np.trace(minus).real)}


# -- thermodynamic statements -------------------------------------------------

def swap_and_trace(rho_cm: DensityMatrix) -> DensityMatrix:
    """Exchange C and M, then discard C: ``Tr_C(S rho S)``, returned on M."""
    m = rho_cm.matrix
    if m.shape != (4, 4):
        raise ValueError("swap_and_trace expects a two-qubit C (x) M state")
    layout = FactorLayout((2, 2), ("C", "M"))
    swapped = SWAP @ m @ SWAP
    return DensityMatrix(partial_trace(swapped, layout, ["M"]), FactorLayout((2,), ("M",)))


def verify_theorem2(c1: KrausChannel, c2: KrausChannel, tau, sigma_c, pre_tol: float = 1e-9) -> float:
    """Residual ``max|Tr_C S(c1, c2)(sigma_c (x) tau) - tau|``.

    Raises :class:`PreconditionError` when either channel moves ``tau``.
    """
    t = as_matrix(tau)
    for name, ch in (("c1", c1), ("c2", c2)):
        moved = max_abs(ch(t) - t)
        if moved > pre_tol:
            raise PreconditionError(f"{name} does not preserve tau (residual {moved:.3e})")
    out = switch_action(c1, c2, as_matrix(sigma_c), DensityMatrix(t, FactorLayout((t.shape[0],), ("M",))))
    return max_abs(out.ptrace(["M"]).matrix - t)
