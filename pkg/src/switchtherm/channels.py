"""Qubit thermal channels, Kraus extraction from dilations, and channel checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .matcore import (
    I2,
    SWAP,
    SX,
    SY,
    SZ,
    FactorLayout,
    as_matrix,
    commutator_norm,
    dag,
    eigh,
    embed,
    kron,
    max_abs,
    partial_trace,
    proj,
    unitarity_residual,
)
from .states import DensityMatrix, random_state, relative_entropy

COMPLETENESS_TOL = 1e-9
CHOI_TOL = 1e-9
UNITARY_TOL = 1e-10


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    """A channel ``rho -> sum_i K_i rho K_i^dagger``."""

    kraus_ops: tuple
    dim_in: int = 0
    dim_out: int = 0

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape or k.ndim != 2 for k in ops):
            raise ChannelError("Kraus operators must share one 2-d shape")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "dim_out", shape[0])
        object.__setattr__(self, "dim_in", shape[1])

    def __len__(self):
        return len(self.kraus_ops)

    def __call__(self, rho) -> np.ndarray:
        r = as_matrix(rho)
        if r.shape[0] != self.dim_in:
            raise ChannelError(f"channel expects dim {self.dim_in}, got {r.shape[0]}")
        return sum(k @ r @ dag(k) for k in self.kraus_ops)

    def completeness_residual(self) -> float:
        s = sum(dag(k) @ k for k in self.kraus_ops)
        return max_abs(s - np.eye(self.dim_in))

    def choi(self) -> np.ndarray:
        """Choi matrix ``sum_ij |i><j| (x) E(|i><j|)`` (unnormalised)."""
        d = self.dim_in
        out = np.zeros((d * self.dim_out, d * self.dim_out), dtype=complex)
        for k in self.kraus_ops:
            v = np.concatenate([k[:, i] for i in range(d)])
            out += np.outer(v, v.conj())
        return out


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


@dataclass(frozen=True)
class CollisionParams:
    """Angles of an energy-conserving qubit collision.

    ``theta1`` is the partial-swap angle (``s = sin theta1``), ``theta2`` the
    phase-fluctuation angle, ``axis`` the unit vector defining ``H_M = -n.sigma``.
    """

    theta1: float
    theta2: float = 0.0
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        n = np.asarray(self.axis, dtype=float)
        if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-12:
            raise ValueError(f"axis {self.axis} is not a unit 3-vector")
        object.__setattr__(self, "axis", tuple(float(x) for x in n))

    @classmethod
    def from_strength(cls, s: float, theta2: float = 0.0, axis=(0.0, 0.0, 1.0)) -> "CollisionParams":
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s={s} outside [0, 1]")
        return cls(math.asin(s), theta2, axis)

    @property
    def s(self) -> float:
        return math.sin(self.theta1)

    @property
    def c(self) -> float:
        return math.cos(self.theta1)


def pauli_dot(axis) -> np.ndarray:
    nx, ny, nz = axis
    return nx * SX + ny * SY + nz * SZ


def tilde_u(axis) -> np.ndarray:
    """Qubit unitary ``U`` with ``U sigma_z U^dagger = n.sigma``.

    ``U|0>`` is the +1 eigenvector of ``n.sigma``, i.e. the ground state of
    ``H = -n.sigma``.
    """
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-12:
        raise ValueError(f"axis {axis} is not a unit 3-vector")
    theta = math.acos(max(-1.0, min(1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    e = np.exp(1j * phi)
    return np.array([[c, -np.conj(e) * s], [e * s, c]], dtype=complex)


def system_hamiltonian(axis=(0.0, 0.0, 1.0)) -> np.ndarray:
    """``H_M = -n.sigma``."""
    return -pauli_dot(axis)


def collision_unitary(p: CollisionParams) -> np.ndarray:
    """``(U~ (x) I) e^{i theta1 S} e^{i theta2 Z(x)Z/2} (U~^dagger (x) I)`` on M (x) E."""
    partial_swap = p.c * np.eye(4) + 1j * p.s * SWAP
    phase = expm(1j * p.theta2 * kron(SZ, SZ) / 2)
    ut = kron(tilde_u(p.axis), I2)
    return ut @ partial_swap @ phase @ dag(ut)


def kraus_from_dilation(u, env_state, dim_env: Optional[int] = None) -> KrausChannel:
    """Kraus operators ``sqrt(p_e) <e'|U|e>`` for ``U`` on sys (x) env.

    The environment state is diagonalised first, so it need not be diagonal
    in the computational basis. Zero-weight eigenvectors are skipped.
    """
    u = as_matrix(u)
    res = unitarity_residual(u)
    if res > UNITARY_TOL:
        raise ChannelError(f"dilation is not unitary (residual {res:.2e})")
    env = as_matrix(env_state)
    de = env.shape[0] if dim_env is None else dim_env
    ds = u.shape[0] // de
    if max_abs(env - np.diag(np.diag(env))) < 1e-15:
        # keep the computational order so Kraus indices are reproducible
        w, v = np.diag(env).real, np.eye(de, dtype=complex)
    else:
        w, v = eigh(env)
    t = u.reshape(ds, de, ds, de)
    ops = []
    for pe, ve in zip(w, v.T):
        if pe <= 1e-15:
            continue
        for ep in range(de):
            # <e'| U |v_e>, with <e'| in the computational basis
            k = np.einsum("ijb,b->ij", t[:, ep, :, :], ve)
            ops.append(math.sqrt(pe) * k)
    return KrausChannel(tuple(ops))


def thermal_qubit_channel(s: float, q: float) -> KrausChannel:
    """The four-operator partial-swap thermalisation towards ``diag(q, 1-q)``."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s} outside [0, 1]")
    if not 0.5 <= q <= 1.0:
        raise ValueError(f"q={q} outside [1/2, 1]")
    c = math.sqrt(1.0 - s * s)
    p0, p1 = proj([1, 0]), proj([0, 1])
    up = np.array([[0, 1], [0, 0]], dtype=complex)
    down = np.array([[0, 0], [1, 0]], dtype=complex)
    sq, sq1 = math.sqrt(q), math.sqrt(1.0 - q)
    return KrausChannel((
        sq * (c * I2 + 1j * s * p0),
        sq * 1j * s * up,
        sq1 * 1j * s * down,
        sq1 * (c * I2 + 1j * s * p1),
    ))


def rotate_channel(ch: KrausChannel, u) -> KrausChannel:
    """Channel ``U E(U^dagger . U) U^dagger``."""
    u = as_matrix(u)
    return KrausChannel(tuple(u @ k @ dag(u) for k in ch.kraus_ops))


def partial_cnot_unitary(s: float) -> np.ndarray:
    """``e^{i theta V} = c I + i s V`` with V the CNOT controlled by M."""
    c = math.sqrt(1.0 - s * s)
    cnot = kron(proj([1, 0]), I2) + kron(proj([0, 1]), SX)
    return c * np.eye(4) + 1j * s * cnot


def partial_cnot_channel(s: float) -> KrausChannel:
    """Channel on M induced by the partial CNOT with an infinite-temperature environment."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s} outside [0, 1]")
    c = math.sqrt(1.0 - s * s)
    return KrausChannel((c * I2 + 1j * s * proj([1, 0]), 1j * s * proj([0, 1])))


def apply_channel(ch: KrausChannel, rho: DensityMatrix, target: str) -> DensityMatrix:
    """Apply ``ch`` to one factor of ``rho``, leaving the others untouched."""
    layout = rho.layout
    if layout.dim_of(target) != ch.dim_in or ch.dim_in != ch.dim_out:
        raise ChannelError(f"channel dims ({ch.dim_in}->{ch.dim_out}) do not fit factor {target!r}")
    r = rho.matrix
    out = np.zeros_like(r)
    for k in ch.kraus_ops:
        big = embed(k, layout, [target])
        out += big @ r @ dag(big)
    return DensityMatrix(out, layout)


def compose(c2: KrausChannel, c1: KrausChannel) -> KrausChannel:
    """``c2 o c1``: apply ``c1`` first."""
    if c1.dim_out != c2.dim_in:
        raise ChannelError(f"cannot compose: c1 outputs {c1.dim_out}, c2 takes {c2.dim_in}")
    return KrausChannel(tuple(b @ a for a in c1.kraus_ops for b in c2.kraus_ops))


def canonical_phase(k) -> np.ndarray:
    """Rotate a matrix so its largest-magnitude entry is real and positive."""
    k = as_matrix(k) if np.ndim(k) == 2 else np.asarray(k, dtype=complex)
    flat = k.ravel()
    i = int(np.argmax(np.abs(flat)))
    if abs(flat[i]) == 0:
        return k.copy()
    return k * (abs(flat[i]) / flat[i])


# -- checks ------------------------------------------------------------------

@dataclass
class CheckResult:
    """Boolean outcome of a channel check plus the residuals behind it."""

    ok: bool
    residuals: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def is_cptp(ch: KrausChannel, tol: float = COMPLETENESS_TOL, choi_tol: Optional[float] = None) -> CheckResult:
    """Completeness of the Kraus set and positivity of the Choi matrix."""
    choi_tol = CHOI_TOL if choi_tol is None else choi_tol
    comp = ch.completeness_residual()
    j = ch.choi()
    wmin = float(np.linalg.eigvalsh((j + dag(j)) / 2)[0])
    neg = max(0.0, -wmin)
    return CheckResult(comp <= tol and neg <= choi_tol, {"completeness": comp, "choi_negativity": neg})


def is_gibbs_preserving(
    ch: KrausChannel,
    tau,
    tol: float = 1e-9,
    samples: int = 100,
    rng: Optional[np.random.Generator] = None,
    rank: Optional[int] = None,
) -> CheckResult:
    """``ch(tau) == tau``, plus sampled relative-entropy monotonicity towards ``tau``.

    ``rank=1`` samples Haar-random pure states, the default full-rank states.
    """
    t = as_matrix(tau)
    fixed = max_abs(ch(t) - t)
    rng = np.random.default_rng(0) if rng is None else rng
    worst = -math.inf
    for _ in range(samples):
        rho = random_state(ch.dim_in, rng, rank)
        before = relative_entropy(rho, t)
        after = relative_entropy(ch(rho), t)
        if math.isinf(after) and math.isinf(before):
            continue
        worst = max(worst, after - before)
    monotone = worst if samples else 0.0
    ok = fixed < tol and monotone <= tol
    return CheckResult(ok, {"fixed_point": fixed, "max_entropy_increase": monotone})


def is_energy_conserving(u, h_sys, h_env, tol: float = 1e-10) -> CheckResult:
    """``[U, H_sys (x) I + I (x) H_env] == 0`` within ``tol``."""
    hs, he = as_matrix(h_sys), as_matrix(h_env)
    total = kron(hs, np.eye(he.shape[0])) + kron(np.eye(hs.shape[0]), he)
    res = commutator_norm(u, total)
    return CheckResult(res < tol, {"commutator": res})


def dilation_output(u, rho, env_state) -> np.ndarray:
    """``Tr_E U (rho (x) env) U^dagger``; the reference path for Kraus extraction."""
    r, e = as_matrix(rho), as_matrix(env_state)
    full = u @ kron(r, e) @ dag(u)
    layout = FactorLayout((r.shape[0], e.shape[0]), ("S", "E"))
    return partial_trace(full, layout, ["S"])
