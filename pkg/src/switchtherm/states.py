"""Quantum states, Hamiltonians, thermal states and entropic functionals.

Entropies are in nats unless ``base=2`` is requested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .matcore import (
    EIG_CLIP,
    HERMITIAN_TOL,
    KET0,
    KETP,
    FactorLayout,
    as_matrix,
    clip_spectrum,
    dag,
    eigh,
    hermiticity_residual,
    kron,
    partial_trace,
    proj,
)

STATE_TOL = 1e-9


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class Hamiltonian:
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = as_matrix(self.matrix)
        res = hermiticity_residual(m)
        if res > HERMITIAN_TOL:
            raise ValueError(f"Hamiltonian {self.label!r} is not Hermitian (residual {res:.2e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix together with its tensor-factor layout."""

    matrix: np.ndarray
    layout: FactorLayout = field(default=None)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        layout = self.layout
        if layout is None:
            layout = FactorLayout((m.shape[0],), ("S",))
        layout.check(m)
        herm = hermiticity_residual(m)
        if herm > STATE_TOL:
            raise InvalidStateError(f"not Hermitian (residual {herm:.2e})")
        tr = np.trace(m).real
        if abs(tr - 1) > STATE_TOL:
            raise InvalidStateError(f"trace {tr} != 1")
        wmin = np.linalg.eigvalsh((m + dag(m)) / 2)[0]
        if wmin < -STATE_TOL:
            raise InvalidStateError(f"negative eigenvalue {wmin:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "layout", layout)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def ptrace(self, keep: Iterable[str]) -> "DensityMatrix":
        keep = list(keep)
        return DensityMatrix(partial_trace(self.matrix, self.layout, keep), self.layout.sub(keep))

    def relabel(self, *labels: str) -> "DensityMatrix":
        return DensityMatrix(self.matrix, FactorLayout(self.layout.dims, labels))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def density(m, *labels: str, dims: Optional[Iterable[int]] = None) -> DensityMatrix:
    """Wrap a matrix as a :class:`DensityMatrix`; qubit factors by default."""
    m = as_matrix(m)
    if not labels:
        return DensityMatrix(m)
    dims = tuple(dims) if dims is not None else (2,) * len(labels)
    return DensityMatrix(m, FactorLayout(dims, labels))


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Tensor product of density matrices, concatenating layouts."""
    dims: tuple = ()
    labels: tuple = ()
    for s in states:
        dims += s.layout.dims
        labels += s.layout.labels
    return DensityMatrix(kron(*(s.matrix for s in states)), FactorLayout(dims, labels))


def _mat(x) -> np.ndarray:
    return as_matrix(x)


# -- thermal parametrisation ------------------------------------------------

def q_from_beta(beta: float) -> float:
    """Ground population of a -sigma_z qubit at inverse temperature ``beta``."""
    if math.isinf(beta):
        return 1.0
    return 1.0 / (1.0 + math.exp(-2.0 * beta))


def beta_from_q(q: float) -> float:
    if not 0.5 <= q <= 1.0:
        raise ValueError(f"q={q} outside [1/2, 1]")
    if q == 1.0:
        return math.inf
    return 0.5 * math.log(q / (1.0 - q))


@dataclass(frozen=True)
class ThermalSpec:
    """Temperature of a -sigma_z qubit bath, given either as q or as beta."""

    q: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        if self.q is None and self.beta is None:
            raise ValueError("one of q or beta is required")
        if self.q is None:
            if self.beta < 0:
                raise ValueError("beta must be nonnegative")
            object.__setattr__(self, "q", q_from_beta(self.beta))
        elif self.beta is None:
            object.__setattr__(self, "beta", beta_from_q(self.q))
        elif abs(q_from_beta(self.beta) - self.q) > 1e-12:
            raise ValueError(f"inconsistent q={self.q} and beta={self.beta}")
        if not 0.5 <= self.q <= 1.0:
            raise ValueError(f"q={self.q} outside [1/2, 1]")

    @property
    def kT(self) -> float:
        return math.inf if self.beta == 0 else 1.0 / self.beta


def qubit_thermal(q: float) -> np.ndarray:
    """``diag(q, 1-q)``, the thermal state of ``-sigma_z`` with ground population q."""
    return np.diag([q, 1.0 - q]).astype(complex)


def thermal_state(h, beta: float, label: str = "S") -> DensityMatrix:
    """Gibbs state ``exp(-beta h)/Z``; ``beta=inf`` gives the uniform ground-space mixture."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    m = _mat(h)
    w, v = eigh(m)
    if math.isinf(beta):
        ground = np.isclose(w, w.min(), atol=HERMITIAN_TOL, rtol=0)
        p = ground.astype(float)
    else:
        # shift by the ground energy so nothing overflows
        p = np.exp(-beta * (w - w.min()))
    p = p / p.sum()
    return DensityMatrix((v * p) @ dag(v), FactorLayout((m.shape[0],), (label,)))


# -- entropies ---------------------------------------------------------------

def _log(base) -> float:
    if base in ("e", None, math.e):
        return 1.0
    return math.log(base)


def spectrum(rho) -> np.ndarray:
    return clip_spectrum(eigh(_mat(rho), tol=STATE_TOL)[0])


def entropy_of_probs(p, base="e") -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum() / _log(base))


def von_neumann_entropy(rho, base="e") -> float:
    """``-Tr rho log rho``, with ``0 log 0 = 0``."""
    return entropy_of_probs(spectrum(rho), base)


def support_violation(rho, sigma, tol: float = 1e-10) -> float:
    """Weight of ``rho`` outside the support of ``sigma``."""
    w, v = eigh(_mat(sigma), tol=STATE_TOL)
    kernel = v[:, w <= EIG_CLIP]
    if kernel.shape[1] == 0:
        return 0.0
    return float(np.trace(dag(kernel) @ _mat(rho) @ kernel).real)


def relative_entropy(rho, sigma, with_flag: bool = False, support_tol: float = 1e-10):
    """``S(rho || sigma)`` in nats.

    If the support of ``rho`` is not inside that of ``sigma`` the value is
    ``inf``. With ``with_flag=True`` the return value is ``(value, violated)``.
    """
    r, s = _mat(rho), _mat(sigma)
    if support_violation(r, s) > support_tol:
        return (math.inf, True) if with_flag else math.inf
    ws, vs = eigh(s, tol=STATE_TOL)
    ws = clip_spectrum(ws)
    pos = ws > EIG_CLIP
    vp = vs[:, pos]
    # Tr(rho log sigma) restricted to the support of sigma
    diag_r = np.einsum("ij,jk,ki->i", dag(vp), r, vp).real
    cross = float(np.dot(diag_r, np.log(ws[pos])))
    value = -von_neumann_entropy(r) - cross
    return (value, False) if with_flag else value


# -- free energies -----------------------------------------------------------

def energy(rho, h) -> float:
    r, hm = _mat(rho), _mat(h)
    if r.shape != hm.shape:
        raise ValueError(f"dimension mismatch: state {r.shape}, Hamiltonian {hm.shape}")
    return float(np.trace(r @ hm).real)


def free_energy(rho, h, kT: float) -> float:
    """``Tr(rho h) - kT S(rho)`` with natural-log entropy."""
    if kT <= 0:
        raise ValueError("kT must be positive")
    return energy(rho, h) - kT * von_neumann_entropy(rho)


def dephase(rho, h) -> DensityMatrix:
    """Remove coherences between distinct energy eigenspaces of ``h``."""
    r = _mat(rho)
    w, v = eigh(_mat(h))
    out = np.zeros_like(r)
    start = 0
    # eigenvalues are sorted, so degenerate levels are contiguous
    for i in range(1, len(w) + 1):
        if i == len(w) or abs(w[i] - w[start]) > HERMITIAN_TOL:
            P = v[:, start:i] @ dag(v[:, start:i])
            out += P @ r @ P
            start = i
    layout = getattr(rho, "layout", None)
    return DensityMatrix(out, layout)


def free_energy_of_coherence(rho, h, kT: float = 1.0) -> float:
    """``kT (S(D_H(rho)) - S(rho))``: free energy stored in energetic coherence."""
    return kT * (von_neumann_entropy(dephase(rho, h)) - von_neumann_entropy(rho))


# -- standard states ---------------------------------------------------------

def control_mixed(lam: float) -> np.ndarray:
    """``lam |+><+| + (1 - lam) |0><0|``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1]")
    return lam * proj(KETP) + (1.0 - lam) * proj(KET0)


def control_pure(alpha: float) -> np.ndarray:
    """``|Psi><Psi|`` with ``|Psi> = sqrt(alpha)|0> + sqrt(1-alpha)|1>``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    return proj([math.sqrt(alpha), math.sqrt(1.0 - alpha)])


def random_state(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure.

    ``rank=1`` gives Haar-random pure states; the default full rank gives the
    Hilbert-Schmidt measure.
    """
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    r = g @ dag(g)
    return r / np.trace(r).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + dag(g)) / 2
