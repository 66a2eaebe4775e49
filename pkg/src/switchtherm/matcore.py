"""Dense complex linear algebra for small Hilbert spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Multipartite
operators carry a :class:`FactorLayout` that fixes the order of tensor
factors. The global convention is ``C, A, M, E1, E2``; subsystems missing
from a given computation are dropped while keeping the relative order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-9
EIG_CLIP = 1e-12

TENSOR_ORDER = ("C", "A", "M", "E1", "E2")


class LayoutError(ValueError):
    """Layout does not match a matrix, or names an unknown subsystem."""


class HermiticityError(ValueError):
    pass


class DomainError(ValueError):
    """A scalar function was evaluated outside its domain on a spectrum."""


@dataclass(frozen=True)
class FactorLayout:
    """Ordered subsystem names and dimensions of a tensor-product space."""

    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.dims) != len(self.labels):
            raise LayoutError("dims and labels differ in length")
        if any(d <= 0 for d in self.dims):
            raise LayoutError(f"non-positive dimension in {self.dims}")
        if len(set(self.labels)) != len(self.labels):
            raise LayoutError(f"duplicate labels in {self.labels}")

    @classmethod
    def of(cls, **dims: int) -> "FactorLayout":
        """Build a layout from keyword pairs, e.g. ``FactorLayout.of(A=2, M=2)``."""
        return cls(tuple(dims.values()), tuple(dims.keys()))

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown subsystem {label!r}; layout has {self.labels}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def sub(self, keep: Iterable[str]) -> "FactorLayout":
        """Layout restricted to ``keep``, in this layout's order."""
        keep = set(keep)
        for k in keep:
            self.index(k)
        pairs = [(d, l) for d, l in zip(self.dims, self.labels) if l in keep]
        return FactorLayout(tuple(d for d, _ in pairs), tuple(l for _, l in pairs))

    def check(self, m: np.ndarray) -> None:
        if m.shape != (self.dim, self.dim):
            raise LayoutError(f"matrix of shape {m.shape} does not fit layout {self.dims}")


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex array."""
    m = np.asarray(getattr(a, "matrix", a), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not mats:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def allclose(a, b, atol: float) -> bool:
    """Entrywise comparison with an explicit absolute tolerance."""
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0) <= atol)


def max_abs(a) -> float:
    return float(np.max(np.abs(a), initial=0.0))


def hermiticity_residual(h) -> float:
    h = as_matrix(h)
    return max_abs(h - dag(h))


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_residual(h) <= tol


def unitarity_residual(u) -> float:
    u = as_matrix(u)
    return max_abs(dag(u) @ u - np.eye(u.shape[0]))


def partial_trace(m, layout: FactorLayout, keep: Iterable[str]) -> np.ndarray:
    """Trace out every factor of ``layout`` not named in ``keep``.

    The kept factors stay in their original relative order.
    """
    m = as_matrix(m)
    layout.check(m)
    keep = set(keep)
    if not keep:
        raise LayoutError("keep must name at least one subsystem")
    keep_idx = [layout.index(k) for k in keep]
    n = len(layout.dims)
    kept = sorted(keep_idx)

    t = m.reshape(layout.dims + layout.dims)
    # einsum labels: row indices 0..n-1, column indices n..2n-1; traced pairs share a label
    row = list(range(n))
    col = [i + n if i in kept else i for i in range(n)]
    out = kept + [i + n for i in kept]
    r = np.einsum(t, row + col, out)
    d = int(np.prod([layout.dims[i] for i in kept]))
    return r.reshape(d, d)


def permute(m, layout: FactorLayout, order: Sequence[str]) -> np.ndarray:
    """Reorder the tensor factors of ``m`` to ``order``."""
    m = as_matrix(m)
    layout.check(m)
    perm = [layout.index(l) for l in order]
    if sorted(perm) != list(range(len(layout.dims))):
        raise LayoutError(f"{order} is not a permutation of {layout.labels}")
    n = len(perm)
    t = m.reshape(layout.dims + layout.dims).transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def embed(op, layout: FactorLayout, targets: Sequence[str]) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in the given order) to the full layout.

    Identities are placed on every other factor.
    """
    op = as_matrix(op)
    targets = list(targets)
    tdims = [layout.dim_of(t) for t in targets]
    if op.shape[0] != int(np.prod(tdims)):
        raise LayoutError(f"operator of dim {op.shape[0]} does not act on {targets}")
    rest = [l for l in layout.labels if l not in targets]
    rest_dim = int(np.prod([layout.dim_of(l) for l in rest]))
    full = kron(op, np.eye(rest_dim))
    work = FactorLayout(tuple(tdims) + tuple(layout.dim_of(l) for l in rest), tuple(targets) + tuple(rest))
    return permute(full, work, layout.labels)


def eigh(h, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, V)`` with ``h = V diag(w) V^dagger``.
    """
    h = as_matrix(h)
    res = hermiticity_residual(h)
    if res > tol:
        raise HermiticityError(f"matrix is not Hermitian (max |h - h^dag| = {res:.3e})")
    w, v = np.linalg.eigh((h + dag(h)) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def herm_func(h, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to the spectrum of a Hermitian matrix."""
    w, v = eigh(h)
    with np.errstate(divide="raise", invalid="raise", over="raise"):
        try:
            fw = np.asarray(f(w), dtype=float)
        except (FloatingPointError, ValueError) as exc:
            raise DomainError(f"function undefined on spectrum {w}") from exc
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise DomainError(f"function undefined on spectrum {w}")
    return (v * fw) @ dag(v)


def commutator_norm(a, b) -> float:
    """Largest absolute entry of ``ab - ba``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return max_abs(a @ b - b @ a)


def clip_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero out round-off negatives in (-EIG_CLIP, 0)."""
    w = np.asarray(w, dtype=float).copy()
    w[(w < 0) & (w > -EIG_CLIP)] = 0.0
    return w


# Pauli matrices and a few fixed states used throughout
I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KETP = np.array([1, 1], dtype=complex) / np.sqrt(2)
KETM = np.array([1, -1], dtype=complex) / np.sqrt(2)


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())
