"""Field-generic vectors, self-adjoint operators, spectral decompositions and
Schatten norms. Everything here is immutable after construction and pure, so
values are safe to share across threads."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np

__all__ = [
    "Field",
    "Vector",
    "SymOp",
    "SpectralDecomp",
    "RankOnePSD",
    "SpectralError",
    "RankOneViolation",
    "vec",
    "symop",
    "sym_outer",
    "spectral_decompose",
    "schatten_norm",
    "weyl_gap",
]


class Field(str, Enum):
    """Scalar field of the ambient Hilbert space."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128


class SpectralError(RuntimeError):
    """Eigensolver failed to converge."""


class RankOneViolation(ValueError):
    """Operator is not a non-negative rank-at-most-one operator within tolerance."""


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True)
    out.setflags(write=False)
    return out


def _as_field_array(data, field: Field, ndim: int, name: str) -> np.ndarray:
    a = np.asarray(data)
    if a.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {a.shape}")
    if field is Field.REAL:
        if np.iscomplexobj(a) and np.any(a.imag != 0):
            raise ValueError(f"{name} tagged real but has nonzero imaginary part")
        a = a.real.astype(np.float64)
    else:
        a = a.astype(np.complex128)
    if not np.all(np.isfinite(a.view(np.float64) if a.dtype == np.complex128 else a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


@dataclass(frozen=True)
class Vector:
    """A vector in the real or complex n-dimensional Hilbert space."""

    entries: np.ndarray
    field: Field

    def __post_init__(self):
        a = _as_field_array(self.entries, self.field, 1, "vector")
        object.__setattr__(self, "entries", _freeze(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vector)
            and self.field is other.field
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )


def vec(data, field: Optional[Field] = None) -> Vector:
    """Build a Vector, inferring the field from the dtype unless given."""
    a = np.asarray(data)
    if field is None:
        field = Field.COMPLEX if np.iscomplexobj(a) else Field.REAL
    return Vector(a, field)


@dataclass(frozen=True)
class SymOp:
    """A self-adjoint operator, stored exactly symmetrized: A == A*."""

    entries: np.ndarray
    field: Field

    def __post_init__(self):
        a = _as_field_array(self.entries, self.field, 2, "operator")
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be square, got shape {a.shape}")
        a = (a + a.conj().T) / 2
        object.__setattr__(self, "entries", _freeze(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymOp)
            and self.field is other.field
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __add__(self, other: "SymOp") -> "SymOp":
        _check_same(self, other)
        return SymOp(self.entries + other.entries, self.field)

    def __sub__(self, other: "SymOp") -> "SymOp":
        _check_same(self, other)
        return SymOp(self.entries - other.entries, self.field)

    def __rmul__(self, scalar: float) -> "SymOp":
        return SymOp(float(scalar) * self.entries, self.field)


def symop(data, field: Optional[Field] = None, check_tol: Optional[float] = None) -> SymOp:
    """Build a SymOp from a raw square array.

    With ``check_tol`` set, reject inputs whose anti-selfadjoint part exceeds
    ``check_tol * max(1, ||A||)`` instead of silently symmetrizing them.
    """
    a = np.asarray(data)
    if field is None:
        field = Field.COMPLEX if np.iscomplexobj(a) else Field.REAL
    if check_tol is not None:
        skew = np.linalg.norm(a - a.conj().T)
        if skew > check_tol * max(1.0, np.linalg.norm(a)):
            raise ValueError(f"input is not self-adjoint: ||A - A*|| = {skew:.3e}")
    return SymOp(a, field)


def _check_same(a, b):
    if a.field is not b.field:
        raise ValueError(f"field mismatch: {a.field.value} vs {b.field.value}")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def sym_outer(x: Vector, y: Vector) -> SymOp:
    """Symmetric outer product of two vectors.

    ``sym_outer(x, x)`` is the PSD rank-at-most-one lift of x, with trace
    equal to ||x||^2.
    """
    _check_same(x, y)
    u, v = x.entries, y.entries
    m = (np.outer(v, u.conj()) + np.outer(u, v.conj())) / 2
    return SymOp(m, x.field)


@dataclass(frozen=True)
class SpectralDecomp:
    """Spectral decomposition with eigenvalues grouped by a tolerance.

    ``eigenvalues`` are descending with multiplicities; eigenvalues within
    ``group_tolerance`` of each other are merged into one distinct eigenvalue
    whose projector sums the corresponding eigenprojections.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple
    projectors: tuple
    group_tolerance: float
    field: Field

    @property
    def distinct_count(self) -> int:
        return len(self.multiplicities)

    @property
    def group_starts(self) -> tuple:
        starts, s = [], 0
        for r in self.multiplicities:
            starts.append(s)
            s += r
        return tuple(starts)

    @property
    def group_values(self) -> np.ndarray:
        return self.eigenvalues[list(self.group_starts)]

    def reconstruct(self) -> SymOp:
        n = self.eigenvalues.shape[0]
        acc = np.zeros((n, n), dtype=self.field.dtype)
        for lam, p in zip(self.group_values, self.projectors):
            acc = acc + lam * p.entries
        return SymOp(acc, self.field)


def _canonical_phase_columns(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(V), axis=0)
    lead = V[idx, np.arange(V.shape[1])]
    mag = np.abs(lead)
    safe = np.where(mag > 0, mag, 1.0)
    phase = np.where(mag > 0, lead.conj() / safe, 1.0)
    return V * phase[np.newaxis, :]


def spectral_decompose(A: SymOp, group_tol: Optional[float] = None) -> SpectralDecomp:
    """Eigen-decompose a self-adjoint operator into distinct-eigenvalue groups.

    Parameters
    ----------
    A : SymOp
    group_tol : float, optional
        Non-negative absolute tolerance for merging nearby eigenvalues into
        one distinct eigenvalue. Defaults to ``1e-8 * ||A||_inf`` so behavior
        is scale invariant.
    """
    try:
        w, V = np.linalg.eigh(A.entries)
    except np.linalg.LinAlgError as e:
        raise SpectralError(
            f"eigensolver failed on {A.dim}x{A.dim} {A.field.value} operator: {e}"
        ) from e
    w = w[::-1]
    V = V[:, ::-1]
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if group_tol is None:
        group_tol = 1e-8 * scale
    if group_tol < 0:
        raise ValueError(f"group_tol must be >= 0, got {group_tol}")
    V = _canonical_phase_columns(V)

    mults, projectors = [], []
    i, n = 0, w.shape[0]
    while i < n:
        j = i + 1
        while j < n and w[j - 1] - w[j] <= group_tol:
            j += 1
        block = V[:, i:j]
        projectors.append(SymOp(block @ block.conj().T, A.field))
        mults.append(j - i)
        i = j
    return SpectralDecomp(
        eigenvalues=_freeze(w),
        multiplicities=tuple(mults),
        projectors=tuple(projectors),
        group_tolerance=float(group_tol),
        field=A.field,
    )


def _schatten_from_singvals(s: np.ndarray, p: float) -> float:
    if s.size == 0:
        return 0.0
    if p == math.inf:
        return float(np.max(s))
    if p == 1:
        return float(np.sum(s))
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    top = float(np.max(s))
    if top == 0.0:
        return 0.0
    # factor out the top singular value to avoid overflow for large p
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def schatten_norm(A: SymOp, p: float) -> float:
    """Schatten p-norm of a self-adjoint operator (p=1 nuclear, 2 Frobenius,
    inf operator norm). Singular values are the absolute eigenvalues."""
    if p != math.inf and p < 1:
        raise ValueError(f"Schatten norm needs p >= 1 or p = inf, got {p}")
    try:
        s = np.abs(np.linalg.eigvalsh(A.entries))
    except np.linalg.LinAlgError as e:
        raise SpectralError(f"eigensolver failed: {e}") from e
    return _schatten_from_singvals(s, p)


def weyl_gap(A: SymOp, B: SymOp) -> float:
    """Largest movement of sorted eigenvalues between two operators.

    Always at most ``schatten_norm(A - B, inf)`` up to roundoff; asserted as a
    test property, not assumed.
    """
    _check_same(A, B)
    wa = np.linalg.eigvalsh(A.entries)
    wb = np.linalg.eigvalsh(B.entries)
    return float(np.max(np.abs(wa - wb))) if wa.size else 0.0


@dataclass(frozen=True)
class RankOnePSD:
    """A non-negative self-adjoint operator of rank at most one.

    ``rank_tol`` is relative to max(1, top eigenvalue); ``rank_atol`` is an
    absolute allowance needed by the spectral retraction, whose output near a
    degenerate top eigenvalue is only rank-one up to the grouping tolerance.
    """

    carrier: SymOp
    generator: Optional[Vector] = None
    rank_tol: float = 1e-10
    rank_atol: float = 0.0

    def __post_init__(self):
        w = np.linalg.eigvalsh(self.carrier.entries)
        top = float(w[-1]) if w.size else 0.0
        allow = max(self.rank_tol * max(1.0, top), self.rank_atol)
        second = float(w[-2]) if w.size > 1 else 0.0
        bottom = float(w[0]) if w.size else 0.0
        if second > allow or bottom < -allow:
            raise RankOneViolation(
                f"not rank-one PSD within tolerance {allow:.3e}: "
                f"second eigenvalue {second:.3e}, smallest {bottom:.3e}"
            )
        if self.generator is not None:
            g = self.generator
            _check_same(g, _DimFieldProxy(self.carrier.dim, self.carrier.field))
            ref = sym_outer(g, g).entries
            err = np.linalg.norm(self.carrier.entries - ref)
            if err > max(allow, 1e-10 * max(1.0, float(np.linalg.norm(ref)))):
                raise RankOneViolation(
                    f"generator does not reproduce carrier: ||T - [x,x]|| = {err:.3e}"
                )

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def field(self) -> Field:
        return self.carrier.field

    @cached_property
    def top_eigenpair(self):
        w, V = np.linalg.eigh(self.carrier.entries)
        u = _canonical_phase_columns(V[:, -1:])[:, 0]
        return float(w[-1]), Vector(u, self.field)


class _DimFieldProxy:
    def __init__(self, dim, field):
        self.dim = dim
        self.field = field
