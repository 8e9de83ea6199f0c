"""Frames, the intensity measurement maps, the induced linear map on
self-adjoint operators with its min-norm pseudoinverse, frame generators and
JSON file I/O.

All numeric output is serialized with 17 significant digits so round-trips
are bit exact.
"""

from __future__ import annotations

import json
import json.encoder
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .core import Field, SymOp, Vector, _freeze

__all__ = [
    "Frame",
    "Measurement",
    "LiftedMap",
    "FrameFileError",
    "measure",
    "amplitudes",
    "build_lifted_map",
    "min_norm_inverse",
    "gen_frame",
    "read_frame",
    "write_frame",
    "read_measurements",
    "write_measurements",
    "dumps_json",
]

_SPAN_TOL = 1e-10

NAMED_FRAMES = {
    # phase retrievable in R^2 (full spark, m = 3 = 2n - 1)
    "r2_pr3": [[1.0, 0.0], [0.0, 1.0], [1 / math.sqrt(2), 1 / math.sqrt(2)]],
    # orthonormal basis of R^2: not phase retrievable
    "r2_onb": [[1.0, 0.0], [0.0, 1.0]],
}


class FrameFileError(ValueError):
    """A frame or measurement file failed to parse or validate."""


@dataclass(frozen=True)
class Frame:
    """An ordered spanning set of the n-dimensional Hilbert space."""

    vectors: tuple
    field: Field
    label: str = ""

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("frame needs at least one vector")
        vs = tuple(self.vectors)
        dim = vs[0].dim
        for v in vs:
            if not isinstance(v, Vector):
                raise TypeError("frame vectors must be Vector instances")
            if v.field is not self.field:
                raise ValueError("frame vector field tag mismatch")
            if v.dim != dim:
                raise ValueError("frame vectors must share one dimension")
        if len(vs) < dim:
            raise ValueError(
                f"frame needs count >= dim, got m={len(vs)} < n={dim}"
            )
        object.__setattr__(self, "vectors", vs)
        s = np.linalg.svd(self.synthesis, compute_uv=False)
        if s[-1] <= _SPAN_TOL * s[0]:
            raise ValueError(
                f"frame does not span: singular values range [{s[-1]:.3e}, {s[0]:.3e}]"
            )

    @property
    def dim(self) -> int:
        return self.vectors[0].dim

    @property
    def count(self) -> int:
        return len(self.vectors)

    @cached_property
    def synthesis(self) -> np.ndarray:
        """m x n matrix whose rows are the frame vectors."""
        return _freeze(np.stack([v.entries for v in self.vectors]))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.synthesis, compute_uv=False)


@dataclass(frozen=True)
class Measurement:
    """A real measurement vector; genuine intensities are nonnegative but
    noisy inputs may dip below zero."""

    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 1:
            raise ValueError(f"measurement must be 1-dimensional, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("measurement has non-finite entries")
        object.__setattr__(self, "values", _freeze(a))

    @property
    def count(self) -> int:
        return self.values.shape[0]


def _check_frame_vector(F: Frame, x: Vector):
    if x.field is not F.field:
        raise ValueError(f"field mismatch: frame {F.field.value}, vector {x.field.value}")
    if x.dim != F.dim:
        raise ValueError(f"dimension mismatch: frame dim {F.dim}, vector dim {x.dim}")


def measure(F: Frame, x: Vector) -> Measurement:
    """Intensity measurements: entry k is |<x, f_k>|^2.

    Invariant under multiplying x by any unimodular scalar.
    """
    _check_frame_vector(F, x)
    coeff = F.synthesis.conj() @ x.entries
    return Measurement(np.abs(coeff) ** 2)


def amplitudes(F: Frame, x: Vector) -> Measurement:
    """Amplitude measurements: entrywise square root of measure(F, x)."""
    return Measurement(np.sqrt(measure(F, x).values))


def _sym_dim(n: int, field: Field) -> int:
    return n * (n + 1) // 2 if field is Field.REAL else n * n


def _sym_basis_tags(n: int, field: Field) -> tuple:
    tags = [("diag", i, i) for i in range(n)]
    tags += [("sym", i, j) for i in range(n) for j in range(i + 1, n)]
    if field is Field.COMPLEX:
        tags += [("skew", i, j) for i in range(n) for j in range(i + 1, n)]
    return tuple(tags)


def sym_coords(M: np.ndarray, field: Field) -> np.ndarray:
    """Coordinates of self-adjoint matrices in the fixed real orthonormal
    basis of the operator space; works on stacks (..., n, n)."""
    n = M.shape[-1]
    iu, ju = np.triu_indices(n, 1)
    diag = np.real(M[..., np.arange(n), np.arange(n)])
    off = M[..., iu, ju]
    parts = [diag, math.sqrt(2) * np.real(off)]
    if field is Field.COMPLEX:
        parts.append(math.sqrt(2) * np.imag(off))
    return np.concatenate(parts, axis=-1)


def sym_from_coords(c: np.ndarray, n: int, field: Field) -> np.ndarray:
    """Inverse of sym_coords for a single coordinate vector."""
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (_sym_dim(n, field),):
        raise ValueError(f"expected {_sym_dim(n, field)} coordinates, got shape {c.shape}")
    iu, ju = np.triu_indices(n, 1)
    k = iu.size
    M = np.zeros((n, n), dtype=field.dtype)
    M[np.arange(n), np.arange(n)] = c[:n]
    re = c[n : n + k] / math.sqrt(2)
    if field is Field.COMPLEX:
        im = c[n + k :] / math.sqrt(2)
        off = re + 1j * im
    else:
        off = re
    M[iu, ju] = off
    M[ju, iu] = np.conj(off)
    return M


@dataclass(frozen=True)
class LiftedMap:
    """Matrix of the linear map T -> (<T f_k, f_k>)_k on self-adjoint
    operators, in the fixed real orthonormal basis, with its thresholded SVD
    for min-norm inversion."""

    matrix: np.ndarray
    dim: int
    field: Field
    basis: tuple
    pinv_tol: float
    rank: int
    _svd_u: np.ndarray
    _svd_s: np.ndarray
    _svd_vt: np.ndarray

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def sigma_min(self) -> float:
        """Smallest retained singular value (over the row space)."""
        return float(self._svd_s[self.rank - 1]) if self.rank else 0.0

    @property
    def sigma_max(self) -> float:
        return float(self._svd_s[0]) if self._svd_s.size else 0.0

    def is_full_rank(self) -> bool:
        return self.rank == self.cols

    def apply(self, T: SymOp) -> np.ndarray:
        if T.dim != self.dim or T.field is not self.field:
            raise ValueError("operator does not match the lifted map's space")
        return self.matrix @ sym_coords(T.entries, self.field)

    def pinv_matrix(self) -> np.ndarray:
        r = self.rank
        return (self._svd_vt[:r].T / self._svd_s[:r]) @ self._svd_u[:, :r].T


def build_lifted_map(F: Frame, pinv_tol: float = 1e-10) -> LiftedMap:
    """Assemble the measurement matrix on lifted operators for a frame.

    Row k holds the basis coordinates of the rank-one functional of f_k; the
    numerical rank uses ``pinv_tol`` relative to the top singular value.
    """
    fs = F.synthesis
    outers = np.einsum("ki,kj->kij", fs, fs.conj())
    rows = sym_coords(outers, F.field)
    u, s, vt = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(s > pinv_tol * s[0])) if s.size else 0
    return LiftedMap(
        matrix=_freeze(rows),
        dim=F.dim,
        field=F.field,
        basis=_sym_basis_tags(F.dim, F.field),
        pinv_tol=float(pinv_tol),
        rank=rank,
        _svd_u=_freeze(u),
        _svd_s=_freeze(s),
        _svd_vt=_freeze(vt),
    )


def min_norm_inverse(M: LiftedMap, c: Union[Measurement, np.ndarray]) -> SymOp:
    """Minimum-Frobenius-norm self-adjoint T minimizing ||M(T) - c||_2, via
    the singular-value-thresholded pseudoinverse.

    Linear in c; exact on the measurement range whenever M has full column
    rank.
    """
    values = c.values if isinstance(c, Measurement) else np.asarray(c, dtype=np.float64)
    if values.shape != (M.rows,):
        raise ValueError(f"measurement count {values.shape} does not match m={M.rows}")
    r = M.rank
    coords = M._svd_vt[:r].T @ ((M._svd_u[:, :r].T @ values) / M._svd_s[:r])
    return SymOp(sym_from_coords(coords, M.dim, M.field), M.field)


def gen_frame(
    kind: str,
    dim: int,
    count: int,
    field: Field = Field.REAL,
    seed: Optional[int] = None,
    name: Optional[str] = None,
) -> Frame:
    """Generate a frame.

    kind="random_gaussian" draws i.i.d. standard normal entries (real and
    imaginary parts for complex), deterministic in seed. kind="named" returns
    a fixed test frame by name; dim/count, when provided, must agree with it.
    """
    if kind == "named":
        if name not in NAMED_FRAMES:
            raise ValueError(f"unknown named frame {name!r}; options: {sorted(NAMED_FRAMES)}")
        rows = NAMED_FRAMES[name]
        if dim is not None and dim != len(rows[0]):
            raise ValueError(f"named frame {name} has dim {len(rows[0])}, requested {dim}")
        if count is not None and count != len(rows):
            raise ValueError(f"named frame {name} has count {len(rows)}, requested {count}")
        vs = tuple(Vector(np.asarray(r, dtype=field.dtype), field) for r in rows)
        return Frame(vs, field, label=name)
    if kind == "random_gaussian":
        if count < dim:
            raise ValueError(f"need count >= dim, got m={count} < n={dim}")
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((count, dim))
        if field is Field.COMPLEX:
            a = a + 1j * rng.standard_normal((count, dim))
        vs = tuple(Vector(row, field) for row in a)
        return Frame(vs, field, label=f"gaussian-n{dim}-m{count}-{field.value}-seed{seed}")
    raise ValueError(f"unknown frame kind {kind!r}")


# --- JSON serialization -----------------------------------------------------

def _float_repr17(x: float) -> str:
    if math.isfinite(x):
        return format(x, ".17g")
    raise ValueError(f"non-finite value {x!r} cannot be serialized")


class _Float17Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        indent = self.indent
        if indent is not None and not isinstance(indent, str):
            indent = " " * indent
        make = json.encoder._make_iterencode(
            {},
            self.default,
            json.encoder.encode_basestring_ascii,
            indent,
            _float_repr17,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return make(o, 0)


def _pyify(obj):
    if isinstance(obj, dict):
        return {k: _pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_pyify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Field):
        return obj.value
    return obj


def dumps_json(obj) -> str:
    """Serialize to JSON with all floats at 17 significant digits."""
    return json.dumps(_pyify(obj), cls=_Float17Encoder, indent=2) + "\n"


def _entry_to_json(z, field: Field):
    if field is Field.COMPLEX:
        return [float(z.real), float(z.imag)]
    return float(z)


def _entry_from_json(e, field: Field, where: str):
    if field is Field.COMPLEX:
        if not (isinstance(e, list) and len(e) == 2):
            raise FrameFileError(f"{where}: expected [re, im] pair, got {e!r}")
        re, im = e
        if not isinstance(re, (int, float)) or isinstance(re, bool):
            raise FrameFileError(f"{where}[0]: expected number, got {re!r}")
        if not isinstance(im, (int, float)) or isinstance(im, bool):
            raise FrameFileError(f"{where}[1]: expected number, got {im!r}")
        return complex(re, im)
    if not isinstance(e, (int, float)) or isinstance(e, bool):
        raise FrameFileError(f"{where}: expected number, got {e!r}")
    return float(e)


def frame_to_dict(F: Frame) -> dict:
    return {
        "field": F.field.value,
        "dim": F.dim,
        "count": F.count,
        "vectors": [
            [_entry_to_json(z, F.field) for z in v.entries] for v in F.vectors
        ],
        "label": F.label,
    }


def frame_from_dict(doc: dict, where: str = "frame") -> Frame:
    if not isinstance(doc, dict):
        raise FrameFileError(f"{where}: expected an object, got {type(doc).__name__}")
    for key in ("field", "dim", "count", "vectors"):
        if key not in doc:
            raise FrameFileError(f"{where}: missing required key {key!r}")
    try:
        field = Field(doc["field"])
    except ValueError:
        raise FrameFileError(f"{where}.field: expected 'real' or 'complex', got {doc['field']!r}")
    dim, count = doc["dim"], doc["count"]
    if not isinstance(dim, int) or not isinstance(count, int):
        raise FrameFileError(f"{where}: dim and count must be integers")
    rows = doc["vectors"]
    if not isinstance(rows, list) or len(rows) != count:
        raise FrameFileError(f"{where}.vectors: expected {count} vectors")
    vectors = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise FrameFileError(f"{where}.vectors[{i}]: expected {dim} entries")
        entries = [
            _entry_from_json(e, field, f"{where}.vectors[{i}][{j}]")
            for j, e in enumerate(row)
        ]
        vectors.append(Vector(np.asarray(entries, dtype=field.dtype), field))
    try:
        return Frame(tuple(vectors), field, label=str(doc.get("label", "")))
    except ValueError as e:
        raise FrameFileError(f"{where}: {e}") from e


def write_frame(path, F: Frame) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(frame_to_dict(F)))


def read_frame(path) -> Frame:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FrameFileError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return frame_from_dict(doc, where=str(path))


def write_measurements(path, rows: Sequence[Measurement]) -> None:
    rows = list(rows)
    if not rows:
        raise ValueError("need at least one measurement row")
    count = rows[0].count
    for r in rows:
        if r.count != count:
            raise ValueError("measurement rows must share one count")
    doc = {"count": count, "values": [list(r.values) for r in rows]}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(doc))


def read_measurements(path) -> list:
    """Read measurement rows; 'values' may be one flat row or a list of rows."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FrameFileError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict) or "count" not in doc or "values" not in doc:
        raise FrameFileError(f"{path}: expected object with keys 'count' and 'values'")
    count, values = doc["count"], doc["values"]
    if not isinstance(count, int):
        raise FrameFileError(f"{path}.count: expected integer, got {count!r}")
    if not isinstance(values, list) or not values:
        raise FrameFileError(f"{path}.values: expected a nonempty list")
    rows = values if isinstance(values[0], list) else [values]
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != count:
            raise FrameFileError(f"{path}.values[{i}]: expected {count} numbers")
        for j, e in enumerate(row):
            if not isinstance(e, (int, float)) or isinstance(e, bool):
                raise FrameFileError(f"{path}.values[{i}][{j}]: expected number, got {e!r}")
        out.append(Measurement(np.asarray(row, dtype=np.float64)))
    return out
