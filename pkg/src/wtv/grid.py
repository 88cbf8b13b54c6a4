"""Weighted first-order difference operators on square grids.

Images are (n, n) float64 arrays in C (row-major) order, so flattening maps
pixel (i, j) to linear index k = i*n + j.  A weight field carries one positive
multiplier per pixel and per direction; the weighted gradient applies forward
differences scaled by those multipliers, with the difference at the last
column (x) and last row (y) set to zero, i.e. replicate boundary handling.

div_w is the exact transpose of grad_w, so <grad_w(u), (gx, gy)> equals
<u, div_w(gx, gy)> for every input.  The weighted Laplacian is the five-point
operator -(grad_x^T grad_x + grad_y^T grad_y); laplacian_w evaluates its
stencil directly and agrees elementwise with the composition of grad_w and
div_w.  Its rows sum absolutely to at most 2*(sum of the four neighbour
coefficients), which laplacian_inf_norm returns as the exact infinity norm.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "WeightField",
    "unit_weights",
    "grad_w",
    "div_w",
    "laplacian_w",
    "laplacian_inf_norm",
    "weighted_tv",
    "write_grid",
    "read_grid",
    "write_pgm",
]


def _require_square(u: np.ndarray, name: str = "image") -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {u.shape}")


def _require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class WeightField:
    """Per-pixel positive weights for the x and y difference directions."""

    wx: np.ndarray
    wy: np.ndarray

    def __post_init__(self):
        _require_square(self.wx, "wx")
        _require_same_shape(self.wx, self.wy)
        if not (np.all(np.isfinite(self.wx)) and np.all(np.isfinite(self.wy))):
            raise ValueError("weights must be finite")
        if not (np.all(self.wx > 0) and np.all(self.wy > 0)):
            raise ValueError("weights must be strictly positive")

    @property
    def n(self) -> int:
        return self.wx.shape[0]


def unit_weights(n: int) -> WeightField:
    """Weight field of all ones (plain anisotropic TV)."""
    return WeightField(np.ones((n, n)), np.ones((n, n)))


def grad_w(u: np.ndarray, w: WeightField):
    """Weighted forward differences of u.

    Returns (gx, gy) with gx[i, j] = wx[i, j] * (u[i, j+1] - u[i, j]) and
    zero in the last column; gy analogously along rows with zero in the
    last row.
    """
    _require_same_shape(u, w.wx)
    gx = np.zeros_like(u)
    gy = np.zeros_like(u)
    gx[:, :-1] = w.wx[:, :-1] * (u[:, 1:] - u[:, :-1])
    gy[:-1, :] = w.wy[:-1, :] * (u[1:, :] - u[:-1, :])
    return gx, gy


def div_w(gx: np.ndarray, gy: np.ndarray, w: WeightField) -> np.ndarray:
    """Transpose of grad_w applied to a pair of difference fields.

    The last column of gx and last row of gy are ignored, matching the
    zeroed boundary differences of grad_w; with that convention the
    adjoint identity holds for arbitrary inputs.
    """
    _require_same_shape(gx, gy)
    _require_same_shape(gx, w.wx)
    hx = w.wx * gx
    hx[:, -1] = 0.0
    hy = w.wy * gy
    hy[-1, :] = 0.0
    out = -hx
    out[:, 1:] += hx[:, :-1]
    out -= hy
    out[1:, :] += hy[:-1, :]
    return out


def _stencil_coeffs(w: WeightField):
    """Squared neighbour coefficients (east, west, south, north) per pixel.

    Boundary coefficients that would reach across the grid edge are zero,
    consistent with the zeroed boundary differences in grad_w.
    """
    ce = w.wx * w.wx
    ce[:, -1] = 0.0
    cw = np.zeros_like(ce)
    cw[:, 1:] = ce[:, :-1]
    cs = w.wy * w.wy
    cs[-1, :] = 0.0
    cn = np.zeros_like(cs)
    cn[1:, :] = cs[:-1, :]
    return ce, cw, cs, cn


def laplacian_w(u: np.ndarray, w: WeightField) -> np.ndarray:
    """Weighted five-point Laplacian, evaluated directly from its stencil."""
    _require_same_shape(u, w.wx)
    ce, cw, cs, cn = _stencil_coeffs(w)
    out = -(ce + cw + cs + cn) * u
    out[:, :-1] += ce[:, :-1] * u[:, 1:]
    out[:, 1:] += cw[:, 1:] * u[:, :-1]
    out[:-1, :] += cs[:-1, :] * u[1:, :]
    out[1:, :] += cn[1:, :] * u[:-1, :]
    return out


def laplacian_inf_norm(w: WeightField) -> float:
    """Exact infinity norm of the weighted Laplacian.

    Each row sums absolutely to twice the total of its four neighbour
    coefficients, so the norm is the maximum of that quantity over pixels.
    """
    ce, cw, cs, cn = _stencil_coeffs(w)
    return float(2.0 * (ce + cw + cs + cn).max())


def weighted_tv(u: np.ndarray, w: WeightField) -> float:
    """Anisotropic weighted total variation: l1 norm of both difference fields."""
    gx, gy = grad_w(u, w)
    return float(np.abs(gx).sum() + np.abs(gy).sum())


# ---------------------------------------------------------------------------
# Grid file format: 8-byte magic "WTVGRID1", little-endian u32 side length,
# u8 kind (0 = real float64, 1 = complex128 stored as interleaved re/im
# float64 pairs), then the row-major payload.
# ---------------------------------------------------------------------------

_MAGIC = b"WTVGRID1"


def write_grid(path, arr: np.ndarray) -> None:
    """Write a square real or complex grid to the binary grid format."""
    _require_square(arr, "grid")
    n = arr.shape[0]
    if np.iscomplexobj(arr):
        kind = 1
        payload = np.ascontiguousarray(arr, dtype="<c16").tobytes()
    else:
        kind = 0
        payload = np.ascontiguousarray(arr, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IB", n, kind))
        fh.write(payload)


def read_grid(path) -> np.ndarray:
    """Read a grid written by write_grid; validates magic, kind and size."""
    with open(path, "rb") as fh:
        head = fh.read(len(_MAGIC))
        if head != _MAGIC:
            raise ConfigError(f"{path}: not a grid file (bad magic {head!r})")
        n, kind = struct.unpack("<IB", fh.read(5))
        if kind not in (0, 1):
            raise ConfigError(f"{path}: unknown payload kind {kind}")
        dtype = "<f8" if kind == 0 else "<c16"
        itemsize = 8 if kind == 0 else 16
        payload = fh.read()
    if len(payload) != n * n * itemsize:
        raise ConfigError(
            f"{path}: payload holds {len(payload)} bytes, expected {n * n * itemsize}"
        )
    return np.frombuffer(payload, dtype=dtype).astype(
        np.float64 if kind == 0 else np.complex128
    ).reshape(n, n)


def write_pgm(path, img: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> None:
    """Write a real image as 16-bit binary PGM, clipping to [lo, hi]."""
    _require_square(img, "image")
    if hi <= lo:
        raise ValueError("hi must exceed lo")
    scaled = (np.clip(img, lo, hi) - lo) / (hi - lo)
    samples = np.round(scaled * 65535.0).astype(">u2")
    n = img.shape[0]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{n} {n}\n65535\n".encode("ascii"))
        fh.write(samples.tobytes())
