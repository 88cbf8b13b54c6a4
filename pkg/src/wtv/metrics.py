"""Reconstruction quality measures and a small accumulating stopwatch."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

__all__ = ["QualityReport", "rmse", "psnr", "Stopwatch"]


def rmse(u: np.ndarray, x: np.ndarray) -> float:
    """Root mean squared error sqrt(sum((u - x)^2) / N^2)."""
    if u.shape != x.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {x.shape}")
    d = u - x
    return float(np.sqrt(np.mean(d * d)))


def psnr(u: np.ndarray, x: np.ndarray) -> float:
    """Peak signal-to-noise ratio 20*log10(max(x) / rmse(u, x)), in dB.

    The peak is taken over the reference x only, so the measure is not
    symmetric in its arguments.  Returns +inf when u equals x exactly.
    """
    peak = float(x.max())
    if peak <= 0:
        raise ValueError(f"reference peak must be positive, got {peak}")
    err = rmse(u, x)
    if err == 0.0:
        return float("inf")
    return float(20.0 * np.log10(peak / err))


@dataclass(frozen=True)
class QualityReport:
    """PSNR/RMSE pair against a fixed reference."""

    psnr: float
    rmse: float
    peak: float

    @classmethod
    def compare(cls, u: np.ndarray, x: np.ndarray) -> "QualityReport":
        return cls(psnr=psnr(u, x), rmse=rmse(u, x), peak=float(x.max()))


class Stopwatch:
    """Wall-clock accumulator; scopes add their elapsed time to the total."""

    def __init__(self):
        self.elapsed = 0.0

    @contextmanager
    def scope(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed += time.perf_counter() - t0
