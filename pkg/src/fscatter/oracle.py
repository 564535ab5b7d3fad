"""Deliberately naive time-domain reference for the whole pipeline.

Every node is built by a dense circular convolution (full-length spectral
multiply against an untruncated filter, then an inverse transform),
followed by a pointwise |.|^2; means and variances are taken directly in
the time domain.  No support metadata, no sparsity shortcuts, single
threaded.  Test-only: runtime and memory are allowed to be awful.

numpy's FFT is used here on purpose so the reference route shares no code
with the production transform (the conventions coincide: unnormalized
forward, 1/n on the inverse).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import FeatureEntry, FeatureVector, ScatterConfig
from .filters import (
    COVERED_BAND_FLOOR,
    INFINITE_TIME_SUPPORT,
    build_scale_set,
    mother_params,
)
from .fourier import ShapeError

__all__ = ["DenseFilter", "dense_filter_bank", "oracle_convolve", "oracle_scatter"]


@dataclass(frozen=True)
class DenseFilter:
    """A band-pass filter evaluated on every bin 0..n/2, no truncation."""

    values: np.ndarray
    lam: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v is self.values or v.base is not None:
            v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def dense_filter_bank(n: int, q: int, j: int) -> list[DenseFilter]:
    """Densely sampled, renormalized Morlet bank (epsilon effectively 0)."""
    mp = mother_params(q)
    scales = build_scale_set(q, j)
    w = 2 * np.pi * np.arange(n // 2 + 1) / n
    raw = []
    for lam in scales:
        g = np.exp(-0.5 * ((w - mp.mu0 / lam) / (mp.sigma0 / lam)) ** 2)
        g[0] = 0.0  # H(0) = 0: zero mean
        raw.append(g)
    total = np.sum(raw, axis=0)
    covered = total > COVERED_BAND_FLOOR
    divisor = np.where(covered, total, 1.0)
    return [DenseFilter(g / divisor, float(lam)) for g, lam in zip(raw, scales)]


def oracle_convolve(x, f: DenseFilter) -> np.ndarray:
    """Circular convolution with a single-sided filter: multiply the full
    spectrum by the filter placed on bins 0..n/2 (zeros above), giving the
    analytic output."""
    x = np.asarray(x)
    n = x.shape[0]
    if f.values.shape[0] != n // 2 + 1:
        raise ShapeError(
            f"filter sampled for {2 * (f.values.shape[0] - 1)}-point signals, got {n}"
        )
    full = np.zeros(n)
    full[: n // 2 + 1] = f.values
    return np.fft.ifft(np.fft.fft(x) * full)


def oracle_scatter(x, config: ScatterConfig) -> FeatureVector:
    """Evaluate the layered representation literally in the time domain and
    read S (mean) and V (sum of squared deviations) off every node, in the
    same order as the production engine."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    for sig in config.sigmas:
        if sig is not INFINITE_TIME_SUPPORT:
            raise ValueError("oracle_scatter only covers global averaging")
    banks = [dense_filter_bank(n, q, j) for q, j in zip(config.qs, config.js)]

    entries = []
    mean = float(x.mean())
    entries.append(FeatureEntry((), mean, float(((x - mean) ** 2).sum())))

    current: list[tuple[tuple[int, ...], np.ndarray]] = [((), x.astype(complex))]
    for bank in banks:
        nxt = []
        for path, sig_t in current:
            for i, filt in enumerate(bank):
                y = oracle_convolve(sig_t, filt)
                node = y.real**2 + y.imag**2
                mean = float(node.mean())
                entries.append(
                    FeatureEntry(path + (i,), mean, float(((node - mean) ** 2).sum()))
                )
                nxt.append((path + (i,), node))
        current = nxt
    return FeatureVector(tuple(entries))
