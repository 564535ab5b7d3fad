"""Dense and sparse spectral primitives.

Radix-2 FFT with the unnormalized-forward convention (the inverse carries
the 1/n factor), single-sided half-spectrum storage with conjugate-symmetry
bookkeeping, support-windowed Hadamard products, and the zero-padded
autocorrelation kernel that evaluates a squared modulus without leaving the
frequency domain.

Dense spectra are plain 1-d complex ndarrays whose length is the signal
length (a power of two).  All functions here are pure; HalfSpectrum values
are frozen after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .filters import FourierFilter

__all__ = [
    "LengthError",
    "ShapeError",
    "SymmetryError",
    "HalfSpectrum",
    "SupportWindow",
    "fft",
    "ifft",
    "padded_autocorrelation",
    "padded_length",
    "expand_half_spectrum",
    "hadamard_on_support",
    "is_power_of_two",
]

# relative tolerance under which the DC/Nyquist imaginary part is treated
# as rounding noise and discarded on expansion
REALNESS_RTOL = 1e-9


class LengthError(ValueError):
    """Transform length is not a power of two (>= 2)."""


class ShapeError(ValueError):
    """Operands were sampled for different signal lengths."""


class SymmetryError(ValueError):
    """Conjugate symmetry violated: DC or Nyquist bin not real."""


def is_power_of_two(n) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def _check_pow2(n):
    if not is_power_of_two(n):
        raise LengthError(f"length must be a power of two >= 2, got {n}")


@lru_cache(maxsize=64)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev = (rev << 1) | ((idx >> b) & 1)
    rev.flags.writeable = False
    return rev


def _radix2(a: np.ndarray, sign: float) -> np.ndarray:
    """Iterative Cooley-Tukey butterflies; `a` is consumed."""
    n = a.shape[0]
    a = a[_bit_reversal(n)]
    m = 1
    while m < n:
        tw = np.exp((sign * 1j * np.pi / m) * np.arange(m))
        blk = a.reshape(-1, 2 * m)
        t = blk[:, m:] * tw
        blk[:, m:] = blk[:, :m] - t
        blk[:, :m] += t
        m *= 2
    return a


def fft(signal) -> np.ndarray:
    """Forward DFT, X[k] = sum_t x[t] exp(-2*pi*i*k*t/n), unnormalized.

    The signal length must be a power of two (radix-2 only); raises
    LengthError otherwise.
    """
    a = np.asarray(signal)
    if a.ndim != 1:
        raise ShapeError(f"expected a 1-d signal, got shape {a.shape}")
    _check_pow2(a.shape[0])
    return _radix2(a.astype(np.complex128), -1.0)


def ifft(spectrum) -> np.ndarray:
    """Inverse DFT carrying the 1/n factor, so ifft(fft(x)) == x."""
    a = np.asarray(spectrum)
    if a.ndim != 1:
        raise ShapeError(f"expected a 1-d spectrum, got shape {a.shape}")
    n = a.shape[0]
    _check_pow2(n)
    out = _radix2(a.astype(np.complex128), +1.0)
    out /= n
    return out


def padded_length(m: int) -> int:
    """Smallest power of two >= 2m: the FFT size that makes a length-m
    circular autocorrelation wrap-free."""
    if m < 1:
        raise ValueError(f"window size must be >= 1, got {m}")
    return 1 << (2 * m - 1).bit_length()


@dataclass(frozen=True)
class SupportWindow:
    """A contiguous run of m spectral bins starting at `offset`, plus the
    power-of-two FFT size used when autocorrelating it."""

    offset: int
    m: int
    padded_len: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "padded_len", padded_length(self.m))


def padded_autocorrelation(window) -> np.ndarray:
    """Linear (non-circular) autocorrelation r[j] = sum_k w[k+j] conj(w[k]),
    lags 0..m-1.

    Zero-pads to the smallest power of two >= 2m so the circular
    autocorrelation computed by FFT has no wrap-around, making the result
    exact up to rounding.
    """
    w = np.asarray(window, dtype=np.complex128)
    if w.ndim != 1 or w.shape[0] < 1:
        raise ValueError("window must be a non-empty 1-d sequence")
    m = w.shape[0]
    buf = np.zeros(SupportWindow(0, m).padded_len, dtype=np.complex128)
    buf[:m] = w
    spec = _radix2(buf, -1.0)
    spec *= np.conj(spec)
    out = _radix2(spec, +1.0)
    out /= len(out)
    return out[:m]


@dataclass(frozen=True)
class HalfSpectrum:
    """Single-sided ([0, pi]) spectrum of a length-n signal.

    Only the bins of the closed support interval [lo, hi] are stored; every
    bin outside it is exactly zero.  The empty support is the sentinel
    (lo, hi) = (0, -1) with a zero-length value array.
    """

    values: np.ndarray
    n: int
    lo: int = 0
    hi: int = -1

    def __post_init__(self):
        _check_pow2(self.n)
        v = np.asarray(self.values, dtype=np.complex128)
        if self.hi < self.lo:
            if v.size:
                raise ShapeError("empty support but non-empty values")
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "hi", -1)
        else:
            if not (0 <= self.lo <= self.hi <= self.n // 2):
                raise ShapeError(
                    f"support [{self.lo}, {self.hi}] outside [0, {self.n // 2}]"
                )
            if v.size != self.hi - self.lo + 1:
                raise ShapeError(
                    f"{v.size} values for support [{self.lo}, {self.hi}]"
                )
        if v is self.values or v.base is not None:
            v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def empty(cls, n: int) -> "HalfSpectrum":
        return cls(np.zeros(0, dtype=np.complex128), n)

    @classmethod
    def from_dense(cls, spectrum) -> "HalfSpectrum":
        """Keep bins 0..n/2 of a full-length spectrum."""
        a = np.asarray(spectrum, dtype=np.complex128)
        _check_pow2(a.shape[0])
        n = a.shape[0]
        return cls(a[: n // 2 + 1], n, 0, n // 2)

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    @property
    def width(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1

    def dense_half(self) -> np.ndarray:
        """All n/2 + 1 single-sided bins, zeros outside the support."""
        out = np.zeros(self.n // 2 + 1, dtype=np.complex128)
        if not self.is_empty:
            out[self.lo : self.hi + 1] = self.values
        return out


def expand_half_spectrum(h: HalfSpectrum) -> np.ndarray:
    """Rebuild the full length-n spectrum via value[n-k] = conj(value[k]).

    The DC and Nyquist bins are their own mirrors and must be real; an
    imaginary part above REALNESS_RTOL (relative) raises SymmetryError,
    below it is discarded.
    """
    n = h.n
    full = np.zeros(n, dtype=np.complex128)
    if h.is_empty:
        return full
    full[h.lo : h.hi + 1] = h.values
    for k, name in ((0, "DC"), (n // 2, "Nyquist")):
        v = full[k]
        if abs(v.imag) > REALNESS_RTOL * abs(v):
            raise SymmetryError(
                f"{name} bin must be real, got imaginary part {v.imag!r}"
            )
        full[k] = v.real
    k0, k1 = max(h.lo, 1), min(h.hi, n // 2 - 1)
    if k0 <= k1:
        ks = np.arange(k0, k1 + 1)
        full[n - ks] = np.conj(full[ks])
    return full


def hadamard_on_support(h: HalfSpectrum, f: "FourierFilter") -> HalfSpectrum:
    """Pointwise product of a half-spectrum with a filter, restricted to the
    intersection of their supports.  Disjoint supports yield the empty
    spectrum."""
    if h.n != f.n:
        raise ShapeError(f"signal length mismatch: {h.n} vs {f.n}")
    if h.is_empty or f.is_empty:
        return HalfSpectrum.empty(h.n)
    lo = max(h.lo, f.lo)
    hi = min(h.hi, f.hi)
    if lo > hi:
        return HalfSpectrum.empty(h.n)
    vals = h.values[lo - h.lo : hi - h.lo + 1] * f.values[lo - f.lo : hi - f.lo + 1]
    return HalfSpectrum(vals, h.n, lo, hi)
