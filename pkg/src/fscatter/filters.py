"""Sparse Morlet filter banks generated directly in the Fourier domain.

A band-pass filter is a Gaussian bump H(w) * exp(-(w - mu0/lam)^2 /
(2 (sigma0/lam)^2)) sampled only on the integer bins where it exceeds the
support threshold epsilon; H is the unit step with H(0) = 0, which
enforces the zero-mean admissibility condition at DC.  The mother
parameters

    mu0    = (pi/2) (2^(-1/Q) + 1)
    sigma0 = sqrt(3) (1 - 2^(-1/Q))

keep a constant bandwidth-to-center ratio across the bank, and the scale
set is the geometric progression {2^(i/Q), i = 0..J*Q}, so a bank holds
J*Q + 1 band-pass filters plus one Gaussian low-pass (scaling) filter.

Supports are computed analytically, so generation cost is proportional to
the total number of stored bins, not to the signal length times the number
of filters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fourier import is_power_of_two

__all__ = [
    "INFINITE_TIME_SUPPORT",
    "COVERED_BAND_FLOOR",
    "ParameterError",
    "MotherParams",
    "FourierFilter",
    "FilterBank",
    "mother_params",
    "build_scale_set",
    "morlet_support",
    "gaussian_support",
    "sample_morlet",
    "sample_gaussian_scaling",
    "generate_filterbank",
    "renormalize_littlewood_paley",
]

# Scaling-filter spec meaning "average over the whole input": the Gaussian
# degenerates to the single DC bin.
INFINITE_TIME_SUPPORT = None

# Bank-response floor below which a bin is left untouched by the
# Littlewood-Paley renormalization (avoids amplifying numerically-dead bins).
COVERED_BAND_FLOOR = 1e-6


class ParameterError(ValueError):
    """Invalid filter-bank hyper-parameter."""


@dataclass(frozen=True)
class MotherParams:
    """Center frequency and bandwidth of the mother wavelet (radians/sample)."""

    mu0: float
    sigma0: float
    q: int


def mother_params(q: int) -> MotherParams:
    if q < 1:
        raise ParameterError(f"wavelets per octave must be >= 1, got {q}")
    r = 2.0 ** (-1.0 / q)
    return MotherParams(mu0=(math.pi / 2) * (r + 1), sigma0=math.sqrt(3) * (1 - r), q=q)


def build_scale_set(q: int, j: int) -> np.ndarray:
    """Geometric scale progression {2^(i/Q) | i = 0..J*Q}, ascending."""
    if q < 1 or j < 1:
        raise ParameterError(f"need q >= 1 and j >= 1, got q={q}, j={j}")
    scales = 2.0 ** (np.arange(j * q + 1) / q)
    scales.flags.writeable = False
    return scales


def _half_width(sigma0: float, epsilon: float) -> float:
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    return sigma0 * math.sqrt(-2.0 * math.log(epsilon))


def morlet_support(lam: float, mu0: float, sigma0: float, epsilon: float):
    """Continuous frequency interval where the scaled Morlet exceeds epsilon,
    clipped to [0, pi]."""
    if lam < 1:
        raise ParameterError(f"scale must be >= 1, got {lam}")
    r = _half_width(sigma0, epsilon) / lam
    c = mu0 / lam
    return max(c - r, 0.0), min(c + r, math.pi)


def gaussian_support(sigma: float, epsilon: float):
    """Single-sided epsilon-support [0, sigma*sqrt(-2 ln eps)] of the
    scaling filter, clipped to [0, pi]."""
    if not (sigma > 0 and math.isfinite(sigma)):
        raise ParameterError(f"bandwidth must be positive and finite, got {sigma}")
    return 0.0, min(_half_width(sigma, epsilon), math.pi)


@dataclass(frozen=True)
class FourierFilter:
    """A filter stored on its support bins [lo, hi] only.

    values are real, nonnegative, and (for band-pass filters) strictly
    above the threshold the support was derived from.  `lam` is the scale
    of a band-pass filter and None for the scaling filter.  The empty
    filter uses the (0, -1) sentinel.
    """

    values: np.ndarray
    lo: int
    hi: int
    n: int
    lam: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v is self.values or v.base is not None:
            v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        if self.hi >= self.lo and v.size != self.hi - self.lo + 1:
            raise ParameterError(
                f"{v.size} values for support [{self.lo}, {self.hi}]"
            )
        if self.hi < self.lo and v.size:
            raise ParameterError("empty support but non-empty values")

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    @property
    def width(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1

    @property
    def support(self):
        return (self.lo, self.hi)

    def dense_half(self) -> np.ndarray:
        out = np.zeros(self.n // 2 + 1)
        if not self.is_empty:
            out[self.lo : self.hi + 1] = self.values
        return out


def _gauss(w, mu, sig):
    """The one Gaussian expression used for every filter evaluation, so
    support decisions and stored values round identically."""
    return np.exp(-0.5 * ((w - mu) / sig) ** 2)


def _morlet_bin_ranges(scales, mu0, sigma0, epsilon, n):
    """Per-scale support bin ranges with DC excluded, clipped to [1, n/2].

    Bins are kept when their frequency lies strictly inside the open
    epsilon-interval (a boundary bin whose value equals epsilon exactly is
    excluded); the edge bins are re-checked against the sampled Gaussian so
    every stored value stays strictly above epsilon under rounding.
    """
    r = _half_width(sigma0, epsilon)
    step = 2 * math.pi / n
    lo = np.floor((mu0 - r) / scales / step).astype(np.int64) + 1
    hi = np.ceil((mu0 + r) / scales / step).astype(np.int64) - 1
    lo = np.maximum(lo, 1)
    hi = np.minimum(hi, n // 2)

    mu = mu0 / scales
    sig = sigma0 / scales
    for edge, shift in ((lo, 1), (hi, -1)):
        nonempty = lo <= hi
        bump = nonempty & (_gauss(edge * step, mu, sig) <= epsilon)
        edge[bump] += shift
    return lo, hi


def sample_morlet(
    lam: float, mu0: float, sigma0: float, epsilon: float, n: int
) -> FourierFilter:
    """Sample one scaled Morlet on its support bins.

    An interval that contains no bin after clipping yields the (legal)
    empty filter.
    """
    if not is_power_of_two(n):
        raise ParameterError(f"signal length must be a power of two, got {n}")
    if lam < 1:
        raise ParameterError(f"scale must be >= 1, got {lam}")
    lams = np.asarray([float(lam)])
    lo, hi = _morlet_bin_ranges(lams, mu0, sigma0, epsilon, n)
    lo, hi = int(lo[0]), int(hi[0])
    if lo > hi:
        return FourierFilter(np.zeros(0), 0, -1, n, lam=float(lam))
    w = np.arange(lo, hi + 1) * (2 * math.pi / n)
    vals = _gauss(w, mu0 / lam, sigma0 / lam)
    return FourierFilter(vals, lo, hi, n, lam=float(lam))


def sample_gaussian_scaling(
    sigma: float | None, epsilon: float, n: int
) -> FourierFilter:
    """Sample the Gaussian scaling filter exp(-w^2 / (2 sigma^2)).

    sigma is the frequency-domain bandwidth; INFINITE_TIME_SUPPORT requests
    global averaging and returns the degenerate filter {bin 0 -> 1}.
    """
    if not is_power_of_two(n):
        raise ParameterError(f"signal length must be a power of two, got {n}")
    if sigma is INFINITE_TIME_SUPPORT:
        return FourierFilter(np.ones(1), 0, 0, n, lam=None)
    _, w_hi = gaussian_support(sigma, epsilon)
    hi = min(math.ceil(w_hi * n / (2 * math.pi)) - 1, n // 2)
    hi = max(hi, 0)  # bin 0 always stored: the filter peaks there at 1
    w = np.arange(hi + 1) * (2 * math.pi / n)
    vals = _gauss(w, 0.0, sigma)
    while hi > 0 and vals[hi] <= epsilon:
        hi -= 1
        vals = vals[: hi + 1]
    return FourierFilter(vals, 0, hi, n, lam=None)


def is_global_averaging(f: FourierFilter) -> bool:
    """True for the degenerate scaling filter that averages the whole input."""
    return f.lam is None and f.lo == 0 and f.hi == 0


class FilterBank:
    """All band-pass filters of one layer plus its scaling filter.

    Values are held in one contiguous array (ascending scale) so that bank
    generation and renormalization touch each stored bin a constant number
    of times; `filters` materializes the per-filter view lazily.
    """

    def __init__(
        self,
        *,
        n: int,
        q: int,
        j: int,
        epsilon: float,
        scales: np.ndarray,
        band_lo: np.ndarray,
        band_hi: np.ndarray,
        band_values: np.ndarray,
        scaling: FourierFilter,
        normalized: bool,
    ):
        self.n = n
        self.q = q
        self.j = j
        self.epsilon = epsilon
        self.scales = scales
        self._lo = band_lo
        self._hi = band_hi
        self._values = band_values
        counts = np.maximum(band_hi - band_lo + 1, 0)
        self._offsets = np.concatenate(([0], np.cumsum(counts)))
        if self._offsets[-1] != band_values.size:
            raise ParameterError("support ranges inconsistent with value buffer")
        self.scaling = scaling
        self.normalized = normalized
        for arr in (self.scales, self._lo, self._hi, self._values):
            arr.flags.writeable = False

    @classmethod
    def from_filters(
        cls, filters, scaling, *, q, j, epsilon, normalized=False
    ) -> "FilterBank":
        """Assemble a bank from individual filters (mainly for tests and
        hand-built banks; generated banks come from generate_filterbank)."""
        filters = list(filters)
        n = filters[0].n
        lo = np.array([f.lo for f in filters], dtype=np.int64)
        hi = np.array([f.hi for f in filters], dtype=np.int64)
        vals = (
            np.concatenate([f.values for f in filters])
            if filters
            else np.zeros(0)
        )
        scales = np.array(
            [1.0 if f.lam is None else f.lam for f in filters]
        )
        return cls(
            n=n,
            q=q,
            j=j,
            epsilon=epsilon,
            scales=scales,
            band_lo=lo,
            band_hi=hi,
            band_values=vals,
            scaling=scaling,
            normalized=normalized,
        )

    def __len__(self) -> int:
        return len(self.scales)

    @cached_property
    def filters(self) -> tuple[FourierFilter, ...]:
        out = []
        for i, lam in enumerate(self.scales):
            a, b = self._offsets[i], self._offsets[i + 1]
            if a == b:
                out.append(FourierFilter(np.zeros(0), 0, -1, self.n, lam=float(lam)))
            else:
                out.append(
                    FourierFilter(
                        self._values[a:b],
                        int(self._lo[i]),
                        int(self._hi[i]),
                        self.n,
                        lam=float(lam),
                    )
                )
        return tuple(out)

    def support_intervals(self):
        """(lo, hi) per band-pass filter; (0, -1) marks an empty filter."""
        return [
            (int(a), int(b)) if b >= a else (0, -1)
            for a, b in zip(self._lo, self._hi)
        ]

    def nonzero_count(self) -> int:
        """Stored bins across the band-pass filters."""
        return int(self._values.size)

    def sparsity_percent(self) -> float:
        """Percentage of zero entries when each band-pass filter is viewed
        as a sparse length-n spectrum (single-sided storage leaves the
        mirrored half structurally zero)."""
        total = len(self.scales) * self.n
        return 100.0 * (1.0 - self.nonzero_count() / total)

    def _concat_bins(self) -> np.ndarray:
        counts = self._offsets[1:] - self._offsets[:-1]
        reps = np.repeat(self._lo - self._offsets[:-1], counts)
        return np.arange(self._values.size, dtype=np.int64) + reps

    def response_sum(self) -> np.ndarray:
        """Dense sum of all band-pass responses over bins 0..n/2."""
        return np.bincount(
            self._concat_bins(), weights=self._values, minlength=self.n // 2 + 1
        )

    def covered_band(self) -> np.ndarray:
        """Boolean mask of the bins the bank tiles (response above the
        renormalization floor)."""
        return self.response_sum() > COVERED_BAND_FLOOR

    def describe(self) -> dict:
        """JSON-serializable description (values are regenerable and not
        included)."""
        return {
            "n": self.n,
            "q": self.q,
            "j": self.j,
            "epsilon": self.epsilon,
            "normalized": self.normalized,
            "scales": [float(s) for s in self.scales],
            "supports": [list(s) for s in self.support_intervals()],
        }


def generate_filterbank(
    n: int,
    q: int,
    j: int,
    epsilon: float,
    normalize: bool = True,
    sigma: float | None = INFINITE_TIME_SUPPORT,
) -> FilterBank:
    """Build the J*Q + 1 Morlet filters plus the scaling filter for
    length-n signals.

    Work and memory are proportional to the total number of stored bins.
    """
    if not is_power_of_two(n):
        raise ParameterError(f"signal length must be a power of two, got {n}")
    mp = mother_params(q)
    scales = build_scale_set(q, j)
    lo, hi = _morlet_bin_ranges(scales, mp.mu0, mp.sigma0, epsilon, n)
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())

    # concatenated bin indices for all filters, then one Gaussian evaluation
    starts = np.concatenate(([0], np.cumsum(counts)))
    bins = np.arange(total, dtype=np.int64) + np.repeat(lo - starts[:-1], counts)
    w = bins * (2 * math.pi / n)
    mu = np.repeat(mp.mu0 / scales, counts)
    sig = np.repeat(mp.sigma0 / scales, counts)
    values = _gauss(w, mu, sig)

    bank = FilterBank(
        n=n,
        q=q,
        j=j,
        epsilon=epsilon,
        scales=scales,
        band_lo=lo,
        band_hi=hi,
        band_values=values,
        scaling=sample_gaussian_scaling(sigma, epsilon, n),
        normalized=False,
    )
    if normalize:
        bank = renormalize_littlewood_paley(bank)
    return bank


def renormalize_littlewood_paley(bank: FilterBank) -> FilterBank:
    """Divide every filter pointwise by the bank response so the band-pass
    responses sum to one on the covered band.

    Bins where the response is at or below COVERED_BAND_FLOOR are left
    untouched.  Idempotent: a bank that is already normalized is returned
    as is (it is immutable), rather than re-divided by a sum that is one
    only up to rounding.
    """
    if bank.normalized:
        return bank
    T = bank.response_sum()
    bins = bank._concat_bins()
    t = T[bins]
    divisor = np.where(t > COVERED_BAND_FLOOR, t, 1.0)
    return FilterBank(
        n=bank.n,
        q=bank.q,
        j=bank.j,
        epsilon=bank.epsilon,
        scales=bank.scales,
        band_lo=bank._lo,
        band_hi=bank._hi,
        band_values=bank._values / divisor,
        scaling=bank.scaling,
        normalized=True,
    )
