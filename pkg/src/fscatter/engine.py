"""Layered quadratic-scattering representations, end to end in frequency.

Each layer filters its parent's half-spectra with a Morlet bank (a sparse
Hadamard product) and applies the quadratic nonlinearity |.|^2 as a padded
spectral autocorrelation, so no full-length inverse transform is ever
needed.  Two translation-invariant numbers are read off every node: the
scattering coefficient (time mean, the DC bin over n) and the dispersion
coefficient (sum of squared deviations from that mean, via Plancherel with
the DC bin masked out).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import (
    INFINITE_TIME_SUPPORT,
    FilterBank,
    FourierFilter,
    ParameterError,
    is_global_averaging,
    sample_gaussian_scaling,
)
from .fourier import (
    HalfSpectrum,
    ShapeError,
    expand_half_spectrum,
    fft,
    hadamard_on_support,
    ifft,
    is_power_of_two,
    padded_autocorrelation,
)

__all__ = [
    "ScatterPath",
    "ScatterConfig",
    "LayerRepresentation",
    "FeatureEntry",
    "FeatureVector",
    "quadratic_pointwise",
    "spectral_square",
    "forward_layer",
    "extract_scattering",
    "extract_dispersion",
    "scatter",
    "scatter_with_layers",
    "reconstruct_band",
    "node_energy",
    "layer_energy",
]

# A node of the layered representation, addressed by one scale index per layer.
ScatterPath = tuple[int, ...]


@dataclass(frozen=True)
class ScatterConfig:
    """Hyper-parameters of a scattering run.

    qs/js give wavelets-per-octave and octave count per layer (length =
    depth).  sigma_time holds one scaling-function bandwidth per layer
    0..depth; None entries (INFINITE_TIME_SUPPORT) request global
    averaging, and sigma_time=None means global averaging everywhere.
    """

    depth: int
    qs: tuple[int, ...]
    js: tuple[int, ...]
    epsilon: float
    sigma_time: tuple[float | None, ...] | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise ParameterError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "qs", tuple(int(q) for q in self.qs))
        object.__setattr__(self, "js", tuple(int(j) for j in self.js))
        if len(self.qs) != self.depth or len(self.js) != self.depth:
            raise ParameterError(
                f"need {self.depth} per-layer q and j values, "
                f"got {len(self.qs)} and {len(self.js)}"
            )
        if any(q < 1 for q in self.qs) or any(j < 1 for j in self.js):
            raise ParameterError("all per-layer q and j must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.sigma_time is not None:
            sig = tuple(self.sigma_time)
            if len(sig) != self.depth + 1:
                raise ParameterError(
                    f"sigma_time needs one entry per layer 0..{self.depth}"
                )
            object.__setattr__(self, "sigma_time", sig)

    @property
    def sigmas(self) -> tuple[float | None, ...]:
        if self.sigma_time is None:
            return (INFINITE_TIME_SUPPORT,) * (self.depth + 1)
        return self.sigma_time


@dataclass(frozen=True)
class FeatureEntry:
    path: ScatterPath
    s: float
    v: float

    @property
    def layer(self) -> int:
        return len(self.path)


@dataclass(frozen=True)
class FeatureVector:
    """Deterministically ordered (path, s, v) triples: by layer, then
    lexicographically by scale indices within a layer."""

    entries: tuple[FeatureEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def as_arrays(self):
        """(s, v) as float arrays in feature order."""
        s = np.array([e.s for e in self.entries])
        v = np.array([e.v for e in self.entries])
        return s, v


@dataclass
class LayerRepresentation:
    """One layer's nodes: the half-spectrum of every scale path."""

    depth: int
    nodes: dict[ScatterPath, HalfSpectrum]

    @classmethod
    def root(cls, x_hat: HalfSpectrum) -> "LayerRepresentation":
        return cls(0, {(): x_hat})


def quadratic_pointwise(c):
    """|c|^2 evaluated as re^2 + im^2; works on scalars and arrays."""
    c = np.asarray(c)
    out = c.real * c.real + c.imag * c.imag
    return float(out) if out.ndim == 0 else out


def spectral_square(h: HalfSpectrum) -> HalfSpectrum:
    """Half-spectrum of |y|^2 where y is the analytic signal whose full
    spectrum is the single-sided content of `h`.

    The m support values are autocorrelated with wrap-free zero padding and
    the lags 0..m-1 become bins 0..m-1 (divided by n to account for the
    unnormalized forward transform); all higher lags of the linear
    autocorrelation are exactly zero, so the output support is
    [0, min(m-1, n/2)].
    """
    if h.is_empty:
        return HalfSpectrum.empty(h.n)
    r = padded_autocorrelation(h.values)
    r /= h.n
    hi = min(h.width - 1, h.n // 2)
    return HalfSpectrum(r[: hi + 1], h.n, 0, hi)


def forward_layer(prev: LayerRepresentation, bank: FilterBank) -> LayerRepresentation:
    """Advance one layer: every (parent, scale) pair becomes the child
    spectral_square(parent x filter).  No path is pruned; empty parents
    simply propagate exact zeros."""
    filters = bank.filters
    nodes: dict[ScatterPath, HalfSpectrum] = {}
    for path, spec in prev.nodes.items():
        if spec.n != bank.n:
            raise ShapeError(f"node length {spec.n} vs bank length {bank.n}")
        for i, filt in enumerate(filters):
            nodes[path + (i,)] = spectral_square(hadamard_on_support(spec, filt))
    return LayerRepresentation(prev.depth + 1, nodes)


def extract_scattering(node: HalfSpectrum, scaling: FourierFilter):
    """Scattering coefficient of a node.

    With the degenerate global-averaging filter this is the time mean,
    read directly off the DC bin over n.  With a finite-bandwidth scaling
    filter it is the smoothed time-domain sequence (kept for completeness;
    the invariant feature path never uses it).
    """
    if is_global_averaging(scaling):
        if node.is_empty or node.lo > 0:
            return 0.0
        return float(node.values[0].real) / node.n
    return expand_and_smooth(node, scaling)


def expand_and_smooth(node: HalfSpectrum, scaling: FourierFilter) -> np.ndarray:
    """Windowed smoothing: inverse-transform the scaling-filtered node."""
    return ifft(expand_half_spectrum(hadamard_on_support(node, scaling))).real


def extract_dispersion(node: HalfSpectrum, scaling: FourierFilter) -> float:
    """Dispersion coefficient: the energy the scaling filter does not keep.

    Global mode masks only the DC bin, which by Plancherel equals
    sum_t (X(t) - mean)^2: conjugate symmetry doubles bins 1..n/2-1 while
    the Nyquist bin (its own mirror) counts once.  A finite-bandwidth
    filter applies the mask (1 - phi_hat) over the full expanded spectrum
    instead.
    """
    n = node.n
    if node.is_empty:
        return 0.0
    if is_global_averaging(scaling):
        a2 = quadratic_pointwise(node.values[max(node.lo, 1) - node.lo :])
        total = 2.0 * float(a2.sum())
        if node.hi == n // 2:
            total -= float(a2[-1])
        return total / n
    mask = 1.0 - scaling.dense_half()
    masked = node.dense_half() * mask
    a2 = quadratic_pointwise(masked)
    total = float(a2[0]) + 2.0 * float(a2[1 : n // 2].sum()) + float(a2[n // 2])
    return total / n


def node_energy(node: HalfSpectrum) -> float:
    """sum_t X(t)^2 of the node's time-domain signal, via Plancherel on the
    stored bins."""
    if node.is_empty:
        return 0.0
    a2 = quadratic_pointwise(node.values)
    total = 2.0 * float(a2.sum())
    if node.lo == 0:
        total -= float(a2[0])
    if node.hi == node.n // 2:
        total -= float(a2[-1])
    return total / node.n


def layer_energy(layer: LayerRepresentation) -> float:
    return sum(node_energy(node) for node in layer.nodes.values())


def _check_banks(banks, config: ScatterConfig, n: int):
    if len(banks) != config.depth:
        raise ParameterError(
            f"config depth {config.depth} but {len(banks)} filter banks"
        )
    for l, bank in enumerate(banks, start=1):
        if bank.n != n:
            raise ShapeError(f"bank for layer {l} sampled for n={bank.n}, not {n}")
        if not bank.normalized:
            raise ParameterError(f"bank for layer {l} is not renormalized")


def scatter_with_layers(x, banks, config: ScatterConfig):
    """Full scattering run returning (features, layers).

    Layer l of `layers` is the LayerRepresentation for depth l (the root
    holds the input's half-spectrum).  The feature path aggregates
    globally: s is always the time mean; v uses the layer's configured
    scaling bandwidth as its mask (still translation invariant either way).
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if not is_power_of_two(n):
        raise ShapeError(f"signal length must be a power of two, got {n}")
    _check_banks(banks, config, n)
    scalings = [
        sample_gaussian_scaling(sig, config.epsilon, n) for sig in config.sigmas
    ]
    global_avg = sample_gaussian_scaling(INFINITE_TIME_SUPPORT, config.epsilon, n)

    root = LayerRepresentation.root(HalfSpectrum.from_dense(fft(x)))
    layers = [root]
    for bank in banks:
        layers.append(forward_layer(layers[-1], bank))

    entries = []
    for depth, layer in enumerate(layers):
        scaling = scalings[depth]
        for path, node in layer.nodes.items():
            # s is the global time mean (the only invariant scalar); the
            # configured bandwidth only widens v's mask, which stays
            # translation invariant either way.
            s = extract_scattering(node, global_avg)
            v = extract_dispersion(node, scaling)
            entries.append(FeatureEntry(path, s, v))
    return FeatureVector(tuple(entries)), layers


def scatter(x, banks, config: ScatterConfig) -> FeatureVector:
    """Scattering + dispersion features of a real signal (length a power of
    two, already normalized by the caller).

    Computes fft(x) once, iterates the layers, and extracts (s, v) for
    every node in deterministic order; in global-invariance mode no
    full-length inverse transform is ever performed.
    """
    return scatter_with_layers(x, banks, config)[0]


def reconstruct_band(x_hat: HalfSpectrum, bank: FilterBank) -> HalfSpectrum:
    """Sum of all band-pass responses to x_hat.

    With a renormalized bank this reproduces x_hat exactly on the covered
    band (partition of unity); a diagnostic, not part of the feature path.
    """
    if not bank.normalized:
        raise ParameterError("reconstruct_band requires a renormalized bank")
    if x_hat.n != bank.n:
        raise ShapeError(f"signal length mismatch: {x_hat.n} vs {bank.n}")
    acc = np.zeros(x_hat.n // 2 + 1, dtype=np.complex128)
    lo, hi = x_hat.n // 2 + 1, -1
    for filt in bank.filters:
        piece = hadamard_on_support(x_hat, filt)
        if piece.is_empty:
            continue
        acc[piece.lo : piece.hi + 1] += piece.values
        lo, hi = min(lo, piece.lo), max(hi, piece.hi)
    if hi < lo:
        return HalfSpectrum.empty(x_hat.n)
    return HalfSpectrum(acc[lo : hi + 1], x_hat.n, lo, hi)
