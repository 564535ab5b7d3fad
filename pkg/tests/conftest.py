"""Shared fixtures and the slow brute-force oracles the fast paths are
checked against."""

import struct

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(0xA5C3)


def dft_direct(x):
    """O(n^2) DFT, the independent oracle for the fast transform."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def autocorr_direct(w):
    """O(m^2) linear autocorrelation r[j] = sum_k w[k+j] conj(w[k])."""
    w = np.asarray(w, dtype=np.complex128)
    m = w.shape[0]
    return np.array([np.sum(w[j:] * np.conj(w[: m - j])) for j in range(m)])


def circular_convolve_direct(x, h):
    """O(n^2) circular convolution."""
    x = np.asarray(x, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    n = x.shape[0]
    t = np.arange(n)
    return np.array([np.sum(x * h[(ti - t) % n]) for ti in t])


def write_wav(path, data, rate=44100, fmt="int16"):
    """Minimal WAV writer for tests; `data` is (samples,) or (channels,
    samples) float in [-1, 1]."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[None, :]
    channels, _ = data.shape
    interleaved = data.T.reshape(-1)
    if fmt == "int16":
        code, bits = 1, 16
        payload = (
            np.clip(interleaved * 32768.0, -32768, 32767).astype("<i2").tobytes()
        )
    elif fmt == "int24":
        code, bits = 1, 24
        ints = np.clip(interleaved * 8388608.0, -8388608, 8388607).astype(np.int64)
        raw = np.zeros((ints.size, 3), dtype=np.uint8)
        raw[:, 0] = ints & 0xFF
        raw[:, 1] = (ints >> 8) & 0xFF
        raw[:, 2] = (ints >> 16) & 0xFF
        payload = raw.tobytes()
    elif fmt == "int32":
        code, bits = 1, 32
        payload = (
            np.clip(interleaved * 2147483648.0, -(2**31), 2**31 - 1)
            .astype("<i4")
            .tobytes()
        )
    elif fmt == "float32":
        code, bits = 3, 32
        payload = interleaved.astype("<f4").tobytes()
    elif fmt == "float64":
        code, bits = 3, 64
        payload = interleaved.astype("<f8").tobytes()
    else:
        raise ValueError(fmt)
    block = channels * bits // 8
    blob = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    blob += b"fmt " + struct.pack(
        "<IHHIIHH", 16, code, channels, rate, rate * block, block, bits
    )
    blob += b"data" + struct.pack("<I", len(payload)) + payload
    with open(path, "wb") as fh:
        fh.write(blob)
    return path
