"""Minimal RIFF/WAVE reader for PCM and IEEE-float payloads.

Hand-rolled rather than stdlib `wave` because the pipeline needs 24-bit
and float payloads plus format errors that point at the offending byte
offset.  Compressed codecs are rejected.
"""

from __future__ import annotations

import struct

import numpy as np

__all__ = ["WavFormatError", "ingest_wav"]

_PCM = 1
_IEEE_FLOAT = 3
_EXTENSIBLE = 0xFFFE


class WavFormatError(ValueError):
    """Malformed or unsupported WAV data; `offset` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _decode(payload: bytes, fmt_code: int, bits: int, data_offset: int) -> np.ndarray:
    if fmt_code == _PCM:
        if bits == 8:
            raw = np.frombuffer(payload, dtype=np.uint8)
            return (raw.astype(np.float64) - 128.0) / 128.0
        if bits == 16:
            return np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
        if bits == 24:
            b = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
            val = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
            val -= (val & 0x800000) << 1  # sign-extend
            return val.astype(np.float64) / 8388608.0
        if bits == 32:
            return np.frombuffer(payload, dtype="<i4").astype(np.float64) / 2147483648.0
        raise WavFormatError(f"unsupported PCM bit depth {bits}", data_offset)
    if fmt_code == _IEEE_FLOAT:
        if bits == 32:
            return np.frombuffer(payload, dtype="<f4").astype(np.float64)
        if bits == 64:
            return np.frombuffer(payload, dtype="<f8").astype(np.float64)
        raise WavFormatError(f"unsupported float bit depth {bits}", data_offset)
    raise WavFormatError(f"unsupported codec 0x{fmt_code:04x}", data_offset)


def ingest_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file as (mono float64 signal, sample rate).

    Integer payloads are scaled into [-1, 1]; multi-channel audio is
    averaged down to mono.  Raises WavFormatError on anything that is not
    uncompressed integer or float PCM.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 12 or blob[0:4] != b"RIFF":
        raise WavFormatError("missing RIFF magic", 0)
    if blob[8:12] != b"WAVE":
        raise WavFormatError("RIFF form is not WAVE", 8)

    fmt = None
    fmt_offset = None
    data = None
    data_offset = None
    pos = 12
    while pos + 8 <= len(blob):
        cid = blob[pos : pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        body = pos + 8
        if body + size > len(blob):
            raise WavFormatError(
                f"chunk {cid!r} of size {size} overruns the file", pos
            )
        if cid == b"fmt ":
            if size < 16:
                raise WavFormatError("fmt chunk too short", pos)
            code, channels, rate, _, block_align, bits = struct.unpack_from(
                "<HHIIHH", blob, body
            )
            if code == _EXTENSIBLE:
                if size < 40:
                    raise WavFormatError("extensible fmt chunk too short", pos)
                (code,) = struct.unpack_from("<H", blob, body + 24)
            fmt = (code, channels, rate, block_align, bits)
            fmt_offset = pos
        elif cid == b"data":
            data = blob[body : body + size]
            data_offset = body
        pos = body + size + (size & 1)  # chunks are word aligned

    if fmt is None:
        raise WavFormatError("no fmt chunk", 12)
    if data is None:
        raise WavFormatError("no data chunk", 12)
    code, channels, rate, block_align, bits = fmt
    if channels < 1:
        raise WavFormatError("zero channels", fmt_offset)
    if block_align != channels * (bits // 8):
        raise WavFormatError(
            f"block align {block_align} inconsistent with "
            f"{channels} channel(s) at {bits} bits",
            fmt_offset,
        )
    if len(data) % block_align:
        raise WavFormatError("data chunk is not a whole number of frames", data_offset)

    samples = _decode(data, code, bits, data_offset)
    if channels > 1:
        samples = samples.reshape(-1, channels).mean(axis=1)
    return samples, int(rate)
