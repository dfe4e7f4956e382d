"""Deterministic seeded generators for the six benchmark workloads.

The stream generator is SplitMix64 run in counter mode so any element of a
stream is addressable directly and every language port can reproduce the
exact bytes:

    value_i = mix64((seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2^64)
    mix64(x): x ^= x >> 30; x *= 0xBF58476D1CE4E5B9
              x ^= x >> 27; x *= 0x94D049BB133111EB
              x ^= x >> 31

Derived draws (documented so ports agree bit-for-bit):
    u32   = value >> 32
    f32   = (value >> 40) * 2^-24          (24-bit mantissa, in [0, 1))
    f64   = (value >> 11) * 2^-53          (in [0, 1))
    mod-k = value mod k                    (bias < 2^-60 for k <= 3)
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import PAIR_DTYPE, PARTICLE_DTYPE, PARTICLE_PAYLOAD_FLOATS

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

_MAGIC = b"PSRT"
_HEADER = struct.Struct("<4sIQ")  # magic, kind code, n — 16 bytes

assert _HEADER.size == 16


class WorkloadKind(enum.Enum):
    UNIFORM_INT = "uint"
    UNIFORM_FLOAT = "float"
    ALMOST_SORTED = "almost"
    DUPLICATE3 = "dup3"
    PAIR = "pair"
    PARTICLE = "particle"


# Stable on-disk codes, in declaration order.
_KIND_CODE = {kind: code for code, kind in enumerate(WorkloadKind)}
_CODE_KIND = {code: kind for kind, code in _KIND_CODE.items()}

_KIND_DTYPE = {
    WorkloadKind.UNIFORM_INT: np.dtype("<u4"),
    WorkloadKind.UNIFORM_FLOAT: np.dtype("<f4"),
    WorkloadKind.ALMOST_SORTED: np.dtype("<u4"),
    WorkloadKind.DUPLICATE3: np.dtype("<u4"),
    WorkloadKind.PAIR: PAIR_DTYPE,
    WorkloadKind.PARTICLE: PARTICLE_DTYPE,
}


@dataclass(frozen=True)
class WorkloadSpec:
    kind: WorkloadKind
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _MIX_1
    x = x ^ (x >> np.uint64(27))
    x = x * _MIX_2
    return x ^ (x >> np.uint64(31))


def stream(seed: int, start: int, count: int) -> np.ndarray:
    """u64 values at counter positions [start, start+count) of the seed's stream."""
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64(base + counters * _GAMMA)


def generate(spec: WorkloadSpec) -> np.ndarray:
    n = spec.n
    kind = spec.kind
    if kind is WorkloadKind.UNIFORM_INT:
        return (stream(spec.seed, 0, n) >> np.uint64(32)).astype(np.uint32)
    if kind is WorkloadKind.UNIFORM_FLOAT:
        mantissa = stream(spec.seed, 0, n) >> np.uint64(40)
        return (mantissa * np.float64(2.0**-24)).astype(np.float32)
    if kind is WorkloadKind.ALMOST_SORTED:
        if n > 2**32:
            raise ValueError("AlmostSorted values are u32; n must be <= 2^32")
        out = np.arange(n, dtype=np.uint32)
        n_swaps = int(np.sqrt(n))
        if n_swaps and n:
            draws = stream(spec.seed, 0, 2 * n_swaps) % np.uint64(n)
            left = draws[0::2].astype(np.int64)
            right = draws[1::2].astype(np.int64)
            for i, j in zip(left, right):
                out[i], out[j] = out[j], out[i]
        return out
    if kind is WorkloadKind.DUPLICATE3:
        return (stream(spec.seed, 0, n) % np.uint64(3)).astype(np.uint32)
    if kind is WorkloadKind.PAIR:
        out = np.empty(n, dtype=PAIR_DTYPE)
        out["key"] = stream(spec.seed, 0, n)
        out["index"] = np.arange(n, dtype=np.uint64)
        return out
    if kind is WorkloadKind.PARTICLE:
        out = np.empty(n, dtype=PARTICLE_DTYPE)
        out["key"] = stream(spec.seed, 0, n)
        raw = stream(spec.seed, n, n * PARTICLE_PAYLOAD_FLOATS) >> np.uint64(11)
        out["data"] = (raw * np.float64(2.0**-53)).reshape(n, PARTICLE_PAYLOAD_FLOATS)
        return out
    raise ValueError(f"unknown workload kind {kind!r}")


def dump(path: str | Path, kind: WorkloadKind, records: np.ndarray) -> None:
    """Write records as little-endian packed binary with a 16-byte header."""
    expected = _KIND_DTYPE[kind]
    if records.dtype != expected:
        raise TypeError(f"{kind.value} records must have dtype {expected}, got {records.dtype}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _KIND_CODE[kind], len(records)))
        fh.write(np.ascontiguousarray(records).tobytes())


def load(path: str | Path) -> tuple[WorkloadKind, np.ndarray]:
    with open(path, "rb") as fh:
        magic, code, n = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _MAGIC:
            raise ValueError(f"not a workload file: bad magic {magic!r}")
        if code not in _CODE_KIND:
            raise ValueError(f"unknown workload kind code {code}")
        kind = _CODE_KIND[code]
        dtype = _KIND_DTYPE[kind]
        payload = fh.read(n * dtype.itemsize)
    if len(payload) != n * dtype.itemsize:
        raise ValueError(f"truncated workload file: expected {n} records")
    return kind, np.frombuffer(payload, dtype=dtype).copy()
