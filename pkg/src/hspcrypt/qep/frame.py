"""Ciphertext frame and its binary wire format.

Layout (little-endian)::

    0   4   magic b"QEP1"
    4   1   version (1)
    5   2   k, number of invariant factors
    7   4k  invariant factors n_j (u32)
    ..  8   element count E (u64)
    ..  8   plaintext byte length (u64)
    ..  4kE element coordinates, k u32 per element
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..errors import MalformedFrame
from ..groups import AbelianGroup

MAGIC = b"QEP1"
VERSION = 1
_PREFIX = struct.Struct("<4sBH")
_COUNTS = struct.Struct("<QQ")


@dataclass(frozen=True, eq=False)
class CiphertextFrame:
    group: AbelianGroup
    elements: np.ndarray          # (E, k) int64, read-only
    plaintext_length: int
    version: int = VERSION

    def __post_init__(self):
        k = self.group.rank
        elems = np.array(self.elements, dtype=np.int64).reshape(-1, k)
        factors = np.array(self.group.invariant_factors, dtype=np.int64)
        if elems.size and (elems.min() < 0 or np.any(elems >= factors)):
            raise ValueError("frame element coordinates must be reduced mod the invariant factors")
        if self.plaintext_length < 0:
            raise ValueError("negative plaintext length")
        elems.setflags(write=False)
        object.__setattr__(self, "elements", elems)

    @property
    def element_count(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.element_count

    def __eq__(self, other):
        if not isinstance(other, CiphertextFrame):
            return NotImplemented
        return (self.group == other.group and self.version == other.version
                and self.plaintext_length == other.plaintext_length
                and np.array_equal(self.elements, other.elements))

    def indices(self) -> np.ndarray:
        """Row-major mixed-radix index of every element."""
        if self.element_count == 0:
            return np.zeros(0, dtype=np.int64)
        return np.ravel_multi_index(self.elements.T, self.group.invariant_factors)

    def with_element(self, position: int, element) -> "CiphertextFrame":
        elems = self.elements.copy()
        elems[position] = self.group.element(element)
        return CiphertextFrame(self.group, elems, self.plaintext_length, self.version)


def serialize(frame: CiphertextFrame) -> bytes:
    k = frame.group.rank
    parts = [
        _PREFIX.pack(MAGIC, frame.version, k),
        struct.pack(f"<{k}I", *frame.group.invariant_factors),
        _COUNTS.pack(frame.element_count, frame.plaintext_length),
        frame.elements.astype("<u4").tobytes(),
    ]
    return b"".join(parts)


def deserialize(data: bytes) -> CiphertextFrame:
    """Parse a frame; ``MalformedFrame.offset`` locates the first violation."""
    data = bytes(data)
    head = data[:4]
    if head != MAGIC[: len(head)]:
        raise MalformedFrame("bad magic", 0)
    if len(data) < _PREFIX.size:
        raise MalformedFrame("truncated header", len(data))
    _, version, k = _PREFIX.unpack_from(data, 0)
    if version != VERSION:
        raise MalformedFrame(f"unknown version {version}", 4)
    if k == 0:
        raise MalformedFrame("zero invariant factors", 5)
    pos = _PREFIX.size
    if len(data) < pos + 4 * k + _COUNTS.size:
        raise MalformedFrame("truncated header", len(data))
    factors = struct.unpack_from(f"<{k}I", data, pos)
    for j, n in enumerate(factors):
        if n < 2:
            raise MalformedFrame(f"invariant factor {n} < 2", pos + 4 * j)
    pos += 4 * k
    count, length = _COUNTS.unpack_from(data, pos)
    pos += _COUNTS.size
    end = pos + 4 * k * count
    if len(data) < end:
        raise MalformedFrame("truncated element data", len(data))
    if len(data) > end:
        raise MalformedFrame("trailing bytes", end)
    coords = np.frombuffer(data, dtype="<u4", count=k * count, offset=pos).astype(np.int64).reshape(count, k)
    bad = coords >= np.array(factors, dtype=np.int64)
    if bad.any():
        flat = int(np.flatnonzero(bad.ravel())[0])
        raise MalformedFrame("coordinate not reduced", pos + 4 * flat)
    return CiphertextFrame(AbelianGroup(factors), coords, length, version)
