"""Subgroup encryption: the key picks a generator g_K of G, plaintext
becomes multiples m * g_K of it, and chaff drawn from G outside <g_K>
hides them. Decryption keeps the members of <g_K> and takes discrete
logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..errors import DegenerateKey, DigitRangeError, LengthMismatch, NoChaffSpace
from ..groups import AbelianGroup, GroupElement, Subgroup
from .frame import CiphertextFrame

MIN_KEY_BYTES = 8
BLOCK_BYTES = 8


@dataclass(frozen=True)
class SessionKey:
    data: bytes

    def __post_init__(self):
        object.__setattr__(self, "data", bytes(self.data))
        if len(self.data) < MIN_KEY_BYTES:
            raise ValueError(f"session keys need at least {MIN_KEY_BYTES} bytes, got {len(self.data)}")

    def __len__(self):
        return len(self.data)

    @classmethod
    def from_file(cls, path) -> "SessionKey":
        return cls(Path(path).read_bytes())

    @classmethod
    def random(cls, rng: np.random.Generator, nbytes: int = 16) -> "SessionKey":
        return cls(rng.bytes(nbytes))


@dataclass(frozen=True)
class QepParams:
    group: AbelianGroup
    chaff_ratio: Fraction = Fraction(0)
    seed: int = 0

    def __post_init__(self):
        ratio = self.chaff_ratio
        if not isinstance(ratio, Fraction):
            ratio = Fraction(ratio).limit_denominator(10**6)
        if ratio < 0:
            raise ValueError("chaff_ratio must be non-negative")
        if self.group.order < 4:
            raise ValueError("the group must have order >= 4")
        object.__setattr__(self, "chaff_ratio", ratio)
        object.__setattr__(self, "seed", int(self.seed) & (2**64 - 1))


def raw_generator(key: SessionKey, group: AbelianGroup) -> GroupElement:
    """Key bytes as a big-endian integer B, peeled off in mixed radix.

    When B runs out before every coordinate is assigned, the key bytes are
    rotated by one more position and B is rebuilt from them.
    """
    data = key.data
    b = int.from_bytes(data, "big")
    rotation = 0
    coords = []
    for n in group.invariant_factors:
        while b == 0 and rotation < len(data) - 1:
            rotation += 1
            b = int.from_bytes(data[rotation:] + data[:rotation], "big")
        coords.append(b % n)
        b //= n
    return tuple(coords)


def derive_generator(key: SessionKey, group: AbelianGroup) -> GroupElement:
    if group.order < 4:
        raise ValueError("the group must have order >= 4")
    g = raw_generator(key, group)
    if not any(g):
        raise DegenerateKey("key maps to the identity; choose a new key")
    return g


def digits_per_block(block_len: int, radix: int) -> int:
    """Smallest d with radix**d >= 256**block_len."""
    if block_len == 0:
        return 0
    bound = 256 ** block_len
    d = max(1, math.ceil(8 * block_len / math.log2(radix)) - 1)
    while radix ** d < bound:
        d += 1
    while d > 1 and radix ** (d - 1) >= bound:
        d -= 1
    return d


def _blocks(length: int):
    full, last = divmod(length, BLOCK_BYTES)
    return [BLOCK_BYTES] * full + ([last] if last else [])


def digit_count(length: int, radix: int) -> int:
    return sum(digits_per_block(b, radix) for b in _blocks(length))


def encode_digits(plaintext: bytes, radix: int) -> np.ndarray:
    """Fixed-width little-endian base-``radix`` digits, 8-byte blocks."""
    out = []
    pos = 0
    for blen in _blocks(len(plaintext)):
        v = int.from_bytes(plaintext[pos:pos + blen], "big")
        pos += blen
        for _ in range(digits_per_block(blen, radix)):
            v, dgt = divmod(v, radix)
            out.append(dgt)
    return np.array(out, dtype=np.int64)


def decode_digits(digits, length: int, radix: int) -> bytes:
    digits = [int(x) for x in digits]
    if len(digits) != digit_count(length, radix):
        raise LengthMismatch(f"{len(digits)} digits cannot encode exactly {length} bytes in base {radix}")
    out = bytearray()
    pos = 0
    for blen in _blocks(length):
        d = digits_per_block(blen, radix)
        v = 0
        for dgt in reversed(digits[pos:pos + d]):
            v = v * radix + dgt
        pos += d
        if v >= 256 ** blen:
            raise DigitRangeError(f"block value {v} does not fit in {blen} bytes")
        out += v.to_bytes(blen, "big")
    return bytes(out)


def multiples_table(group: AbelianGroup, g: GroupElement) -> np.ndarray:
    """``table[index(m * g)] = m`` for ``0 <= m < order(g)``; -1 elsewhere."""
    table = np.full(group.order, -1, dtype=np.int64)
    x = group.identity()
    for m in range(group.element_order(g)):
        table[group.index(x)] = m
        x = group.compose(x, g)
    return table


def chaff_count(digits: int, ratio: Fraction) -> int:
    if ratio == 0:
        return 0
    # an empty message still carries chaff so its frame is not empty
    return math.ceil(ratio * max(digits, 1))


def _draw_outside(group: AbelianGroup, member: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    factors = np.array(group.invariant_factors, dtype=np.int64)
    out = np.empty((0, group.rank), dtype=np.int64)
    while len(out) < count:
        batch = rng.integers(0, factors, size=(2 * (count - len(out)) + 8, group.rank))
        idx = np.ravel_multi_index(batch.T, group.invariant_factors)
        out = np.concatenate([out, batch[~member[idx]]])
    return out[:count]


def encrypt(params: QepParams, key: SessionKey, plaintext: bytes, rng: np.random.Generator) -> CiphertextFrame:
    group = params.group
    g = derive_generator(key, group)
    r = group.element_order(g)
    digits = encode_digits(plaintext, r)
    n_chaff = chaff_count(len(digits), params.chaff_ratio)
    if n_chaff and r == group.order:
        raise NoChaffSpace("the key generates all of G; there is nowhere to draw chaff from")
    factors = np.array(group.invariant_factors, dtype=np.int64)
    data = (digits[:, None] * np.array(g, dtype=np.int64)) % factors
    member = multiples_table(group, g) >= 0
    chaff = _draw_outside(group, member, n_chaff, rng)

    total = len(digits) + n_chaff
    is_chaff = np.zeros(total, dtype=bool)
    placement = np.random.default_rng(params.seed)
    is_chaff[placement.choice(total, size=n_chaff, replace=False)] = True
    elements = np.empty((total, group.rank), dtype=np.int64)
    elements[is_chaff] = chaff
    elements[~is_chaff] = data
    return CiphertextFrame(group, elements, len(plaintext))


def decrypt(key: SessionKey, frame: CiphertextFrame) -> bytes:
    """Keep members of <g_K>, take discrete logs, reassemble the digits.

    Raises ``LengthMismatch`` when the surviving digits cannot encode the
    declared length and ``DigitRangeError`` when a block overflows; both
    signal tampering or the wrong key.
    """
    group = frame.group
    g = derive_generator(key, group)
    r = group.element_order(g)
    logs = multiples_table(group, g)[frame.indices()]
    return decode_digits(logs[logs >= 0], frame.plaintext_length, r)


def key_subgroup(key: SessionKey, group: AbelianGroup) -> Subgroup:
    return Subgroup(group, (derive_generator(key, group),))
