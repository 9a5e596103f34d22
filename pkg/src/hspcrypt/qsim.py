"""Dense state-vector simulation of two-register HSP circuits.

A state lives on ``|g>|x>`` with ``g`` a group-register basis label and
``x`` a value-register label; amplitudes are stored as a ``(|G|, |X|)``
complex array. Abelian group labels use the row-major mixed-radix index of
``AbelianGroup.index``. Every operation returns a new state.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, TooLarge, ValueRegisterNotClean
from .groups import AbelianGroup

SIMULATION_BOUND = 4096          # max |G|
STATE_BOUND = 1 << 20            # max |G| * |X|
ZERO_AMPLITUDE = 1e-9            # amplitudes below this are exact zeros


@dataclass(frozen=True, eq=False)
class QuantumState:
    amplitudes: np.ndarray       # shape (group_dim, value_dim)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2:
            raise ValueError("amplitudes must be a 2-D (group, value) array")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def group_dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def value_dim(self) -> int:
        return self.amplitudes.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def group_marginal(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def value_marginal(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def support(self) -> np.ndarray:
        """Group labels carrying non-negligible amplitude."""
        return np.flatnonzero(np.sqrt(self.group_marginal()) > ZERO_AMPLITUDE)


@dataclass
class OracleTable:
    """Lookup-table oracle ``f: G -> X`` with an evaluation counter.

    One superposed application counts as one evaluation, as does one
    classical query.
    """

    values: np.ndarray
    value_dim: int
    evaluations: int = field(default=0)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim != 1:
            raise ValueError("oracle table must be one-dimensional")
        if self.values.size and (self.values.min() < 0 or self.values.max() >= self.value_dim):
            raise ValueError("oracle values out of range")

    @property
    def group_dim(self) -> int:
        return self.values.size

    def evaluate(self, index: int) -> int:
        self.evaluations += 1
        return int(self.values[index])

    def separates_cosets(self, same_coset) -> bool:
        """Exhaustive check that ``f(i) == f(j)`` iff ``same_coset(i, j)``."""
        d = self.group_dim
        return all((self.values[i] == self.values[j]) == bool(same_coset(i, j))
                   for i in range(d) for j in range(i, d))

    @classmethod
    def from_function(cls, labels: Sequence, f) -> "OracleTable":
        """Tabulate ``f`` over ``labels``, numbering outputs by first appearance."""
        codes: dict = {}
        values = [codes.setdefault(f(x), len(codes)) for x in labels]
        return cls(np.array(values), max(len(codes), 1))


class OracleView:
    """The restriction of an oracle to a subset of labels.

    Evaluations are charged to the parent oracle.
    """

    def __init__(self, parent: OracleTable, labels: Sequence[int]):
        self.parent = parent
        self.labels = np.asarray(labels, dtype=np.int64)
        self.values = parent.values[self.labels]
        self.value_dim = parent.value_dim

    @property
    def group_dim(self) -> int:
        return self.values.size

    @property
    def evaluations(self) -> int:
        return self.parent.evaluations

    @evaluations.setter
    def evaluations(self, count: int) -> None:
        self.parent.evaluations = count

    def evaluate(self, index: int) -> int:
        return self.parent.evaluate(int(self.labels[index]))


def _check_size(group_dim: int, value_dim: int) -> None:
    if group_dim > SIMULATION_BOUND:
        raise TooLarge(f"|G| = {group_dim} exceeds the simulation bound {SIMULATION_BOUND}")
    if group_dim * value_dim > STATE_BOUND:
        raise TooLarge(f"state dimension {group_dim * value_dim} exceeds {STATE_BOUND}")


def uniform_superposition(group, value_dim: int = 1) -> QuantumState:
    """Equal amplitudes over the group register, value register at zero.

    ``group`` is a register dimension or anything with an ``order``.
    """
    group_dim = int(group) if isinstance(group, (int, np.integer)) else group.order
    _check_size(group_dim, value_dim)
    amps = np.zeros((group_dim, value_dim), dtype=complex)
    amps[:, 0] = 1 / math.sqrt(group_dim)
    return QuantumState(amps)


def apply_oracle(state: QuantumState, oracle: OracleTable) -> QuantumState:
    """``|g>|0> -> |g>|f(g)>``."""
    if oracle.group_dim != state.group_dim:
        raise DimensionMismatch(f"oracle on {oracle.group_dim} labels, state has {state.group_dim}")
    amps = state.amplitudes
    if amps.shape[1] < oracle.value_dim:
        padded = np.zeros((amps.shape[0], oracle.value_dim), dtype=complex)
        padded[:, : amps.shape[1]] = amps
        amps = padded
    _check_size(amps.shape[0], amps.shape[1])
    if np.any(np.abs(amps[:, 1:]) > ZERO_AMPLITUDE):
        raise ValueRegisterNotClean("value register is not in the zero state")
    out = np.zeros_like(amps)
    out[np.arange(amps.shape[0]), oracle.values] = amps[:, 0]
    oracle.evaluations += 1
    return QuantumState(out)


def _draw(probs: np.ndarray, rng: np.random.Generator) -> int:
    p = np.where(probs > ZERO_AMPLITUDE ** 2, probs, 0.0)
    p = p / p.sum()
    return int(rng.choice(p.size, p=p))


def measure_value_register(state: QuantumState, rng: np.random.Generator) -> tuple[int, QuantumState]:
    """Born-rule measurement of the value register; returns ``(z, collapsed)``."""
    z = _draw(state.value_marginal(), rng)
    out = np.zeros_like(state.amplitudes)
    col = state.amplitudes[:, z]
    out[:, z] = col / np.linalg.norm(col)
    return z, QuantumState(out)


def measure_group_register(state: QuantumState, rng: np.random.Generator) -> int:
    """Born-rule sample of a group-register label."""
    return _draw(state.group_marginal(), rng)


def _factors(group) -> tuple[int, ...]:
    if isinstance(group, AbelianGroup):
        return group.invariant_factors
    return tuple(group)


def qft_abelian(state: QuantumState, group, inverse: bool = False) -> QuantumState:
    """Fourier transform of the group register over ``Z_{n1} x ... x Z_{nk}``.

    Amplitude at character ``y`` becomes
    ``|G|^{-1/2} sum_g exp(2 pi i <y, g>) amp(g)``, with
    ``<y, g> = sum_j y_j g_j / n_j``.
    """
    factors = _factors(group)
    if math.prod(factors) != state.group_dim:
        raise DimensionMismatch(f"group of order {math.prod(factors)} on a register of {state.group_dim}")
    amps = state.amplitudes.reshape(factors + (state.value_dim,))
    axes = tuple(range(len(factors)))
    # numpy's ifft carries the +2 pi i sign convention used for characters
    if inverse:
        out = np.fft.fftn(amps, axes=axes, norm="ortho")
    else:
        out = np.fft.ifftn(amps, axes=axes, norm="ortho")
    return QuantumState(out.reshape(state.group_dim, state.value_dim))


def inverse_qft_abelian(state: QuantumState, group) -> QuantumState:
    return qft_abelian(state, group, inverse=True)


_H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def hadamard_transform_f2(state: QuantumState, m: int) -> QuantumState:
    """Hadamard on each of the ``m`` qubits of a ``2^m``-dim group register."""
    if state.group_dim != 1 << m:
        raise DimensionMismatch(f"register of dimension {state.group_dim} is not 2^{m}")
    amps = state.amplitudes.reshape((2,) * m + (state.value_dim,))
    for axis in range(m):
        amps = np.moveaxis(np.tensordot(_H, amps, axes=([1], [axis])), 0, axis)
    return QuantumState(amps.reshape(state.group_dim, state.value_dim))
