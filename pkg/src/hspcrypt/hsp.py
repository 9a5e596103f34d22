"""Hidden subgroup solvers: abelian Fourier sampling, the W_n algorithm,
and the classical exhaustive baseline."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import BudgetExceeded, InconsistentSamples, TooLarge
from .groups import AbelianGroup, Character, Subgroup, character_kernel
from .qsim import (
    OracleTable,
    OracleView,
    apply_oracle,
    hadamard_transform_f2,
    measure_group_register,
    measure_value_register,
    qft_abelian,
    uniform_superposition,
)
from .wreath import WreathElement, WreathGroup, WreathSubgroup, w_closure, w_compose, w_inverse

STABLE_ROUNDS = 10
BRUTE_FORCE_BOUND = 512
WN_BATCHES = 5

AnyGroup = Union[AbelianGroup, WreathGroup]
AnySubgroup = Union[Subgroup, WreathSubgroup]


@dataclass
class HspInstance:
    group: AnyGroup
    oracle: OracleTable
    true_subgroup: Optional[AnySubgroup] = None

    def verify(self) -> bool:
        """Exhaustively check that the oracle separates cosets of the true subgroup."""
        if self.true_subgroup is None:
            raise ValueError("no true subgroup to verify against")
        return self.oracle.separates_cosets(self._same_coset)

    def _same_coset(self, i: int, j: int) -> bool:
        g, h = self.group.element_at(i), self.group.element_at(j)
        if isinstance(self.group, WreathGroup):
            return w_compose(w_inverse(g), h) in self.true_subgroup
        return self.true_subgroup.contains(self.group.compose(self.group.inverse(g), h))


def abelian_coset_oracle(h: Subgroup) -> OracleTable:
    """Oracle ``g -> lexicographically smallest element of g + H``."""
    g = h.parent
    return OracleTable.from_function(list(g.elements()), h.coset_rep)


def wreath_coset_oracle(u: WreathSubgroup) -> OracleTable:
    """Oracle ``g -> smallest index in the left coset gU``."""
    group = WreathGroup(u.n)
    members = list(u.closure)
    return OracleTable.from_function(
        list(group.elements()),
        lambda g: min(w_compose(g, x).index for x in members),
    )


def abelian_instance(h: Subgroup) -> HspInstance:
    return HspInstance(h.parent, abelian_coset_oracle(h), h)


def wreath_instance(u: WreathSubgroup) -> HspInstance:
    return HspInstance(WreathGroup(u.n), wreath_coset_oracle(u), u)


@dataclass
class SolverReport:
    recovered_generators: list
    oracle_evaluations: int
    rounds: int
    success: Optional[bool] = None       # set by a harness comparison
    converged: bool = True
    recovered: Optional[AnySubgroup] = field(default=None, repr=False)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        gens = [str(g) if isinstance(g, WreathElement) else list(g) for g in self.recovered_generators]
        out = {
            "recovered_generators": gens,
            "oracle_evaluations": self.oracle_evaluations,
            "rounds": self.rounds,
            "success": self.success,
        }
        out.update(self.details)
        return out


# -- abelian ---------------------------------------------------------------

def _fourier_sample(instance: HspInstance, rng: np.random.Generator) -> tuple[int, int]:
    """One coset-sampling run; returns ``(measured value, character label)``."""
    g = instance.group
    state = uniform_superposition(g)
    state = apply_oracle(state, instance.oracle)
    z, state = measure_value_register(state, rng)
    state = qft_abelian(state, g)
    return z, measure_group_register(state, rng)


def sample_character(instance: HspInstance, rng: np.random.Generator) -> Character:
    """Prepare a coset state, Fourier transform it, and measure a character."""
    _, y = _fourier_sample(instance, rng)
    return Character(instance.group, instance.group.element_at(y))


def kernel_of_characters(group: AbelianGroup, chars: Iterable[Character]) -> Subgroup:
    """Common kernel of the given characters."""
    return character_kernel(group, [c.exponents for c in chars])


def solve_abelian_hsp(instance: HspInstance, rng: np.random.Generator, max_rounds: int = 200,
                      stable_rounds: int = STABLE_ROUNDS) -> SolverReport:
    """Sample characters until the running kernel survives ``stable_rounds``
    consecutive draws unchanged.

    If ``max_rounds`` runs out first the best-effort kernel is returned with
    ``converged=False``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    group = instance.group
    start = instance.oracle.evaluations
    chars: list[Character] = []
    kernel = character_kernel(group, [])
    stable = rounds = 0
    while rounds < max_rounds and stable < stable_rounds:
        y = sample_character(instance, rng)
        rounds += 1
        if all(y.is_trivial_on(g) for g in kernel.reduced_generators()):
            stable += 1
        else:
            chars.append(y)
            kernel = kernel_of_characters(group, chars)
            stable = 0
    return SolverReport(
        recovered_generators=kernel.reduced_generators(),
        oracle_evaluations=instance.oracle.evaluations - start,
        rounds=rounds,
        converged=stable >= stable_rounds,
        recovered=kernel,
        details={"characters_kept": [list(c.exponents) for c in chars]},
    )


# -- linear algebra over F_2 -------------------------------------------------

def f2_rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_2 and its pivot columns."""
    a = np.array(m, dtype=np.uint8) % 2
    if a.ndim != 2:
        raise ValueError("F_2 matrix must be 2-D")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c]) + r
        if hits.size == 0:
            continue
        p = hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def f2_rank(m) -> int:
    return len(f2_rref(m)[1])


def f2_nullspace(m, cols: Optional[int] = None) -> np.ndarray:
    """Basis (as rows) of ``{x : M x = 0}`` over F_2."""
    a = np.array(m, dtype=np.uint8)
    if a.size == 0:
        if cols is None:
            cols = a.shape[1] if a.ndim == 2 else 0
        return np.eye(cols, dtype=np.uint8)
    a, pivots = f2_rref(a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = a[row, f]
    return basis


def int_to_bits(v: int, width: int) -> np.ndarray:
    return np.array([(v >> i) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def _perp(samples: Sequence[int], width: int) -> list[int]:
    rows = np.array([int_to_bits(s, width) for s in samples], dtype=np.uint8).reshape(len(samples), width)
    return [bits_to_int(v) for v in f2_nullspace(rows, cols=width)]


# -- W_n ----------------------------------------------------------------------

def _coset_sample(oracle, width: int, rng: np.random.Generator) -> tuple[int, int]:
    """Coset state on a ``2^width`` register, Hadamard, measure.

    Returns ``(coset size, measured label)``.
    """
    state = uniform_superposition(1 << width)
    state = apply_oracle(state, oracle)
    _, state = measure_value_register(state, rng)
    size = state.support().size
    state = hadamard_transform_f2(state, width)
    return size, measure_group_register(state, rng)


def solve_wn_hsp(n: int, oracle: OracleTable, rng: np.random.Generator,
                 max_batches: int = WN_BATCHES) -> SolverReport:
    """Recover a hidden subgroup U of W_n from a coset-separating oracle.

    Each iteration runs two coset-sampling experiments. The first is the
    abelian algorithm on the base group N = Z_2^{2n} and yields a vector
    of (U cap N)^perp. The second prepares a coset g0 U of the whole group
    and applies the Hadamard transform to all 2n+1 qubits; since U and its
    conjugate U' by the swap are linear subspaces under the index
    encoding, the sample lies in U^perp when g0 is in N and in U'^perp
    otherwise, each with probability 1/2. After each batch of 4n
    iterations the candidate (U cap N)<U cap U'> is formed and checked
    classically on its generators; batches repeat up to ``max_batches``.
    """
    if not 1 <= n <= 4:
        raise TooLarge("the W_n solver supports 1 <= n <= 4")
    group = WreathGroup(n)
    if oracle.group_dim != group.order:
        raise ValueError(f"oracle has {oracle.group_dim} labels, W_{n} has {group.order}")
    start = oracle.evaluations
    base = OracleView(oracle, range(1 << 2 * n))
    base_width, full_width = 2 * n, 2 * n + 1
    batch = 4 * n

    base_samples: list[int] = []
    full_samples: list[int] = []
    base_sizes: set[int] = set()
    full_sizes: set[int] = set()
    classical = 0
    rounds = 0
    report = None
    for b in range(max_batches):
        for _ in range(batch):
            size, y = _coset_sample(base, base_width, rng)
            base_sizes.add(size)
            base_samples.append(y)
            size, y = _coset_sample(oracle, full_width, rng)
            full_sizes.add(size)
            full_samples.append(y)
            rounds += 1
        if len(base_sizes) > 1 or len(full_sizes) > 1:
            raise InconsistentSamples(
                f"coset sizes vary ({sorted(base_sizes)}, {sorted(full_sizes)}); oracle does not separate cosets")

        u_cap_n = [WreathElement.from_index(n, v) for v in _perp(base_samples, base_width)]
        u_cap_conj = [WreathElement.from_index(n, v) for v in _perp(full_samples, full_width)]
        candidate = w_closure(u_cap_n, n=n)
        gens = list(u_cap_n)
        for g in u_cap_conj:
            if g not in candidate:
                gens.append(g)
                candidate = w_closure(gens, n=n)

        # candidate always contains U; it equals U iff every generator is in U
        ref = oracle.evaluate(0)
        classical += 1
        ok = True
        for g in gens:
            classical += 1
            if oracle.evaluate(g.index) != ref:
                ok = False
                break
        report = SolverReport(
            recovered_generators=gens,
            oracle_evaluations=oracle.evaluations - start,
            rounds=rounds,
            converged=ok,
            recovered=candidate,
            details={
                "batches": b + 1,
                "quantum_queries": 2 * rounds,
                "classical_queries": classical,
                "dual_samples_outside_base": sum(1 for y in full_samples if y >> 2 * n & 1),
            },
        )
        if ok:
            return report
    raise BudgetExceeded(f"no verified subgroup after {max_batches} batches of {batch} iterations", report)


# -- classical baseline -------------------------------------------------------

def brute_force_hsp(group: AnyGroup, oracle: OracleTable) -> AnySubgroup:
    """Query every element once; H is the level set of the identity."""
    if group.order > BRUTE_FORCE_BOUND:
        raise TooLarge(f"brute force is limited to |G| <= {BRUTE_FORCE_BOUND}")
    if oracle.group_dim != group.order:
        raise ValueError("oracle and group sizes differ")
    e = group.index(group.identity())
    ref = oracle.evaluate(e)
    members = [group.identity()]
    for i in range(group.order):
        if i != e and oracle.evaluate(i) == ref:
            members.append(group.element_at(i))
    if isinstance(group, WreathGroup):
        return w_closure(members, n=group.n)
    return Subgroup(group, tuple(members))

