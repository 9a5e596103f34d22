"""Eve's side: recover the key subgroup from a frame, then search its
generators for one that decodes cleanly.

Three oracle levels are modelled. With ``none`` Eve sees only the frame
and ranks every cyclic subgroup of the header group by how well it fits
the observed elements. With ``membership`` Eve may ask whether an element
lies in H. With ``coset-separating`` Eve holds the full hidden-subgroup
oracle for H and runs the abelian HSP solver. Finding H never reveals
which of its generators is g_K, so every level ends in a generator search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import DegenerateKey, IntegrityError, NoChaffSpace
from ..groups import AbelianGroup, Subgroup
from ..hsp import HspInstance, abelian_coset_oracle, solve_abelian_hsp
from .frame import CiphertextFrame
from .scheme import (
    QepParams,
    SessionKey,
    decode_digits,
    derive_generator,
    digit_count,
    encrypt,
    key_subgroup,
    multiples_table,
)


class OracleLevel(str, Enum):
    NONE = "none"
    MEMBERSHIP = "membership"
    COSET = "coset-separating"

    @classmethod
    def parse(cls, text: str) -> "OracleLevel":
        aliases = {"coset": cls.COSET, "coset_separating": cls.COSET}
        text = text.strip().lower()
        if text in aliases:
            return aliases[text]
        return cls(text)


@dataclass
class AttackReport:
    oracle_level: OracleLevel
    recovered_subgroup: Optional[Subgroup] = None
    decoded_plaintext: Optional[bytes] = None
    success: bool = False
    oracle_evaluations: int = 0
    generators_tried: int = 0
    candidates_considered: int = 0
    subgroup_correct: Optional[bool] = None
    budget_exceeded: bool = False

    @property
    def work(self) -> int:
        return self.oracle_evaluations + self.generators_tried

    def to_json(self) -> dict:
        h = self.recovered_subgroup
        return {
            "oracle_level": self.oracle_level.value,
            "recovered_subgroup": None if h is None else {
                "generators": [list(g) for g in h.reduced_generators()],
                "order": h.order,
            },
            "subgroup_correct": self.subgroup_correct,
            "success": self.success,
            "decoded_length": None if self.decoded_plaintext is None else len(self.decoded_plaintext),
            "oracle_evaluations": self.oracle_evaluations,
            "generators_tried": self.generators_tried,
            "candidates_considered": self.candidates_considered,
            "work": self.work,
            "budget_exceeded": self.budget_exceeded,
        }


class _Budget(Exception):
    pass


@dataclass
class _Search:
    frame: CiphertextFrame
    group: AbelianGroup
    indices: np.ndarray
    rng: np.random.Generator
    budget: int
    marker: Optional[bytes]
    tried: int = 0
    candidates: int = 0
    seen: set = field(default_factory=set)

    def fits(self, c: Subgroup) -> bool:
        """H = c forces exactly digit_count(L, |c|) frame elements into c."""
        if c.order < 2 or len(c.structure) != 1:
            return False
        member = np.zeros(self.group.order, dtype=bool)
        for x in c.elements():
            member[self.group.index(x)] = True
        return int(member[self.indices].sum()) == digit_count(self.frame.plaintext_length, c.order)

    def try_subgroup(self, c: Subgroup) -> Optional[bytes]:
        """Decode with each generator of the cyclic subgroup ``c`` in random order."""
        if c in self.seen:
            return None
        self.seen.add(c)
        self.candidates += 1
        r = c.order
        g0 = next(x for x in c.elements() if self.group.element_order(x) == r)
        logs = multiples_table(self.group, g0)[self.indices]
        base_digits = logs[logs >= 0]
        units = [u for u in range(1, r) if math.gcd(u, r) == 1]
        for u in self.rng.permutation(units):
            if self.tried >= self.budget:
                raise _Budget
            self.tried += 1
            # digits with respect to u*g0 are base_digits * u^-1 mod r
            digits = base_digits * pow(int(u), -1, r) % r
            try:
                text = decode_digits(digits, self.frame.plaintext_length, r)
            except IntegrityError:
                continue
            if self.marker is not None and not text.startswith(self.marker):
                continue
            return text
        return None


def cyclic_subgroups(group: AbelianGroup) -> list[Subgroup]:
    found = {}
    for g in group.elements():
        h = Subgroup(group, (g,))
        found.setdefault(h, h)
    return list(found)


def _fit_score(c: Subgroup, n_in: int, n_out: int, group_order: int) -> float:
    # data uniform on c, chaff uniform on G \ c
    outside = group_order - c.order
    if n_out and outside == 0:
        return -math.inf
    return -n_in * math.log(c.order) - (n_out * math.log(outside) if n_out else 0.0)


def guess_group(frame: CiphertextFrame) -> AbelianGroup:
    """Header-suppressed mode: largest observed coordinate + 1 per factor."""
    if frame.element_count == 0:
        return AbelianGroup((2,) * frame.group.rank)
    return AbelianGroup(tuple(max(2, int(m) + 1) for m in frame.elements.max(axis=0)))


def eve_attack(frame: CiphertextFrame, level, rng: np.random.Generator, budget: int, *,
               hidden: Subgroup, truth: bytes, marker: Optional[bytes] = None,
               suppress_header: bool = False) -> AttackReport:
    """Run one attack on ``frame``.

    ``hidden`` is the true key subgroup; Eve only reaches it through the
    oracle of the chosen level. ``truth`` is used solely to score the
    outcome. ``budget`` caps the number of generators tried.
    """
    level = OracleLevel.parse(level) if isinstance(level, str) else level
    report = AttackReport(level)
    group = frame.group
    if suppress_header:
        if level is not OracleLevel.NONE:
            raise ValueError("header suppression is only modelled for the oracle-free attack")
        group = guess_group(frame)
        frame = CiphertextFrame(group, frame.elements, frame.plaintext_length)
    search = _Search(frame, group, frame.indices(), rng, budget, marker)

    try:
        if level is OracleLevel.NONE:
            candidates = [c for c in cyclic_subgroups(group) if search.fits(c)]
            scored = []
            for c in candidates:
                member = np.zeros(group.order, dtype=bool)
                for x in c.elements():
                    member[group.index(x)] = True
                n_in = int(member[search.indices].sum())
                scored.append((-_fit_score(c, n_in, frame.element_count - n_in, group.order), c.order, c))
            scored.sort(key=lambda t: (t[0], t[1]))
            for _, _, c in scored:
                text = search.try_subgroup(c)
                if text is not None:
                    report.recovered_subgroup = c
                    report.decoded_plaintext = text
                    break
        else:
            if level is OracleLevel.MEMBERSHIP:
                members = []
                for row in np.unique(frame.elements, axis=0):
                    report.oracle_evaluations += 1
                    if hidden.contains(tuple(int(x) for x in row)):
                        members.append(tuple(int(x) for x in row))
                recovered = Subgroup(group, tuple(members))
            else:
                oracle = abelian_coset_oracle(hidden)
                solved = solve_abelian_hsp(HspInstance(group, oracle), rng)
                report.oracle_evaluations += solved.oracle_evaluations
                recovered = solved.recovered
            report.recovered_subgroup = recovered
            if len(recovered.structure) == 1:
                report.decoded_plaintext = search.try_subgroup(recovered)
    except _Budget:
        report.budget_exceeded = True

    report.generators_tried = search.tried
    report.candidates_considered = search.candidates
    if report.recovered_subgroup is not None and not suppress_header:
        report.subgroup_correct = report.recovered_subgroup == hidden
    report.success = report.decoded_plaintext is not None and report.decoded_plaintext == truth
    return report


def attack_trials(group: AbelianGroup, level, chaff_ratio, trials: int, rng: np.random.Generator, *,
                  plaintext_bytes: int = 32, marker: Optional[bytes] = None, budget: int = 10_000,
                  suppress_header: bool = False) -> dict:
    """Fresh key, plaintext and frame per trial; aggregate Eve's results.

    Keys mapping to the identity, or generating all of G when chaff is
    requested, are redrawn.
    """
    if chaff_ratio and _is_prime(group.order):
        raise NoChaffSpace(f"every key generates all of G (|G| = {group.order} is prime)")
    reports = []
    for _ in range(trials):
        while True:
            key = SessionKey.random(rng)
            try:
                g = derive_generator(key, group)
            except DegenerateKey:
                continue
            if chaff_ratio and group.element_order(g) == group.order:
                continue
            break
        body = rng.bytes(plaintext_bytes)
        plaintext = (marker or b"") + body
        params = QepParams(group, chaff_ratio, seed=int(rng.integers(2**63)))
        frame = encrypt(params, key, plaintext, rng)
        reports.append(eve_attack(frame, level, rng, budget, hidden=key_subgroup(key, group),
                                  truth=plaintext, marker=marker, suppress_header=suppress_header))
    return summarize(reports)


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def summarize(reports: list[AttackReport]) -> dict:
    n = len(reports)
    correct = [r.subgroup_correct for r in reports if r.subgroup_correct is not None]
    return {
        "trials": n,
        "success_rate": sum(r.success for r in reports) / n if n else math.nan,
        "subgroup_recovery_rate": sum(correct) / n if n else math.nan,
        "mean_generators_tried": float(np.mean([r.generators_tried for r in reports])) if n else math.nan,
        "mean_oracle_evaluations": float(np.mean([r.oracle_evaluations for r in reports])) if n else math.nan,
        "mean_work": float(np.mean([r.work for r in reports])) if n else math.nan,
        "budget_exceeded": sum(r.budget_exceeded for r in reports),
        "per_trial": [r.to_json() for r in reports],
    }
