"""Subgroup-reconstruction encryption, its wire format, and the attack harness."""

from .attack import AttackReport, OracleLevel, attack_trials, eve_attack
from .frame import CiphertextFrame, deserialize, serialize
from .scheme import (
    QepParams,
    SessionKey,
    decrypt,
    derive_generator,
    digit_count,
    encrypt,
    key_subgroup,
)

__all__ = [
    "AttackReport",
    "CiphertextFrame",
    "OracleLevel",
    "QepParams",
    "SessionKey",
    "attack_trials",
    "decrypt",
    "derive_generator",
    "deserialize",
    "digit_count",
    "encrypt",
    "eve_attack",
    "key_subgroup",
    "serialize",
]
