"""Hidden-subgroup solvers, a dense quantum simulator and a subgroup-based
encryption scheme with an adversary harness."""

__version__ = "0.1.0"
