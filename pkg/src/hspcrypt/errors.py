"""Exception hierarchy shared by every hspcrypt module."""


class HspCryptError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(HspCryptError, ValueError):
    pass


class TooLarge(HspCryptError, ValueError):
    pass


# -- groups ------------------------------------------------------------------

class DescriptorError(HspCryptError, ValueError):
    """A generic-group descriptor violates a parameter co-dependency."""


class MissingIntrinsics(DescriptorError):
    pass


class UnderspecifiedSubset(DescriptorError):
    pass


class MissingRandom(DescriptorError):
    pass


class IntrinsicArity(DescriptorError):
    pass


class InconsistentOrder(DescriptorError):
    """The declared order disagrees with the computed structure."""


class UnliftableTerm(HspCryptError, ValueError):
    pass


class NotPrime(HspCryptError, ValueError):
    pass


class NotInCyclicSubgroup(HspCryptError, ValueError):
    pass


class DegenerateBase(HspCryptError, ValueError):
    pass


# -- qsim / hsp --------------------------------------------------------------

class ValueRegisterNotClean(HspCryptError, ValueError):
    pass


class BudgetExceeded(HspCryptError, RuntimeError):
    """Raised when a solver or attack runs out of budget.

    ``report`` carries whatever partial result was reached.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InconsistentSamples(HspCryptError, RuntimeError):
    pass


# -- qep ---------------------------------------------------------------------

class DegenerateKey(HspCryptError, ValueError):
    pass


class NoChaffSpace(HspCryptError, ValueError):
    pass


class MalformedFrame(HspCryptError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class IntegrityError(HspCryptError, ValueError):
    """Decryption produced output inconsistent with the frame header."""


class LengthMismatch(IntegrityError):
    pass


class DigitRangeError(IntegrityError):
    pass
