"""Exception hierarchy shared by all modules."""


class SingletonLabError(Exception):
    """Base class for every error raised by this package."""


# finite fields and classical codes
class NonPrimeCharacteristic(SingletonLabError, ValueError):
    pass


class FieldTooLarge(SingletonLabError, ValueError):
    pass


class LengthExceedsField(SingletonLabError, ValueError):
    pass


class EnumerationBudgetExceeded(SingletonLabError, ValueError):
    pass


class TooManyErasures(SingletonLabError, ValueError):
    pass


class InconsistentReceived(SingletonLabError, ValueError):
    pass


# dense states
class UnknownLabel(SingletonLabError, KeyError):
    pass


class NonHermitianInput(SingletonLabError, ValueError):
    pass


class OverlappingBlocks(SingletonLabError, ValueError):
    pass


class BudgetExceeded(SingletonLabError, ValueError):
    pass


class DimensionBudgetExceeded(SingletonLabError, ValueError):
    pass


class InvalidState(SingletonLabError, ValueError):
    pass


# stabilizer codes
class NonCommutingGenerators(SingletonLabError, ValueError):
    pass


class DependentGenerators(SingletonLabError, ValueError):
    pass


# bounds
class InvalidParams(SingletonLabError, ValueError):
    pass


class SigmaOutOfRange(SingletonLabError, ValueError):
    pass


class DeltaOutOfRange(SingletonLabError, ValueError):
    pass


# propagation
class KTooSmall(SingletonLabError, ValueError):
    pass


class DTooSmall(SingletonLabError, ValueError):
    pass


class NotPure(SingletonLabError, ValueError):
    pass


class CTooLarge(SingletonLabError, ValueError):
    pass


class NotMaximallyMixedOnBin(SingletonLabError):
    def __init__(self, deviation: float):
        super().__init__(f"B_in marginal deviates from maximally mixed by {deviation:.3e}")
        self.deviation = deviation


class DecouplingFailed(SingletonLabError):
    def __init__(self, worst_block: tuple[str, ...], mutual_information: float):
        super().__init__(
            f"I(R:{','.join(worst_block)}) = {mutual_information:.3e} exceeds tolerance"
        )
        self.worst_block = worst_block
        self.mutual_information = mutual_information


class SoundnessViolation(SingletonLabError):
    """A propagation rule produced parameters that break a proven bound."""

    def __init__(self, record, violated: list[str]):
        trail = " <- ".join(f"{rule}:{parent}" for rule, parent in record.trail)
        super().__init__(f"{record.params} violates {', '.join(violated)} (trail: {trail})")
        self.record = record
        self.violated = violated


# verification
class BadBlockSizes(SingletonLabError, ValueError):
    pass


class StateNotPure(SingletonLabError, ValueError):
    pass


class NotCorrectable(SingletonLabError, ValueError):
    pass


class PurityBridgeFailed(SingletonLabError):
    pass


class ParityMismatch(SingletonLabError, ValueError):
    pass
