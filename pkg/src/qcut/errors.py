"""Exception types shared across the package."""


class QcutError(Exception):
    """Base class for all qcut errors."""


class OperandOutOfRange(QcutError):
    pass


class DuplicateBinaryOperand(QcutError):
    pass


class SameQubit(QcutError):
    pass


class OddCut(QcutError):
    pass


class CutOutOfRange(QcutError):
    pass


class Disconnected(QcutError):
    pass


class InsufficientStorage(QcutError):
    def __init__(self, deficit: int):
        super().__init__(f"storage deficit of {deficit} qubit(s)")
        self.deficit = deficit


class NotTwoQubits(QcutError):
    pass


class Uncoverable(QcutError):
    pass


class IrreparableCapacity(QcutError):
    pass


class GenerationExhausted(QcutError):
    pass


class LimitExceeded(QcutError):
    pass


class SchemaError(QcutError):
    pass
