"""Exception hierarchy. ``exit_code`` is what the CLI returns for each class."""


class DirichletMorseError(Exception):
    exit_code = 4


class UsageError(DirichletMorseError):
    exit_code = 2


class DegenerateInput(DirichletMorseError):
    exit_code = 2


class FixedBasePoint(DirichletMorseError):
    exit_code = 4


class UnstableTruncation(DirichletMorseError):
    exit_code = 5


class PairingFailure(DirichletMorseError):
    exit_code = 4


class NoFiniteVertices(DirichletMorseError):
    exit_code = 4


class OnBoundary(DirichletMorseError):
    exit_code = 3


class NonTerminating(DirichletMorseError):
    exit_code = 4


class NonGeneric(DirichletMorseError):
    exit_code = 3

    def __init__(self, message, vertex=None, position=None):
        super().__init__(message)
        self.vertex = vertex
        self.position = position


class SamplingExhausted(DirichletMorseError):
    exit_code = 4


class NotIdeal(DirichletMorseError):
    exit_code = 4


class NestingViolation(DirichletMorseError):
    exit_code = 4


class InadmissibleWord(DirichletMorseError):
    exit_code = 2


class BudgetExhausted(DirichletMorseError):
    exit_code = 4


class ConstructionFailed(DirichletMorseError):
    exit_code = 4

    def __init__(self, stage, message="", diagnostics=None):
        super().__init__(f"{stage}: {message}" if message else stage)
        self.stage = stage
        self.diagnostics = diagnostics or {}
