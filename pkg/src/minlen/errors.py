"""Exception hierarchy shared by the solvers."""


class MinlenError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MinlenError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnknownDeformation(MinlenError, KeyError):
    def __init__(self, name, valid):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(f"unknown deformation {name!r}; valid names: {', '.join(self.valid)}")

    def __str__(self):
        return self.args[0]


class PoleError(DomainError):
    """Gamma-type function evaluated at a pole."""


class NumericError(MinlenError, ArithmeticError):
    """A numerical procedure failed to converge or underflowed."""


class NoBoundState(MinlenError):
    """The requested level does not exist for this problem."""


class BracketExhausted(MinlenError):
    """The requested level lies below the resolvable energy floor."""
