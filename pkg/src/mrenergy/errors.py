"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain the routine is defined on."""


class ScheduleError(ValueError):
    """A schedule is structurally broken (unknown task, missing duration...)."""


class UndefinedEnergyError(ArithmeticError):
    """A task of positive volume was given zero processing time."""


class CertificationError(RuntimeError):
    """A proven bound failed to hold on a concrete run.

    This indicates a bug in the pipeline, not bad input.
    """

    def __init__(self, bound: str, lhs: float, rhs: float):
        self.bound = bound
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"bound {bound!r} violated: {lhs!r} > {rhs!r}")


class GuardError(RuntimeError):
    """Refusal to run an exponential routine on an input that is too large."""
