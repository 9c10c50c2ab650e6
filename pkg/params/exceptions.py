class ParamsError(ValueError):
    """
    Base class for rejected (n, epsilon, d) choices.

    The message always names the violated inequality and its endpoints.
    """


class InvalidProcessCount(ParamsError):
    pass


class EpsilonOutOfRange(ParamsError):
    pass


class DOutOfRange(ParamsError):
    pass


class ConstraintViolation(ParamsError):
    """A derived constant broke the W > 2B / B >= 0 / rho > 0 chain."""
