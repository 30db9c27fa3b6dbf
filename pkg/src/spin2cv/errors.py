"""Exception hierarchy. Each class maps to one CLI exit code."""


class Spin2CVError(Exception):
    exit_code = 1


class InputError(Spin2CVError, ValueError):
    """Malformed or inconsistent input document."""

    exit_code = 2


class GuardError(Spin2CVError):
    """A requested computation exceeds a size guard."""

    exit_code = 3


class UnphysicalStateError(InputError):
    """A covariance or A-matrix does not describe a valid Gaussian state."""


class VerificationError(Spin2CVError):
    exit_code = 4
