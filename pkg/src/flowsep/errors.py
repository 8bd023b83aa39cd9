"""Exception hierarchy shared across the toolkit.

Two base classes split failures the way the command line reports them:
configuration/usage problems versus numerical breakdowns.
"""


class ConfigError(ValueError):
    """A parameter or input file violates a stated bound or format."""


class NumericalError(RuntimeError):
    """A numerical operation failed (singular pencil, missing pole, divergence)."""


class DimensionError(ConfigError):
    """Paired data disagree in length, sampling, or ordering."""


class PoleEvaluationError(NumericalError):
    """Transfer-function evaluation requested at (or too close to) a pole."""


class UnexcitedFrequencyError(NumericalError):
    """Input autospectrum is below machine tolerance at a requested frequency."""


class NotAnIntegratorError(NumericalError):
    """Sampled model has no pole close enough to z = 1."""
