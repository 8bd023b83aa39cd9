"""Reference closed-loop model and ideal-controller samples.

The target closed loop is a first-order lag with unit static gain, so the
regulated output tracks constant references with zero steady-state error.
Combining it with measured plant transfer samples gives, pointwise, the
controller that would realize that loop exactly; those samples are the raw
data for the rational interpolation stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError, PoleEvaluationError
from .freqdata import FrequencyResponseSet

__all__ = [
    "ReferenceModel",
    "ControllerSamples",
    "eval_reference",
    "ideal_controller_samples",
]


@dataclass(frozen=True)
class ReferenceModel:
    """First-order target loop 1/(s/omega0 + 1); omega0 is the cutoff in rad/s."""

    omega0: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ConfigError(f"omega0 must be positive, got {self.omega0}")


@dataclass(frozen=True)
class ControllerSamples:
    """Ideal-controller values K(i*omega_k), strictly increasing in omega."""

    omegas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)
        if omegas.size != values.size:
            raise ConfigError("omegas and values must have equal length")
        if omegas.size and not np.all(np.diff(omegas) > 0):
            raise ConfigError("omegas must be strictly increasing")
        if not (np.all(np.isfinite(omegas)) and np.all(np.isfinite(values))):
            raise ConfigError("controller samples must be finite")

    def __len__(self):
        return self.omegas.size

    def to_csv(self, path) -> None:
        """Write as CSV with header ``omega_rad_s,re,im``."""
        data = np.column_stack([self.omegas, self.values.real, self.values.imag])
        np.savetxt(path, data, fmt="%.17g", delimiter=",",
                   header="omega_rad_s,re,im", comments="")

    @classmethod
    def from_csv(cls, path) -> "ControllerSamples":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


def eval_reference(m: ReferenceModel, s: complex) -> complex:
    """Evaluate the reference transfer 1/(s/omega0 + 1) at a complex point."""
    if not np.isfinite(s):
        raise ConfigError("evaluation point must be finite")
    denom = s / m.omega0 + 1.0
    if denom == 0:
        raise PoleEvaluationError(f"s={s} is the reference-model pole (-omega0)")
    return 1.0 / denom


def ideal_controller_samples(frf: FrequencyResponseSet, m: ReferenceModel) -> ControllerSamples:
    """Controller samples that would impose the reference loop, one per FRF point.

    At each measured frequency the plant sample is inverted against the
    reference model: K_k = M / ((1 - M) * Phi_k). Zero-frequency samples are
    rejected because the reference model has unit gain there, which would
    make the inversion singular; the integral action is recovered by the
    interpolation stage from strictly positive frequencies instead.
    """
    if np.any(frf.omegas <= 0):
        raise ConfigError("zero or negative frequencies cannot be inverted (M(0) = 1)")
    values = np.empty(len(frf), dtype=complex)
    for i, (omega, phi) in enumerate(zip(frf.omegas, frf.values)):
        if phi == 0:
            raise NumericalError(f"plant sample is zero at omega={omega:.6g} rad/s")
        m_k = eval_reference(m, 1j * omega)
        values[i] = m_k / ((1.0 - m_k) * phi)
    return ControllerSamples(frf.omegas.copy(), values)
