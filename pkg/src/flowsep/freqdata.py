"""Excitation design, frequency-response estimation, and voltage normalization.

The open-loop identification path lives here: build a logarithmic sine sweep
for the duty cycle, estimate the input/output transfer from recorded time
series with a segment-averaged H1 estimator, and normalize raw sensor
voltages to the [0, 1] scale the control loop works in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import ConfigError, DimensionError, UnexcitedFrequencyError

__all__ = [
    "TimeSeries",
    "FrequencySample",
    "FrequencyResponseSet",
    "SweepConfig",
    "generate_log_sweep",
    "estimate_frf",
    "normalize_voltage",
]


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal.

    Values are context dependent: duty-cycle fraction for actuator commands,
    normalized volts for hot-film measurements.
    """

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if values.ndim != 1 or values.size == 0:
            raise ConfigError("values must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(values)):
            raise ConfigError("values must all be finite")

    def __len__(self):
        return self.values.size

    @property
    def fs(self) -> float:
        return 1.0 / self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def to_csv(self, path) -> None:
        """Write as CSV with header ``t,value``."""
        data = np.column_stack([self.times(), self.values])
        np.savetxt(path, data, fmt="%.17g", delimiter=",", header="t,value", comments="")

    @classmethod
    def from_csv(cls, path) -> "TimeSeries":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 2:
            raise DimensionError(f"{path}: expected two columns t,value")
        t, values = data[:, 0], data[:, 1]
        if t.size < 2:
            raise DimensionError(f"{path}: need at least two samples")
        steps = np.diff(t)
        dt = float(np.median(steps))
        if not np.allclose(steps, dt, rtol=1e-6, atol=1e-12):
            raise DimensionError(f"{path}: time grid is not uniform")
        return cls(t0=float(t[0]), dt=dt, values=values)


@dataclass(frozen=True)
class FrequencySample:
    """One complex transfer value at a positive frequency (rad/s)."""

    omega: float
    value: complex

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError(f"omega must be positive, got {self.omega}")
        if not np.isfinite(self.value):
            raise ConfigError("sample value must be finite")


@dataclass(frozen=True)
class FrequencyResponseSet:
    """Sampled complex transfer, strictly increasing in frequency."""

    omegas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)
        if omegas.size != values.size:
            raise DimensionError("omegas and values must have equal length")
        if omegas.size < 2:
            raise ConfigError("a frequency response set needs at least 2 samples")
        if not np.all(omegas > 0):
            raise ConfigError("all frequencies must be positive")
        if not np.all(np.diff(omegas) > 0):
            raise ConfigError("frequencies must be strictly increasing (no duplicates)")
        if not (np.all(np.isfinite(omegas)) and np.all(np.isfinite(values))):
            raise ConfigError("frequency response data must be finite")

    def __len__(self):
        return self.omegas.size

    def samples(self):
        return [FrequencySample(float(w), complex(v)) for w, v in zip(self.omegas, self.values)]

    def to_csv(self, path) -> None:
        """Write as CSV with header ``omega_rad_s,re,im``."""
        data = np.column_stack([self.omegas, self.values.real, self.values.imag])
        np.savetxt(path, data, fmt="%.17g", delimiter=",",
                   header="omega_rad_s,re,im", comments="")

    @classmethod
    def from_csv(cls, path) -> "FrequencyResponseSet":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 3:
            raise DimensionError(f"{path}: expected columns omega_rad_s,re,im")
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


@dataclass(frozen=True)
class SweepConfig:
    """Logarithmic sweep parameters for duty-cycle excitation.

    The degenerate case ``f_min == f_max`` is allowed and produces a pure
    sine, which is convenient for single-frequency probes.
    """

    f_min: float
    f_max: float
    duration: float
    fs: float
    amplitude: float
    offset: float

    def __post_init__(self):
        if not 0 < self.f_min:
            raise ConfigError(f"f_min must be positive, got {self.f_min}")
        if not self.f_min <= self.f_max:
            raise ConfigError(f"f_min={self.f_min} must not exceed f_max={self.f_max}")
        if not self.f_max < self.fs / 2:
            raise ConfigError(f"f_max={self.f_max} must be below Nyquist {self.fs / 2}")
        if not self.duration > 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if self.amplitude < 0:
            raise ConfigError(f"amplitude must be nonnegative, got {self.amplitude}")
        if self.offset - self.amplitude < 0:
            raise ConfigError(
                f"offset-amplitude={self.offset - self.amplitude} must be >= 0 (duty floor)")
        if self.offset + self.amplitude > 1:
            raise ConfigError(
                f"offset+amplitude={self.offset + self.amplitude} must be <= 1 (duty ceiling)")

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        kv = _read_key_values(path)
        try:
            return cls(
                f_min=float(kv["f_min"]),
                f_max=float(kv["f_max"]),
                duration=float(kv["duration"]),
                fs=float(kv["fs"]),
                amplitude=float(kv["amplitude"]),
                offset=float(kv["offset"]),
            )
        except KeyError as missing:
            raise ConfigError(f"{path}: missing sweep key {missing}") from None


def _read_key_values(path) -> dict:
    """Parse a plain ``key=value`` text file, ignoring blanks and # comments."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}: malformed line {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def generate_log_sweep(cfg: SweepConfig) -> TimeSeries:
    """Exponential chirp from f_min to f_max around a duty offset.

    Instantaneous frequency grows exponentially in time, so every sweep
    decade receives equal dwell. Samples are offset + amplitude*sin(phi(t)),
    bounded by [offset-amplitude, offset+amplitude].
    """
    n = int(round(cfg.duration * cfg.fs))
    t = np.arange(n) / cfg.fs
    if cfg.f_min == cfg.f_max:
        phase = 2 * np.pi * cfg.f_min * t
    else:
        # phi(t) = 2*pi*f_min*(k^t - 1)/ln(k), k = (f_max/f_min)^(1/T)
        log_k = math.log(cfg.f_max / cfg.f_min) / cfg.duration
        phase = 2 * np.pi * cfg.f_min * (np.exp(log_k * t) - 1.0) / log_k
    values = cfg.offset + cfg.amplitude * np.sin(phase)
    return TimeSeries(t0=0.0, dt=1.0 / cfg.fs, values=values)


def _auto_nperseg(n: int, fs: float, f_low: float) -> int:
    """Segment length: power of two resolving f_low, capped by the series."""
    want = fs / f_low
    nps = 1 << max(6, math.ceil(math.log2(want)))
    while nps > n:
        nps //= 2
    return max(nps, 8)


def estimate_frf(u: TimeSeries, y: TimeSeries, n_out: int,
                 band: tuple[float, float], nperseg: int | None = None) -> FrequencyResponseSet:
    """H1 transfer estimate from input u to output y at log-spaced frequencies.

    Cross-spectrum over input auto-spectrum, Hann-tapered segments with 50%
    overlap. Output frequencies are the FFT bins nearest to ``n_out``
    log-spaced targets inside ``band`` (Hz); duplicate bins collapse.

    Raises
    ------
    DimensionError
        If u and y differ in sampling or length.
    UnexcitedFrequencyError
        If the input auto-spectrum is negligible at a requested frequency.
    """
    if abs(u.dt - y.dt) > 1e-12 * u.dt:
        raise DimensionError(f"series dt mismatch: {u.dt} vs {y.dt}")
    if len(u) != len(y):
        raise DimensionError(f"series length mismatch: {len(u)} vs {len(y)}")
    f_lo, f_hi = band
    fs = u.fs
    if not 0 < f_lo < f_hi < fs / 2:
        raise ConfigError(f"band {band} must satisfy 0 < f_lo < f_hi < fs/2={fs / 2}")
    if n_out < 1:
        raise ConfigError("n_out must be at least 1")

    nps = nperseg if nperseg is not None else _auto_nperseg(len(u), fs, f_lo)
    kwargs = dict(fs=fs, window="hann", nperseg=nps, noverlap=nps // 2,
                  detrend="constant")
    freqs, p_uu = signal.csd(u.values, u.values, **kwargs)
    _, p_uy = signal.csd(u.values, y.values, **kwargs)

    targets = np.logspace(np.log10(f_lo), np.log10(f_hi), n_out)
    idx = np.unique([max(1, int(np.argmin(np.abs(freqs - f)))) for f in targets])

    floor = 1e-13 * np.max(np.abs(p_uu))
    weak = np.abs(p_uu[idx]) <= floor
    if np.any(weak):
        f_bad = freqs[idx][weak][0]
        raise UnexcitedFrequencyError(
            f"input auto-spectrum below machine tolerance at {f_bad:.6g} Hz")

    values = p_uy[idx] / p_uu[idx]
    return FrequencyResponseSet(2 * np.pi * freqs[idx], values)


def normalize_voltage(series: TimeSeries, u_min: float, u_max: float) -> TimeSeries:
    """Affine map sending u_min to 0 and u_max to 1."""
    if not u_max > u_min:
        raise ConfigError(f"degenerate voltage range: u_max={u_max} <= u_min={u_min}")
    values = (series.values - u_min) / (u_max - u_min)
    return TimeSeries(t0=series.t0, dt=series.dt, values=values)
