"""Calibration: recovering the channel matrix of a device from pointer statistics.

Sampling is counter-based.  Input ``k`` of a calibration run with seed ``s``
owns the stream ``stream_key(s, k)`` and shot ``t`` is draw ``t`` of that
stream, so runs are reproducible, order independent, and extending the shot
count never changes earlier draws.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import NORM_TOL, PureState, as_state
from .device import MeasurementDevice, apply_device, pointer_distribution
from .errors import DimensionError, InvalidArgument

_U64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Row-stochastic matrix ``probs[k, j] = Pr(p_j | a_k)``."""

    probs: np.ndarray
    input_labels: tuple = None
    output_labels: tuple = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=float, copy=True)
        if p.ndim != 2 or 0 in p.shape:
            raise DimensionError(f"channel must be a non-empty matrix, got shape {p.shape}")
        if np.any(p < -NORM_TOL) or np.any(p > 1 + NORM_TOL):
            raise InvalidArgument("channel entries must lie in [0, 1]")
        rows = p.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > NORM_TOL):
            raise InvalidArgument(f"channel rows must sum to 1, got {rows}")
        p = np.clip(p, 0.0, 1.0)
        p.flags.writeable = False
        n, m = p.shape
        il = tuple(f"a{k}" for k in range(n)) if self.input_labels is None else tuple(self.input_labels)
        ol = tuple(f"p{j}" for j in range(m)) if self.output_labels is None else tuple(self.output_labels)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "input_labels", il)
        object.__setattr__(self, "output_labels", ol)

    @property
    def shape(self):
        return self.probs.shape

    def __eq__(self, other):
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CalibrationReport:
    exact: ChannelMatrix
    estimated: ChannelMatrix
    counts: np.ndarray
    shots_per_input: int
    seed: int
    max_abs_error: float

    def __eq__(self, other):
        if not isinstance(other, CalibrationReport):
            return NotImplemented
        return (self.exact == other.exact and self.estimated == other.estimated
                and np.array_equal(self.counts, other.counts)
                and self.shots_per_input == other.shots_per_input
                and self.seed == other.seed and self.max_abs_error == other.max_abs_error)

    __hash__ = None


def _seed(seed) -> int:
    return int(seed) & _U64


def _cdf(probs) -> np.ndarray:
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    # pin everything from the last outcome with weight onward to exactly 1,
    # so zero-probability trailing outcomes can never be drawn
    last = np.flatnonzero(p > 0)[-1]
    cdf[last:] = 1.0
    return cdf


def exact_channel(dev: MeasurementDevice) -> ChannelMatrix:
    """``Pr(p_j | a_k) = sum_i |gamma_ij^k|^2``."""
    # same reduction order as pointer_distribution, so eigenstate inputs agree exactly
    p = np.sum(np.abs(dev.gamma) ** 2, axis=0).T
    p = p / p.sum(axis=1, keepdims=True)
    return ChannelMatrix(p, tuple(f"a{k}" for k in range(dev.n)),
                         tuple(f"p{j}" for j in range(dev.m)))


def _draw_counts(dist, seed, stream, shots):
    key = kernels.stream_key(_seed(seed), stream)
    return kernels.sample_counts(_cdf(dist), key, 0, shots)


def sample_pointer(dev: MeasurementDevice, state, rng_seed: int) -> int:
    """One single measurement: the index of the pointer reading."""
    dist = pointer_distribution(apply_device(dev, state))
    key = kernels.stream_key(_seed(rng_seed), 0)
    return int(kernels.sample_indices(_cdf(dist), key, 0, 1)[0])


def sample_readings(dev: MeasurementDevice, state, shots: int, seed: int) -> np.ndarray:
    """The individual pointer readings of a frequency measurement, in order."""
    if shots < 1:
        raise InvalidArgument(f"shots must be >= 1, got {shots}")
    dist = pointer_distribution(apply_device(dev, state))
    key = kernels.stream_key(_seed(seed), 0)
    return kernels.sample_indices(_cdf(dist), key, 0, int(shots))


def frequency_measurement(dev: MeasurementDevice, state, shots: int, seed: int) -> np.ndarray:
    """Empirical pointer frequencies over ``shots`` repeated single measurements."""
    if shots < 1:
        raise InvalidArgument(f"shots must be >= 1, got {shots}")
    dist = pointer_distribution(apply_device(dev, state))
    return _draw_counts(dist, seed, 0, int(shots)) / shots


def estimate_channel(dev: MeasurementDevice, shots: int, seed: int) -> CalibrationReport:
    """Calibrate ``dev`` by feeding each basis state ``shots`` times."""
    if shots < 1:
        raise InvalidArgument(f"shots must be >= 1, got {shots}")
    shots = int(shots)
    exact = exact_channel(dev)
    counts = np.empty((dev.n, dev.m), dtype=np.int64)
    for k in range(dev.n):
        counts[k] = _draw_counts(exact.probs[k], seed, k, shots)
    estimated = ChannelMatrix(counts / shots, exact.input_labels, exact.output_labels)
    err = float(np.max(np.abs(estimated.probs - exact.probs)))
    counts.flags.writeable = False
    return CalibrationReport(exact, estimated, counts, shots, _seed(seed), err)


def classical_prediction(ch: ChannelMatrix, source_dist) -> np.ndarray:
    """Push a source distribution through the channel: ``sum_k p_k Pr(p_j | a_k)``."""
    p = np.asarray(source_dist, dtype=float)
    if p.shape != (ch.shape[0],):
        raise DimensionError(f"source has length {p.size}, channel has {ch.shape[0]} inputs")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise InvalidArgument("source distribution must sum to 1")
    return p @ ch.probs


def interference_gap(dev: MeasurementDevice, state) -> float:
    """Largest difference between the quantum pointer distribution and the
    classical channel prediction from ``|alpha_k|^2``."""
    psi = as_state(state)
    quantum = pointer_distribution(apply_device(dev, psi))
    classical = classical_prediction(exact_channel(dev), psi.probabilities)
    return float(np.max(np.abs(quantum - classical)))


def eigenstate(dev: MeasurementDevice, k: int) -> PureState:
    return PureState.basis(dev.n, k)
