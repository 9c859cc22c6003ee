"""Shannon quantities for a source feeding a channel.

All logarithms are base 2.  ``0 log 0`` is taken as 0 and destination
outcomes that never occur drop out of the equivocation sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calibration import ChannelMatrix, exact_channel
from .core import NORM_TOL
from .device import MeasurementDevice
from .errors import DimensionError, DomainError, InvalidArgument, NumericalInconsistency, ShapeError

DEFAULT_EPSILON = 0.05
DEFAULT_EPSILON_BITS = 1e-9

DETERMINISTIC = "deterministic"
NOISY = "noisy"
EQUIVOCAL = "equivocal"
NOISY_AND_EQUIVOCAL = "noisy_and_equivocal"


@dataclass(frozen=True, eq=False)
class SourceDistribution:
    probs: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=float, copy=True).reshape(-1)
        if p.size == 0:
            raise InvalidArgument("empty distribution")
        if np.any(p < -NORM_TOL) or np.any(p > 1 + NORM_TOL):
            raise InvalidArgument("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise InvalidArgument(f"probabilities sum to {p.sum()!r}, expected 1")
        p = np.clip(p, 0.0, 1.0)
        p.flags.writeable = False
        labels = tuple(f"s{i}" for i in range(p.size)) if self.labels is None else tuple(self.labels)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def uniform(cls, n: int) -> "SourceDistribution":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """``joint[i, j] = p(s_i, d_j)``, kept together with the two marginals."""

    joint: np.ndarray
    source: np.ndarray
    destination: np.ndarray

    def backward(self) -> np.ndarray:
        """``p(s_i | d_j)`` by Bayes; columns with ``p(d_j) = 0`` are left zero."""
        out = np.zeros_like(self.joint)
        nz = self.destination > 0
        out[:, nz] = self.joint[:, nz] / self.destination[nz]
        return out

    def forward(self) -> np.ndarray:
        """``p(d_j | s_i)``; rows with ``p(s_i) = 0`` are left zero."""
        out = np.zeros_like(self.joint)
        nz = self.source > 0
        out[nz] = self.joint[nz] / self.source[nz, None]
        return out


@dataclass(frozen=True)
class InfoReport:
    H_S: float
    H_D: float
    E: float
    N: float
    mutual: float
    R: float
    classification: str
    channel_reliable: bool
    epsilon: float
    epsilon_bits: float
    joint_entropy: float = field(default=math.nan)
    unphysical: bool = False

    def as_dict(self) -> dict:
        return {
            "H_S": self.H_S, "H_D": self.H_D, "E": self.E, "N": self.N,
            "mutual": self.mutual, "R": self.R,
            "classification": self.classification,
            "channel_reliable": self.channel_reliable,
            "epsilon": self.epsilon, "epsilon_bits": self.epsilon_bits,
            "joint_entropy": self.joint_entropy,
            "unphysical": self.unphysical,
        }


def _plogp(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def surprisal(p: float) -> float:
    """Information of an event with probability ``p``, in bits."""
    if not 0 < p <= 1:
        raise DomainError(f"surprisal needs 0 < p <= 1, got {p!r}")
    return -math.log2(p)


def entropy(dist) -> float:
    p = dist.probs if isinstance(dist, SourceDistribution) else np.asarray(dist, dtype=float)
    return float(max(0.0, -np.sum(_plogp(p))))


def joint_distribution(source, ch: ChannelMatrix) -> JointDistribution:
    p = source.probs if isinstance(source, SourceDistribution) else SourceDistribution(source).probs
    if p.size != ch.shape[0]:
        raise DimensionError(f"source has {p.size} letters, channel has {ch.shape[0]} inputs")
    joint = p[:, None] * ch.probs
    return JointDistribution(joint, p.copy(), joint.sum(axis=0))


def equivocation(joint: JointDistribution) -> float:
    """``H(S|D)``, computed from the backward probabilities."""
    back = joint.backward()
    inner = -np.sum(_plogp(back), axis=0)
    return float(max(0.0, np.dot(joint.destination, inner)))


def noise(joint: JointDistribution) -> float:
    """``H(D|S)``, computed from the forward (channel) probabilities."""
    fwd = joint.forward()
    inner = -np.sum(_plogp(fwd), axis=1)
    return float(max(0.0, np.dot(joint.source, inner)))


def joint_entropy(joint: JointDistribution) -> float:
    return float(-np.sum(_plogp(joint.joint)))


def mutual_information(joint: JointDistribution) -> float:
    """``H(S;D)`` by both routes ``H(S) - E`` and ``H(D) - N``.

    Raises :class:`NumericalInconsistency` if they differ by more than
    ``NORM_TOL``.
    """
    via_source = entropy(joint.source) - equivocation(joint)
    via_dest = entropy(joint.destination) - noise(joint)
    if abs(via_source - via_dest) > NORM_TOL:
        raise NumericalInconsistency(
            f"H(S) - E = {via_source!r} but H(D) - N = {via_dest!r}")
    return max(0.0, 0.5 * (via_source + via_dest))


def reliability_index(ch: ChannelMatrix) -> float:
    """Mutual information for the equiprobable source, as a fraction of ``log2 n``."""
    n = ch.shape[0]
    if n < 2:
        raise DomainError("reliability index needs at least two input states")
    mi = mutual_information(joint_distribution(SourceDistribution.uniform(n), ch))
    return min(1.0, mi / math.log2(n))


def classify_channel(ch: ChannelMatrix, source, epsilon_bits: float = DEFAULT_EPSILON_BITS) -> str:
    j = joint_distribution(source, ch)
    noisy = noise(j) > epsilon_bits
    equivocal = equivocation(j) > epsilon_bits
    if noisy and equivocal:
        return NOISY_AND_EQUIVOCAL
    if noisy:
        return NOISY
    if equivocal:
        return EQUIVOCAL
    return DETERMINISTIC


def triviality_deviation(ch: ChannelMatrix) -> float:
    """``max |Pr(p_j | a_k) - delta_jk|``, with the identity padded by zero
    columns when the pointer has more outcomes than the system has levels."""
    n, m = ch.shape
    return float(np.max(np.abs(ch.probs - np.eye(n, m))))


def channel_reliable(ch: ChannelMatrix, epsilon: float = DEFAULT_EPSILON) -> bool:
    n, m = ch.shape
    if n != m:
        raise ShapeError(f"channel_reliable needs a square channel, got {n}x{m}")
    return triviality_deviation(ch) <= epsilon


def analyze_channel(ch: ChannelMatrix, epsilon: float = DEFAULT_EPSILON,
                    epsilon_bits: float = DEFAULT_EPSILON_BITS,
                    unphysical: bool = False) -> InfoReport:
    n = ch.shape[0]
    source = SourceDistribution.uniform(n)
    j = joint_distribution(source, ch)
    E, N = equivocation(j), noise(j)
    return InfoReport(
        H_S=entropy(j.source),
        H_D=entropy(j.destination),
        E=E,
        N=N,
        mutual=mutual_information(j),
        R=reliability_index(ch),
        classification=classify_channel(ch, source, epsilon_bits),
        channel_reliable=triviality_deviation(ch) <= epsilon,
        epsilon=float(epsilon),
        epsilon_bits=float(epsilon_bits),
        joint_entropy=joint_entropy(j),
        unphysical=unphysical,
    )


def analyze(dev: MeasurementDevice, epsilon: float = DEFAULT_EPSILON,
            epsilon_bits: float = DEFAULT_EPSILON_BITS) -> InfoReport:
    """Full information-theoretic profile of a device at the equiprobable source."""
    return analyze_channel(exact_channel(dev), epsilon, epsilon_bits, dev.unchecked)
