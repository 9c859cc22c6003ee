"""Measuring devices as response tensors.

A device is fully characterized by how it transforms each input eigenstate
``|a_k> (x) |p_0>``.  ``gamma[i, j, k]`` is the amplitude of ``|a_i> (x) |p_j>``
produced from input ``k``.  The ready state ``p_0`` never survives the
interaction, so only the ``m`` outcome states are modelled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import ZERO_TOL, BipartiteState, PureState, as_state
from .errors import (DimensionError, InvalidDevice, InvalidDimension,
                     NotAnIsometry, ShapeError)

PHYS_TOL = 1e-9
DEFAULT_DELTA = 0.1

KINDS = ("ideal", "imperfect", "disturbing", "generic")


class ValidationReport(NamedTuple):
    ok: bool
    max_deviation: float
    unchecked: bool = False


class MHIResult(NamedTuple):
    ratios: np.ndarray
    reliable: bool
    delta: float


@dataclass(frozen=True, eq=False)
class MeasurementDevice:
    """Response tensor of a measuring apparatus.

    Parameters
    ----------
    gamma : array_like, shape (n, m, n)
        ``gamma[i, j, k]``: system-out ``i``, pointer ``j``, system-in ``k``.
    name : str
    kind : {"ideal", "imperfect", "disturbing", "generic"}
        Descriptive tag only; nothing dispatches on it.
    unchecked : bool
        Skip the isometry check.  Unphysical devices are allowed for teaching
        purposes, but every report marks them.
    metadata : dict, optional
        Free-form annotations carried through device files; ignored by
        equality.
    """

    gamma: np.ndarray
    name: str = "device"
    kind: str = "generic"
    unchecked: bool = False
    metadata: dict = None

    def __post_init__(self):
        g = np.array(self.gamma, dtype=complex, copy=True)
        if g.ndim != 3 or g.shape[0] != g.shape[2]:
            raise InvalidDevice(f"gamma must have shape (n, m, n), got {g.shape}")
        n, m, _ = g.shape
        if n < 1:
            raise InvalidDimension("device needs n >= 1")
        if m < n:
            raise InvalidDevice(f"pointer has {m} outcomes for an {n}-level system; need m >= n")
        if self.kind not in KINDS:
            raise InvalidDevice(f"unknown device kind {self.kind!r}")
        g.flags.writeable = False
        object.__setattr__(self, "gamma", g)
        if not self.unchecked:
            report = validate_device(self)
            if not report.ok:
                raise NotAnIsometry(
                    f"device {self.name!r} is not an isometry "
                    f"(max |Gram - I| = {report.max_deviation:.6g})",
                    report.max_deviation)

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    @property
    def m(self) -> int:
        return self.gamma.shape[1]

    def isometry(self) -> np.ndarray:
        """The ``(n*m) x n`` matrix whose column ``k`` is the output for input ``k``."""
        return self.gamma.reshape(self.n * self.m, self.n)

    def response(self, k: int) -> np.ndarray:
        return self.gamma[:, :, k].copy()

    def __eq__(self, other):
        if not isinstance(other, MeasurementDevice):
            return NotImplemented
        return (self.name == other.name and self.kind == other.kind
                and self.unchecked == other.unchecked
                and np.array_equal(self.gamma, other.gamma))

    __hash__ = None


def validate_device(dev: MeasurementDevice) -> ValidationReport:
    v = dev.isometry()
    gram = v.conj().T @ v
    dev_max = float(np.max(np.abs(gram - np.eye(dev.n))))
    return ValidationReport(dev_max <= PHYS_TOL, dev_max, dev.unchecked)


def make_ideal(n: int, name: str = None) -> MeasurementDevice:
    """Perfect correlation: ``|a_k> (x) |p_0> -> |a_k> (x) |p_k>``."""
    if n < 1:
        raise InvalidDimension(f"n must be >= 1, got {n}")
    g = np.zeros((n, n, n), dtype=complex)
    for k in range(n):
        g[k, k, k] = 1.0
    return MeasurementDevice(g, name or f"ideal-{n}", "ideal")


def make_imperfect(n: int, cross, name: str = None) -> MeasurementDevice:
    """Non-disturbing but imperfect device.

    ``cross[k]`` is the pointer wavefunction produced when the system sits in
    ``|a_k>``; the system itself is left untouched.  ``cross`` may be
    ``n x m`` with ``m >= n``.
    """
    c = np.asarray(cross, dtype=complex)
    if c.ndim != 2 or c.shape[0] != n:
        raise DimensionError(f"cross must have {n} rows, got shape {c.shape}")
    norms = np.sum(np.abs(c) ** 2, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > PHYS_TOL)
    if bad.size:
        raise InvalidDevice(f"cross row {bad[0]} has squared norm {norms[bad[0]]!r}")
    m = c.shape[1]
    g = np.zeros((n, m, n), dtype=complex)
    for k in range(n):
        g[k, :, k] = c[k]
    return MeasurementDevice(g, name or f"imperfect-{n}", "imperfect")


def make_disturbing(n: int, disturbed, name: str = None) -> MeasurementDevice:
    """Perfectly correlating device that disturbs the measured system.

    Input ``|a_k>`` ends up as ``disturbed[k] (x) |p_k>``.  The disturbed
    vectors must be normalized but need not be orthogonal.
    """
    d = np.asarray(disturbed, dtype=complex)
    if d.shape != (n, n):
        raise DimensionError(f"expected {n} disturbed vectors of length {n}, got {d.shape}")
    norms = np.sum(np.abs(d) ** 2, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > PHYS_TOL)
    if bad.size:
        raise InvalidDevice(f"disturbed vector {bad[0]} has squared norm {norms[bad[0]]!r}")
    g = np.zeros((n, n, n), dtype=complex)
    for k in range(n):
        g[:, k, k] = d[k]
    return MeasurementDevice(g, name or f"disturbing-{n}", "disturbing")


def from_unitary(n: int, m: int, columns, name: str = None) -> MeasurementDevice:
    """Generic device from ``n`` orthonormal output vectors of length ``n*m``.

    Entry ``columns[k][i*m + j]`` becomes ``gamma[i, j, k]``.
    """
    cols = np.asarray(columns, dtype=complex)
    if cols.shape != (n, n * m):
        raise DimensionError(f"expected {n} columns of length {n * m}, got {cols.shape}")
    gram = cols.conj() @ cols.T
    deviation = float(np.max(np.abs(gram - np.eye(n))))
    if deviation > PHYS_TOL:
        raise NotAnIsometry(f"columns are not orthonormal (max |Gram - I| = {deviation:.6g})",
                            deviation)
    g = cols.reshape(n, n, m).transpose(1, 2, 0)
    return MeasurementDevice(g, name or f"generic-{n}x{m}", "generic")


def random_device(n: int, m: int, rng=None, name: str = None) -> MeasurementDevice:
    """Device from a random isometry (QR of a complex Gaussian matrix)."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=(n * m, n)) + 1j * rng.normal(size=(n * m, n))
    q, _ = np.linalg.qr(z)
    return from_unitary(n, m, q.T, name=name or f"random-{n}x{m}")


def bsc_device(q: float, name: str = None) -> MeasurementDevice:
    """Two-level imperfect device whose channel is binary symmetric with flip ``q``."""
    a, b = math.sqrt(1.0 - q), math.sqrt(q)
    return make_imperfect(2, [[a, b], [b, a]], name=name or f"bsc-q{q:g}")


def interference_device(q: float = 0.25, name: str = None) -> MeasurementDevice:
    """Two-level device whose outputs overlap on system level 0.

    Both inputs are steered into ``|a_0>`` with orthogonal pointer
    wavefunctions, so superposed inputs interfere at the pointer.
    """
    a, b = math.sqrt(1.0 - q), math.sqrt(q)
    cols = [[a, b, 0, 0], [b, -a, 0, 0]]
    return from_unitary(2, 2, cols, name=name or f"interference-q{q:g}")


def apply_device(dev: MeasurementDevice, state) -> BipartiteState:
    """``beta_ij = sum_k alpha_k gamma_ij^k``."""
    psi = as_state(state)
    if psi.dim != dev.n:
        raise DimensionError(f"state has dimension {psi.dim}, device expects {dev.n}")
    beta = dev.gamma @ psi.amplitudes
    if dev.unchecked:
        # unphysical tensors do not preserve the norm; renormalize so the
        # result is still a state, the report carries the unchecked flag
        norm = np.linalg.norm(beta)
        if norm == 0:
            raise InvalidDevice(f"unchecked device {dev.name!r} annihilates the input")
        beta = beta / norm
    return BipartiteState(beta, psi.basis_labels)


def pointer_distribution(state: BipartiteState) -> np.ndarray:
    """``Pr(p_j) = sum_i |beta_ij|^2``."""
    p = np.sum(np.abs(state.beta) ** 2, axis=0)
    return p / p.sum()


def mhi_reliability(state: BipartiteState, delta: float = DEFAULT_DELTA) -> MHIResult:
    """State-dependent reliability test on the diagonal of ``beta``.

    ``ratio_i = sum_{n != i} |beta_ni|^2 / |beta_ii|^2``.  Off-diagonal
    weight below ``ZERO_TOL`` counts as none, giving ratio 0; otherwise a
    vanishing diagonal entry gives ``inf``.
    """
    n, m = state.shape
    if n != m:
        raise ShapeError(f"criterion needs a square beta, got {n}x{m}")
    w = np.abs(state.beta) ** 2
    diag = np.diag(w)
    off = w.sum(axis=0) - diag
    ratios = np.zeros(n)
    for i in range(n):
        if off[i] <= ZERO_TOL:
            ratios[i] = 0.0
        elif diag[i] == 0.0:
            ratios[i] = math.inf
        else:
            ratios[i] = off[i] / diag[i]
    return MHIResult(ratios, bool(np.max(ratios) <= delta), float(delta))
