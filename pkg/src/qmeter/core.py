"""Finite-dimensional state algebra for a measured system coupled to a pointer.

A composite pure state is stored as the coefficient matrix ``beta`` with
``beta[i, j]`` the amplitude of ``|a_i> (x) |p_j>``; system index first,
pointer index second.  Everything here is a pure function over immutable
values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidOperator, InvalidState

NORM_TOL = 1e-9
RECON_TOL = 1e-10
ZERO_TOL = 1e-12
DEGEN_TOL = 1e-9


def _frozen(a, dtype=complex):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def _default_labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a labelled eigenbasis ``|a_i>``."""

    amplitudes: np.ndarray
    basis_labels: tuple = None

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.size < 1:
            raise InvalidState("a state needs at least one amplitude")
        labels = self.basis_labels
        labels = _default_labels("a", amps.size) if labels is None else tuple(labels)
        if len(labels) != amps.size:
            raise InvalidState(f"{amps.size} amplitudes but {len(labels)} labels")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidState(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def normalized(cls, amplitudes, basis_labels=None) -> "PureState":
        """Build a state after rescaling ``amplitudes`` to unit norm."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidState("cannot normalize the zero vector")
        return cls(amps / norm, basis_labels)

    @classmethod
    def basis(cls, n: int, k: int, basis_labels=None) -> "PureState":
        amps = np.zeros(n, dtype=complex)
        amps[k] = 1.0
        return cls(amps, basis_labels)

    @classmethod
    def uniform(cls, n: int, basis_labels=None) -> "PureState":
        """Equiprobable superposition with every amplitude ``sqrt(1/n)``."""
        return cls(np.full(n, np.sqrt(1.0 / n), dtype=complex), basis_labels)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return (self.basis_labels == other.basis_labels
                and np.array_equal(self.amplitudes, other.amplitudes))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure state of system (x) pointer as an ``n x m`` coefficient matrix."""

    beta: np.ndarray
    system_labels: tuple = None
    pointer_labels: tuple = None

    def __post_init__(self):
        beta = _frozen(self.beta)
        if beta.ndim != 2 or 0 in beta.shape:
            raise InvalidState(f"beta must be a non-empty matrix, got shape {beta.shape}")
        n, m = beta.shape
        sl = _default_labels("a", n) if self.system_labels is None else tuple(self.system_labels)
        pl = _default_labels("p", m) if self.pointer_labels is None else tuple(self.pointer_labels)
        if len(sl) != n or len(pl) != m:
            raise InvalidState("label counts do not match beta's shape")
        norm2 = float(np.sum(np.abs(beta) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidState(f"bipartite state is not normalized (norm^2 = {norm2!r})")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "system_labels", sl)
        object.__setattr__(self, "pointer_labels", pl)

    @property
    def shape(self):
        return self.beta.shape

    def vector(self) -> np.ndarray:
        """Flattened composite ket, index ``i * m + j``."""
        return self.beta.reshape(-1).copy()

    def off_diagonal_mass(self) -> float:
        """Total weight on ``|a_i p_j>`` with ``i != j``."""
        w = np.abs(self.beta) ** 2
        k = min(w.shape)
        return float(w.sum() - np.trace(w[:k, :k]))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    basis_labels: tuple = None

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidOperator(f"density operator must be square, got {mat.shape}")
        d = mat.shape[0]
        labels = _default_labels("e", d) if self.basis_labels is None else tuple(self.basis_labels)
        if len(labels) != d:
            raise InvalidOperator("label count does not match dimension")
        herm = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
        if herm > NORM_TOL:
            raise InvalidOperator(f"operator is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidOperator(f"trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat).min() < -NORM_TOL:
            raise InvalidOperator("operator has negative eigenvalues")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``beta = sum_r c_r  left_r (x) right_r``.

    ``left_vectors[r]`` lives in the system space, ``right_vectors[r]`` in the
    pointer space; both are stored as rows.  Coefficients are sorted in
    descending order and include zeros up to ``min(n, m)``.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    degenerate_flag: bool

    def reconstruct(self) -> np.ndarray:
        return np.einsum("r,ri,rj->ij", self.coefficients, self.left_vectors, self.right_vectors)

    def rank(self, tol: float = ZERO_TOL) -> int:
        return int(np.sum(self.coefficients ** 2 > tol))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    projectors: tuple
    multiplicities: tuple
    eigenvectors: tuple = field(default=())

    def reconstruct(self) -> np.ndarray:
        d = self.projectors[0].shape[0] if self.projectors else 0
        out = np.zeros((d, d), dtype=complex)
        for g, p in zip(self.eigenvalues, self.projectors):
            out += g * p
        return out

    def weights(self) -> np.ndarray:
        """Probability carried by each eigenspace, ``Tr(rho Pi_i)``."""
        return np.asarray(self.eigenvalues) * np.asarray(self.multiplicities)


def tensor_compose(sys: PureState, pointer_index: int, m: int) -> BipartiteState:
    """Attach a pointer prepared in outcome ``pointer_index`` to ``sys``."""
    if not 0 <= pointer_index < m:
        raise IndexError(f"pointer index {pointer_index} outside [0, {m})")
    beta = np.zeros((sys.dim, m), dtype=complex)
    beta[:, pointer_index] = sys.amplitudes
    return BipartiteState(beta, sys.basis_labels)


def partial_trace(state: BipartiteState, side: str) -> DensityOperator:
    """Reduce ``|Psi><Psi|`` by tracing out ``side``.

    ``side="pointer"`` returns the system's reduced state,
    ``side="system"`` returns the pointer's.
    """
    b = state.beta
    if side == "pointer":
        rho = b @ b.conj().T
        labels = state.system_labels
    elif side == "system":
        rho = b.T @ b.conj()
        labels = state.pointer_labels
    else:
        raise ValueError(f"side must be 'system' or 'pointer', got {side!r}")
    # exact hermiticity so downstream eigensolvers see a clean operator
    rho = 0.5 * (rho + rho.conj().T)
    return DensityOperator(rho, labels)


def _fix_phase(vec):
    nz = np.flatnonzero(np.abs(vec) > ZERO_TOL)
    if nz.size == 0:
        return 1.0
    c = vec[nz[0]]
    return np.conj(c) / abs(c)


def _has_degeneracy(values, tol=DEGEN_TOL):
    v = np.sort(np.asarray(values))[::-1]
    return bool(np.any(np.abs(np.diff(v)) < tol)) if v.size > 1 else False


def schmidt_decompose(state: BipartiteState) -> SchmidtDecomposition:
    """Biorthogonal decomposition of the composite state via SVD of ``beta``.

    Left vectors are rotated so their first non-negligible component is real
    and positive; right vectors take the compensating phase.
    """
    u, s, vh = np.linalg.svd(state.beta, full_matrices=False)
    left = u.T.copy()
    right = vh.copy()
    for r in range(s.size):
        ph = _fix_phase(left[r])
        left[r] *= ph
        right[r] /= ph
    # only coefficients that carry weight can make the preferred basis ambiguous;
    # a run of zero coefficients is a null space, not a degeneracy of the state
    support = s[s ** 2 > ZERO_TOL]
    return SchmidtDecomposition(
        coefficients=_frozen(s, float),
        left_vectors=_frozen(left),
        right_vectors=_frozen(right),
        degenerate_flag=_has_degeneracy(support),
    )


def spectral_decompose(rho) -> SpectralDecomposition:
    """Group the eigenvectors of ``rho`` into projectors, one per distinct eigenvalue.

    Eigenvalues below ``ZERO_TOL`` are dropped.  ``rho`` may be a
    :class:`DensityOperator` or any square Hermitian matrix.
    """
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidOperator(f"expected a square matrix, got shape {mat.shape}")
    if mat.size and np.max(np.abs(mat - mat.conj().T)) > NORM_TOL:
        raise InvalidOperator("cannot spectrally decompose a non-Hermitian operator")

    w, v = np.linalg.eigh(mat)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    eigenvalues, projectors, mults, vectors = [], [], [], []
    idx = 0
    while idx < w.size:
        if abs(w[idx]) < ZERO_TOL:
            idx += 1
            continue
        group = [idx]
        while idx + 1 < w.size and abs(w[idx + 1] - w[group[0]]) < DEGEN_TOL:
            idx += 1
            group.append(idx)
        idx += 1
        vecs = v[:, group]
        eigenvalues.append(float(np.mean(w[group])))
        projectors.append(_frozen(vecs @ vecs.conj().T))
        mults.append(len(group))
        vectors.append(_frozen(vecs.T))
    return SpectralDecomposition(
        eigenvalues=_frozen(eigenvalues, float),
        projectors=tuple(projectors),
        multiplicities=tuple(mults),
        eigenvectors=tuple(vectors),
    )


def collapse_mixture(state: BipartiteState) -> DensityOperator:
    """Fully decohered mixture ``sum_ij |beta_ij|^2 |a_i p_j><a_i p_j|``.

    For a perfectly correlated state this is the textbook post-collapse
    ensemble; for anything else it is the diagonal of ``|Psi><Psi|`` in the
    product basis.
    """
    weights = (np.abs(state.beta) ** 2).reshape(-1)
    labels = [f"{a}|{p}" for a in state.system_labels for p in state.pointer_labels]
    return DensityOperator(np.diag(weights / weights.sum()).astype(complex), labels)


def random_state(n: int, rng=None) -> PureState:
    """Haar-random pure state, for tests and demos."""
    rng = np.random.default_rng(rng)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState.normalized(z)


def random_bipartite(n: int, m: int, rng=None) -> BipartiteState:
    rng = np.random.default_rng(rng)
    z = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    return BipartiteState(z / np.linalg.norm(z))


def as_state(obj, basis_labels: Sequence[str] | None = None) -> PureState:
    if isinstance(obj, PureState):
        return obj
    return PureState(obj, basis_labels)
