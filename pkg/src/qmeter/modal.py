"""Which pointer observable gets a definite value, according to whom.

Four ascription rules are compared on the post-interaction state:

* ``kochen_dieks``  -- pointer-side vectors of the Schmidt decomposition;
* ``vermaas_dieks`` -- spectral decomposition of the pointer's reduced state;
* ``collapse``      -- diagonal of the fully decohered mixture;
* ``pointer_basis`` -- the apparatus' own pointer eigenbasis, with the
  pointer-reading probabilities.

For an ideal measurement they all agree.  Off the ideal case the Schmidt
basis rotates away from the pointer basis, which is what
:func:`pointer_misalignment` measures.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (ZERO_TOL, BipartiteState, collapse_mixture, partial_trace,
                   schmidt_decompose, spectral_decompose)
from .device import pointer_distribution

KOCHEN_DIEKS = "kochen_dieks"
VERMAAS_DIEKS = "vermaas_dieks"
COLLAPSE = "collapse"
POINTER_BASIS = "pointer_basis"
INTERPRETATIONS = (KOCHEN_DIEKS, VERMAAS_DIEKS, COLLAPSE, POINTER_BASIS)


@dataclass(frozen=True, eq=False)
class ContextAssignment:
    """Definite-valued pointer-side basis (rows) and the weight of each vector."""

    interpretation: str
    pointer_side_basis: np.ndarray
    probabilities: np.ndarray
    degenerate_flag: bool = False

    def as_dict(self) -> dict:
        return {
            "interpretation": self.interpretation,
            "pointer_side_basis": [[[float(z.real), float(z.imag)] for z in row]
                                   for row in self.pointer_side_basis],
            "probabilities": [float(p) for p in self.probabilities],
            "degenerate": bool(self.degenerate_flag),
        }


class Misalignment(NamedTuple):
    value: float
    degenerate: bool

    def __float__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class AscriptionComparison:
    kochen_dieks: ContextAssignment
    vermaas_dieks: ContextAssignment
    collapse: ContextAssignment
    pointer_basis: ContextAssignment
    misalignment: Misalignment

    def assignments(self):
        return (self.kochen_dieks, self.vermaas_dieks, self.collapse, self.pointer_basis)

    def as_dict(self) -> dict:
        return {
            "assignments": {a.interpretation: a.as_dict() for a in self.assignments()},
            "pointer_misalignment": self.misalignment.value,
            "misalignment_degenerate": self.misalignment.degenerate,
        }


def kochen_dieks_context(state: BipartiteState) -> ContextAssignment:
    sd = schmidt_decompose(state)
    w = sd.coefficients ** 2
    keep = w > ZERO_TOL
    return ContextAssignment(KOCHEN_DIEKS, sd.right_vectors[keep], w[keep], sd.degenerate_flag)


def vermaas_dieks_context(state: BipartiteState) -> ContextAssignment:
    """Eigenbasis of the pointer's reduced state.

    A degenerate eigenspace contributes all its eigenvectors, each carrying
    the common eigenvalue, so the weights still add up to ``Tr(rho Pi_i)``.
    """
    spec = spectral_decompose(partial_trace(state, "system"))
    vecs, probs = [], []
    for g, ev in zip(spec.eigenvalues, spec.eigenvectors):
        for v in ev:
            vecs.append(v)
            probs.append(g)
    degenerate = any(k > 1 for k in spec.multiplicities)
    return ContextAssignment(VERMAAS_DIEKS, np.array(vecs), np.array(probs), degenerate)


def collapse_context(state: BipartiteState) -> ContextAssignment:
    n, m = state.shape
    diag = collapse_mixture(state).diagonal().reshape(n, m)
    return ContextAssignment(COLLAPSE, np.eye(m, dtype=complex), diag.sum(axis=0))


def pointer_basis_context(state: BipartiteState) -> ContextAssignment:
    m = state.shape[1]
    return ContextAssignment(POINTER_BASIS, np.eye(m, dtype=complex), pointer_distribution(state))


def pointer_misalignment(state: BipartiteState) -> Misalignment:
    """``1 - min_i max_j |<p_j|p'_i>|^2`` over the weighted Schmidt pointer vectors.

    Zero exactly when every Schmidt pointer vector is a pointer eigenstate
    up to phase.  When the Schmidt spectrum is degenerate the basis is not
    unique and the returned value carries ``degenerate=True``.
    """
    kd = kochen_dieks_context(state)
    overlaps = np.abs(kd.pointer_side_basis) ** 2
    worst = float(np.min(np.max(overlaps, axis=1)))
    return Misalignment(min(1.0, max(0.0, 1.0 - worst)), kd.degenerate_flag)


def ascription_comparison(state: BipartiteState) -> AscriptionComparison:
    return AscriptionComparison(
        kochen_dieks=kochen_dieks_context(state),
        vermaas_dieks=vermaas_dieks_context(state),
        collapse=collapse_context(state),
        pointer_basis=pointer_basis_context(state),
        misalignment=pointer_misalignment(state),
    )
