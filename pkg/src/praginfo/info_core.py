"""Exact finite-alphabet information measures.

Conventions used throughout the package:

- All logarithms are base 2; every quantity is reported in bits.
- 0 * log 0 = 0 by continuity.
- D(p||q) returns ``math.inf`` (a value, not an exception) when p puts mass
  where q does not, so callers can test finiteness.
- Probability vectors must sum to 1 within ``SUM_TOL``; inputs inside the
  tolerance are renormalized, anything worse is rejected.
- Everything here is pure and operates on immutable float64 arrays, so values
  can be shared freely across threads.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError, InvalidDistributionError

SUM_TOL = 1e-9

__all__ = [
    "SUM_TOL",
    "Distribution",
    "JointDistribution",
    "as_distribution",
    "as_joint",
    "entropy",
    "relative_entropy",
    "mutual_information",
    "conditional_entropy",
    "conditional_mutual_information",
    "gaussian_entropy",
]


def _frozen_probs(values, *, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.size == 0:
        raise InvalidDistributionError(f"{what} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise InvalidDistributionError(f"{what} contains non-finite entries")
    if np.any(arr < 0.0):
        raise InvalidDistributionError(f"{what} contains negative entries")
    total = float(np.sum(arr))
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidDistributionError(
            f"{what} sums to {total!r}, outside 1 +/- {SUM_TOL}"
        )
    if total != 1.0:
        arr = arr / total
    arr.flags.writeable = False
    return arr


class Distribution:
    """Finite probability vector over an alphabet.

    Entries lie in [0, 1] and sum to 1 (renormalized when within ``SUM_TOL``).
    ``labels``, when given, names the symbols and must match the length.
    """

    __slots__ = ("_probs", "_labels")

    def __init__(self, probs: Sequence[float] | np.ndarray, labels: Sequence[str] | None = None):
        arr = _frozen_probs(probs, what="distribution")
        if arr.ndim != 1:
            raise InvalidDistributionError("distribution must be one-dimensional")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != arr.size:
                raise DimensionMismatchError(
                    f"{len(labels)} labels for {arr.size} probabilities"
                )
        self._probs = arr
        self._labels = labels

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def labels(self):
        return self._labels

    def __len__(self) -> int:
        return self._probs.size

    def __repr__(self) -> str:
        return f"Distribution({np.array2string(self._probs, separator=', ')})"

    def support(self) -> np.ndarray:
        """Boolean mask of symbols with positive probability."""
        return self._probs > 0.0


class JointDistribution:
    """Joint probability table over (actions, messages).

    Rows index the action alphabet, columns index the message alphabet.
    All entries are nonnegative and the table sums to 1, so both marginals
    are valid ``Distribution`` objects by construction.
    """

    __slots__ = ("_table", "_row_labels", "_col_labels")

    def __init__(self, table, row_labels=None, col_labels=None):
        arr = np.array(table, dtype=np.float64)
        if arr.ndim != 2:
            raise InvalidDistributionError("joint table must be two-dimensional")
        flat = _frozen_probs(arr.reshape(-1), what="joint table")
        arr = flat.reshape(arr.shape)
        arr.flags.writeable = False
        if row_labels is not None:
            row_labels = tuple(row_labels)
            if len(row_labels) != arr.shape[0]:
                raise DimensionMismatchError("row label count mismatch")
        if col_labels is not None:
            col_labels = tuple(col_labels)
            if len(col_labels) != arr.shape[1]:
                raise DimensionMismatchError("column label count mismatch")
        self._table = arr
        self._row_labels = row_labels
        self._col_labels = col_labels

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def n_actions(self) -> int:
        return self._table.shape[0]

    @property
    def n_messages(self) -> int:
        return self._table.shape[1]

    def action_marginal(self) -> Distribution:
        return Distribution(self._table.sum(axis=1), labels=self._row_labels)

    def message_marginal(self) -> Distribution:
        return Distribution(self._table.sum(axis=0), labels=self._col_labels)

    def transposed(self) -> "JointDistribution":
        return JointDistribution(self._table.T, self._col_labels, self._row_labels)

    def __repr__(self) -> str:
        return f"JointDistribution(shape={self._table.shape})"


def as_distribution(p) -> Distribution:
    """Coerce a sequence/array to a validated Distribution (no-op if already one)."""
    return p if isinstance(p, Distribution) else Distribution(p)


def as_joint(j) -> JointDistribution:
    return j if isinstance(j, JointDistribution) else JointDistribution(j)


def entropy(p) -> float:
    """Shannon entropy H(p) = -sum p_i log2 p_i, in bits."""
    d = as_distribution(p)
    pos = d.probs[d.probs > 0.0]
    return float(-np.sum(pos * np.log2(pos)))


def relative_entropy(p, q) -> float:
    """Relative entropy D(p||q) = sum p_i log2(p_i / q_i), in bits.

    Returns ``math.inf`` when some p_i > 0 has q_i = 0.
    """
    dp = as_distribution(p)
    dq = as_distribution(q)
    if len(dp) != len(dq):
        raise DimensionMismatchError(f"alphabet sizes differ: {len(dp)} vs {len(dq)}")
    mask = dp.probs > 0.0
    pm = dp.probs[mask]
    qm = dq.probs[mask]
    if np.any(qm == 0.0):
        return math.inf
    return float(np.sum(pm * np.log2(pm / qm)))


def mutual_information(j) -> float:
    """Mutual information I(A;M) of a joint table, in bits.

    Computed directly as sum_{a,m} Pr(a,m) log2[ Pr(a,m) / (Pr(a) Pr(m)) ].
    """
    joint = as_joint(j)
    t = joint.table
    pa = t.sum(axis=1)
    pm = t.sum(axis=0)
    mask = t > 0.0
    prod = np.outer(pa, pm)
    return float(np.sum(t[mask] * np.log2(t[mask] / prod[mask])))


def conditional_entropy(j) -> float:
    """Conditional entropy H(A|M) = sum_m Pr(m) H(Pr(.|m)), in bits."""
    joint = as_joint(j)
    t = joint.table
    pm = t.sum(axis=0)
    mask = t > 0.0
    cond = np.divide(t, pm, out=np.ones_like(t), where=pm > 0.0)
    return float(-np.sum(t[mask] * np.log2(cond[mask])))


def conditional_mutual_information(txyz) -> float:
    """Conditional mutual information I(X;Y|Z) of a three-way joint table.

    ``txyz`` has axes (X, Y, Z) and sums to 1. Direct summation of
    Pr(x,y,z) log2[ Pr(x,y,z) Pr(z) / (Pr(x,z) Pr(y,z)) ].
    """
    t = np.array(txyz, dtype=np.float64)
    if t.ndim != 3:
        raise InvalidDistributionError("three-way table must have three axes")
    flat = _frozen_probs(t.reshape(-1), what="three-way table")
    t = flat.reshape(t.shape)
    pz = t.sum(axis=(0, 1))
    pxz = t.sum(axis=1)
    pyz = t.sum(axis=0)
    mask = t > 0.0
    num = t * pz[np.newaxis, np.newaxis, :]
    den = pxz[:, np.newaxis, :] * pyz[np.newaxis, :, :]
    return float(np.sum(t[mask] * np.log2(num[mask] / den[mask])))


def gaussian_entropy(sigma: float) -> float:
    """Differential entropy of a normal with standard deviation ``sigma``, in bits.

    h = (1/2) log2(2 pi e sigma^2). Doubling sigma adds exactly one bit.
    """
    if not (sigma > 0.0) or not math.isfinite(sigma):
        raise DomainError(f"sigma must be positive and finite, got {sigma!r}")
    return 0.5 * math.log2(2.0 * math.pi * math.e * sigma * sigma)
