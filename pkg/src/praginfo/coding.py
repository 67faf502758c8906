"""Prefix-code construction and empirical checks of the coding bounds.

Shannon lengths ceil(-log2 q_i) realize the classic sandwich

    H(p) + D(p||q)  <=  E_p[length under q's code]  <=  H(p) + D(p||q) + 1

and its side-message average. The lower bound holds for any prefix code; the
upper bound is guaranteed for the Shannon code specifically, so the bound
reports here always use Shannon lengths. Huffman lengths are provided as the
optimal-code baseline for tightness comparisons.

Codeword bit assignment is canonical (shorter first, then symbol order), so
emitted codebooks are byte-reproducible across runs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError, SupportError
from .info_core import (
    Distribution,
    JointDistribution,
    as_distribution,
    entropy,
    mutual_information,
    relative_entropy,
)

KRAFT_TOL = 1e-12

# Guard against float noise pushing -log2(q) across an integer boundary when
# the true value is exactly an integer (dyadic q).
_CEIL_EPS = 1e-12

__all__ = [
    "CodeLengths",
    "SideMessageEnsemble",
    "WrongCodeReport",
    "PragmaticWrongCodeReport",
    "shannon_lengths",
    "huffman_lengths",
    "canonical_codebook",
    "wrong_code_gap",
    "pragmatic_wrong_code_gap",
    "empirical_code_rate",
]


@dataclass(frozen=True)
class CodeLengths:
    """Positive integer codeword lengths satisfying the Kraft inequality."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        if len(self.lengths) == 0:
            raise DomainError("a code needs at least one codeword")
        if any((not isinstance(l, int)) or l < 1 for l in self.lengths):
            raise DomainError("codeword lengths must be positive integers")
        if self.kraft_sum() > 1.0 + KRAFT_TOL:
            raise DomainError(
                f"Kraft sum {self.kraft_sum()!r} exceeds 1; not a prefix code"
            )

    def kraft_sum(self) -> float:
        return float(sum(2.0 ** -l for l in self.lengths))

    def expected_length(self, p) -> float:
        """E_p[length], weighting each codeword by the given distribution."""
        d = as_distribution(p)
        if len(d) != len(self.lengths):
            raise DimensionMismatchError("distribution/code size mismatch")
        return float(np.dot(d.probs, np.asarray(self.lengths, dtype=np.float64)))

    def __len__(self) -> int:
        return len(self.lengths)


class SideMessageEnsemble:
    """Message prior plus one conditional action distribution per message."""

    __slots__ = ("_prior", "_conditionals")

    def __init__(self, prior, conditionals: Sequence):
        self._prior = as_distribution(prior)
        conds = tuple(as_distribution(c) for c in conditionals)
        if len(conds) != len(self._prior):
            raise DimensionMismatchError(
                f"{len(self._prior)} messages but {len(conds)} conditionals"
            )
        sizes = {len(c) for c in conds}
        if len(sizes) != 1:
            raise DimensionMismatchError("conditionals must share one alphabet")
        self._conditionals = conds

    @property
    def prior(self) -> Distribution:
        return self._prior

    @property
    def conditionals(self) -> tuple[Distribution, ...]:
        return self._conditionals

    @property
    def n_messages(self) -> int:
        return len(self._prior)

    @property
    def n_actions(self) -> int:
        return len(self._conditionals[0])

    def implied_marginal(self) -> Distribution:
        """Mixture sum_m prior_m * P(.|m) over the action alphabet."""
        table = np.stack([c.probs for c in self._conditionals], axis=1)
        return Distribution(table @ self._prior.probs)

    def to_joint(self) -> JointDistribution:
        """Joint table Pr(a, m) = prior_m * P(a|m), actions as rows."""
        table = np.stack([c.probs for c in self._conditionals], axis=1)
        return JointDistribution(table * self._prior.probs[np.newaxis, :])


@dataclass(frozen=True)
class WrongCodeReport:
    expected_length: float
    lower: float
    upper: float
    holds: bool


@dataclass(frozen=True)
class PragmaticWrongCodeReport:
    expected_length: float
    lower: float
    upper: float
    cond_entropy: float
    pragmatic_info: float
    marginal_gap: float
    holds: bool


def _shannon_length(q: float) -> int:
    return max(1, math.ceil(-math.log2(q) - _CEIL_EPS))


def shannon_lengths(q) -> CodeLengths:
    """Shannon-code lengths ceil(-log2 q_i). Requires every q_i > 0."""
    d = as_distribution(q)
    if np.any(d.probs == 0.0):
        raise SupportError("Shannon code undefined for zero-probability symbols")
    return CodeLengths(tuple(_shannon_length(float(x)) for x in d.probs))


def huffman_lengths(q) -> CodeLengths:
    """Optimal prefix-code lengths for q (Huffman construction).

    A single-symbol alphabet gets length 1: a code must emit something.
    Ties are broken by insertion order, so output is deterministic.
    """
    d = as_distribution(q)
    n = len(d)
    if n == 1:
        return CodeLengths((1,))
    lengths = [0] * n
    heap: list[tuple[float, int, list[int]]] = [
        (float(w), i, [i]) for i, w in enumerate(d.probs)
    ]
    heapq.heapify(heap)
    counter = n
    while len(heap) > 1:
        w1, _, syms1 = heapq.heappop(heap)
        w2, _, syms2 = heapq.heappop(heap)
        merged = syms1 + syms2
        for s in merged:
            lengths[s] += 1
        heapq.heappush(heap, (w1 + w2, counter, merged))
        counter += 1
    return CodeLengths(tuple(lengths))


def canonical_codebook(code: CodeLengths) -> tuple[str, ...]:
    """Assign canonical codewords (shorter first, ties by symbol order).

    Returns bit strings in original symbol order. Requires an exact
    integer Kraft sum <= 1.
    """
    lengths = code.lengths
    max_len = max(lengths)
    if sum(1 << (max_len - l) for l in lengths) > (1 << max_len):
        raise DomainError("lengths violate the Kraft inequality exactly")
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    words = [""] * len(lengths)
    value = 0
    prev_len = lengths[order[0]]
    for rank, sym in enumerate(order):
        length = lengths[sym]
        if rank > 0:
            value = (value + 1) << (length - prev_len)
        words[sym] = format(value, "b").zfill(length)
        prev_len = length
    return tuple(words)


def wrong_code_gap(p, q) -> WrongCodeReport:
    """Expected length of q's Shannon code under p, with the sandwich bounds.

    lower = H(p) + D(p||q), upper = lower + 1. Raises ``SupportError`` when
    p puts mass on a symbol with q = 0 (the lower bound would be infinite).
    """
    dp = as_distribution(p)
    dq = as_distribution(q)
    if len(dp) != len(dq):
        raise DimensionMismatchError("p and q must share one alphabet")
    if np.any((dp.probs > 0.0) & (dq.probs == 0.0)):
        raise SupportError("q must be positive wherever p is")
    expected = 0.0
    for pi, qi in zip(dp.probs, dq.probs):
        if pi > 0.0:
            expected += float(pi) * _shannon_length(float(qi))
    lower = entropy(dp) + relative_entropy(dp, dq)
    upper = lower + 1.0
    holds = (lower - 1e-9) <= expected <= (upper + 1e-9)
    return WrongCodeReport(expected, lower, upper, holds)


def pragmatic_wrong_code_gap(e: SideMessageEnsemble, q=None) -> PragmaticWrongCodeReport:
    """Side-message average of the wrong-code sandwich.

    expected = sum_m prior_m E_{P(.|m)}[Shannon length under q]. The lower
    bound is computed as H(alpha|mu) + I(alpha;mu) + D(marginal||q); the last
    term vanishes exactly when q is the ensemble's implied marginal, i.e. the
    code one would use without the side messages, and the report then reads
    lower = H(alpha|mu) + I(alpha;mu). ``q=None`` selects that marginal.
    """
    if q is None:
        dq = e.implied_marginal()
    else:
        dq = as_distribution(q)
    if len(dq) != e.n_actions:
        raise DimensionMismatchError("q must live on the action alphabet")
    for cond in e.conditionals:
        if np.any((cond.probs > 0.0) & (dq.probs == 0.0)):
            raise SupportError("q must cover the support of every conditional")

    lengths = [
        _shannon_length(float(x)) if x > 0.0 else 0 for x in dq.probs
    ]
    expected = 0.0
    for phi, cond in zip(e.prior.probs, e.conditionals):
        if phi == 0.0:
            continue
        expected += float(phi) * float(
            sum(float(pi) * l for pi, l in zip(cond.probs, lengths) if pi > 0.0)
        )

    joint = e.to_joint()
    info = mutual_information(joint)
    cond_h = float(
        sum(
            float(phi) * entropy(cond)
            for phi, cond in zip(e.prior.probs, e.conditionals)
            if phi > 0.0
        )
    )
    gap = relative_entropy(e.implied_marginal(), dq)
    lower = cond_h + info + gap
    upper = lower + 1.0
    holds = (lower - 1e-9) <= expected <= (upper + 1e-9)
    return PragmaticWrongCodeReport(expected, lower, upper, cond_h, info, gap, holds)


def empirical_code_rate(sequence, model) -> float:
    """Ideal codelength rate of a symbol sequence under a model, bits/symbol.

    Computes (1/N) sum_n -log2 Pr_model(symbol_n | context). Lengths are
    real-valued (not rounded to integers): integer rounding noise would mask
    sub-bit gaps such as D(p||q) at desk scale. ``model`` is either an i.i.d.
    ``Distribution`` or any source exposing ``sequence_log2_prob`` (such as
    ``rates.MarkovSource``).
    """
    seq = np.asarray(sequence, dtype=np.int64)
    if seq.ndim != 1 or seq.size == 0:
        raise DomainError("sequence must be a nonempty 1-D list of symbol indices")
    n = seq.size
    if isinstance(model, Distribution):
        if seq.min() < 0 or seq.max() >= len(model):
            raise DomainError("sequence contains symbols outside the model alphabet")
        probs = model.probs[seq]
        if np.any(probs == 0.0):
            raise SupportError("model assigns zero probability to an observed symbol")
        return float(-np.sum(np.log2(probs)) / n)
    if hasattr(model, "sequence_log2_prob"):
        return float(-model.sequence_log2_prob(seq) / n)
    raise TypeError("model must be a Distribution or expose sequence_log2_prob")
