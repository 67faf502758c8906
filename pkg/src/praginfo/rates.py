"""Information rates for stationary coupled symbol/message processes.

Two routes to the same limit live here on purpose. Exact small-n unrolling
of the joint block distribution is the oracle: block averages I(a_1..a_n;
m_1..m_n)/n and conditional increments I(a_1..a_n; m_n | m_1..m_{n-1}) are
computed from full tables, so they are correct to float precision. The
single-path estimator (1/n) log2 of the joint-to-product likelihood ratio is
the scalable route; it converges almost surely to the same limit and is
cross-validated against the exact sequences in the tests.

Block tables grow as (n_actions * n_messages)^n; the horizon is capped at
2^24 table entries and exceeding it raises instead of truncating silently.

Path likelihoods for the marginal processes come from exact forward
filtering on the coupled chain. The marginal of a coupled chain is generally
not Markov, so plug-in counting would be both biased and out of scope here.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DimensionMismatchError,
    DomainError,
    HorizonTooLargeError,
    ModelInconsistencyError,
    ReducibleChainError,
    SupportError,
)
from .info_core import (
    Distribution,
    JointDistribution,
    _frozen_probs,
    as_distribution,
    conditional_mutual_information,
    entropy,
    mutual_information,
)

MAX_TABLE_ENTRIES = 2 ** 24

__all__ = [
    "MarkovSource",
    "CoupledSource",
    "RateEstimate",
    "MonotoneReport",
    "exact_entropy_rate",
    "pragmatic_rate_sequence",
    "monotone_increment_check",
    "ergodic_sample_rate",
    "independent_coupling",
    "channel_coupling",
    "identity_coupling",
    "markov_modulated_coupling",
]


def _validated_kernel(kernel, n_states: int, n_cols: int, what: str) -> np.ndarray:
    arr = np.asarray(kernel, dtype=np.float64)
    if arr.shape != (n_states, n_cols):
        raise DimensionMismatchError(
            f"{what} must have shape {(n_states, n_cols)}, got {arr.shape}"
        )
    rows = [_frozen_probs(arr[i], what=f"{what} row {i}") for i in range(n_states)]
    out = np.stack(rows, axis=0)
    out.setflags(write=False)
    return out


def _stationary_of(kernel_states: np.ndarray) -> np.ndarray:
    """Stationary distribution over states of a state-to-state matrix.

    Requires exactly one closed communicating class; transient states get
    weight zero. Periodic chains are fine: the stationary solve does not
    need aperiodicity.
    """
    c = kernel_states.shape[0]
    if c == 1:
        return np.array([1.0])
    graph = csr_matrix(kernel_states > 0.0)
    n_comp, labels = connected_components(graph, directed=True, connection="strong")
    rows, cols = (kernel_states > 0.0).nonzero()
    leaving = labels[rows] != labels[cols]
    open_classes = set(labels[rows[leaving]].tolist())
    closed = [k for k in range(n_comp) if k not in open_classes]
    if len(closed) != 1:
        raise ReducibleChainError(
            f"{len(closed)} closed communicating classes; need exactly one"
        )
    m = np.vstack([kernel_states.T - np.eye(c), np.ones((1, c))])
    b = np.zeros(c + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(m, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def _sample_rows(cum_rows: np.ndarray, states, uniforms) -> np.ndarray:
    """Inverse-CDF draws, one per step, along a state path being built."""
    n_cols = cum_rows.shape[1]
    out = np.empty(len(uniforms), dtype=np.int64)
    for i, (s, u) in enumerate(zip(states, uniforms)):
        out[i] = min(int(np.searchsorted(cum_rows[s], u, side="right")), n_cols - 1)
    return out


class MarkovSource:
    """Finite-alphabet Markov source of small fixed order.

    Contexts are the last ``order`` symbols encoded base ``n_symbols``,
    oldest digit most significant; emitting s moves context c to
    (c * n_symbols + s) mod n_symbols**order. Order 0 is an i.i.d. source
    with a single context. When ``initial`` is omitted the source starts
    from its stationary context distribution, which makes sampled paths
    and sequence likelihoods those of the stationary process.
    """

    __slots__ = ("_n_symbols", "_order", "_transition", "_initial")

    def __init__(self, n_symbols: int, order: int, transition, initial=None):
        if n_symbols < 1:
            raise DomainError("alphabet needs at least one symbol")
        if order < 0:
            raise DomainError("order must be nonnegative")
        n_contexts = n_symbols ** order
        self._n_symbols = n_symbols
        self._order = order
        self._transition = _validated_kernel(
            transition, n_contexts, n_symbols, "transition"
        )
        if initial is None:
            self._initial = None
        else:
            d = as_distribution(initial)
            if len(d) != n_contexts:
                raise DimensionMismatchError(
                    f"initial must cover {n_contexts} contexts"
                )
            self._initial = d

    @property
    def n_symbols(self) -> int:
        return self._n_symbols

    @property
    def order(self) -> int:
        return self._order

    @property
    def n_contexts(self) -> int:
        return self._transition.shape[0]

    @property
    def transition(self) -> np.ndarray:
        return self._transition

    @property
    def initial(self) -> Distribution:
        if self._initial is None:
            self._initial = Distribution(self.stationary())
        return self._initial

    def _context_matrix(self) -> np.ndarray:
        """Context-to-context transition matrix implied by the kernel."""
        c, a = self._transition.shape
        mat = np.zeros((c, c))
        idx = np.arange(c)
        for s in range(a):
            nxt = (idx * self._n_symbols + s) % c
            np.add.at(mat, (idx, nxt), self._transition[:, s])
        return mat

    def stationary(self) -> np.ndarray:
        """Stationary distribution over contexts."""
        if self.n_contexts == 1:
            return np.array([1.0])
        return _stationary_of(self._context_matrix())

    def stationary_symbols(self) -> Distribution:
        """Single-step symbol distribution under the stationary law."""
        return Distribution(self.stationary() @ self._transition)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 1:
            raise DomainError("need at least one step")
        cum = np.cumsum(self._transition, axis=1)
        ctx = int(rng.choice(self.n_contexts, p=self.initial.probs))
        u = rng.random(n)
        out = np.empty(n, dtype=np.int64)
        c = self.n_contexts
        for i in range(n):
            s = min(
                int(np.searchsorted(cum[ctx], u[i], side="right")),
                self._n_symbols - 1,
            )
            out[i] = s
            ctx = (ctx * self._n_symbols + s) % c
        return out

    def sequence_log2_prob(self, sequence) -> float:
        """log2 probability of an observed path, context filtered exactly.

        The first ``order`` steps are scored by filtering the initial
        context distribution; after that the context is determined and
        transitions are gathered directly.
        """
        seq = np.asarray(sequence, dtype=np.int64)
        if seq.ndim != 1 or seq.size == 0:
            raise DomainError("sequence must be a nonempty 1-D array of symbols")
        if seq.min() < 0 or seq.max() >= self._n_symbols:
            raise DomainError("sequence contains out-of-alphabet symbols")
        a, c, k = self._n_symbols, self.n_contexts, self._order
        total = 0.0
        belief = self.initial.probs.copy()
        idx = np.arange(c)
        head = min(k, seq.size)
        for t in range(head):
            s = int(seq[t])
            weights = belief * self._transition[:, s]
            p = float(weights.sum())
            if p <= 0.0:
                raise SupportError(f"zero-probability symbol at position {t}")
            nxt = np.zeros(c)
            np.add.at(nxt, (idx * a + s) % c, weights)
            belief = nxt / p
            total += float(np.log2(p))
        if seq.size > head:
            ctxs = np.zeros(seq.size - head, dtype=np.int64)
            for j in range(1, k + 1):
                ctxs += seq[head - j : seq.size - j] * (a ** (j - 1))
            probs = self._transition[ctxs, seq[head:]]
            if np.any(probs == 0.0):
                t = head + int(np.argmax(probs == 0.0))
                raise SupportError(f"zero-probability symbol at position {t}")
            total += float(np.sum(np.log2(probs)))
        return total


class CoupledSource:
    """Jointly stationary pair process (action_n, message_n).

    One kernel emits the pair given bounded pair history: order 0 draws
    i.i.d. pairs, order 1 conditions on the previous pair. Pairs are
    indexed action * n_messages + message. The chain must have a unique
    closed class; paths always start from the stationary law, so every
    block distribution below is the stationary one.
    """

    __slots__ = (
        "_n_actions",
        "_n_messages",
        "_order",
        "_kernel",
        "_stationary",
    )

    def __init__(self, n_actions: int, n_messages: int, order: int, kernel):
        if n_actions < 1 or n_messages < 1:
            raise DomainError("both alphabets need at least one symbol")
        if order not in (0, 1):
            raise DomainError("pair history order must be 0 or 1")
        b = n_actions * n_messages
        n_states = b ** order
        self._n_actions = n_actions
        self._n_messages = n_messages
        self._order = order
        self._kernel = _validated_kernel(kernel, n_states, b, "kernel")
        if order == 0:
            self._stationary = np.array([1.0])
        else:
            self._stationary = _stationary_of(self._kernel)
        self._stationary.setflags(write=False)

    @property
    def n_actions(self) -> int:
        return self._n_actions

    @property
    def n_messages(self) -> int:
        return self._n_messages

    @property
    def n_pairs(self) -> int:
        return self._n_actions * self._n_messages

    @property
    def order(self) -> int:
        return self._order

    @property
    def kernel(self) -> np.ndarray:
        return self._kernel

    def stationary(self) -> np.ndarray:
        """Stationary distribution over kernel states."""
        return self._stationary

    def pair_marginal(self) -> JointDistribution:
        """Single-step stationary joint of (action, message)."""
        table = (self._stationary @ self._kernel).reshape(
            self._n_actions, self._n_messages
        )
        return JointDistribution(table)

    def _pair_block(self, n: int) -> np.ndarray:
        """Joint over pair paths of length n, flat vector of size n_pairs**n."""
        if n < 1:
            raise DomainError("block length must be positive")
        b = self.n_pairs
        if b ** n > MAX_TABLE_ENTRIES:
            raise HorizonTooLargeError(
                f"{b}^{n} block entries exceed the {MAX_TABLE_ENTRIES} cap"
            )
        joint = self._stationary @ self._kernel if self._order == 1 else self._kernel[0]
        joint = joint.copy()
        for _ in range(1, n):
            if self._order == 0:
                joint = (joint[:, None] * self._kernel[0][None, :]).reshape(-1)
            else:
                lasts = np.arange(joint.size) % b
                joint = (joint[:, None] * self._kernel[lasts]).reshape(-1)
        return joint

    def block_joint(self, n: int) -> JointDistribution:
        """Exact stationary joint of (action block, message block), length n.

        Rows index action paths base n_actions, columns message paths base
        n_messages, oldest step most significant on both sides.
        """
        flat = self._pair_block(n)
        a, m = self._n_actions, self._n_messages
        grid = flat.reshape([a, m] * n)
        perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        table = grid.transpose(perm).reshape(a ** n, m ** n)
        return JointDistribution(table)

    def sample(self, n: int, rng: np.random.Generator):
        """One stationary path; returns (actions, messages) index arrays."""
        if n < 1:
            raise DomainError("need at least one step")
        b = self.n_pairs
        cum = np.cumsum(self._kernel, axis=1)
        u = rng.random(n)
        pairs = np.empty(n, dtype=np.int64)
        if self._order == 0:
            pairs = np.minimum(
                np.searchsorted(cum[0], u, side="right"), b - 1
            ).astype(np.int64)
        else:
            state = int(rng.choice(b, p=self._stationary))
            for i in range(n):
                p = min(int(np.searchsorted(cum[state], u[i], side="right")), b - 1)
                pairs[i] = p
                state = p
        return pairs // self._n_messages, pairs % self._n_messages

    def pair_log2_prob(self, actions, messages) -> float:
        """Exact log2 likelihood of a pair path under the stationary law."""
        a_seq, m_seq = self._check_paths(actions, messages)
        pairs = a_seq * self._n_messages + m_seq
        if self._order == 0:
            probs = self._kernel[0][pairs]
            if np.any(probs == 0.0):
                raise ModelInconsistencyError("pair path impossible under the model")
            return float(np.sum(np.log2(probs)))
        first = float((self._stationary @ self._kernel)[pairs[0]])
        rest = self._kernel[pairs[:-1], pairs[1:]]
        if first <= 0.0 or np.any(rest == 0.0):
            raise ModelInconsistencyError("pair path impossible under the model")
        return float(np.log2(first) + np.sum(np.log2(rest)))

    def action_log2_prob(self, actions) -> float:
        """Exact log2 likelihood of the action path alone (filtered)."""
        return self._marginal_log2_prob(np.asarray(actions, dtype=np.int64), axis=0)

    def message_log2_prob(self, messages) -> float:
        """Exact log2 likelihood of the message path alone (filtered)."""
        return self._marginal_log2_prob(np.asarray(messages, dtype=np.int64), axis=1)

    def _check_paths(self, actions, messages):
        a_seq = np.asarray(actions, dtype=np.int64)
        m_seq = np.asarray(messages, dtype=np.int64)
        if a_seq.shape != m_seq.shape or a_seq.ndim != 1 or a_seq.size == 0:
            raise DomainError("paths must be equal-length nonempty 1-D arrays")
        if a_seq.min() < 0 or a_seq.max() >= self._n_actions:
            raise DomainError("action path leaves the alphabet")
        if m_seq.min() < 0 or m_seq.max() >= self._n_messages:
            raise DomainError("message path leaves the alphabet")
        return a_seq, m_seq

    def _marginal_log2_prob(self, seq: np.ndarray, axis: int) -> float:
        if seq.ndim != 1 or seq.size == 0:
            raise DomainError("path must be a nonempty 1-D array")
        size = self._n_actions if axis == 0 else self._n_messages
        if seq.min() < 0 or seq.max() >= size:
            raise DomainError("path leaves the alphabet")
        b = self.n_pairs
        pair_ids = np.arange(b)
        side = pair_ids // self._n_messages if axis == 0 else pair_ids % self._n_messages
        if self._order == 0:
            # i.i.d. pairs: the marginal is i.i.d. too, gather directly
            step = self._kernel[0]
            marg = np.array([step[side == v].sum() for v in range(size)])
            probs = marg[seq]
            if np.any(probs == 0.0):
                raise ModelInconsistencyError("path impossible under the marginal")
            return float(np.sum(np.log2(probs)))
        masks = [side == v for v in range(size)]
        belief = self._stationary.copy()
        total = 0.0
        for t in range(seq.size):
            weights = belief @ self._kernel
            weights = np.where(masks[seq[t]], weights, 0.0)
            p = float(weights.sum())
            if p <= 0.0:
                raise ModelInconsistencyError(
                    f"path impossible under the marginal at position {t}"
                )
            belief = weights / p
            total += float(np.log2(p))
        return total


@dataclass(frozen=True)
class RateEstimate:
    """Exact finite-n rate sequences and the implied limit estimate.

    per_n holds (n, block average I(a-block; m-block)/n); increments holds
    (n, I(a-block_n; m_n | m-block_{n-1})). Both are in bits per symbol.
    """

    per_n: tuple[tuple[int, float], ...]
    increments: tuple[tuple[int, float], ...]
    limit_estimate: float
    diagnostics: Mapping[str, float | bool]

    def __post_init__(self):
        ns = [n for n, _ in self.per_n]
        vals = [v for _, v in self.per_n] + [v for _, v in self.increments]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("per_n indices must be strictly increasing")
        if not all(np.isfinite(vals)):
            raise DomainError("rate values must be finite")
        object.__setattr__(self, "diagnostics", MappingProxyType(dict(self.diagnostics)))


@dataclass(frozen=True)
class MonotoneReport:
    """Sequence I(a_n; fixed m-block | a_1..a_{n-1}) and its monotonicity."""

    sequence: tuple[float, ...]
    nonincreasing: bool
    max_violation: float


def exact_entropy_rate(src: MarkovSource) -> float:
    """Entropy rate in bits/symbol: sum over contexts of pi(c) H(row c)."""
    pi = src.stationary()
    total = 0.0
    for weight, row in zip(pi, src.transition):
        if weight > 0.0:
            total += float(weight) * entropy(Distribution(row))
    return total


def _block_mutual_information(cs: CoupledSource, flat: np.ndarray, n: int,
                              drop_last_message: bool = False) -> float:
    """I(action block; message block) from a flat pair-path table."""
    a, m = cs.n_actions, cs.n_messages
    grid = flat.reshape([a, m] * n)
    if drop_last_message:
        grid = grid.sum(axis=2 * n - 1)
        if n == 1:
            return 0.0
        perm = list(range(0, 2 * n - 1, 2)) + list(range(1, 2 * n - 1, 2))
        table = grid.transpose(perm).reshape(a ** n, m ** (n - 1))
    else:
        perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        table = grid.transpose(perm).reshape(a ** n, m ** n)
    return mutual_information(JointDistribution(table))


def pragmatic_rate_sequence(cs: CoupledSource, horizon: int) -> RateEstimate:
    """Exact block averages and conditional increments up to the horizon.

    Every quantity comes from the unrolled stationary joint table, so the
    values are exact up to float rounding. The limit estimate is the last
    conditional increment: increments reach the limit faster than their
    Cesaro averages. Diagnostics report the worst chain-rule residual
    (running increment average vs block average) and the final gap
    between the two sequences.
    """
    if horizon < 1:
        raise DomainError("horizon must be positive")
    if cs.n_pairs ** horizon > MAX_TABLE_ENTRIES:
        raise HorizonTooLargeError(
            f"{cs.n_pairs}^{horizon} block entries exceed the "
            f"{MAX_TABLE_ENTRIES} cap"
        )
    blocks: list[tuple[int, float]] = []
    incs: list[tuple[int, float]] = []
    cesaro_err = 0.0
    running = 0.0
    for n in range(1, horizon + 1):
        flat = cs._pair_block(n)
        full = _block_mutual_information(cs, flat, n)
        partial = _block_mutual_information(cs, flat, n, drop_last_message=True)
        inc = full - partial
        blocks.append((n, full / n))
        incs.append((n, inc))
        running += inc
        cesaro_err = max(cesaro_err, abs(running / n - full / n))
    diagnostics = {
        "cesaro_max_abs_err": cesaro_err,
        "block_increment_gap": abs(blocks[-1][1] - incs[-1][1]),
        "all_nonnegative": bool(
            all(v >= -1e-12 for _, v in blocks) and all(v >= -1e-12 for _, v in incs)
        ),
    }
    return RateEstimate(
        per_n=tuple(blocks),
        increments=tuple(incs),
        limit_estimate=incs[-1][1],
        diagnostics=diagnostics,
    )


def monotone_increment_check(
    cs: CoupledSource, fixed_message_prefix_length: int, horizon: int
) -> MonotoneReport:
    """Sequence s(n) = I(a_n; m_1..m_L | a_1..a_{n-1}) for a fixed m-block.

    The action chain rule splits I(a-block; m-block_L) into these terms;
    they are checked to be non-increasing in n (tolerance 1e-9). The limit
    of s(n) is the rate contribution, which need not be zero.
    """
    lfix = fixed_message_prefix_length
    if lfix < 1 or horizon < 1:
        raise DomainError("prefix length and horizon must be positive")
    n_steps = max(lfix, horizon)
    if cs.n_pairs ** n_steps > MAX_TABLE_ENTRIES:
        raise HorizonTooLargeError(
            f"{cs.n_pairs}^{n_steps} block entries exceed the "
            f"{MAX_TABLE_ENTRIES} cap"
        )
    a, m = cs.n_actions, cs.n_messages
    flat = cs._pair_block(n_steps)
    grid = flat.reshape([a, m] * n_steps)
    # keep action axes 0..horizon-1 and the first L message axes
    keep_actions = [2 * i for i in range(horizon)]
    keep_messages = [2 * i + 1 for i in range(lfix)]
    drop = tuple(
        ax for ax in range(2 * n_steps) if ax not in keep_actions + keep_messages
    )
    if drop:
        grid = grid.sum(axis=drop)
    # grid axes are now interleaved in original order; positions of kept axes
    kept = sorted(keep_actions + keep_messages)
    pos = {ax: i for i, ax in enumerate(kept)}
    seq = []
    for n in range(1, horizon + 1):
        axes_needed = [2 * i for i in range(n)] + keep_messages
        reduced = grid
        drop2 = tuple(
            pos[ax] for ax in kept if ax not in axes_needed
        )
        if drop2:
            reduced = reduced.sum(axis=drop2)
        remaining = [ax for ax in kept if ax in axes_needed]
        rpos = {ax: i for i, ax in enumerate(remaining)}
        x_axis = rpos[2 * (n - 1)]
        y_axes = [rpos[ax] for ax in keep_messages]
        z_axes = [rpos[2 * i] for i in range(n - 1)]
        perm = [x_axis] + y_axes + z_axes
        t = reduced.transpose(perm).reshape(a, m ** lfix, a ** (n - 1))
        seq.append(conditional_mutual_information(t))
    diffs = [seq[i + 1] - seq[i] for i in range(len(seq) - 1)]
    max_violation = max([0.0] + [d for d in diffs if d > 0.0])
    return MonotoneReport(
        sequence=tuple(seq),
        nonincreasing=bool(max_violation <= 1e-9),
        max_violation=max_violation,
    )


def ergodic_sample_rate(cs: CoupledSource, n: int, seed) -> float:
    """Single-path mutual-information rate in bits/symbol.

    Simulates one stationary path of length n and returns
    (1/n) log2 [ P(a-path, m-path) / (P(a-path) P(m-path)) ] with all three
    likelihoods computed exactly under the model. Almost surely converges
    to the limit of pragmatic_rate_sequence as n grows.
    """
    if n < 1:
        raise DomainError("need at least one step")
    rng = np.random.default_rng(seed)
    actions, messages = cs.sample(n, rng)
    joint = cs.pair_log2_prob(actions, messages)
    marg_a = cs.action_log2_prob(actions)
    marg_m = cs.message_log2_prob(messages)
    return (joint - marg_a - marg_m) / n


def independent_coupling(p_action, p_message) -> CoupledSource:
    """I.i.d. pairs with independent components."""
    pa = as_distribution(p_action)
    pm = as_distribution(p_message)
    kernel = np.outer(pa.probs, pm.probs).reshape(1, -1)
    return CoupledSource(len(pa), len(pm), 0, kernel)


def channel_coupling(p_action, channel) -> CoupledSource:
    """I.i.d. actions pushed through a memoryless channel each step."""
    pa = as_distribution(p_action)
    chan = np.asarray(channel, dtype=np.float64)
    if chan.ndim != 2 or chan.shape[0] != len(pa):
        raise DimensionMismatchError("channel must have one row per action")
    rows = np.stack(
        [_frozen_probs(chan[i], what=f"channel row {i}") for i in range(chan.shape[0])]
    )
    kernel = (pa.probs[:, None] * rows).reshape(1, -1)
    return CoupledSource(len(pa), chan.shape[1], 0, kernel)


def identity_coupling(p_action) -> CoupledSource:
    """Messages copy actions exactly."""
    pa = as_distribution(p_action)
    return channel_coupling(pa, np.eye(len(pa)))


def markov_modulated_coupling(transition, channel) -> CoupledSource:
    """Order-1 Markov actions observed through a memoryless channel.

    The message is a noisy reading of the current action; it never feeds
    back into the action dynamics, so the action marginal stays Markov
    with the given transition matrix.
    """
    t = np.asarray(transition, dtype=np.float64)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise DimensionMismatchError("transition must be square")
    a = t.shape[0]
    chan = np.asarray(channel, dtype=np.float64)
    if chan.ndim != 2 or chan.shape[0] != a:
        raise DimensionMismatchError("channel must have one row per action")
    m = chan.shape[1]
    t = np.stack([_frozen_probs(t[i], what=f"transition row {i}") for i in range(a)])
    chan = np.stack([_frozen_probs(chan[i], what=f"channel row {i}") for i in range(a)])
    b = a * m
    kernel = np.zeros((b, b))
    for prev_a in range(a):
        for prev_m in range(m):
            state = prev_a * m + prev_m
            kernel[state] = (t[prev_a][:, None] * chan).reshape(-1)
    return CoupledSource(a, m, 1, kernel)
