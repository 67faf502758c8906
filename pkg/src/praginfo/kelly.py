"""Horse-race betting engine and the log-optimal portfolio bound.

The race side is exact: growth decomposes as D(p||q) - D(p||b) - log2 T,
side information raises the optimal doubling rate by exactly I(winner;
message), and both identities are asserted at 1e-9 whenever a rate is
produced. The portfolio side is variational: the log-optimal allocation is
found by the multiplicative update b <- b * E[X / (b.X)], a fixed-point
iteration whose objective is concave, so the cap-and-tolerance stopping rule
returns the global optimum. The brute-force simplex grid lives in the tests
as the independent oracle, never here.

Wealth relatives are end-of-period price over start-of-period price, so
b.X is the factor by which one period multiplies wealth.

Zero bet on a realized winner is ruin. Simulations record the -inf growth
increment, stop, and flag the path instead of raising: ensembles need to
count ruin events, not die on the first one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateModelError,
    DimensionMismatchError,
    DomainError,
)
from .coding import SideMessageEnsemble
from .info_core import (
    Distribution,
    JointDistribution,
    as_distribution,
    mutual_information,
    relative_entropy,
)

MAX_SOLVER_ITERATIONS = 10 ** 4
SOLVER_OBJECTIVE_TOL = 1e-10
FIRST_ORDER_TOL = 1e-7

__all__ = [
    "RaceSpec",
    "SideChannel",
    "Allocation",
    "OutcomeModel",
    "WealthPath",
    "SideInfoReport",
    "BoundCheckReport",
    "make_race",
    "race_growth",
    "optimal_policy",
    "optimal_doubling_rate",
    "side_info_doubling_rate",
    "simulate_wealth",
    "log_optimal_allocation",
    "expected_log_growth",
    "side_info_bound_check",
    "as_allocation",
]


class Allocation(Distribution):
    """Fractions of wealth on each asset: nonnegative, summing to one.

    Simplex membership is exactly the no-short-sales constraint, so this
    is a Distribution by another name.
    """


def as_allocation(b) -> Allocation:
    if isinstance(b, Allocation):
        return b
    if isinstance(b, Distribution):
        return Allocation(b.probs)
    return Allocation(b)


@dataclass(frozen=True)
class RaceSpec:
    """Track payoffs with their implied take and track probabilities.

    take = sum_k 1/R_k; track_probs q_i = 1/(R_i * take). take = 1 is a
    fair race; take > 1 means the track keeps a cut.
    """

    payoffs: tuple[float, ...]
    take: float
    track_probs: Distribution

    @property
    def n_horses(self) -> int:
        return len(self.payoffs)


def make_race(payoffs) -> RaceSpec:
    r = np.asarray(payoffs, dtype=np.float64)
    if r.ndim != 1 or r.size == 0:
        raise DomainError("payoffs must be a nonempty 1-D list")
    if not np.all(np.isfinite(r)) or np.any(r <= 0.0):
        raise DomainError("every payoff must be positive and finite")
    inv = 1.0 / r
    take = float(inv.sum())
    q = Distribution(inv / take)
    return RaceSpec(payoffs=tuple(float(x) for x in r), take=take, track_probs=q)


class SideChannel(SideMessageEnsemble):
    """Message prior plus a winner distribution for each message.

    Structurally a side-message ensemble; here the conditionals are the
    bettor's beliefs p^(m) over race winners after reading message m.
    """

    @property
    def n_horses(self) -> int:
        return self.n_actions


def race_growth(p, b, race: RaceSpec) -> float:
    """Expected log2 wealth growth per race: sum_i p_i log2(b_i R_i).

    Returns -inf when the bettor puts nothing on a horse that can win.
    Otherwise the value is checked against the decomposition
    D(p||q) - D(p||b) - log2(take) before being returned.
    """
    dp = as_distribution(p)
    db = as_allocation(b)
    if len(dp) != race.n_horses or len(db) != race.n_horses:
        raise DimensionMismatchError("p, b and the race must agree on horses")
    mask = dp.probs > 0.0
    if np.any(db.probs[mask] == 0.0):
        return -math.inf
    r = np.asarray(race.payoffs)
    direct = float(np.sum(dp.probs[mask] * np.log2(db.probs[mask] * r[mask])))
    decomposed = (
        relative_entropy(dp, race.track_probs)
        - relative_entropy(dp, db)
        - math.log2(race.take)
    )
    assert abs(direct - decomposed) <= 1e-9
    return direct


def optimal_policy(p) -> Allocation:
    """Proportional betting: put fraction p_i on horse i.

    Any other allocation b loses exactly D(p||b) bits per race relative
    to this one, independently of the payoffs.
    """
    return as_allocation(as_distribution(p).probs)


def optimal_doubling_rate(winner_process, race: RaceSpec, n_races: int | None = None) -> float:
    """Best achievable (log2 S_N)/N over N races, in bits per race.

    winner_process is either one winner distribution used every race or a
    sequence of per-race distributions. The value is
    (1/N) sum_n D(p(n)||q) - log2(take).
    """
    single = isinstance(winner_process, Distribution) or (
        isinstance(winner_process, np.ndarray) and winner_process.ndim == 1
    ) or (
        isinstance(winner_process, Sequence)
        and len(winner_process) > 0
        and np.isscalar(winner_process[0])
    )
    if single:
        if n_races is None:
            n_races = 1
        seq = [as_distribution(winner_process)] * n_races
    else:
        seq = [as_distribution(p) for p in winner_process]
        if not seq:
            raise DomainError("winner process must contain at least one race")
        if n_races is None:
            n_races = len(seq)
        if n_races != len(seq):
            raise DimensionMismatchError("n_races disagrees with the process length")
    if n_races < 1:
        raise DomainError("need at least one race")
    total = 0.0
    for dp in seq:
        if len(dp) != race.n_horses:
            raise DimensionMismatchError("process and race must agree on horses")
        total += relative_entropy(dp, race.track_probs)
    return total / n_races - math.log2(race.take)


@dataclass(frozen=True)
class SideInfoReport:
    """Optimal doubling rate with side messages, split into its three parts.

    total = pragmatic_term + base_term + minus_logT, where pragmatic_term
    is I(winner; message), base_term is D(marginal||q) and minus_logT is
    -log2(take). The identity is asserted at 1e-9 before the report is
    built.
    """

    total: float
    pragmatic_term: float
    base_term: float
    minus_logT: float


def side_info_doubling_rate(ch: SideChannel, race: RaceSpec, n_races: int = 1) -> SideInfoReport:
    """Doubling rate of the bettor who bets p^(m) on reading message m.

    The rate is per race and the channel is memoryless, so n_races only
    sanity-checks the call. The gain over the no-message optimum is
    exactly the mutual information between winner and message.
    """
    if n_races < 1:
        raise DomainError("need at least one race")
    if ch.n_horses != race.n_horses:
        raise DimensionMismatchError("channel and race must agree on horses")
    total = 0.0
    for phi, cond in zip(ch.prior.probs, ch.conditionals):
        if phi > 0.0:
            total += float(phi) * relative_entropy(cond, race.track_probs)
    total -= math.log2(race.take)
    info = mutual_information(ch.to_joint())
    base = relative_entropy(ch.implied_marginal(), race.track_probs)
    minus_logt = -math.log2(race.take)
    assert abs(total - (info + base + minus_logt)) <= 1e-9
    return SideInfoReport(
        total=total, pragmatic_term=info, base_term=base, minus_logT=minus_logt
    )


@dataclass(frozen=True)
class WealthPath:
    """Per-race log2 growth increments and the running rate (log2 S_n)/n.

    A ruined path ends at the race where the bettor had nothing on the
    winner; its last increment and rate are -inf and ruined is set.
    """

    increments: np.ndarray
    cumulative: np.ndarray
    seed: object
    ruined: bool

    def __post_init__(self):
        self.increments.setflags(write=False)
        self.cumulative.setflags(write=False)
        if self.increments.size == 0:
            raise DomainError("a wealth path needs at least one race")
        final = self.cumulative[-1]
        mean = float(np.mean(self.increments))
        if math.isfinite(final) or math.isfinite(mean):
            if not abs(final - mean) <= 1e-9:
                raise DomainError("cumulative rate disagrees with increment mean")

    @property
    def n_races(self) -> int:
        return int(self.increments.size)

    @property
    def terminal_rate(self) -> float:
        return float(self.cumulative[-1])


def _policy_matrix(model, policy, n_horses: int, n_messages: int) -> np.ndarray:
    """Normalize the policy argument to one allocation row per message."""
    if policy is None:
        if isinstance(model, SideChannel):
            rows = [optimal_policy(c).probs for c in model.conditionals]
        else:
            rows = [optimal_policy(model).probs]
        return np.stack(rows)
    single = isinstance(policy, Distribution) or (
        isinstance(policy, np.ndarray) and policy.ndim == 1
    ) or (
        isinstance(policy, Sequence)
        and len(policy) > 0
        and np.isscalar(policy[0])
    )
    if single:
        row = as_allocation(policy).probs
        return np.tile(row, (n_messages, 1))
    rows = [as_allocation(row).probs for row in policy]
    if len(rows) != n_messages:
        raise DimensionMismatchError("need one allocation per message")
    return np.stack(rows)


def simulate_wealth(model, race: RaceSpec, n_races: int, seed, policy=None) -> WealthPath:
    """Monte Carlo wealth path for a betting policy.

    model is either a winner distribution or a SideChannel; with a channel
    the message is drawn first and the winner from its conditional. policy
    is None for proportional betting on the model's beliefs, a single
    allocation, or one allocation per message. Growth increments are
    log2(b_winner * R_winner); betting zero on a realized winner ends the
    path with a -inf increment and the ruined flag.
    """
    if n_races < 1:
        raise DomainError("need at least one race")
    rng = np.random.default_rng(seed)
    if isinstance(model, SideChannel):
        if model.n_horses != race.n_horses:
            raise DimensionMismatchError("channel and race must agree on horses")
        n_messages = model.n_messages
        bets = _policy_matrix(model, policy, race.n_horses, n_messages)
        messages = rng.choice(n_messages, size=n_races, p=model.prior.probs)
        winners = np.empty(n_races, dtype=np.int64)
        for m in range(n_messages):
            idx = np.nonzero(messages == m)[0]
            if idx.size:
                winners[idx] = rng.choice(
                    race.n_horses, size=idx.size, p=model.conditionals[m].probs
                )
        bet_on_winner = bets[messages, winners]
    else:
        dp = as_distribution(model)
        if len(dp) != race.n_horses:
            raise DimensionMismatchError("model and race must agree on horses")
        bets = _policy_matrix(dp, policy, race.n_horses, 1)
        winners = rng.choice(race.n_horses, size=n_races, p=dp.probs)
        bet_on_winner = bets[0, winners]

    payoffs = np.asarray(race.payoffs)[winners]
    with np.errstate(divide="ignore"):
        increments = np.log2(bet_on_winner * payoffs)
    ruined = bool(np.any(np.isneginf(increments)))
    if ruined:
        stop = int(np.argmax(np.isneginf(increments))) + 1
        increments = increments[:stop]
    cumulative = np.cumsum(increments) / np.arange(1, increments.size + 1)
    return WealthPath(
        increments=increments, cumulative=cumulative, seed=seed, ruined=ruined
    )


class OutcomeModel:
    """Finite-outcome market: wealth-relative vectors with probabilities.

    outcomes is a (n_outcomes, n_assets) array of nonnegative wealth
    relatives. Either pass probs (no side information) or a message prior
    together with one row of conditional outcome probabilities per
    message. Outcome rows are treated as distinct labels even if two rows
    hold equal vectors.
    """

    __slots__ = ("_outcomes", "_prior", "_cond")

    def __init__(self, outcomes, probs=None, message_prior=None, conditional_probs=None):
        arr = np.asarray(outcomes, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise DomainError("outcomes must be a nonempty 2-D array")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise DomainError("wealth relatives must be finite and nonnegative")
        arr = arr.copy()
        arr.setflags(write=False)
        self._outcomes = arr
        k = arr.shape[0]
        if probs is not None:
            if message_prior is not None or conditional_probs is not None:
                raise DomainError("pass either probs or a message model, not both")
            d = as_distribution(probs)
            if len(d) != k:
                raise DimensionMismatchError("one probability per outcome row")
            self._prior = Distribution([1.0])
            self._cond = d.probs.reshape(1, k)
        else:
            if message_prior is None or conditional_probs is None:
                raise DomainError("need probs, or message_prior with conditional_probs")
            prior = as_distribution(message_prior)
            cond = np.asarray(conditional_probs, dtype=np.float64)
            if cond.shape != (len(prior), k):
                raise DimensionMismatchError(
                    "conditional_probs must be (n_messages, n_outcomes)"
                )
            rows = [as_distribution(cond[m]).probs for m in range(len(prior))]
            self._prior = prior
            self._cond = np.stack(rows)
        self._cond.setflags(write=False)

    @property
    def outcomes(self) -> np.ndarray:
        return self._outcomes

    @property
    def n_outcomes(self) -> int:
        return self._outcomes.shape[0]

    @property
    def n_assets(self) -> int:
        return self._outcomes.shape[1]

    @property
    def n_messages(self) -> int:
        return len(self._prior)

    @property
    def has_messages(self) -> bool:
        return self.n_messages > 1

    @property
    def message_prior(self) -> Distribution:
        return self._prior

    def outcome_probs(self) -> Distribution:
        """Marginal outcome distribution, message prior integrated out."""
        return Distribution(self._prior.probs @ self._cond)

    def conditioned_on(self, message: int) -> "OutcomeModel":
        """Same outcomes under the given message's conditional law."""
        if not 0 <= message < self.n_messages:
            raise DomainError("message index out of range")
        return OutcomeModel(self._outcomes, probs=self._cond[message])

    def joint(self) -> JointDistribution:
        """Joint of (outcome row, message), outcomes as rows."""
        return JointDistribution((self._prior.probs[:, None] * self._cond).T)

    def pragmatic_info(self) -> float:
        """I(outcome; message) of the finite joint, in bits."""
        return mutual_information(self.joint())


def expected_log_growth(b, model: OutcomeModel) -> float:
    """E[log2(b.X)] under the model's marginal law; -inf on a zero b.X."""
    alloc = as_allocation(b)
    if len(alloc) != model.n_assets:
        raise DimensionMismatchError("allocation and model must agree on assets")
    probs = model.outcome_probs().probs
    growth = model.outcomes @ alloc.probs
    mask = probs > 0.0
    if np.any(growth[mask] == 0.0):
        return -math.inf
    return float(np.sum(probs[mask] * np.log2(growth[mask])))


def _check_not_degenerate(outcomes: np.ndarray, probs: np.ndarray):
    dead = (outcomes.max(axis=1) == 0.0) & (probs > 0.0)
    if np.any(dead):
        raise DegenerateModelError(
            "an all-zero outcome with positive probability forces E[log growth] "
            "to -inf for every allocation"
        )


def log_optimal_allocation(model: OutcomeModel) -> Allocation:
    """Allocation maximizing E[log2(b.X)] over the simplex.

    Iterates the multiplicative update b <- b * E[X / (b.X)] from the
    uniform allocation. Each step stays on the simplex and never decreases
    the concave objective; iteration stops when the objective gains less
    than 1e-10 or after 10^4 steps. Uses the marginal law when the model
    carries messages.
    """
    probs = model.outcome_probs().probs
    x = model.outcomes
    _check_not_degenerate(x, probs)
    mask = probs > 0.0
    px = probs[mask, None] * x[mask]
    xs = x[mask]
    b = np.full(model.n_assets, 1.0 / model.n_assets)
    prev_obj = -math.inf
    for _ in range(MAX_SOLVER_ITERATIONS):
        growth = xs @ b
        obj = float(np.sum(probs[mask] * np.log2(growth)))
        # factor_j is E[X_j / (b.X)]: the update multiplier and, at the
        # optimum, the first-order quantity that must not exceed 1
        factor = np.sum(px / growth[:, None], axis=0)
        if obj - prev_obj < SOLVER_OBJECTIVE_TOL and factor.max() <= 1.0 + FIRST_ORDER_TOL:
            break
        prev_obj = obj
        b = b * factor
        b = b / b.sum()
    return Allocation(b)


@dataclass(frozen=True)
class BoundCheckReport:
    """Side-information growth gain against its information bound.

    delta_w = W_conditional - W_unconditional in bits per period; info is
    I(outcome; message); holds records 0 <= delta_w <= info + 1e-6.
    first_order_max is the largest E[a.X / c.X] seen over randomized test
    allocations a for the unconditional optimum c (at most 1 + 1e-6 when
    the solver has converged).
    """

    delta_w: float
    info: float
    holds: bool
    w_conditional: float
    w_unconditional: float
    first_order_max: float


def side_info_bound_check(joint: OutcomeModel, seed) -> BoundCheckReport:
    """Gain of message-conditional log-optimal growth, checked against I(X;mu).

    The unconditional optimum c* is always feasible under every message,
    so each per-message value is floored at the growth of c* under that
    message; delta_w is then nonnegative by construction rather than by
    hoping two optimizer runs land in the right order.
    """
    rng = np.random.default_rng(seed)
    c_star = log_optimal_allocation(OutcomeModel(joint.outcomes,
                                                 probs=joint.outcome_probs().probs))
    w_uncond = expected_log_growth(c_star, joint)
    w_cond = 0.0
    for m in range(joint.n_messages):
        phi = float(joint.message_prior.probs[m])
        if phi == 0.0:
            continue
        sub = joint.conditioned_on(m)
        b_m = log_optimal_allocation(sub)
        w_m = max(expected_log_growth(b_m, sub), expected_log_growth(c_star, sub))
        w_cond += phi * w_m

    growth_c = joint.outcomes @ c_star.probs
    probs = joint.outcome_probs().probs
    fo_max = 0.0
    for _ in range(100):
        a = rng.dirichlet(np.ones(joint.n_assets))
        ratio = float(np.sum(probs * ((joint.outcomes @ a) / growth_c)))
        fo_max = max(fo_max, ratio)

    info = joint.pragmatic_info()
    delta = w_cond - w_uncond
    holds = bool(-1e-12 <= delta <= info + 1e-6)
    return BoundCheckReport(
        delta_w=delta,
        info=info,
        holds=holds,
        w_conditional=w_cond,
        w_unconditional=w_uncond,
        first_order_max=fo_max,
    )
