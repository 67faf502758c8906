"""GARCH(1,1) returns and the pragmatic-information inefficiency measure.

The volatility state is the conditional one-step standard deviation: sig[k]
is the std of return k given everything observable before it, with

    sig[0] = sigma0,   sig[k]^2 = alpha*sig[k-1]^2 + beta*sigma0^2
                                  + gamma*R[k-1]^2.

The weights are constrained to alpha + beta + gamma = 1, which pins the
unconditional variance at sigma0^2. Knowing the tradable past is then worth

    i_k = -1/2 log2(sig[k]^2 / sigma0^2)

bits about return k: the entropy difference between the unconditional
Gaussian and the conditional one. Per-step values may be negative (a spike
raises conditional entropy above the unconditional level); the mean over a
stationary stretch cannot be, and that is checked at sampling precision
rather than clamped away step by step.

Filtering and likelihood evaluation share one recursion, so parameters
recovered by fit_garch mean the same thing the simulator means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from .errors import (
    DegenerateModelError,
    DomainError,
    FitConvergenceError,
    ModelInconsistencyError,
)

WEIGHT_SUM_TOL = 1e-9
BURN_IN = 1000

__all__ = [
    "GarchParams",
    "ReturnSeries",
    "EfficiencyReport",
    "garch_simulate",
    "instant_pragmatic_info",
    "expected_inefficiency",
    "efficiency_from_series",
    "fit_garch",
]


@dataclass(frozen=True)
class GarchParams:
    """GARCH(1,1) weights with the unit-sum constraint, plus scale and drift.

    log_likelihood is metadata set by fit_garch; it does not participate
    in equality-of-model semantics and defaults to None for hand-built
    parameter sets.
    """

    alpha: float
    beta: float
    gamma: float
    sigma0: float
    r0: float = 0.0
    log_likelihood: float | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and nonnegative")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError("alpha + beta + gamma must equal 1 within 1e-9")
        if not (np.isfinite(self.sigma0) and self.sigma0 > 0.0):
            raise DomainError("sigma0 must be positive and finite")
        if not np.isfinite(self.r0):
            raise DomainError("r0 must be finite")


@dataclass(frozen=True)
class ReturnSeries:
    """Returns with their conditional volatilities and the price path.

    volatilities has one extra entry: volatilities[k] is the conditional
    std of returns[k], and the final entry is the one-step-ahead std
    implied after the last observed return. prices[k] compounds
    (1 + returns[k]) from a starting price of 1.
    """

    returns: np.ndarray
    volatilities: np.ndarray
    prices: np.ndarray
    seed: object = None

    def __post_init__(self):
        r = np.asarray(self.returns, dtype=np.float64)
        v = np.asarray(self.volatilities, dtype=np.float64)
        p = np.asarray(self.prices, dtype=np.float64)
        if r.ndim != 1 or r.size == 0:
            raise DomainError("returns must be a nonempty 1-D array")
        if v.shape != (r.size + 1,):
            raise DomainError("need one volatility per return plus the look-ahead")
        if p.shape != r.shape:
            raise DomainError("need one price per return")
        if not np.all(np.isfinite(r)):
            raise DomainError("returns must be finite")
        if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
            raise DomainError("volatilities must be positive and finite")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise DomainError("prices must be positive and finite")
        for arr in (r, v, p):
            arr.setflags(write=False)
        object.__setattr__(self, "returns", r)
        object.__setattr__(self, "volatilities", v)
        object.__setattr__(self, "prices", p)

    @property
    def n_steps(self) -> int:
        return int(self.returns.size)


@dataclass(frozen=True)
class EfficiencyReport:
    """Per-step pragmatic information of the tradable past, with summary.

    alpha_term and gamma_term are counterfactual single-channel means:
    the average of -1/2 log2(1 + A) (resp. 1 + G) where A and G are the
    volatility-memory and return-shock contributions to the log argument.
    """

    per_step: np.ndarray
    mean_bits: float
    stderr_bits: float
    frac_positive: float
    alpha_term: float
    gamma_term: float

    def __post_init__(self):
        arr = np.asarray(self.per_step, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("per_step must be a nonempty 1-D array")
        arr.setflags(write=False)
        object.__setattr__(self, "per_step", arr)
        if abs(self.mean_bits - float(np.mean(arr))) > 1e-12:
            raise DomainError("mean_bits disagrees with per_step")
        if self.stderr_bits < 0.0:
            raise DomainError("stderr_bits must be nonnegative")

    @property
    def n_steps(self) -> int:
        return int(self.per_step.size)


def garch_simulate(params: GarchParams, n: int, seed) -> ReturnSeries:
    """Simulate n returns with standard normal innovations.

    R[k] = r0 + sig[k] B[k] with sig updated by the weight recursion from
    sig[0] = sigma0; prices compound from 1. Deterministic per seed. A
    return at or below -100% (price would stop being positive) raises;
    at per-period scales sigma0 << 1 this is unreachable.
    """
    if n < 1:
        raise DomainError("need at least one step")
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(n)
    a, be, g = params.alpha, params.beta, params.gamma
    s0_sq = params.sigma0 ** 2
    sig_sq = np.empty(n + 1)
    returns = np.empty(n)
    var = s0_sq
    for k in range(n):
        sig_sq[k] = var
        returns[k] = params.r0 + math.sqrt(var) * b[k]
        var = a * var + be * s0_sq + g * returns[k] ** 2
    sig_sq[n] = var
    if np.any(returns <= -1.0):
        raise DomainError(
            "a return at or below -100% occurred; prices would be nonpositive "
            "(sigma0 is too large for per-period returns)"
        )
    prices = np.cumprod(1.0 + returns)
    return ReturnSeries(
        returns=returns,
        volatilities=np.sqrt(sig_sq),
        prices=prices,
        seed=seed,
    )


def instant_pragmatic_info(sigma_prev: float, r_prev: float, params: GarchParams) -> float:
    """Bits the tradable past (sigma_prev, r_prev) gives about the next return.

    i = -1/2 log2(1 + A + G) with A = alpha[(sigma_prev/sigma0)^2 - 1] and
    G = gamma[(r_prev/sigma0)^2 - 1]. The argument equals the next
    conditional variance over sigma0^2 and must be positive.
    """
    if not (np.isfinite(sigma_prev) and sigma_prev > 0.0):
        raise DomainError("sigma_prev must be positive and finite")
    if not np.isfinite(r_prev):
        raise DomainError("r_prev must be finite")
    s0_sq = params.sigma0 ** 2
    arg = (
        1.0
        + params.alpha * (sigma_prev ** 2 / s0_sq - 1.0)
        + params.gamma * (r_prev ** 2 / s0_sq - 1.0)
    )
    if arg <= 0.0:
        raise DomainError("conditional variance collapsed to zero")
    return -0.5 * math.log2(arg)


def _filtered_variance(returns: np.ndarray, params: GarchParams) -> np.ndarray:
    """Conditional variances sig^2[0..n], one per return plus the look-ahead.

    The recursion sig^2[k] = alpha sig^2[k-1] + c[k] is a linear filter in
    c[k] = beta sigma0^2 + gamma R[k-1]^2, so it runs at C speed.
    """
    s0_sq = params.sigma0 ** 2
    x = np.empty(returns.size + 1)
    x[0] = s0_sq
    x[1:] = params.beta * s0_sq + params.gamma * returns ** 2
    return lfilter([1.0], [1.0, -params.alpha], x)


def efficiency_from_series(series, params: GarchParams, burn_in: int = 0) -> EfficiencyReport:
    """Per-step pragmatic information along an observed return path.

    Accepts a ReturnSeries or a raw return array; volatilities are always
    re-filtered from sigma0 through the parameter recursion, so the report
    depends only on the returns and the parameters. Produces one i value
    per return (the k-th uses only returns before k); the first burn_in
    values are dropped from the report.
    """
    if isinstance(series, ReturnSeries):
        returns = series.returns
    else:
        returns = np.asarray(series, dtype=np.float64)
        if returns.ndim != 1:
            raise DomainError("returns must be a 1-D array")
        if not np.all(np.isfinite(returns)):
            raise DomainError("returns must be finite")
    if returns.size < 2:
        raise DomainError("need at least two returns")
    if burn_in < 0 or burn_in >= returns.size:
        raise DomainError("burn_in must leave at least one step")
    sig_sq = _filtered_variance(returns, params)
    s0_sq = params.sigma0 ** 2
    per_step = -0.5 * np.log2(sig_sq[1:] / s0_sq)

    # counterfactual single-channel log arguments, same steps as per_step
    prev_sig_sq = sig_sq[:-1]
    arg_alpha = 1.0 + params.alpha * (prev_sig_sq / s0_sq - 1.0)
    arg_gamma = 1.0 + params.gamma * (returns ** 2 / s0_sq - 1.0)

    used = per_step[burn_in:]
    mean = float(np.mean(used))
    if used.size > 1:
        stderr = float(np.std(used, ddof=1) / math.sqrt(used.size))
    else:
        stderr = 0.0
    if not mean >= -3.0 * stderr:
        raise ModelInconsistencyError(
            f"mean inefficiency {mean!r} is below -3 standard errors; "
            "the series is inconsistent with the stationary model"
        )
    with np.errstate(divide="ignore"):
        alpha_term = float(np.mean(-0.5 * np.log2(arg_alpha[burn_in:])))
        gamma_term = float(np.mean(-0.5 * np.log2(arg_gamma[burn_in:])))
    return EfficiencyReport(
        per_step=used,
        mean_bits=mean,
        stderr_bits=stderr,
        frac_positive=float(np.mean(used > 0.0)),
        alpha_term=alpha_term,
        gamma_term=gamma_term,
    )


def expected_inefficiency(params: GarchParams, n: int, seed) -> EfficiencyReport:
    """Monte Carlo estimate of E[i] under the stationary model.

    Simulates burn-in plus n steps, drops the burn-in, and reports the
    remaining n per-step values. The mean is nonnegative up to sampling
    noise; a mean below -3 standard errors raises instead of being
    reported as if stationary.
    """
    if n < 10 ** 3:
        raise DomainError("need at least 1000 steps for a stable estimate")
    series = garch_simulate(params, n + BURN_IN, seed)
    return efficiency_from_series(series, params, burn_in=BURN_IN)


def _nll(alpha: float, gamma: float, returns: np.ndarray, s0_sq: float,
         r0: float) -> float:
    """Negative log-likelihood (nats, without the 2-pi constant)."""
    beta = 1.0 - alpha - gamma
    x = np.empty(returns.size)
    x[0] = s0_sq
    x[1:] = beta * s0_sq + gamma * returns[:-1] ** 2
    sig_sq = lfilter([1.0], [1.0, -alpha], x)
    resid_sq = (returns - r0) ** 2
    return 0.5 * float(np.sum(np.log(sig_sq) + resid_sq / sig_sq))


def _nll_logits(u: np.ndarray, returns: np.ndarray, s0_sq: float,
                r0: float) -> float:
    ea, eg = math.exp(u[0]), math.exp(u[1])
    z = 1.0 + ea + eg
    return _nll(ea / z, eg / z, returns, s0_sq, r0)


# Likelihood-ratio margin (nats) below which the volatility-memory
# direction counts as unidentified; see fit_garch.
RIDGE_NLL_TOL = 5.0


def fit_garch(returns) -> GarchParams:
    """Quasi-maximum-likelihood GARCH(1,1) fit under normal innovations.

    The unit-sum constraint is enforced by construction: (alpha, beta,
    gamma) is a softmax over two free log-ratios, so every iterate is a
    valid parameter set. r0 and sigma0 are fixed at the sample mean and
    standard deviation rather than fitted; that matches the stationarity
    constraint already baked into the weight sum.

    When gamma is near zero the likelihood is flat in alpha (memory of
    shocks that never arrive), and the optimizer parks alpha at an
    arbitrary ridge point. If dropping alpha to 0 costs less than
    RIDGE_NLL_TOL nats, alpha is pinned to 0: the parsimonious model is
    likelihood-equivalent. Genuine volatility memory costs hundreds of
    nats and is never snapped. The returned params carry the in-sample
    log-likelihood (natural log).
    """
    r = np.asarray(returns, dtype=np.float64)
    if r.ndim != 1:
        raise DomainError("returns must be a 1-D array")
    if r.size < 100:
        raise DomainError("need at least 100 returns to fit")
    if not np.all(np.isfinite(r)):
        raise DomainError("returns must be finite")
    sigma0 = float(np.std(r, ddof=1))
    if sigma0 == 0.0:
        raise DegenerateModelError("constant returns: volatility is unidentifiable")
    r0 = float(np.mean(r))
    s0_sq = sigma0 ** 2

    start = np.array([math.log(0.25), math.log(0.25)])
    result = minimize(
        _nll_logits,
        start,
        args=(r, s0_sq, r0),
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-8, "maxiter": 2000},
    )
    if not result.success:
        raise FitConvergenceError(f"optimizer did not converge: {result.message}")
    ea, eg = math.exp(result.x[0]), math.exp(result.x[1])
    z = 1.0 + ea + eg
    alpha, gamma = ea / z, eg / z
    best_nll = float(result.fun)
    if alpha > 0.0 and _nll(0.0, gamma, r, s0_sq, r0) - best_nll <= RIDGE_NLL_TOL:
        alpha = 0.0
        best_nll = _nll(0.0, gamma, r, s0_sq, r0)
    beta = 1.0 - alpha - gamma
    loglik = -best_nll - 0.5 * r.size * math.log(2.0 * math.pi)
    return GarchParams(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        sigma0=sigma0,
        r0=r0,
        log_likelihood=loglik,
    )
