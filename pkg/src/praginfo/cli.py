"""Batch command-line front end: scenario files in, report files out.

Each subcommand reads one JSON scenario file, runs the named experiment and
writes <kind>_report.json (plus <kind>_series.csv with --csv) into the
output directory. Reports embed the config echo, the effective seed and the
package version, and contain no timestamps: identical (config, seed) gives
byte-identical files. Floats are rendered by repr, so full double precision
survives a round trip.

Exit codes: 0 success; 1 malformed config or unusable input file; 2 the
experiment itself failed numerically (ruin path, non-convergent fit,
infeasible horizon), in which case <kind>_error.json describes the failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    IngestError,
    PraginfoError,
)
from .info_core import (
    Distribution,
    JointDistribution,
    conditional_entropy,
    entropy,
    gaussian_entropy,
    mutual_information,
    relative_entropy,
)
from . import coding, kelly, market, rates

KINDS = ("kelly", "garch", "rates", "wrongcode", "efficiency", "entropy")

__all__ = ["ScenarioConfig", "load_scenario", "run", "ingest_returns", "main"]


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment: a kind, its parameter block, seed and output plan."""

    kind: str
    params: dict
    seed: int | None
    out_dir: Path
    csv: bool


def _require(params: dict, key: str, kind: str):
    if key not in params:
        raise ConfigError(f"{kind} scenario is missing required key {key!r}")
    return params[key]


def _check_keys(params: dict, allowed: set[str], kind: str):
    unknown = set(params) - allowed
    if unknown:
        raise ConfigError(
            f"{kind} scenario has unknown keys: {', '.join(sorted(unknown))}"
        )


def _as_seed(value) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError("seed must be an integer")
    if not 0 <= value < 2 ** 64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return value


def load_scenario(kind: str, config_path, seed=None, out_dir=".", emit_csv=False) -> ScenarioConfig:
    """Parse a scenario file; flag seed overrides the file's seed."""
    if kind not in KINDS:
        raise ConfigError(f"unknown scenario kind {kind!r}")
    path = Path(config_path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        params = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(params, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    effective = seed if seed is not None else params.get("seed")
    if effective is not None:
        effective = _as_seed(effective)
    return ScenarioConfig(
        kind=kind,
        params=params,
        seed=effective,
        out_dir=Path(out_dir),
        csv=bool(emit_csv),
    )


def ingest_returns(path) -> np.ndarray:
    """Read a return series from CSV with header `return` or `timestamp,return`.

    Returns are kept in file order. Rows whose return cell is missing or
    not a finite number are rejected, and the error names their line
    numbers (1-based, header is line 1).
    """
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise IngestError(f"cannot read returns file {p}: {e}") from e
    reader = csv.reader(text.splitlines())
    rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    if not rows:
        raise IngestError(f"{p} is empty")
    header = [cell.strip().lower() for cell in rows[0][1]]
    if header == ["return"]:
        col = 0
        width = 1
    elif header == ["timestamp", "return"]:
        col = 1
        width = 2
    else:
        raise IngestError(
            f"{p} has header {header!r}; expected 'return' or 'timestamp,return'"
        )
    values = []
    bad_lines = []
    for lineno, row in rows[1:]:
        if len(row) != width:
            bad_lines.append(lineno)
            continue
        try:
            v = float(row[col])
        except ValueError:
            bad_lines.append(lineno)
            continue
        if not math.isfinite(v):
            bad_lines.append(lineno)
            continue
        values.append(v)
    if bad_lines:
        listed = ", ".join(str(n) for n in bad_lines)
        raise IngestError(f"{p} has non-numeric return rows at line(s) {listed}")
    if not values:
        raise IngestError(f"{p} contains no data rows")
    return np.asarray(values, dtype=np.float64)


def _jsonable(value):
    """Recursively convert report values to deterministic JSON-safe types."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        f = float(value)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, Distribution):
        return [_jsonable(v) for v in value.probs.tolist()]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _need_seed(config: ScenarioConfig) -> int:
    if config.seed is None:
        raise ConfigError(
            f"{config.kind} scenario is stochastic and needs a seed "
            "(config key 'seed' or flag --seed)"
        )
    return config.seed


def _distribution(values, what: str) -> Distribution:
    try:
        return Distribution(values)
    except PraginfoError as e:
        raise ConfigError(f"{what}: {e}") from e


# ---------------------------------------------------------------- kelly


def _run_kelly(config: ScenarioConfig):
    params = config.params
    _check_keys(
        params,
        {"payoffs", "p", "channel", "n_races", "policy", "seed"},
        "kelly",
    )
    seed = _need_seed(config)
    n_races = _require(params, "n_races", "kelly")
    if not isinstance(n_races, int) or n_races < 1:
        raise ConfigError("n_races must be a positive integer")
    try:
        race = kelly.make_race(_require(params, "payoffs", "kelly"))
    except PraginfoError as e:
        raise ConfigError(f"payoffs: {e}") from e

    if ("p" in params) == ("channel" in params):
        raise ConfigError("kelly scenario needs exactly one of 'p' or 'channel'")

    policy = params.get("policy", "proportional")
    if policy == "proportional":
        policy_arg = None
    elif policy == "track":
        policy_arg = race.track_probs
    elif isinstance(policy, list):
        policy_arg = policy
    else:
        raise ConfigError("policy must be 'proportional', 'track', or allocation rows")

    per_message = (
        isinstance(policy_arg, list) and policy_arg and isinstance(policy_arg[0], list)
    )
    results: dict = {}
    if "p" in params:
        p = _distribution(params["p"], "p")
        if per_message:
            raise ConfigError("per-message policies need a channel scenario")
        if policy_arg is None:
            results["analytic_rate"] = kelly.optimal_doubling_rate(p, race, n_races)
        else:
            results["analytic_rate"] = kelly.race_growth(p, policy_arg, race)
        results["relative_entropy_term"] = relative_entropy(p, race.track_probs)
        path = kelly.simulate_wealth(p, race, n_races, seed, policy=policy_arg)
    else:
        block = params["channel"]
        if not isinstance(block, dict):
            raise ConfigError("channel must be an object")
        try:
            ch = kelly.SideChannel(block.get("prior"), block.get("conditionals", ()))
        except PraginfoError as e:
            raise ConfigError(f"channel: {e}") from e
        rep = kelly.side_info_doubling_rate(ch, race)
        results["pragmatic_term"] = rep.pragmatic_term
        results["base_term"] = rep.base_term
        if policy_arg is None:
            results["analytic_rate"] = rep.total
        else:
            phi = ch.prior.probs
            rows = policy_arg if per_message else [policy_arg] * ch.n_messages
            if len(rows) != ch.n_messages:
                raise ConfigError("need one policy row per message")
            results["analytic_rate"] = sum(
                float(w) * kelly.race_growth(c, b, race)
                for w, c, b in zip(phi, ch.conditionals, rows)
            )
        path = kelly.simulate_wealth(ch, race, n_races, seed, policy=policy_arg)
    results["minus_log_take"] = -math.log2(race.take)
    results["take"] = race.take
    results["track_probs"] = race.track_probs
    results["monte_carlo_rate"] = path.terminal_rate
    results["races_run"] = path.n_races
    results["ruined"] = path.ruined
    if path.ruined:
        raise _NumericalFailure(
            "policy went bust: zero bet on the realized winner at race "
            f"{path.n_races}",
            label="ruin",
            partial=results,
        )
    series = (
        ["race", "log2_growth", "running_rate"],
        zip(range(1, path.n_races + 1), path.increments, path.cumulative),
    )
    return results, series


# ---------------------------------------------------------------- garch


def _garch_params(block: dict, what: str) -> market.GarchParams:
    allowed = {"alpha", "beta", "gamma", "sigma0", "r0"}
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"{what} has unknown keys: {', '.join(sorted(unknown))}")
    try:
        return market.GarchParams(
            alpha=block.get("alpha", 0.0),
            beta=block.get("beta", 0.0),
            gamma=block.get("gamma", 0.0),
            sigma0=block.get("sigma0", 0.0),
            r0=block.get("r0", 0.0),
        )
    except PraginfoError as e:
        raise ConfigError(f"{what}: {e}") from e


def _run_garch(config: ScenarioConfig):
    params = config.params
    _check_keys(params, {"alpha", "beta", "gamma", "sigma0", "r0", "n", "seed"}, "garch")
    seed = _need_seed(config)
    n = _require(params, "n", "garch")
    if not isinstance(n, int) or n < 1:
        raise ConfigError("n must be a positive integer")
    gp = _garch_params(
        {k: v for k, v in params.items() if k in ("alpha", "beta", "gamma", "sigma0", "r0")},
        "garch params",
    )
    series = market.garch_simulate(gp, n, seed)
    results = {
        "n": n,
        "sample_mean": float(np.mean(series.returns)),
        "sample_std": float(np.std(series.returns, ddof=1)) if n > 1 else 0.0,
        "sample_var_over_sigma0_sq": float(np.var(series.returns) / gp.sigma0 ** 2),
        "terminal_price": float(series.prices[-1]),
        "final_volatility": float(series.volatilities[-1]),
    }
    csv_series = (["return"], ((float(r),) for r in series.returns))
    return results, csv_series


# ---------------------------------------------------------------- rates


def _coupling_from_config(block) -> rates.CoupledSource:
    if not isinstance(block, dict) or "kind" not in block:
        raise ConfigError("coupling must be an object with a 'kind'")
    kind = block["kind"]
    try:
        if kind == "independent":
            return rates.independent_coupling(block["p_action"], block["p_message"])
        if kind == "identity":
            return rates.identity_coupling(block["p_action"])
        if kind == "channel":
            return rates.channel_coupling(block["p_action"], block["channel"])
        if kind == "markov_modulated":
            return rates.markov_modulated_coupling(block["transition"], block["channel"])
    except KeyError as e:
        raise ConfigError(f"coupling {kind!r} is missing key {e}") from e
    except PraginfoError as e:
        raise ConfigError(f"coupling: {e}") from e
    raise ConfigError(f"unknown coupling kind {kind!r}")


def _run_rates(config: ScenarioConfig):
    params = config.params
    _check_keys(
        params,
        {"coupling", "horizon", "sample_n", "monotone_prefix_length", "seed"},
        "rates",
    )
    horizon = _require(params, "horizon", "rates")
    if not isinstance(horizon, int) or horizon < 1:
        raise ConfigError("horizon must be a positive integer")
    cs = _coupling_from_config(_require(params, "coupling", "rates"))
    est = rates.pragmatic_rate_sequence(cs, horizon)
    results = {
        "block_averages": [[n, v] for n, v in est.per_n],
        "increments": [[n, v] for n, v in est.increments],
        "limit_estimate": est.limit_estimate,
        "diagnostics": dict(est.diagnostics),
    }
    if "monotone_prefix_length" in params:
        lfix = params["monotone_prefix_length"]
        if not isinstance(lfix, int) or lfix < 1:
            raise ConfigError("monotone_prefix_length must be a positive integer")
        rep = rates.monotone_increment_check(cs, lfix, horizon)
        results["monotone"] = {
            "sequence": list(rep.sequence),
            "nonincreasing": rep.nonincreasing,
            "max_violation": rep.max_violation,
        }
    if "sample_n" in params:
        sample_n = params["sample_n"]
        if not isinstance(sample_n, int) or sample_n < 1:
            raise ConfigError("sample_n must be a positive integer")
        seed = _need_seed(config)
        results["sample_rate"] = rates.ergodic_sample_rate(cs, sample_n, seed)
        results["sample_n"] = sample_n
    series = (
        ["n", "block_average", "increment"],
        (
            [n, bv, iv]
            for (n, bv), (_, iv) in zip(est.per_n, est.increments)
        ),
    )
    return results, series


# ------------------------------------------------------------- wrongcode


def _run_wrongcode(config: ScenarioConfig):
    params = config.params
    _check_keys(params, {"p", "q", "ensemble", "seed"}, "wrongcode")
    has_plain = "p" in params
    has_ensemble = "ensemble" in params
    if has_plain == has_ensemble:
        raise ConfigError("wrongcode scenario needs exactly one of 'p' or 'ensemble'")

    results: dict = {}
    if has_plain:
        p = _distribution(_require(params, "p", "wrongcode"), "p")
        q = _distribution(_require(params, "q", "wrongcode"), "q")
        rep = coding.wrong_code_gap(p, q)
        results.update(
            expected_length=rep.expected_length,
            lower=rep.lower,
            upper=rep.upper,
            holds=rep.holds,
            entropy_p=entropy(p),
            relative_entropy_pq=relative_entropy(p, q),
        )
        code_q = q
    else:
        block = params["ensemble"]
        if not isinstance(block, dict):
            raise ConfigError("ensemble must be an object")
        try:
            ens = coding.SideMessageEnsemble(
                block.get("prior"), block.get("conditionals", ())
            )
        except PraginfoError as e:
            raise ConfigError(f"ensemble: {e}") from e
        q = (
            _distribution(params["q"], "q")
            if "q" in params
            else ens.implied_marginal()
        )
        rep = coding.pragmatic_wrong_code_gap(ens, q)
        results.update(
            expected_length=rep.expected_length,
            lower=rep.lower,
            upper=rep.upper,
            holds=rep.holds,
            conditional_entropy=rep.cond_entropy,
            pragmatic_info=rep.pragmatic_info,
            marginal_gap=rep.marginal_gap,
        )
        code_q = q

    shannon = coding.shannon_lengths(code_q)
    huffman = coding.huffman_lengths(code_q)
    words = coding.canonical_codebook(shannon)
    results["code_distribution"] = code_q
    results["shannon_lengths"] = list(shannon.lengths)
    results["huffman_lengths"] = list(huffman.lengths)
    results["kraft_sum_shannon"] = shannon.kraft_sum()
    series = (
        ["symbol", "probability", "shannon_length", "huffman_length", "codeword"],
        (
            [i, float(code_q.probs[i]), shannon.lengths[i], huffman.lengths[i], words[i]]
            for i in range(len(code_q))
        ),
    )
    return results, series


# ------------------------------------------------------------ efficiency


def _run_efficiency(config: ScenarioConfig):
    params = config.params
    _check_keys(
        params,
        {"alpha", "beta", "gamma", "sigma0", "r0", "n", "returns_csv", "fit",
         "burn_in", "seed"},
        "efficiency",
    )
    param_keys = {"alpha", "beta", "gamma", "sigma0", "r0"}
    explicit = {k: v for k, v in params.items() if k in param_keys}
    results: dict = {}

    if "returns_csv" in params:
        returns = ingest_returns(params["returns_csv"])
        if params.get("fit", False):
            gp = market.fit_garch(returns)
            results["fitted"] = True
            results["log_likelihood"] = gp.log_likelihood
        else:
            if not explicit:
                raise ConfigError(
                    "efficiency from a file needs explicit params or fit=true"
                )
            gp = _garch_params(explicit, "efficiency params")
            results["fitted"] = False
        burn_in = params.get("burn_in", 0)
        if not isinstance(burn_in, int) or burn_in < 0:
            raise ConfigError("burn_in must be a nonnegative integer")
        report = market.efficiency_from_series(returns, gp, burn_in=burn_in)
    else:
        n = _require(params, "n", "efficiency")
        if not isinstance(n, int) or n < 1000:
            raise ConfigError("n must be an integer >= 1000")
        if "fit" in params or "burn_in" in params:
            raise ConfigError("fit/burn_in apply only with returns_csv")
        gp = _garch_params(explicit, "efficiency params")
        seed = _need_seed(config)
        report = market.expected_inefficiency(gp, n, seed)
        results["fitted"] = False

    results.update(
        mean_bits=report.mean_bits,
        stderr_bits=report.stderr_bits,
        n_steps=report.n_steps,
        frac_positive=report.frac_positive,
        alpha_term=report.alpha_term,
        gamma_term=report.gamma_term,
        params={
            "alpha": gp.alpha,
            "beta": gp.beta,
            "gamma": gp.gamma,
            "sigma0": gp.sigma0,
            "r0": gp.r0,
        },
    )
    series = (
        ["step", "i_bits"],
        ((i + 1, float(v)) for i, v in enumerate(report.per_step)),
    )
    return results, series


# --------------------------------------------------------------- entropy


def _run_entropy(config: ScenarioConfig):
    params = config.params
    _check_keys(params, {"p", "q", "joint", "sigma", "seed"}, "entropy")
    results: dict = {}
    if "p" in params:
        p = _distribution(params["p"], "p")
        results["entropy_bits"] = entropy(p)
        if "q" in params:
            q = _distribution(params["q"], "q")
            try:
                results["relative_entropy_bits"] = relative_entropy(p, q)
            except PraginfoError as e:
                raise ConfigError(f"relative entropy: {e}") from e
    elif "q" in params:
        raise ConfigError("q without p has no meaning in an entropy scenario")
    if "joint" in params:
        try:
            joint = JointDistribution(params["joint"])
        except PraginfoError as e:
            raise ConfigError(f"joint: {e}") from e
        results["mutual_information_bits"] = mutual_information(joint)
        results["conditional_entropy_bits"] = conditional_entropy(joint)
        results["action_marginal"] = joint.action_marginal()
        results["message_marginal"] = joint.message_marginal()
    if "sigma" in params:
        sigma = params["sigma"]
        if not isinstance(sigma, (int, float)) or isinstance(sigma, bool):
            raise ConfigError("sigma must be a number")
        try:
            results["gaussian_entropy_bits"] = gaussian_entropy(float(sigma))
        except PraginfoError as e:
            raise ConfigError(f"sigma: {e}") from e
    if not results:
        raise ConfigError("entropy scenario needs at least one of p, joint, sigma")
    return results, None


class _NumericalFailure(PraginfoError):
    """Experiment-level failure that should produce an exit-2 error report."""

    def __init__(self, message: str, label: str, partial: dict | None = None):
        super().__init__(message)
        self.label = label
        self.partial = partial


_RUNNERS = {
    "kelly": _run_kelly,
    "garch": _run_garch,
    "rates": _run_rates,
    "wrongcode": _run_wrongcode,
    "efficiency": _run_efficiency,
    "entropy": _run_entropy,
}


def run(config: ScenarioConfig) -> int:
    """Execute a scenario; write report files; return the exit status."""
    base = {
        "kind": config.kind,
        "version": __version__,
        "seed": config.seed,
        "config": config.params,
    }
    try:
        results, series = _RUNNERS[config.kind](config)
    except (ConfigError, IngestError) as e:
        print(f"praginfo {config.kind}: {e}", file=sys.stderr)
        return 1
    except _NumericalFailure as e:
        payload = dict(base, error=e.label, message=str(e))
        if e.partial:
            payload["partial_results"] = e.partial
        _write_json(config.out_dir / f"{config.kind}_error.json", payload)
        print(f"praginfo {config.kind}: {e}", file=sys.stderr)
        return 2
    except PraginfoError as e:
        payload = dict(base, error=type(e).__name__, message=str(e))
        _write_json(config.out_dir / f"{config.kind}_error.json", payload)
        print(f"praginfo {config.kind}: {e}", file=sys.stderr)
        return 2
    _write_json(config.out_dir / f"{config.kind}_report.json", dict(base, results=results))
    if config.csv and series is not None:
        header, rows = series
        _write_csv(config.out_dir / f"{config.kind}_series.csv", header, rows)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="praginfo",
        description="Pragmatic-information experiments: betting, coding, "
        "rates, and market efficiency.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} scenario")
        sp.add_argument("--config", required=True, help="path to the JSON scenario")
        sp.add_argument("--seed", type=int, default=None,
                        help="unsigned 64-bit seed; overrides the config's seed")
        sp.add_argument("--out", default=".", help="directory for report files")
        sp.add_argument("--csv", action="store_true",
                        help="also emit the per-step CSV series")
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        config = load_scenario(
            args.kind, args.config, seed=args.seed, out_dir=args.out,
            emit_csv=args.csv,
        )
    except (ConfigError, IngestError) as e:
        print(f"praginfo: {e}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
