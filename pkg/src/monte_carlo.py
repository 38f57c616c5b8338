"""
Seeded Monte Carlo estimates of the investor's payoff.

Rounds are split into fixed-size blocks. Block i draws from its own numpy
generator seeded by SeedSequence(seed, spawn_key=(i,)), so every block is a
pure function of (seed, i) and the merged result does not depend on how many
workers ran the blocks. Per-block mean and sum of squared deviations are
merged in block order with the pairwise (Chan) update.
"""

from dataclasses import asdict, dataclass, field
from multiprocessing import Pool

import numpy as np
import pandas as pd

from src.discrete_game import DiscreteGameConfig, enumerate_outcomes
from src.gaussian_model import (
    DEFAULT_QUADRATURE, GaussianParams, PayoffSpec, QuadratureConfig,
    expected_net_payoff, investor_payoff_fraction,
)
from src.truncated_normal import gaussian_mass
from src.utils import (
    DEFAULT_ROUNDS, DEFAULT_SEED, DomainError, RejectionBudgetError, setup_logging,
)

logger = setup_logging(__name__)

BLOCK_ROUNDS = 1 << 16
MIN_ACCEPTANCE = 1e-6
ATTEMPTS_PER_EXPECTED_DRAW = 1000
MAX_PASS_DRAWS = 1 << 20
MAX_TOTAL_DRAWS = 1 << 28
SEED_LIMIT = 1 << 64


def _check_seed(seed: int):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < SEED_LIMIT:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")


def _check_rounds(n_rounds: int):
    if isinstance(n_rounds, bool) or not isinstance(n_rounds, (int, np.integer)) or n_rounds < 1:
        raise DomainError(f"n_rounds must be a positive integer, got {n_rounds!r}")


@dataclass(frozen=True)
class SimulationConfig:
    n_rounds: int = DEFAULT_ROUNDS
    params: GaussianParams = field(default_factory=GaussianParams)
    spec: PayoffSpec = field(default_factory=PayoffSpec)
    seed: int = DEFAULT_SEED
    workers: int = 1

    def __post_init__(self):
        _check_rounds(self.n_rounds)
        _check_seed(self.seed)
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class SimulationResult:
    mean_payoff: float
    win_total: float
    loss_total: float
    ratio_estimate: float
    std_error: float
    n_rounds: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _BlockStats:
    count: int
    mean: float
    m2: float
    win_total: float
    loss_total: float

    @classmethod
    def from_payoffs(cls, payoffs: np.ndarray) -> "_BlockStats":
        mean = float(payoffs.mean())
        return cls(
            count=int(payoffs.size),
            mean=mean,
            m2=float(np.sum((payoffs - mean) ** 2)),
            win_total=float(payoffs[payoffs > 0].sum()),
            loss_total=float(-payoffs[payoffs < 0].sum()),
        )

    def merge(self, other: "_BlockStats") -> "_BlockStats":
        n = self.count + other.count
        delta = other.mean - self.mean
        return _BlockStats(
            count=n,
            mean=self.mean + delta * other.count / n,
            m2=self.m2 + other.m2 + delta * delta * self.count * other.count / n,
            win_total=self.win_total + other.win_total,
            loss_total=self.loss_total + other.loss_total,
        )

    def to_result(self, seed: int) -> SimulationResult:
        if self.count > 1:
            std_error = float(np.sqrt(self.m2 / (self.count - 1) / self.count))
        else:
            std_error = float("nan")
        if self.loss_total > 0:
            ratio = self.win_total / self.loss_total - 1.0
        else:
            ratio = float("nan")
        return SimulationResult(
            mean_payoff=self.mean,
            win_total=self.win_total,
            loss_total=self.loss_total,
            ratio_estimate=ratio,
            std_error=std_error,
            n_rounds=self.count,
            seed=int(seed),
        )


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for replicate block `index`; depends only on (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))


def acceptance_probability(params: GaussianParams, lower: float = -1.0,
                           upper: float = 1.0) -> float:
    return gaussian_mass(lower, upper, params.mu, params.sigma)


def _check_acceptance(params: GaussianParams, lower: float, upper: float) -> float:
    p = acceptance_probability(params, lower, upper)
    if p < MIN_ACCEPTANCE:
        raise RejectionBudgetError(
            f"acceptance probability {p:.3g} on [{lower}, {upper}] is below "
            f"{MIN_ACCEPTANCE:g} for mu={params.mu}, sigma={params.sigma}"
        )
    return p


def _check_draw_budget(p: float, size: int):
    expected = size / p
    if expected > MAX_TOTAL_DRAWS:
        raise RejectionBudgetError(
            f"{size:,} draws at acceptance {p:.3g} need about {expected:.3g} attempts, "
            f"over the budget of {MAX_TOTAL_DRAWS:,}"
        )


def sample_outcome(rng: np.random.Generator, params: GaussianParams,
                   lower: float = -1.0, upper: float = 1.0) -> float:
    """One Gaussian draw truncated to [lower, upper] by resampling."""
    p = _check_acceptance(params, lower, upper)
    max_attempts = min(int(ATTEMPTS_PER_EXPECTED_DRAW / p), MAX_TOTAL_DRAWS)
    for _ in range(max_attempts):
        x = rng.normal(params.mu, params.sigma)
        if lower <= x <= upper:
            return float(x)
    raise RejectionBudgetError(f"no accepted draw after {max_attempts} attempts")


def sample_outcomes(rng: np.random.Generator, params: GaussianParams, size: int,
                    lower: float = -1.0, upper: float = 1.0) -> np.ndarray:
    """
    `size` truncated Gaussian draws, resampling rejected values in passes.

    Each pass draws at most MAX_PASS_DRAWS normals. The whole call may spend
    at most MAX_TOTAL_DRAWS; a request expected to need more is refused before
    drawing.
    """
    p = _check_acceptance(params, lower, upper)
    _check_draw_budget(p, size)
    out = np.empty(size)
    filled = 0
    attempts = 0
    while filled < size and attempts < MAX_TOTAL_DRAWS:
        need = size - filled
        # Oversample so one pass usually suffices
        n_draws = min(int(need / p * 1.05) + 16, MAX_PASS_DRAWS, MAX_TOTAL_DRAWS - attempts)
        draws = rng.normal(params.mu, params.sigma, size=n_draws)
        attempts += n_draws
        accepted = draws[(draws >= lower) & (draws <= upper)][:need]
        out[filled:filled + accepted.size] = accepted
        filled += accepted.size
    if filled < size:
        raise RejectionBudgetError(
            f"only {filled} of {size} draws accepted after {attempts:,} attempts"
        )
    return out


def _blocks(n_rounds: int) -> list[tuple[int, int]]:
    """(index, size) pairs covering n_rounds; independent of worker count."""
    full, rest = divmod(n_rounds, BLOCK_ROUNDS)
    blocks = [(i, BLOCK_ROUNDS) for i in range(full)]
    if rest:
        blocks.append((full, rest))
    return blocks


def _gaussian_block(task: tuple) -> _BlockStats:
    index, size, seed, params, spec = task
    rng = substream(seed, index)
    outcomes = sample_outcomes(rng, params, size, spec.lower_bound, spec.upper_bound)
    return _BlockStats.from_payoffs(investor_payoff_fraction(outcomes, spec))


def _discrete_block(task: tuple) -> _BlockStats:
    index, size, seed, config = task
    rng = substream(seed, index)
    b_end = rng.integers(0, config.total_pot + 1, size=size)

    a_recovered = np.minimum(b_end, config.amount_due)
    b_net = np.maximum(b_end - config.amount_due, 0)
    c_end = config.total_pot - b_end
    assert np.all(a_recovered + b_net + c_end == config.total_pot), "coins not conserved"

    return _BlockStats.from_payoffs((a_recovered - config.loan_coins).astype(float))


def _run_blocks(worker, tasks: list[tuple], workers: int) -> _BlockStats:
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            stats = pool.map(worker, tasks)
    else:
        stats = [worker(t) for t in tasks]

    merged = stats[0]
    for s in stats[1:]:
        merged = merged.merge(s)
    return merged


def simulate_investor(config: SimulationConfig) -> SimulationResult:
    """Average capped payoff over n_rounds truncated Gaussian outcomes."""
    p = _check_acceptance(config.params, config.spec.lower_bound, config.spec.upper_bound)
    _check_draw_budget(p, min(config.n_rounds, BLOCK_ROUNDS))
    tasks = [(i, size, config.seed, config.params, config.spec)
             for i, size in _blocks(config.n_rounds)]
    result = _run_blocks(_gaussian_block, tasks, config.workers).to_result(config.seed)

    logger.info(f"Gaussian simulation: n={config.n_rounds:,}, seed={config.seed}, "
                f"mean={result.mean_payoff:.6f} +/- {result.std_error:.2g}")
    return result


def simulate_discrete(config: DiscreteGameConfig, n_rounds: int, seed: int = DEFAULT_SEED,
                      workers: int = 1) -> SimulationResult:
    """Average coin payoff with b_end drawn uniformly from 0..total_pot."""
    _check_rounds(n_rounds)
    _check_seed(seed)
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    tasks = [(i, size, seed, config) for i, size in _blocks(n_rounds)]
    result = _run_blocks(_discrete_block, tasks, workers).to_result(seed)

    logger.info(f"Discrete simulation: n={n_rounds:,}, seed={seed}, "
                f"mean={result.mean_payoff:.6f} +/- {result.std_error:.2g}")
    return result


def validate_against_quadrature(pairs: list[tuple[float, float]], n_rounds: int,
                                seed: int = DEFAULT_SEED, sigma: float = 0.25,
                                q: QuadratureConfig = DEFAULT_QUADRATURE,
                                workers: int = 1) -> pd.DataFrame:
    """
    Compare simulated and analytic expected payoff for (interest, mu) pairs.

    Returns:
        DataFrame with interest, mu, analytic, estimate, std_error, z_score.
    """
    rows = []
    for interest, mu in pairs:
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        analytic = expected_net_payoff(spec, params, q)
        result = simulate_investor(SimulationConfig(
            n_rounds=n_rounds, params=params, spec=spec, seed=seed, workers=workers,
        ))
        rows.append({
            "interest": interest,
            "mu": mu,
            "analytic": analytic,
            "estimate": result.mean_payoff,
            "std_error": result.std_error,
            "z_score": (result.mean_payoff - analytic) / result.std_error,
        })
    return pd.DataFrame(rows)


def discrete_expectation(config: DiscreteGameConfig) -> float:
    """Exact per-round expectation as a float, for comparison with simulation."""
    return float(enumerate_outcomes(config).expected_net)
