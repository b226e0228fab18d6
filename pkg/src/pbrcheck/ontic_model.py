"""Finite underlying-state models and the overlap contradiction.

A model assigns each single-system preparation an epistemic distribution
over a finite grid of underlying states (lambdas). Compound lambdas are
independent pairs, one per source. A response table gives, for each lambda
pair, the probability of each of the four readout outcomes; it is the pair,
not the quantum state, that determines the outcome.

Each of the four preparations forbids one outcome, so any admissible
response table must put zero probability on that outcome across the whole
support product of the preparation. When some lambda carries positive
weight under both the |0> and the |+> distributions, the diagonal pair
(lambda, lambda) sits in all four support products at once, all four
outcomes are forced to zero there, and no row-stochastic table exists.
Disjoint supports leave at most one forced outcome per pair, and an
explicit table is returned.

Compatibility of a lambda with a quantum state is read as strictly positive
weight in that state's distribution; independence of the two sources is a
model assumption, stated here rather than derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .pbr_states import PREPARATIONS, Preparation, PrepChoice, forbidden_table

WEIGHT_ATOL = 1e-12


@dataclass(frozen=True)
class LambdaGrid:
    """Opaque identifiers for a finite set of underlying states."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("grid needs at least one lambda")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("lambda labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def of_size(cls, n: int) -> "LambdaGrid":
        if n < 1:
            raise ValueError("grid size must be positive")
        return cls(tuple(f"l{i}" for i in range(n)))


@dataclass(frozen=True, eq=False)
class EpistemicDistribution:
    """Probability weights over a lambda grid."""

    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=float)
        if arr.ndim != 1:
            raise ValueError("weights must be a flat sequence")
        if np.any(arr < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(arr.sum() - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"weights must sum to 1, got {arr.sum()!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0.0)


@dataclass(frozen=True, eq=False)
class ResponseTable:
    """Outcome probabilities per lambda pair: shape (N, N, 4), row-stochastic."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 4:
            raise ValueError(f"expected shape (N, N, 4), got {arr.shape}")
        if np.any(arr < 0.0):
            raise ValueError("response probabilities must be nonnegative")
        sums = arr.sum(axis=2)
        if np.max(np.abs(sums - 1.0)) > WEIGHT_ATOL:
            raise ValueError("each response row must sum to 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def size(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True, eq=False)
class OnticModel:
    """Grid plus the two single-system distributions, and optionally a table."""

    grid: LambdaGrid
    mu_zero: EpistemicDistribution
    mu_plus: EpistemicDistribution
    response: ResponseTable | None = None

    def __post_init__(self):
        n = self.grid.size
        if self.mu_zero.size != n or self.mu_plus.size != n:
            raise ValueError("distributions must live on the model grid")
        if self.response is not None and self.response.size != n:
            raise ValueError("response table must live on the model grid")

    def distribution_for(self, choice: PrepChoice) -> EpistemicDistribution:
        return self.mu_zero if choice is PrepChoice.ZERO else self.mu_plus

    @classmethod
    def from_weights(cls, mu_zero, mu_plus, response: ResponseTable | None = None) -> "OnticModel":
        mu0 = EpistemicDistribution(np.asarray(mu_zero, dtype=float))
        mup = EpistemicDistribution(np.asarray(mu_plus, dtype=float))
        if mu0.size != mup.size:
            raise ValueError("weight vectors must have equal length")
        return cls(LambdaGrid.of_size(mu0.size), mu0, mup, response)


@dataclass(frozen=True, eq=False)
class Constraint:
    """One forbidden-outcome condition as a linear form over table entries.

    The form sum_ab coefficients[a, b] * table[a, b, outcome_index - 1] must
    vanish; coefficients are the product weights of the preparation.
    """

    preparation: Preparation
    outcome_index: int
    coefficients: np.ndarray

    def violation(self, table: ResponseTable) -> float:
        return float(np.sum(self.coefficients * table.probs[:, :, self.outcome_index - 1]))


@dataclass(frozen=True, eq=False)
class FeasibilityVerdict:
    feasible: bool
    witness_index: int | None = None
    witness_label: str | None = None
    table: ResponseTable | None = None


@dataclass(frozen=True)
class ViolationEstimate:
    """Empirical forbidden-outcome frequency; ``empty`` flags a zero-run call."""

    frequency: float
    runs: int

    @property
    def empty(self) -> bool:
        return self.runs == 0


def overlap_weight(m: OnticModel) -> float:
    """Total weight the two distributions share: sum of pointwise minima."""
    return float(np.minimum(m.mu_zero.weights, m.mu_plus.weights).sum())


def forbidden_constraints(m: OnticModel) -> tuple[Constraint, ...]:
    """The four zero conditions an admissible response table must satisfy."""
    table = forbidden_table()
    out = []
    for prep in PREPARATIONS:
        mu_a = m.distribution_for(prep.a_choice).weights
        mu_b = m.distribution_for(prep.b_choice).weights
        out.append(
            Constraint(
                preparation=prep,
                outcome_index=table[prep],
                coefficients=np.outer(mu_a, mu_b),
            )
        )
    return tuple(out)


def _forced_zero_mask(m: OnticModel) -> np.ndarray:
    """Boolean (N, N, 4): outcomes forced to zero by some preparation's support."""
    n = m.grid.size
    mask = np.zeros((n, n, 4), dtype=bool)
    for constraint in forbidden_constraints(m):
        cells = constraint.coefficients > 0.0
        mask[:, :, constraint.outcome_index - 1] |= cells
    return mask


def feasibility(m: OnticModel) -> FeasibilityVerdict:
    """Decide whether any row-stochastic response table satisfies the model.

    Support analysis is exact: the model is infeasible iff some lambda
    carries positive weight under both distributions (its diagonal pair has
    all four outcomes forced to zero); otherwise a concrete table is built
    by spreading each row uniformly over its unforced outcomes.
    """
    if m.response is not None:
        raise ValueError("feasibility treats the response table as the unknown")
    shared = np.flatnonzero((m.mu_zero.weights > 0.0) & (m.mu_plus.weights > 0.0))
    if shared.size > 0:
        star = int(shared[0])
        return FeasibilityVerdict(
            feasible=False,
            witness_index=star,
            witness_label=m.grid.labels[star],
        )
    mask = _forced_zero_mask(m)
    allowed = ~mask
    counts = allowed.sum(axis=2)
    if np.any(counts == 0):
        raise RuntimeError("disjoint supports left a fully forced cell; model logic broken")
    probs = allowed.astype(float) / counts[:, :, None]
    return FeasibilityVerdict(feasible=True, table=ResponseTable(probs))


def expected_violation(m: OnticModel, response: ResponseTable) -> float:
    """Exact forbidden-outcome probability under uniform preparation choice."""
    constraints = forbidden_constraints(m)
    return float(sum(c.violation(response) for c in constraints) / len(constraints))


def monte_carlo_violation(
    m: OnticModel, response: ResponseTable, runs: int, seed: int
) -> ViolationEstimate:
    """Empirical forbidden-outcome frequency over seeded simulated runs.

    Each run picks one of the four preparations uniformly, samples a lambda
    for each side from that side's distribution, samples an outcome from the
    response row, and scores a hit when the outcome is the preparation's
    forbidden one. Deterministic for a given seed.
    """
    if runs < 0:
        raise ValueError("runs must be nonnegative")
    if response.size != m.grid.size:
        raise ValueError("response table must live on the model grid")
    if runs == 0:
        return ViolationEstimate(frequency=0.0, runs=0)

    rng = np.random.default_rng(seed)
    table = forbidden_table()
    forbidden_idx = np.array([table[p] - 1 for p in PREPARATIONS])
    a_is_plus = np.array([p.a_choice is PrepChoice.PLUS for p in PREPARATIONS])
    b_is_plus = np.array([p.b_choice is PrepChoice.PLUS for p in PREPARATIONS])

    n = m.grid.size
    prep_draw = rng.integers(0, 4, size=runs)
    lam_a = np.empty(runs, dtype=np.int64)
    lam_b = np.empty(runs, dtype=np.int64)
    for use_plus, lam, side_mask in (
        (False, lam_a, ~a_is_plus[prep_draw]),
        (True, lam_a, a_is_plus[prep_draw]),
        (False, lam_b, ~b_is_plus[prep_draw]),
        (True, lam_b, b_is_plus[prep_draw]),
    ):
        count = int(side_mask.sum())
        if count == 0:
            continue
        mu = (m.mu_plus if use_plus else m.mu_zero).weights
        lam[side_mask] = rng.choice(n, size=count, p=mu)

    rows = response.probs[lam_a, lam_b]
    cdf = np.cumsum(rows, axis=1)
    draws = rng.random(runs)
    outcomes = np.minimum((draws[:, None] > cdf).sum(axis=1), 3)
    hits = outcomes == forbidden_idx[prep_draw]
    return ViolationEstimate(frequency=float(hits.mean()), runs=runs)


def load_model(path) -> OnticModel:
    """Read a model from the plain-text format: ``N=<int>`` then two weight lines."""
    text = Path(path).read_text()
    return parse_model(text)


def parse_model(text: str) -> OnticModel:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ValueError(f"model file must have 3 nonempty lines, got {len(lines)}")
    header = lines[0].replace(" ", "")
    if not header.startswith("N="):
        raise ValueError("first line must be N=<int>")
    try:
        n = int(header[2:])
    except ValueError as exc:
        raise ValueError(f"bad grid size in header: {lines[0]!r}") from exc
    if n < 1:
        raise ValueError("grid size must be positive")
    rows = []
    for ln in lines[1:]:
        try:
            values = [float(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ValueError(f"bad weight line: {ln!r}") from exc
        if len(values) != n:
            raise ValueError(f"expected {n} weights per line, got {len(values)}")
        rows.append(values)
    return OnticModel.from_weights(rows[0], rows[1])
