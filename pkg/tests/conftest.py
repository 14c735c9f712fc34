"""Shared data generators for the test suite.

Probabilities are drawn from rational grids (k / 1000 by default), which keeps
exact arithmetic fast and mirrors how population quantities get stated in
practice.  All generators take an explicit `random.Random` so every test pins
its own seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rulebounds import (
    CovariateDistribution,
    Coarsening,
    ExperimentalMarginals,
    JointResponseModel,
    Scenario,
    TreatmentRule,
    validate_scenario,
)

GRID = 1000

COV_LABELS = ("a", "b", "c", "d")
TREAT_LABELS = ("0", "1", "2")


def grid_probability(rng: random.Random, grid: int = GRID) -> Fraction:
    return Fraction(rng.randint(0, grid), grid)


def open_grid_probability(rng: random.Random, lower: Fraction, upper: Fraction,
                          grid: int = GRID) -> Fraction | None:
    """Uniform grid point strictly inside (lower, upper), or None when the gap is empty."""
    lo_ticks = int(lower * grid) + 1
    hi_ticks = -int(-upper * grid) - 1  # ceil - 1
    if lo_ticks > hi_ticks:
        return None
    return Fraction(rng.randint(lo_ticks, hi_ticks), grid)


def random_distribution(rng: random.Random, labels: tuple[str, ...]) -> CovariateDistribution:
    weights = [Fraction(rng.randint(1, GRID), GRID) for _ in labels]
    total = sum(weights)
    return CovariateDistribution({lab: w / total for lab, w in zip(labels, weights)})


def random_binary_scenario(rng: random.Random, *, sorted_rates: bool = False) -> Scenario:
    """2x2 scenario with interior covariate masses and grid success rates."""
    mass_a = Fraction(rng.randint(1, GRID - 1), GRID)
    q0 = grid_probability(rng)
    q1 = grid_probability(rng)
    if sorted_rates and q0 > q1:
        q0, q1 = q1, q0
    return validate_scenario(
        {
            "covariates": ["a", "b"],
            "treatments": ["0", "1"],
            "covariate_distribution": {"a": mass_a, "b": 1 - mass_a},
            "experimental_marginals": {"0": q0, "1": q1},
        }
    )


def random_scenario(rng: random.Random, n_cov: int, n_treat: int) -> Scenario:
    covs = COV_LABELS[:n_cov]
    treats = TREAT_LABELS[:n_treat]
    distribution = random_distribution(rng, covs)
    return validate_scenario(
        {
            "covariates": list(covs),
            "treatments": list(treats),
            "covariate_distribution": dict(distribution.mass),
            "experimental_marginals": {t: grid_probability(rng) for t in treats},
        }
    )


def random_joint(rng: random.Random, n_cov: int, n_treat: int) -> JointResponseModel:
    covs = COV_LABELS[:n_cov]
    treats = TREAT_LABELS[:n_treat]
    return JointResponseModel(
        random_distribution(rng, covs),
        {t: {c: grid_probability(rng) for c in covs} for t in treats},
    )


def random_coarsening(rng: random.Random, covariates: tuple[str, ...]) -> Coarsening:
    n_cells = rng.randint(1, len(covariates))
    cells = [f"w{i}" for i in range(n_cells)]
    # Every cell gets at least one member so the partition has exactly n_cells parts.
    members = list(covariates)
    rng.shuffle(members)
    mapping = {cov: cells[i] for i, cov in enumerate(members[:n_cells])}
    for cov in members[n_cells:]:
        mapping[cov] = rng.choice(cells)
    return Coarsening(tuple(mapping.items()))


# --- binary case taxonomy -------------------------------------------------

FINE_GRID = 10**6


def strict_case_parameters(rng: random.Random, case: int) -> tuple[Fraction, Fraction, Fraction]:
    """(mass_a, q0, q1) strictly inside the ordering chain of ``case``.

    Strict interior sampling: every chain inequality is strict, endpoints 0 and
    1 excluded, q0 < q1 and mass_a < mass_b.  The classifier must report
    exactly ``case`` on these draws.
    """
    zero, one, half = Fraction(0), Fraction(1), Fraction(1, 2)
    while True:
        pa = open_grid_probability(rng, zero, half, FINE_GRID)
        if pa is None:
            continue
        pb = 1 - pa
        if case == 1:
            q1 = open_grid_probability(rng, zero, pa, FINE_GRID)
            q0 = None if q1 is None else open_grid_probability(rng, zero, q1, FINE_GRID)
        elif case == 2:
            q0 = open_grid_probability(rng, zero, pa, FINE_GRID)
            q1 = open_grid_probability(rng, pa, pb, FINE_GRID)
        elif case == 3:
            q0 = open_grid_probability(rng, zero, pa, FINE_GRID)
            q1 = open_grid_probability(rng, pb, one, FINE_GRID)
        elif case == 4:
            q0 = open_grid_probability(rng, pa, pb, FINE_GRID)
            q1 = None if q0 is None else open_grid_probability(rng, q0, pb, FINE_GRID)
        elif case == 5:
            q0 = open_grid_probability(rng, pa, pb, FINE_GRID)
            q1 = open_grid_probability(rng, pb, one, FINE_GRID)
        elif case == 6:
            q0 = open_grid_probability(rng, pb, one, FINE_GRID)
            q1 = None if q0 is None else open_grid_probability(rng, q0, one, FINE_GRID)
        else:
            raise ValueError(case)
        if q0 is not None and q1 is not None:
            return pa, q0, q1


def binary_scenario_from_parameters(
    mass_a: Fraction, q0: Fraction, q1: Fraction
) -> Scenario:
    return validate_scenario(
        {
            "covariates": ["a", "b"],
            "treatments": ["0", "1"],
            "covariate_distribution": {"a": mass_a, "b": 1 - mass_a},
            "experimental_marginals": {"0": q0, "1": q1},
        }
    )


def expected_binary_dominated(
    case: int, mass_a: Fraction, q0: Fraction, q1: Fraction
) -> set[TreatmentRule]:
    """Dominated set implied by the printed per-case conditions.

    Conditions stated for normalized inputs (q0 <= q1, mass_a <= mass_b).
    Boundary equalities count as dominated (weak first condition, strict
    reverse gap), matching the dominance tie rule; the reverse gaps are
    strictly positive on the strict-interior samples these conditions are
    evaluated on.
    """
    mass_b = 1 - mass_a
    dominated = set()
    if q0 < q1:
        dominated.add(TreatmentRule({"a": "0", "b": "0"}))
    if case in (2, 3, 4, 5) and mass_a + q0 <= q1:
        dominated.add(TreatmentRule({"a": "1", "b": "0"}))
    if case == 3 and mass_b + q0 <= q1:
        dominated.add(TreatmentRule({"a": "0", "b": "1"}))
    return dominated


RULE_00 = TreatmentRule({"a": "0", "b": "0"})
RULE_01 = TreatmentRule({"a": "0", "b": "1"})
RULE_10 = TreatmentRule({"a": "1", "b": "0"})
RULE_11 = TreatmentRule({"a": "1", "b": "1"})


@pytest.fixture
def perry_half() -> Scenario:
    return binary_scenario_from_parameters(
        Fraction(1, 2), Fraction("0.49"), Fraction("0.67")
    )


@pytest.fixture
def perry_ninety() -> Scenario:
    return binary_scenario_from_parameters(
        Fraction(1, 10), Fraction("0.49"), Fraction("0.67")
    )


@pytest.fixture
def hypothetical_world() -> JointResponseModel:
    """The best-case/worst-case world consistent with the bundled data."""
    distribution = CovariateDistribution({"a": Fraction(1, 2), "b": Fraction(1, 2)})
    return JointResponseModel(
        distribution,
        {
            "0": {"a": Fraction("0.98"), "b": 0},
            "1": {"a": Fraction("0.34"), "b": 1},
        },
    )
