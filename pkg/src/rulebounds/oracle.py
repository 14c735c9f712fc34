"""Independent brute-force verification via polytope vertex enumeration.

For one treatment the set of cell-level success vectors consistent with the
data is the polytope

    { p in [0,1]^X : sum_x mass_x * p_x = q },

and any linear objective over it is extremized at a vertex.  Vertices have at
most one coordinate strictly inside (0, 1): fix a 0/1 pattern on all but one
cell, solve the remaining cell from the mass constraint, and keep the result
when it lands in [0, 1].  That gives at most |X| * 2^(|X|-1) candidates per
treatment, exact and dependency-free, which is the point: this module must not
share code with the closed forms it certifies.

Rule-level quantities (a rule's attainable value range, the attainable range
of a difference between two rules) decompose treatment by treatment because
the constraint set is a product over treatments, so per-treatment extrema add.
All arithmetic is exact, and every reported witness is a complete joint model
that marginalizes back to the stated data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from rulebounds.bounds import rule_value_bounds, _check_rule
from rulebounds.distributions import (
    CovariateDistribution,
    Interval,
    JointResponseModel,
    Scenario,
    TreatmentRule,
    as_probability,
)
from rulebounds.dominance import PairRelation, _relation_from_gaps
from rulebounds.errors import InfeasibleError, SizeLimitError

_ZERO = Fraction(0)
_ONE = Fraction(1)

#: Default cap on covariate count for vertex enumeration.
VERTEX_COVARIATE_CAP = 16

#: Agreement tolerance between oracle extrema and closed-form bounds.  The
#: arithmetic is exact, so agreement is expected to be exact; the tolerance is
#: headroom the certificates are allowed, not slack they need.
SHARPNESS_TOLERANCE = Fraction(1, 10**9)


@dataclass(frozen=True)
class FeasibleVertex:
    """Extreme point of one treatment's feasibility polytope.

    ``levels`` aligns with ``covariates``; at most one entry lies strictly
    inside (0, 1).  The defining mass constraint holds exactly (the enumerator
    solves it in rational arithmetic).
    """

    covariates: tuple[str, ...]
    levels: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.covariates) != len(self.levels):
            raise InfeasibleError("vertex levels do not align with covariates")
        fractional = 0
        for level in self.levels:
            if not 0 <= level <= 1:
                raise InfeasibleError(f"vertex level {float(level)} outside [0, 1]")
            if 0 < level < 1:
                fractional += 1
        if fractional > 1:
            raise InfeasibleError(
                f"vertex has {fractional} fractional coordinates, at most 1 allowed"
            )

    def as_row(self) -> dict[str, Fraction]:
        return dict(zip(self.covariates, self.levels))


@lru_cache(maxsize=4096)
def _feasible_vertices(
    covariates: tuple[str, ...], masses: tuple[Fraction, ...], q: Fraction
) -> tuple[FeasibleVertex, ...]:
    """All polytope vertices for one treatment, in deterministic order.

    Zero-mass cells do not enter the constraint; they are pinned to level 0,
    which never affects any objective through this polytope.
    """
    support = [i for i, mass in enumerate(masses) if mass > 0]
    vertices = []
    for free in support:
        rest = [i for i in support if i != free]
        for pattern in itertools.product((_ZERO, _ONE), repeat=len(rest)):
            assigned = sum(
                (masses[i] * bit for i, bit in zip(rest, pattern)), _ZERO
            )
            level = (q - assigned) / masses[free]
            if not 0 <= level <= 1:
                continue
            levels = [_ZERO] * len(covariates)
            for i, bit in zip(rest, pattern):
                levels[i] = bit
            levels[free] = level
            vertices.append(FeasibleVertex(covariates, tuple(levels)))
    return tuple(vertices)


@dataclass(frozen=True)
class VertexExtrema:
    """Exact extrema of a linear objective over one treatment's polytope."""

    minimum: Fraction
    maximum: Fraction
    minimizer: FeasibleVertex
    maximizer: FeasibleVertex


def vertex_extremize(
    distribution: CovariateDistribution,
    q: object,
    coefficients: Mapping[str, object],
    cap: int = VERTEX_COVARIATE_CAP,
) -> VertexExtrema:
    """Exact min and max of  sum_x c_x * mass_x * p_x  over the polytope for q.

    ``coefficients`` maps covariate labels to arbitrary rational weights
    (missing labels count as 0).  The extrema are exact because the objective
    is linear and every vertex is visited.  Raises :class:`InfeasibleError`
    when ``q`` is not a probability and :class:`SizeLimitError` when the
    covariate count exceeds ``cap``.
    """
    if len(distribution.labels) > cap:
        raise SizeLimitError(
            f"vertex enumeration over {len(distribution.labels)} covariates "
            f"exceeds the cap of {cap}"
        )
    try:
        q_value = as_probability(q, "target success rate")
    except Exception as exc:
        raise InfeasibleError(f"no response model exists for target {q!r}") from exc
    weights = {}
    for cov in distribution.labels:
        raw = coefficients.get(cov, 0)
        weights[cov] = Fraction(raw) * distribution.probability(cov)  # type: ignore[arg-type]

    best_min = best_max = None
    arg_min = arg_max = None
    for vertex in _feasible_vertices(
        distribution.labels, tuple(distribution.probability(c) for c in distribution.labels), q_value
    ):
        value = sum(
            (weights[cov] * level for cov, level in zip(vertex.covariates, vertex.levels)),
            _ZERO,
        )
        if best_min is None or value < best_min:
            best_min, arg_min = value, vertex
        if best_max is None or value > best_max:
            best_max, arg_max = value, vertex
    assert best_min is not None and best_max is not None and arg_min and arg_max
    return VertexExtrema(best_min, best_max, arg_min, arg_max)


@dataclass(frozen=True)
class SharpnessCertificate:
    """Outcome of checking closed-form bounds against oracle extrema for one rule.

    ``passed`` is a report outcome, not an error: FAIL certificates are
    returned, never raised.  The witnesses are complete joint models attaining
    the oracle extrema.
    """

    rule: TreatmentRule
    closed_form: Interval
    oracle_lower: Fraction
    oracle_upper: Fraction
    lower_witness: JointResponseModel
    upper_witness: JointResponseModel
    tolerance: Fraction

    @property
    def passed(self) -> bool:
        return (
            abs(self.oracle_lower - self.closed_form.lower) <= self.tolerance
            and abs(self.oracle_upper - self.closed_form.upper) <= self.tolerance
        )


def verify_sharpness(
    scenario: Scenario,
    rule: TreatmentRule,
    tolerance: Fraction = SHARPNESS_TOLERANCE,
) -> SharpnessCertificate:
    """Certify both endpoints of `rule_value_bounds` by explicit construction.

    Extremizes the rule's value treatment by treatment (indicator objective on
    the rule's assignment region) and assembles the per-treatment extremal
    vertices into full joint models, so a PASS comes with inspectable worlds
    attaining each endpoint.
    """
    _check_rule(scenario.distribution, scenario.marginals, rule)
    lower_total = _ZERO
    upper_total = _ZERO
    lower_rows: dict[str, dict[str, Fraction]] = {}
    upper_rows: dict[str, dict[str, Fraction]] = {}
    for treatment in scenario.treatments.labels:
        indicator = {
            cov: 1 if rule.treatment_for(cov) == treatment else 0
            for cov in scenario.covariates.labels
        }
        extrema = vertex_extremize(
            scenario.distribution, scenario.marginals.success_rate(treatment), indicator
        )
        lower_total += extrema.minimum
        upper_total += extrema.maximum
        lower_rows[treatment] = extrema.minimizer.as_row()
        upper_rows[treatment] = extrema.maximizer.as_row()
    return SharpnessCertificate(
        rule=rule,
        closed_form=rule_value_bounds(scenario.distribution, scenario.marginals, rule),
        oracle_lower=lower_total,
        oracle_upper=upper_total,
        lower_witness=JointResponseModel(scenario.distribution, lower_rows),
        upper_witness=JointResponseModel(scenario.distribution, upper_rows),
        tolerance=tolerance,
    )


def verify_dominance(
    scenario: Scenario, rule: TreatmentRule, other: TreatmentRule
) -> PairRelation:
    """Pair relation computed from exact extrema of the value difference.

    Independent of the greedy gap formula in `rulebounds.dominance`: the
    difference value(rule) - value(other) is extremized per treatment over the
    enumerated vertices with +/-1 coefficients, and the summed extrema decide
    the relation.
    """
    _check_rule(scenario.distribution, scenario.marginals, rule)
    _check_rule(scenario.distribution, scenario.marginals, other)
    diff_min = _ZERO
    diff_max = _ZERO
    for treatment in scenario.treatments.labels:
        coefficients = {
            cov: (rule.treatment_for(cov) == treatment)
            - (other.treatment_for(cov) == treatment)
            for cov in scenario.covariates.labels
        }
        extrema = vertex_extremize(
            scenario.distribution, scenario.marginals.success_rate(treatment), coefficients
        )
        diff_min += extrema.minimum
        diff_max += extrema.maximum
    # forward gap = max(value diff); backward gap = max of the negated diff.
    return _relation_from_gaps(diff_max, -diff_min)


def sample_consistent_joint(scenario: Scenario, rng) -> JointResponseModel:
    """Random joint model whose marginals reproduce the scenario's exactly.

    Each treatment row is a random convex combination of two random feasibility
    vertices; the mass constraint is linear, so the mixture stays on it.  Used
    by coverage checks that need consistent worlds, not uniform sampling.
    """
    conditional = {}
    masses = tuple(scenario.distribution.probability(c) for c in scenario.covariates.labels)
    for treatment in scenario.treatments.labels:
        vertices = _feasible_vertices(
            scenario.covariates.labels, masses, scenario.marginals.success_rate(treatment)
        )
        first = vertices[rng.randrange(len(vertices))]
        second = vertices[rng.randrange(len(vertices))]
        weight = Fraction(rng.randint(0, 1000), 1000)
        conditional[treatment] = {
            cov: weight * a + (1 - weight) * b
            for cov, a, b in zip(first.covariates, first.levels, second.levels)
        }
    return JointResponseModel(scenario.distribution, conditional)
