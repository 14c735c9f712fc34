"""Exact pairwise dominance between rules, partition, and maximin selection.

A rule is dominated when some other rule is at least as good under every joint
model consistent with the data and strictly better under at least one.  The
two rules' values move together through the common unknown joint, so comparing
their intervals endpoint-to-endpoint is not enough; the decisive quantity is
the best-case gap

    G(z, z') = max over consistent joints of  value(z) - value(z').

The gap is an exact linear-program value with a closed greedy form: the
objective and the constraint set both separate by treatment, and within a
treatment the success mass q_t is allocated first to cells where only ``z``
assigns t (coefficient +1, capacity S+), then to cells where both or neither
do (coefficient 0, capacity S0), and only then to cells where only ``z'``
assigns t (coefficient -1).  Hence per treatment

    g_t = min(q_t, S+) - max(0, q_t - S+ - S0),        G = sum_t g_t.

``z`` is dominated by ``z'`` exactly when G(z, z') <= 0 and G(z', z) > 0: the
first condition makes z weakly worse everywhere, the second strictly worse
somewhere.  G(z, z') = 0 with G(z', z) > 0 therefore still counts as
dominated, while G = 0 both ways means the two rules are equivalent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from rulebounds.bounds import rule_value_bounds, _check_rule
from rulebounds.distributions import (
    CovariateDistribution,
    ExperimentalMarginals,
    Interval,
    JointResponseModel,
    Scenario,
    TreatmentRule,
    enumerate_rules,
    RULE_ENUMERATION_CAP,
)

_ZERO = Fraction(0)


class PairRelation(enum.Enum):
    """How one rule compares to another over every consistent joint model."""

    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    @property
    def mirror(self) -> "PairRelation":
        if self is PairRelation.DOMINATES:
            return PairRelation.DOMINATED_BY
        if self is PairRelation.DOMINATED_BY:
            return PairRelation.DOMINATES
        return self


def max_gap(
    distribution: CovariateDistribution,
    marginals: ExperimentalMarginals,
    rule: TreatmentRule,
    other: TreatmentRule,
) -> Fraction:
    """Best-case advantage of ``rule`` over ``other`` across consistent joints.

    Signed: negative means ``rule`` is worse than ``other`` in every
    consistent joint model.
    """
    _check_rule(distribution, marginals, rule)
    _check_rule(distribution, marginals, other)
    total = _ZERO
    for treatment in marginals.labels:
        plus = _ZERO
        zero = _ZERO
        for cov in distribution.labels:
            coefficient = (rule.treatment_for(cov) == treatment) - (
                other.treatment_for(cov) == treatment
            )
            if coefficient > 0:
                plus += distribution.probability(cov)
            elif coefficient == 0:
                zero += distribution.probability(cov)
        q = marginals.success_rate(treatment)
        total += min(q, plus) - max(_ZERO, q - plus - zero)
    return total


def gap_witness(
    distribution: CovariateDistribution,
    marginals: ExperimentalMarginals,
    rule: TreatmentRule,
    other: TreatmentRule,
) -> JointResponseModel:
    """A consistent joint model attaining `max_gap` for the same arguments.

    Built by the same greedy allocation: per treatment the success mass fills
    +1 cells first, then 0 cells, then -1 cells, in covariate order within
    each class.  Useful for inspecting the world in which ``rule`` does best
    relative to ``other``.
    """
    _check_rule(distribution, marginals, rule)
    _check_rule(distribution, marginals, other)
    conditional: dict[str, dict[str, Fraction]] = {}
    for treatment in marginals.labels:
        def fill_class(cov: str) -> int:
            coefficient = (rule.treatment_for(cov) == treatment) - (
                other.treatment_for(cov) == treatment
            )
            return -coefficient  # +1 cells first, then 0, then -1

        ordered = sorted(
            distribution.labels,
            key=lambda cov: (fill_class(cov), distribution.labels.index(cov)),
        )
        remaining = marginals.success_rate(treatment)
        row: dict[str, Fraction] = {}
        for cov in ordered:
            capacity = distribution.probability(cov)
            take = min(remaining, capacity)
            row[cov] = take / capacity if capacity > 0 else _ZERO
            remaining -= take
        conditional[treatment] = {cov: row[cov] for cov in distribution.labels}
    return JointResponseModel(distribution, conditional)


def relate(scenario: Scenario, rule: TreatmentRule, other: TreatmentRule) -> PairRelation:
    """Classify the pair: dominates / dominated_by / equivalent / incomparable."""
    forward = max_gap(scenario.distribution, scenario.marginals, rule, other)
    backward = max_gap(scenario.distribution, scenario.marginals, other, rule)
    return _relation_from_gaps(forward, backward)


def _relation_from_gaps(forward: Fraction, backward: Fraction) -> PairRelation:
    if forward == 0 and backward == 0:
        return PairRelation.EQUIVALENT
    if forward <= 0 < backward:
        return PairRelation.DOMINATED_BY
    if backward <= 0 < forward:
        return PairRelation.DOMINATES
    return PairRelation.INCOMPARABLE


@dataclass(frozen=True)
class RuleAnalysis:
    """Per-rule row of a dominance report."""

    rule: TreatmentRule
    bounds: Interval
    dominated_by: tuple[TreatmentRule, ...]
    maximin: bool

    @property
    def dominated(self) -> bool:
        return bool(self.dominated_by)


@dataclass(frozen=True)
class DominanceReport:
    """Dominance partition of every feasible rule, rows in enumeration order."""

    rules: tuple[RuleAnalysis, ...]

    def __post_init__(self) -> None:
        undominated = [row for row in self.rules if not row.dominated]
        assert undominated, "a finite rule set always has an undominated rule"
        assert sum(row.maximin for row in self.rules) == 1, "exactly one maximin flag"

    @property
    def dominated_rules(self) -> tuple[TreatmentRule, ...]:
        return tuple(row.rule for row in self.rules if row.dominated)

    @property
    def undominated_rules(self) -> tuple[TreatmentRule, ...]:
        return tuple(row.rule for row in self.rules if not row.dominated)

    @property
    def maximin(self) -> RuleAnalysis:
        return next(row for row in self.rules if row.maximin)


def dominance_partition(scenario: Scenario, cap: int = RULE_ENUMERATION_CAP) -> DominanceReport:
    """Flag every rule dominated by some other feasible rule, with witnesses.

    Rows carry the rule's sharp bounds and the list of rules dominating it;
    exactly one row carries the maximin flag.  Pair evaluations are
    independent, so their order (or parallelization) cannot change the result.
    """
    rules = enumerate_rules(scenario.covariates, scenario.treatments, cap)
    gaps: dict[tuple[int, int], Fraction] = {}
    for i, rule in enumerate(rules):
        for j, other in enumerate(rules):
            if i != j:
                gaps[i, j] = max_gap(scenario.distribution, scenario.marginals, rule, other)

    bounds = [rule_value_bounds(scenario.distribution, scenario.marginals, rule) for rule in rules]
    maximin_index = max(range(len(rules)), key=lambda i: (bounds[i].lower, -i))

    rows = []
    for i, rule in enumerate(rules):
        dominators = tuple(
            rules[j]
            for j in range(len(rules))
            if j != i and _relation_from_gaps(gaps[i, j], gaps[j, i]) is PairRelation.DOMINATED_BY
        )
        rows.append(RuleAnalysis(rule, bounds[i], dominators, maximin=i == maximin_index))
    return DominanceReport(tuple(rows))


def maximin_rule(scenario: Scenario, cap: int = RULE_ENUMERATION_CAP) -> TreatmentRule:
    """The rule with the greatest lower bound; ties go to enumeration order."""
    rules = enumerate_rules(scenario.covariates, scenario.treatments, cap)
    best = rules[0]
    best_lower = rule_value_bounds(scenario.distribution, scenario.marginals, best).lower
    for rule in rules[1:]:
        lower = rule_value_bounds(scenario.distribution, scenario.marginals, rule).lower
        if lower > best_lower:
            best, best_lower = rule, lower
    return best
