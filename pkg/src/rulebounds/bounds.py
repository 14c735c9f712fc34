"""Sharp bounds on a rule's mean outcome from covariate-blind experimental data.

The experiment pins down each treatment's population success rate q_t but says
nothing about how that success splits across covariate cells.  For a rule with
assignment regions A_t = {x : rule(x) = t} of total mass m_t, every joint model
consistent with the data gives the rule a mean outcome inside

    sum_t max(0, q_t - (1 - m_t))   <=   value   <=   sum_t min(q_t, m_t),

and both endpoints are attained: the constraint set is a product over
treatments, and within each treatment the success mass q_t can be pushed into
or out of A_t one cell at a time (a fractional allocation).  Constant rules
collapse to the point [q_t, q_t]; the experiment identifies their value.

For two covariates and two treatments the interval shape depends only on how
the two success rates interleave with the two cell masses.  After normalizing
so the first treatment has the lower rate (q0 <= q1) and the first covariate
the lower mass (pa <= pb), exactly six orderings are possible:

    case 1:  q0 <= q1 <= pa <= pb
    case 2:  q0 <= pa <= q1 <= pb
    case 3:  q0 <= pa <= pb <= q1
    case 4:  pa <= q0 <= q1 <= pb
    case 5:  pa <= q0 <= pb <= q1
    case 6:  pa <= pb <= q0 <= q1

`classify_binary_case` finds the ordering (ties resolve to the lowest case
number) and `binary_case_bounds` evaluates the printable per-case closed forms,
which agree exactly with `rule_value_bounds`.

All arithmetic is exact rational arithmetic; classifier comparisons are exact,
with no epsilon, since inputs are user-stated population quantities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from rulebounds.distributions import (
    CovariateDistribution,
    ExperimentalMarginals,
    Interval,
    TreatmentRule,
)
from rulebounds.errors import CaseMismatchError, NotBinaryError, UnknownLabelError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _check_rule(
    distribution: CovariateDistribution,
    marginals: ExperimentalMarginals,
    rule: TreatmentRule,
) -> None:
    """Totality over the covariate cells, codomain inside the treatment set."""
    for cov in distribution.labels:
        treatment = rule.treatment_for(cov)
        if treatment not in marginals.success:
            raise UnknownLabelError(
                f"rule assigns unknown treatment {treatment!r} to covariate {cov!r}"
            )


def rule_value_bounds(
    distribution: CovariateDistribution,
    marginals: ExperimentalMarginals,
    rule: TreatmentRule,
) -> Interval:
    """Sharp identified interval for the mean outcome of ``rule``.

    Per treatment t with region mass m_t: at most min(q_t, m_t) of the success
    mass can land inside the region, and at least max(0, q_t - (1 - m_t)) must,
    because the cells outside the region can absorb only 1 - m_t of it.
    """
    _check_rule(distribution, marginals, rule)
    lower = _ZERO
    upper = _ZERO
    for treatment in marginals.labels:
        q = marginals.success_rate(treatment)
        region_mass = distribution.mass_of(
            cov for cov in distribution.labels if rule.treatment_for(cov) == treatment
        )
        lower += max(_ZERO, q - (_ONE - region_mass))
        upper += min(q, region_mass)
    return Interval(lower, upper)


@dataclass(frozen=True)
class BinaryCaseId:
    """One of the six orderings of (q0, q1, pa, pb) for a 2x2 scenario.

    Records the relabeling used to normalize the scenario: ``covariate_order``
    lists the two covariates by ascending mass and ``treatment_order`` the two
    treatments by ascending success rate (original order kept on ties).  The
    case formulas and `split_rules` are stated in this normalized labeling.
    """

    case_number: int
    covariate_order: tuple[str, str]
    treatment_order: tuple[str, str]

    def __post_init__(self) -> None:
        if self.case_number not in range(1, 7):
            raise CaseMismatchError(f"case number must be 1..6, got {self.case_number!r}")
        if len(set(self.covariate_order)) != 2 or len(set(self.treatment_order)) != 2:
            raise CaseMismatchError("case id needs two distinct covariates and treatments")

    def split_rules(self) -> tuple[TreatmentRule, TreatmentRule]:
        """The two non-constant rules, in normalized labels.

        First: lower-rate treatment on the lower-mass cell, higher on higher.
        Second: the reverse assignment.
        """
        (cov_lo, cov_hi) = self.covariate_order
        (t_lo, t_hi) = self.treatment_order
        straight = TreatmentRule(((cov_lo, t_lo), (cov_hi, t_hi)))
        crossed = TreatmentRule(((cov_lo, t_hi), (cov_hi, t_lo)))
        return straight, crossed


def _require_binary(
    distribution: CovariateDistribution, marginals: ExperimentalMarginals
) -> None:
    if len(distribution.labels) != 2 or len(marginals.labels) != 2:
        raise NotBinaryError(
            f"binary case analysis needs 2 covariates and 2 treatments, "
            f"got {len(distribution.labels)} and {len(marginals.labels)}"
        )


def _chain_holds(case: int, q0: Fraction, q1: Fraction, pa: Fraction, pb: Fraction) -> bool:
    if case == 1:
        return q0 <= q1 <= pa <= pb
    if case == 2:
        return q0 <= pa <= q1 <= pb
    if case == 3:
        return q0 <= pa <= pb <= q1
    if case == 4:
        return pa <= q0 <= q1 <= pb
    if case == 5:
        return pa <= q0 <= pb <= q1
    if case == 6:
        return pa <= pb <= q0 <= q1
    raise CaseMismatchError(f"case number must be 1..6, got {case!r}")


def classify_binary_case(
    distribution: CovariateDistribution, marginals: ExperimentalMarginals
) -> BinaryCaseId:
    """Normalize a 2x2 scenario and identify which of the six orderings holds.

    When adjacent quantities tie, more than one chain is satisfied; the lowest
    applicable case number is reported, which keeps classification
    deterministic without affecting any bound values.
    """
    _require_binary(distribution, marginals)
    cov_a, cov_b = distribution.labels
    if distribution.probability(cov_a) > distribution.probability(cov_b):
        cov_a, cov_b = cov_b, cov_a
    t_0, t_1 = marginals.labels
    if marginals.success_rate(t_0) > marginals.success_rate(t_1):
        t_0, t_1 = t_1, t_0
    q0, q1 = marginals.success_rate(t_0), marginals.success_rate(t_1)
    pa, pb = distribution.probability(cov_a), distribution.probability(cov_b)
    for case in range(1, 7):
        if _chain_holds(case, q0, q1, pa, pb):
            return BinaryCaseId(case, (cov_a, cov_b), (t_0, t_1))
    raise AssertionError("the six orderings cover the whole parameter space")


def binary_case_bounds(
    case: BinaryCaseId,
    distribution: CovariateDistribution,
    marginals: ExperimentalMarginals,
) -> tuple[Interval, Interval]:
    """Per-case closed-form bounds for the two non-constant rules of a 2x2 scenario.

    Returns the interval pair aligned with ``case.split_rules()``: first the
    rule pairing the lower-rate treatment with the lower-mass cell, then its
    reverse.  Values equal `rule_value_bounds` on the same inputs exactly.
    Raises :class:`CaseMismatchError` when the inputs do not satisfy the
    case's ordering chain.
    """
    _require_binary(distribution, marginals)
    for cov in case.covariate_order:
        if cov not in distribution.mass:
            raise UnknownLabelError(f"case id names unknown covariate {cov!r}")
    for treatment in case.treatment_order:
        if treatment not in marginals.success:
            raise UnknownLabelError(f"case id names unknown treatment {treatment!r}")
    pa = distribution.probability(case.covariate_order[0])
    pb = distribution.probability(case.covariate_order[1])
    q0 = marginals.success_rate(case.treatment_order[0])
    q1 = marginals.success_rate(case.treatment_order[1])
    if pa > pb or q0 > q1 or not _chain_holds(case.case_number, q0, q1, pa, pb):
        raise CaseMismatchError(
            f"inputs do not satisfy the case {case.case_number} ordering "
            f"(q0={float(q0)}, q1={float(q1)}, pa={float(pa)}, pb={float(pb)})"
        )
    case_number = case.case_number
    if case_number == 1:
        straight = Interval(_ZERO, q1 + q0)
        crossed = Interval(_ZERO, q1 + q0)
    elif case_number == 2:
        straight = Interval(q1 - pa, q1 + q0)
        crossed = Interval(_ZERO, pa + q0)
    elif case_number == 3:
        straight = Interval(q1 - pa, pb + q0)
        crossed = Interval(q1 - pb, pa + q0)
    elif case_number == 4:
        straight = Interval(q1 - pa, q1 + pa)
        crossed = Interval(q0 - pa, pa + q0)
    elif case_number == 5:
        straight = Interval(q1 - pa, _ONE)
        crossed = Interval(q1 + q0 - _ONE, pa + q0)
    else:
        straight = Interval(q1 + q0 - _ONE, _ONE)
        crossed = Interval(q1 + q0 - _ONE, _ONE)
    return straight, crossed
