"""Full-knowledge benchmark: best and worst rules when cell-level rates are known.

With the joint response model in hand the best rule simply picks, cell by
cell, a treatment with the highest conditional success rate; the worst rule
picks the lowest.  Coarsening the covariate replaces cells with mass-weighted
averages, which can only shrink the attainable maximum and raise the
attainable minimum (Jensen), quantifying what covariate detail is worth to a
decision maker with, and without, knowledge of the joint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from rulebounds.distributions import (
    CovariateDistribution,
    JointResponseModel,
    TreatmentRule,
    _as_label,
)
from rulebounds.errors import MissingAssignmentError

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Coarsening:
    """Many-to-one map from covariate values to coarse cell labels.

    Stored canonically (pairs sorted by covariate label), like a rule.
    """

    cells: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        pairs = tuple(
            sorted(
                (_as_label(cov, "covariate"), _as_label(cell, "coarse cell"))
                for cov, cell in dict(self.cells).items()
            )
        )
        if not pairs:
            raise MissingAssignmentError("coarsening has no entries")
        object.__setattr__(self, "cells", pairs)
        object.__setattr__(self, "_lookup", dict(pairs))

    @classmethod
    def collapse_all(cls, covariates: Iterable[str], cell: str = "all") -> "Coarsening":
        return cls(tuple((cov, cell) for cov in covariates))

    @classmethod
    def identity(cls, covariates: Iterable[str]) -> "Coarsening":
        return cls(tuple((cov, cov) for cov in covariates))

    def cell_for(self, covariate: str) -> str:
        try:
            return self._lookup[covariate]  # type: ignore[attr-defined]
        except KeyError:
            raise MissingAssignmentError(
                f"coarsening assigns no cell to covariate {covariate!r}"
            ) from None


def optimal_rule(joint: JointResponseModel) -> tuple[TreatmentRule, Fraction]:
    """Cell-wise best rule and its mean outcome.

    Per cell, the first treatment (in the model's treatment order) attaining
    the maximal conditional rate is chosen, so ties resolve deterministically.
    """
    assignment = {}
    value = _ZERO
    for cov in joint.covariates:
        best_treatment = joint.treatments[0]
        best_rate = joint.success(best_treatment, cov)
        for treatment in joint.treatments[1:]:
            rate = joint.success(treatment, cov)
            if rate > best_rate:
                best_treatment, best_rate = treatment, rate
        assignment[cov] = best_treatment
        value += joint.distribution.probability(cov) * best_rate
    return TreatmentRule(tuple(assignment.items())), value


def worst_case_value(joint: JointResponseModel) -> Fraction:
    """Mean outcome of the cell-wise worst rule."""
    return sum(
        (
            joint.distribution.probability(cov)
            * min(joint.success(t, cov) for t in joint.treatments)
            for cov in joint.covariates
        ),
        _ZERO,
    )


def coarsen(joint: JointResponseModel, coarsening: Coarsening) -> JointResponseModel:
    """Joint model observed through a coarser covariate.

    Coarse cells appear in order of first appearance along the fine covariate
    order.  Each carries the total mass of its members and the mass-weighted
    average of their conditional rates; cells of zero mass are dropped, since
    a conditional rate is undefined there.  Marginalizing the result
    reproduces the fine model's marginals exactly.
    """
    members: dict[str, list[str]] = {}
    for cov in joint.covariates:
        members.setdefault(coarsening.cell_for(cov), []).append(cov)

    coarse_mass: dict[str, Fraction] = {}
    for cell, group in members.items():
        mass = joint.distribution.mass_of(group)
        if mass > 0:
            coarse_mass[cell] = mass
    distribution = CovariateDistribution(coarse_mass)

    conditional = {
        treatment: {
            cell: sum(
                (joint.distribution.probability(cov) * joint.success(treatment, cov)
                 for cov in members[cell]),
                _ZERO,
            )
            / coarse_mass[cell]
            for cell in coarse_mass
        }
        for treatment in joint.treatments
    }
    return JointResponseModel(distribution, conditional)


class JensenComparison(NamedTuple):
    """Optimized and worst-case values before and after coarsening."""

    fine_optimum: Fraction
    coarse_optimum: Fraction
    fine_worst: Fraction
    coarse_worst: Fraction


def jensen_check(joint: JointResponseModel, coarsening: Coarsening) -> JensenComparison:
    """All four benchmark values for a coarsening comparison.

    Finer information never hurts an informed planner and never helps the
    worst case: fine_optimum >= coarse_optimum and fine_worst <= coarse_worst,
    both by Jensen's inequality applied cell by cell.  Callers assert the
    inequalities; this function just reports the exact values.
    """
    coarse = coarsen(joint, coarsening)
    return JensenComparison(
        fine_optimum=optimal_rule(joint)[1],
        coarse_optimum=optimal_rule(coarse)[1],
        fine_worst=worst_case_value(joint),
        coarse_worst=worst_case_value(coarse),
    )
