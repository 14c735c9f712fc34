"""Core domain types: covariate/treatment spaces, probability data, assignment rules.

Probabilities are stored as exact rationals (`fractions.Fraction`).  Constructors
accept int, Fraction, float, or string input; floats convert at their exact
binary value, while decimal strings such as ``"0.49"`` keep their exact decimal
value.  Working in exact arithmetic keeps every downstream identity
(marginalization, bound arithmetic, dominance gaps, coarsening) free of rounding,
so an equality check in this package means true equality.  Floats appear only at
presentation time.

All types are immutable after construction and every operation is a pure
function of its inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from rulebounds.errors import (
    DuplicateLabelError,
    InconsistentJointError,
    MissingAssignmentError,
    NonSimplexError,
    OutOfRangeError,
    ParseError,
    SizeLimitError,
    UnknownLabelError,
)

#: Absolute slack allowed before a probability vector is rejected as off-simplex.
#: Vectors inside the tolerance are renormalized exactly (rational division).
SIMPLEX_TOLERANCE = Fraction(1, 10**9)

#: Absolute slack allowed between a joint model's implied marginals and the
#: marginals stated alongside it.
JOINT_TOLERANCE = Fraction(1, 10**9)

#: Default cap on the number of rules `enumerate_rules` will generate.
RULE_ENUMERATION_CAP = 4096


def as_probability(value: object, name: str = "probability") -> Fraction:
    """Coerce ``value`` to an exact Fraction and require it to lie in [0, 1].

    Accepts Fraction, int, float, Decimal, or a numeric string ("0.49" or
    "49/100").  Raises :class:`OutOfRangeError` for anything else, including
    NaN or infinite floats.
    """
    if isinstance(value, bool):
        raise OutOfRangeError(f"{name} must be a number, got a boolean")
    try:
        result = Fraction(value)  # type: ignore[arg-type]
    except (TypeError, ValueError, OverflowError, ZeroDivisionError) as exc:
        raise OutOfRangeError(f"{name} is not a finite number: {value!r}") from exc
    if not 0 <= result <= 1:
        raise OutOfRangeError(f"{name} must lie in [0, 1], got {value!r}")
    return result


def _as_label(value: object, context: str) -> str:
    """Labels are strings; bare ints are accepted and read as their decimal text."""
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    raise ParseError(f"{context} labels must be strings, got {value!r}")


@dataclass(frozen=True)
class _LabelSpace:
    """Ordered collection of distinct labels; order is fixed and reproducible."""

    labels: tuple[str, ...]
    _kind = "label"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "labels", tuple(_as_label(lab, self._kind) for lab in self.labels)
        )
        if not self.labels:
            raise MissingAssignmentError(f"{self._kind} space must have at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise DuplicateLabelError(f"{self._kind} labels are not distinct: {self.labels!r}")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"unknown {self._kind} label {label!r}") from None


class CovariateSpace(_LabelSpace):
    """Finite set of covariate values, in canonical order."""

    _kind = "covariate"


class TreatmentSet(_LabelSpace):
    """Finite set of mutually exclusive treatments, in canonical order."""

    _kind = "treatment"


@dataclass(frozen=True)
class CovariateDistribution:
    """Probability mass over covariate cells.

    Insertion order of ``mass`` is the canonical covariate order.  Masses must
    each lie in [0, 1] and sum to 1 within ``SIMPLEX_TOLERANCE``; a vector
    inside the tolerance is renormalized exactly, anything worse is rejected.
    Zero-mass cells are permitted.
    """

    mass: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        cleaned: dict[str, Fraction] = {}
        for label, value in dict(self.mass).items():
            key = _as_label(label, "covariate")
            cleaned[key] = as_probability(value, f"mass of covariate {key!r}")
        if not cleaned:
            raise MissingAssignmentError("covariate distribution has no entries")
        total = sum(cleaned.values())
        if abs(total - 1) > SIMPLEX_TOLERANCE:
            raise NonSimplexError(
                f"covariate masses sum to {float(total)}, not 1 (tolerance 1e-9)"
            )
        if total != 1:
            cleaned = {label: value / total for label, value in cleaned.items()}
        object.__setattr__(self, "mass", MappingProxyType(cleaned))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.mass)

    @property
    def space(self) -> CovariateSpace:
        return CovariateSpace(self.labels)

    def probability(self, label: str) -> Fraction:
        try:
            return self.mass[label]
        except KeyError:
            raise UnknownLabelError(f"unknown covariate label {label!r}") from None

    def mass_of(self, labels: Iterable[str]) -> Fraction:
        """Total mass of a set of cells."""
        return sum((self.probability(label) for label in labels), Fraction(0))


@dataclass(frozen=True)
class ExperimentalMarginals:
    """Per-treatment population success probabilities revealed by the experiment.

    These are covariate-blind: the experiment reports only how often the
    outcome succeeded under each treatment in the population as a whole.
    """

    success: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        cleaned: dict[str, Fraction] = {}
        for label, value in dict(self.success).items():
            key = _as_label(label, "treatment")
            cleaned[key] = as_probability(value, f"success rate of treatment {key!r}")
        if not cleaned:
            raise MissingAssignmentError("experimental marginals have no entries")
        object.__setattr__(self, "success", MappingProxyType(cleaned))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.success)

    def success_rate(self, treatment: str) -> Fraction:
        try:
            return self.success[treatment]
        except KeyError:
            raise UnknownLabelError(f"unknown treatment label {treatment!r}") from None


@dataclass(frozen=True)
class TreatmentRule:
    """Total map from covariate value to treatment.

    Stored in a canonical form (pairs sorted by covariate label) so that two
    rules with the same assignments compare and hash equal regardless of how
    they were built.  Rendering in scenario order is the report layer's job.
    """

    assignment: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        raw = self.assignment
        items = dict(raw).items() if isinstance(raw, Mapping) else dict(raw).items()
        pairs = tuple(
            sorted(
                (_as_label(cov, "covariate"), _as_label(treat, "treatment"))
                for cov, treat in items
            )
        )
        if not pairs:
            raise MissingAssignmentError("treatment rule has no assignments")
        object.__setattr__(self, "assignment", pairs)
        object.__setattr__(self, "_lookup", dict(pairs))

    @classmethod
    def constant(cls, treatment: str, covariates: Iterable[str]) -> "TreatmentRule":
        """The rule assigning one treatment to every covariate cell."""
        return cls(tuple((cov, treatment) for cov in covariates))

    @property
    def covariates(self) -> tuple[str, ...]:
        return tuple(cov for cov, _ in self.assignment)

    @property
    def treatments_used(self) -> frozenset[str]:
        return frozenset(treat for _, treat in self.assignment)

    def treatment_for(self, covariate: str) -> str:
        try:
            return self._lookup[covariate]  # type: ignore[attr-defined]
        except KeyError:
            raise MissingAssignmentError(
                f"rule assigns no treatment to covariate {covariate!r}"
            ) from None

    def treatments_in(self, covariate_order: Iterable[str]) -> tuple[str, ...]:
        """Assigned treatments listed in the given covariate order."""
        return tuple(self.treatment_for(cov) for cov in covariate_order)

    def __repr__(self) -> str:
        inner = ", ".join(f"{cov}={treat}" for cov, treat in self.assignment)
        return f"TreatmentRule({inner})"


@dataclass(frozen=True)
class Interval:
    """Closed subinterval of [0, 1] holding the identified set of a rule's value."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        lower = as_probability(self.lower, "interval lower endpoint")
        upper = as_probability(self.upper, "interval upper endpoint")
        if lower > upper:
            raise OutOfRangeError(
                f"interval endpoints are reversed: [{float(lower)}, {float(upper)}]"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper

    def as_floats(self) -> tuple[float, float]:
        return (float(self.lower), float(self.upper))


@dataclass(frozen=True)
class JointResponseModel:
    """Full joint specification: covariate masses plus cell-level success rates.

    ``conditional`` maps each treatment to a map from covariate value to the
    conditional success probability in that cell.  This is the unknown object
    the experiment only partially reveals; it serves as ground truth for the
    planner benchmark and for oracle witnesses.
    """

    distribution: CovariateDistribution
    conditional: Mapping[str, Mapping[str, Fraction]]

    def __post_init__(self) -> None:
        cells = set(self.distribution.labels)
        cleaned: dict[str, Mapping[str, Fraction]] = {}
        for treatment, row in dict(self.conditional).items():
            key = _as_label(treatment, "treatment")
            row_map = {
                _as_label(cov, "covariate"): as_probability(
                    value, f"success rate of treatment {key!r} given covariate {cov!r}"
                )
                for cov, value in dict(row).items()
            }
            missing = cells - set(row_map)
            if missing:
                raise MissingAssignmentError(
                    f"joint row for treatment {key!r} lacks covariates {sorted(missing)!r}"
                )
            extra = set(row_map) - cells
            if extra:
                raise UnknownLabelError(
                    f"joint row for treatment {key!r} names unknown covariates {sorted(extra)!r}"
                )
            # Canonical covariate order inside each row.
            cleaned[key] = MappingProxyType(
                {cov: row_map[cov] for cov in self.distribution.labels}
            )
        if not cleaned:
            raise MissingAssignmentError("joint response model has no treatment rows")
        object.__setattr__(self, "conditional", MappingProxyType(cleaned))

    @property
    def treatments(self) -> tuple[str, ...]:
        return tuple(self.conditional)

    @property
    def covariates(self) -> tuple[str, ...]:
        return self.distribution.labels

    def success(self, treatment: str, covariate: str) -> Fraction:
        try:
            row = self.conditional[treatment]
        except KeyError:
            raise UnknownLabelError(f"unknown treatment label {treatment!r}") from None
        try:
            return row[covariate]
        except KeyError:
            raise UnknownLabelError(f"unknown covariate label {covariate!r}") from None


@dataclass(frozen=True)
class Scenario:
    """Validated analysis input: spaces, covariate masses, experimental marginals.

    A joint response model is optional; when present its covariate distribution
    must equal the scenario's and its implied marginals must reproduce the
    stated ones within ``JOINT_TOLERANCE``.
    """

    covariates: CovariateSpace
    treatments: TreatmentSet
    distribution: CovariateDistribution
    marginals: ExperimentalMarginals
    joint: JointResponseModel | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "distribution",
            _aligned_distribution(self.distribution, self.covariates),
        )
        object.__setattr__(
            self, "marginals", _aligned_marginals(self.marginals, self.treatments)
        )
        if self.joint is not None:
            object.__setattr__(self, "joint", self._aligned_joint(self.joint))

    def _aligned_joint(self, joint: JointResponseModel) -> JointResponseModel:
        if joint.distribution != self.distribution:
            raise InconsistentJointError(
                "joint response model carries a different covariate distribution"
            )
        missing = set(self.treatments.labels) - set(joint.treatments)
        if missing:
            raise MissingAssignmentError(f"joint lacks rows for treatments {sorted(missing)!r}")
        extra = set(joint.treatments) - set(self.treatments.labels)
        if extra:
            raise UnknownLabelError(f"joint names unknown treatments {sorted(extra)!r}")
        aligned = JointResponseModel(
            self.distribution,
            {t: dict(joint.conditional[t]) for t in self.treatments.labels},
        )
        implied = marginalize_joint(aligned)
        for treatment in self.treatments.labels:
            gap = abs(implied.success_rate(treatment) - self.marginals.success_rate(treatment))
            if gap > JOINT_TOLERANCE:
                raise InconsistentJointError(
                    f"joint implies success rate {float(implied.success_rate(treatment))} "
                    f"for treatment {treatment!r}, stated "
                    f"{float(self.marginals.success_rate(treatment))}"
                )
        return aligned

    def to_mapping(self) -> dict[str, object]:
        """Plain-data form accepted back by `validate_scenario`; numbers are exact strings."""
        data: dict[str, object] = {
            "covariates": list(self.covariates.labels),
            "treatments": list(self.treatments.labels),
            "covariate_distribution": {
                cov: str(self.distribution.probability(cov)) for cov in self.covariates
            },
            "experimental_marginals": {
                t: str(self.marginals.success_rate(t)) for t in self.treatments
            },
        }
        if self.joint is not None:
            data["joint"] = {
                t: {cov: str(self.joint.success(t, cov)) for cov in self.covariates}
                for t in self.treatments
            }
        return data


def _aligned_distribution(
    distribution: CovariateDistribution, covariates: CovariateSpace
) -> CovariateDistribution:
    if set(distribution.labels) != set(covariates.labels):
        missing = set(covariates.labels) - set(distribution.labels)
        if missing:
            raise MissingAssignmentError(
                f"covariate_distribution has no entry for {sorted(missing)!r}"
            )
        extra = set(distribution.labels) - set(covariates.labels)
        raise UnknownLabelError(f"covariate_distribution names unknown labels {sorted(extra)!r}")
    if distribution.labels == covariates.labels:
        return distribution
    return CovariateDistribution({cov: distribution.probability(cov) for cov in covariates})


def _aligned_marginals(
    marginals: ExperimentalMarginals, treatments: TreatmentSet
) -> ExperimentalMarginals:
    if set(marginals.labels) != set(treatments.labels):
        missing = set(treatments.labels) - set(marginals.labels)
        if missing:
            raise MissingAssignmentError(
                f"experimental_marginals has no entry for {sorted(missing)!r}"
            )
        extra = set(marginals.labels) - set(treatments.labels)
        raise UnknownLabelError(f"experimental_marginals names unknown labels {sorted(extra)!r}")
    if marginals.labels == treatments.labels:
        return marginals
    return ExperimentalMarginals({t: marginals.success_rate(t) for t in treatments})


_SCENARIO_FIELDS = ("covariates", "treatments", "covariate_distribution", "experimental_marginals")


def validate_scenario(data: Mapping[str, object] | Scenario) -> Scenario:
    """Build a validated `Scenario` from plain parsed data.

    Idempotent: a `Scenario` passes through unchanged, and validating
    ``scenario.to_mapping()`` reproduces an equal scenario.  Errors name the
    violated invariant (`NonSimplexError`, `OutOfRangeError`,
    `InconsistentJointError`, `MissingAssignmentError`, ...).
    """
    if isinstance(data, Scenario):
        return data
    if not isinstance(data, Mapping):
        raise ParseError(f"scenario data must be a mapping, got {type(data).__name__}")
    for fieldname in _SCENARIO_FIELDS:
        if fieldname not in data:
            raise MissingAssignmentError(f"scenario field {fieldname!r} is missing")

    raw_covs = data["covariates"]
    raw_treats = data["treatments"]
    if not isinstance(raw_covs, (list, tuple)):
        raise ParseError("field 'covariates' must be a list of labels")
    if not isinstance(raw_treats, (list, tuple)):
        raise ParseError("field 'treatments' must be a list of labels")
    covariates = CovariateSpace(tuple(_as_label(v, "covariate") for v in raw_covs))
    treatments = TreatmentSet(tuple(_as_label(v, "treatment") for v in raw_treats))

    raw_dist = data["covariate_distribution"]
    raw_marg = data["experimental_marginals"]
    if not isinstance(raw_dist, Mapping):
        raise ParseError("field 'covariate_distribution' must map labels to numbers")
    if not isinstance(raw_marg, Mapping):
        raise ParseError("field 'experimental_marginals' must map labels to numbers")
    distribution = _aligned_distribution(
        CovariateDistribution({_as_label(k, "covariate"): v for k, v in raw_dist.items()}),
        covariates,
    )
    marginals = _aligned_marginals(
        ExperimentalMarginals({_as_label(k, "treatment"): v for k, v in raw_marg.items()}),
        treatments,
    )

    joint = None
    raw_joint = data.get("joint")
    if raw_joint is not None:
        if not isinstance(raw_joint, Mapping):
            raise ParseError("field 'joint' must map treatments to per-covariate numbers")
        rows: dict[str, dict[str, object]] = {}
        for treatment, row in raw_joint.items():
            if not isinstance(row, Mapping):
                raise ParseError("each joint row must map covariates to numbers")
            rows[_as_label(treatment, "treatment")] = {
                _as_label(cov, "covariate"): value for cov, value in row.items()
            }
        missing = set(treatments.labels) - set(rows)
        if missing:
            raise MissingAssignmentError(f"joint lacks rows for treatments {sorted(missing)!r}")
        extra = set(rows) - set(treatments.labels)
        if extra:
            raise UnknownLabelError(f"joint names unknown treatments {sorted(extra)!r}")
        joint = JointResponseModel(distribution, {t: rows[t] for t in treatments.labels})

    return Scenario(covariates, treatments, distribution, marginals, joint)


def enumerate_rules(
    covariates: CovariateSpace,
    treatments: TreatmentSet,
    cap: int = RULE_ENUMERATION_CAP,
) -> list[TreatmentRule]:
    """All |T|^|X| total assignment rules, lexicographic in the fixed label orders.

    Raises :class:`SizeLimitError` when the rule count would exceed ``cap``.
    """
    count = len(treatments) ** len(covariates)
    if count > cap:
        raise SizeLimitError(
            f"{len(treatments)}^{len(covariates)} = {count} rules exceed the cap of {cap}"
        )
    return [
        TreatmentRule(tuple(zip(covariates.labels, choice)))
        for choice in itertools.product(treatments.labels, repeat=len(covariates))
    ]


def marginalize_joint(joint: JointResponseModel) -> ExperimentalMarginals:
    """Population success rate of each treatment: mass-weighted mixture of cell rates."""
    return ExperimentalMarginals(
        {
            treatment: sum(
                (
                    joint.distribution.probability(cov) * joint.success(treatment, cov)
                    for cov in joint.covariates
                ),
                Fraction(0),
            )
            for treatment in joint.treatments
        }
    )


def true_rule_value(joint: JointResponseModel, rule: TreatmentRule) -> Fraction:
    """Exact mean outcome of ``rule`` when the full joint model is known."""
    return sum(
        (
            joint.distribution.probability(cov) * joint.success(rule.treatment_for(cov), cov)
            for cov in joint.covariates
        ),
        Fraction(0),
    )
