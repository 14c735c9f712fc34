"""Report document with matching human-readable and machine-readable renderings.

Both renderings read the same stored exact values.  The machine form carries
every probability twice: as an exact rational string (``"17/100"``) and as a
float for convenience; re-reading the machine form reconstructs an equal
document bit for bit.  Human output rounds to 4 decimal places.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from rulebounds.bounds import BinaryCaseId, classify_binary_case
from rulebounds.distributions import Interval, Scenario, TreatmentRule, validate_scenario
from rulebounds.dominance import DominanceReport, RuleAnalysis, dominance_partition
from rulebounds.errors import NotBinaryError, ParseError


def number_json(value: Fraction) -> dict[str, object]:
    return {"exact": str(value), "approx": float(value)}


def _number_from_json(data: object, context: str) -> Fraction:
    if not isinstance(data, Mapping) or "exact" not in data:
        raise ParseError(f"{context}: expected an object with an 'exact' field")
    try:
        return Fraction(str(data["exact"]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{context}: bad exact number {data['exact']!r}") from exc


def rule_label(rule: TreatmentRule, covariate_order: tuple[str, ...]) -> str:
    """Compact display form: assigned treatments in scenario covariate order."""
    return "(" + ", ".join(rule.treatments_in(covariate_order)) + ")"


def format4(value: Fraction) -> str:
    return f"{float(value):.4f}"


@dataclass(frozen=True)
class ReportDocument:
    """Scenario echo plus one row per rule (bounds, dominance, maximin flags)."""

    scenario: Scenario
    partition: DominanceReport
    binary_case: BinaryCaseId | None

    @classmethod
    def build(cls, scenario: Scenario) -> "ReportDocument":
        partition = dominance_partition(scenario)
        try:
            case = classify_binary_case(scenario.distribution, scenario.marginals)
        except NotBinaryError:
            case = None
        return cls(scenario, partition, case)

    @property
    def rows(self) -> tuple[RuleAnalysis, ...]:
        return self.partition.rules

    def to_machine(self) -> dict[str, object]:
        covs = self.scenario.covariates.labels
        case_blob = None
        if self.binary_case is not None:
            case_blob = {
                "case_number": self.binary_case.case_number,
                "covariate_order": list(self.binary_case.covariate_order),
                "treatment_order": list(self.binary_case.treatment_order),
            }
        return {
            "scenario": self.scenario.to_mapping(),
            "binary_case": case_blob,
            "rules": [
                {
                    "assignment": {cov: row.rule.treatment_for(cov) for cov in covs},
                    "lower": number_json(row.bounds.lower),
                    "upper": number_json(row.bounds.upper),
                    "dominated": row.dominated,
                    "dominated_by": [
                        {cov: witness.treatment_for(cov) for cov in covs}
                        for witness in row.dominated_by
                    ],
                    "maximin": row.maximin,
                }
                for row in self.rows
            ],
        }

    @classmethod
    def from_machine(cls, data: Mapping[str, object]) -> "ReportDocument":
        if not isinstance(data, Mapping):
            raise ParseError("report document must be a mapping")
        scenario = validate_scenario(data.get("scenario", {}))  # type: ignore[arg-type]
        case_blob = data.get("binary_case")
        case = None
        if case_blob is not None:
            if not isinstance(case_blob, Mapping):
                raise ParseError("binary_case must be a mapping or null")
            case = BinaryCaseId(
                int(case_blob["case_number"]),  # type: ignore[index]
                tuple(case_blob["covariate_order"]),  # type: ignore[arg-type,index]
                tuple(case_blob["treatment_order"]),  # type: ignore[arg-type,index]
            )
        raw_rows = data.get("rules")
        if not isinstance(raw_rows, list):
            raise ParseError("report document needs a 'rules' list")
        rows = []
        for raw in raw_rows:
            rows.append(
                RuleAnalysis(
                    rule=TreatmentRule(tuple(raw["assignment"].items())),
                    bounds=Interval(
                        _number_from_json(raw["lower"], "rule lower bound"),
                        _number_from_json(raw["upper"], "rule upper bound"),
                    ),
                    dominated_by=tuple(
                        TreatmentRule(tuple(witness.items())) for witness in raw["dominated_by"]
                    ),
                    maximin=bool(raw["maximin"]),
                )
            )
        return cls(scenario, DominanceReport(tuple(rows)), case)

    def to_human(self) -> str:
        covs = self.scenario.covariates.labels
        treats = self.scenario.treatments.labels
        lines = [
            f"scenario: {len(covs)} covariates ({', '.join(covs)}), "
            f"{len(treats)} treatments ({', '.join(treats)})",
            "covariate masses: "
            + "  ".join(
                f"{cov}={format4(self.scenario.distribution.probability(cov))}" for cov in covs
            ),
            "experimental success rates: "
            + "  ".join(
                f"{t}={format4(self.scenario.marginals.success_rate(t))}" for t in treats
            ),
        ]
        if self.binary_case is not None:
            case = self.binary_case
            lines.append(
                f"binary ordering case: {case.case_number} "
                f"(covariates {case.covariate_order[0]} <= {case.covariate_order[1]} by mass, "
                f"treatments {case.treatment_order[0]} <= {case.treatment_order[1]} by rate)"
            )
        lines.append(f"rules ({len(self.rows)}), assignments in covariate order "
                     f"({', '.join(covs)}):")
        label_width = max(len(rule_label(row.rule, covs)) for row in self.rows)
        for row in self.rows:
            status = "undominated"
            if row.dominated:
                witnesses = ", ".join(rule_label(w, covs) for w in row.dominated_by)
                status = f"dominated by {witnesses}"
            if row.maximin:
                status += ", maximin"
            lines.append(
                f"  {rule_label(row.rule, covs):<{label_width}}  "
                f"[{format4(row.bounds.lower)}, {format4(row.bounds.upper)}]  {status}"
            )
        return "\n".join(lines)
