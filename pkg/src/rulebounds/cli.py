"""Command-line front end: scenario analysis, verification, bundled demo.

Exit codes: 0 success, 1 validation or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from rulebounds.bounds import binary_case_bounds, classify_binary_case, rule_value_bounds
from rulebounds.distributions import Scenario, enumerate_rules, true_rule_value
from rulebounds.dominance import maximin_rule, relate
from rulebounds.errors import ValidationError
from rulebounds.oracle import sample_consistent_joint, verify_dominance, verify_sharpness
from rulebounds.planner import optimal_rule, worst_case_value
from rulebounds.report import ReportDocument, format4, number_json, rule_label
from rulebounds.scenario_io import parse_scenario

#: Random consistent joints drawn per coverage check under `verify`.
COVERAGE_SAMPLES = 200


def bundled_scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (``perry_half`` or ``perry_ninety``)."""
    return Path(str(resources.files("rulebounds").joinpath("data", f"{name}.scenario")))


def _emit(args: argparse.Namespace, human: str, machine: dict[str, object]) -> None:
    if args.format == "machine":
        print(json.dumps(machine, indent=2))
    else:
        print(human)


def _cmd_bounds(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario)
    rules = enumerate_rules(scenario.covariates, scenario.treatments)
    covs = scenario.covariates.labels
    rows = [
        (rule, rule_value_bounds(scenario.distribution, scenario.marginals, rule))
        for rule in rules
    ]
    human_lines = [f"per-rule sharp bounds, assignments in covariate order ({', '.join(covs)}):"]
    for rule, bounds in rows:
        note = " (point identified)" if bounds.is_point else ""
        human_lines.append(
            f"  {rule_label(rule, covs)}  [{format4(bounds.lower)}, {format4(bounds.upper)}]{note}"
        )
    machine = {
        "scenario": scenario.to_mapping(),
        "rules": [
            {
                "assignment": {cov: rule.treatment_for(cov) for cov in covs},
                "lower": number_json(bounds.lower),
                "upper": number_json(bounds.upper),
            }
            for rule, bounds in rows
        ],
    }
    _emit(args, "\n".join(human_lines), machine)
    return 0


def _cmd_dominance(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario)
    document = ReportDocument.build(scenario)
    _emit(args, document.to_human(), document.to_machine())
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario)
    case = classify_binary_case(scenario.distribution, scenario.marginals)
    human = (
        f"Case {case.case_number}\n"
        f"normalized covariate order (ascending mass): {', '.join(case.covariate_order)}\n"
        f"normalized treatment order (ascending rate): {', '.join(case.treatment_order)}"
    )
    machine = {
        "case_number": case.case_number,
        "covariate_order": list(case.covariate_order),
        "treatment_order": list(case.treatment_order),
    }
    _emit(args, human, machine)
    return 0


def _cmd_planner(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario)
    if scenario.joint is None:
        raise ValidationError(
            "the planner benchmark needs a scenario with a 'joint' response model"
        )
    joint = scenario.joint
    best_rule, best_value = optimal_rule(joint)
    worst = worst_case_value(joint)
    covs = scenario.covariates.labels
    human = (
        f"optimal rule: {rule_label(best_rule, covs)}\n"
        f"optimized mean outcome: {format4(best_value)}\n"
        f"worst-case mean outcome: {format4(worst)}"
    )
    machine = {
        "optimal_rule": {cov: best_rule.treatment_for(cov) for cov in covs},
        "optimized_value": number_json(best_value),
        "worst_case_value": number_json(worst),
    }
    _emit(args, human, machine)
    return 0


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    passed: bool
    detail: str


def run_verification(scenario: Scenario, seed: int) -> list[VerificationCheck]:
    """Oracle and identity cross-checks for one scenario.

    Deterministic given ``seed``, which drives only the randomized coverage
    batch; everything else is exact and input-determined.
    """
    checks: list[VerificationCheck] = []
    covs = scenario.covariates.labels
    rules = enumerate_rules(scenario.covariates, scenario.treatments)

    for rule in rules:
        certificate = verify_sharpness(scenario, rule)
        lo, hi = certificate.closed_form.as_floats()
        checks.append(
            VerificationCheck(
                name=f"sharpness {rule_label(rule, covs)}",
                passed=certificate.passed,
                detail=(
                    f"oracle extrema [{float(certificate.oracle_lower):.6g}, "
                    f"{float(certificate.oracle_upper):.6g}] vs closed form "
                    f"[{lo:.6g}, {hi:.6g}]"
                ),
            )
        )

    mismatches = []
    pair_count = 0
    for i, rule in enumerate(rules):
        for other in rules[i + 1 :]:
            pair_count += 1
            if relate(scenario, rule, other) is not verify_dominance(scenario, rule, other):
                mismatches.append((rule, other))
    checks.append(
        VerificationCheck(
            name="dominance oracle agreement",
            passed=not mismatches,
            detail=f"{pair_count - len(mismatches)}/{pair_count} rule pairs agree",
        )
    )

    if len(covs) == 2 and len(scenario.treatments) == 2:
        case = classify_binary_case(scenario.distribution, scenario.marginals)
        straight, crossed = case.split_rules()
        case_intervals = binary_case_bounds(case, scenario.distribution, scenario.marginals)
        closed = (
            rule_value_bounds(scenario.distribution, scenario.marginals, straight),
            rule_value_bounds(scenario.distribution, scenario.marginals, crossed),
        )
        checks.append(
            VerificationCheck(
                name=f"case {case.case_number} closed forms",
                passed=case_intervals == closed,
                detail="per-case formulas equal the general bounds exactly",
            )
        )
        q_total = sum(
            (scenario.marginals.success_rate(t) for t in scenario.treatments.labels),
            Fraction(0),
        )
        identity = (
            closed[0].lower + closed[1].upper == q_total
            and closed[0].upper + closed[1].lower == q_total
        )
        checks.append(
            VerificationCheck(
                name="sum identity",
                passed=identity,
                detail=(
                    f"lb{rule_label(straight, covs)} + ub{rule_label(crossed, covs)} "
                    f"= {float(q_total):.6g} = sum of success rates, exactly"
                ),
            )
        )

    rng = random.Random(seed)
    violations = 0
    for _ in range(COVERAGE_SAMPLES):
        joint = sample_consistent_joint(scenario, rng)
        for rule in rules:
            bounds = rule_value_bounds(scenario.distribution, scenario.marginals, rule)
            if not bounds.contains(true_rule_value(joint, rule)):
                violations += 1
    checks.append(
        VerificationCheck(
            name="coverage",
            passed=violations == 0,
            detail=(
                f"{COVERAGE_SAMPLES} random consistent joints x {len(rules)} rules, "
                f"{violations} values outside their bounds"
            ),
        )
    )

    best = maximin_rule(scenario)
    best_lower = rule_value_bounds(scenario.distribution, scenario.marginals, best).lower
    greatest = max(verify_sharpness(scenario, rule).oracle_lower for rule in rules)
    checks.append(
        VerificationCheck(
            name="maximin",
            passed=best_lower == greatest,
            detail=(
                f"rule {rule_label(best, covs)} attains the greatest oracle lower bound "
                f"{float(greatest):.6g}"
            ),
        )
    )
    return checks


def _cmd_verify(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario)
    checks = run_verification(scenario, args.seed)
    if args.format == "machine":
        print(
            json.dumps(
                {
                    "checks": [
                        {"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks
                    ],
                    "passed": all(c.passed for c in checks),
                },
                indent=2,
            )
        )
    else:
        for check in checks:
            print(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}")
    return 0 if all(c.passed for c in checks) else 2


def _format2(value: Fraction) -> str:
    return f"{float(value):.2f}"


def _cmd_demo(args: argparse.Namespace) -> int:
    if args.which != "perry":
        raise ValidationError(f"unknown demo {args.which!r} (available: perry)")
    for name, blurb in (
        ("perry_half", "even covariate split"),
        ("perry_ninety", "10/90 covariate split"),
    ):
        scenario = parse_scenario(bundled_scenario_path(name))
        covs = scenario.covariates.labels
        case = classify_binary_case(scenario.distribution, scenario.marginals)
        document = ReportDocument.build(scenario)
        print(f"== {name} ({blurb}) ==")
        print(
            "covariate masses: "
            + ", ".join(f"{c}={_format2(scenario.distribution.probability(c))}" for c in covs)
        )
        print(
            "experimental success rates: "
            + ", ".join(
                f"{t}={_format2(scenario.marginals.success_rate(t))}"
                for t in scenario.treatments.labels
            )
        )
        print(f"binary ordering case: {case.case_number}")
        for row in document.rows:
            if row.bounds.is_point:
                value_text = f"value {_format2(row.bounds.lower)} (point identified)"
            else:
                value_text = (
                    f"value in [{_format2(row.bounds.lower)}, {_format2(row.bounds.upper)}]"
                )
            status = "undominated"
            if row.dominated:
                status = "dominated by " + ", ".join(
                    rule_label(w, covs) for w in row.dominated_by
                )
            if row.maximin:
                status += ", maximin"
            print(f"rule {rule_label(row.rule, covs)}: {value_text}; {status}")
        straight, _ = case.split_rules()
        certificate = verify_sharpness(scenario, straight)
        witness = certificate.upper_witness
        print(
            f"a world attaining the upper bound of rule {rule_label(straight, covs)} "
            f"(value {_format2(certificate.oracle_upper)}):"
        )
        for cov in covs:
            rates = ", ".join(
                f"{_format2(witness.success(t, cov))} under {t}"
                for t in scenario.treatments.labels
            )
            print(f"  given {cov}: success {rates}")
        print()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulebounds",
        description=(
            "Sharp bounds, dominance partition, and maximin selection for "
            "covariate-based treatment rules evaluated with covariate-blind "
            "experimental data."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, scenario_arg: bool = True):
        p = sub.add_parser(name, help=help_text)
        if scenario_arg:
            p.add_argument("scenario", help="path to a .scenario file")
        p.add_argument(
            "--format",
            choices=("human", "machine"),
            default="human",
            help="output rendering (default: human)",
        )
        p.set_defaults(handler=handler)
        return p

    add("bounds", _cmd_bounds, "print each rule's sharp value interval")
    add("dominance", _cmd_dominance, "print the full dominance report")
    add("classify", _cmd_classify, "print the binary ordering case (2x2 scenarios)")
    add("planner", _cmd_planner, "print optimal rule and value (needs a joint)")
    verify = add("verify", _cmd_verify, "run oracle cross-checks; exit 2 on any FAIL")
    verify.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for the randomized coverage batch (default: 0)",
    )
    demo = add("demo", _cmd_demo, "run the bundled case study", scenario_arg=False)
    demo.add_argument("which", choices=("perry",), help="bundled case study name")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
