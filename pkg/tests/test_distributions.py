"""Domain types, scenario validation, rule enumeration, exact evaluation."""

import itertools
from fractions import Fraction

import pytest

from conftest import RULE_01, RULE_10, random_joint
from rulebounds import (
    CovariateDistribution,
    CovariateSpace,
    DuplicateLabelError,
    ExperimentalMarginals,
    InconsistentJointError,
    Interval,
    JointResponseModel,
    MissingAssignmentError,
    NonSimplexError,
    OutOfRangeError,
    SizeLimitError,
    TreatmentRule,
    TreatmentSet,
    enumerate_rules,
    marginalize_joint,
    true_rule_value,
    validate_scenario,
)

import random


def scenario_data(**overrides):
    data = {
        "covariates": ["a", "b"],
        "treatments": ["0", "1"],
        "covariate_distribution": {"a": "0.5", "b": "0.5"},
        "experimental_marginals": {"0": "0.49", "1": "0.67"},
    }
    data.update(overrides)
    return data


class TestValidateScenario:
    def test_valid_scenario(self):
        scenario = validate_scenario(scenario_data())
        assert scenario.marginals.success_rate("0") == Fraction(49, 100)
        assert scenario.marginals.success_rate("1") == Fraction(67, 100)
        assert scenario.distribution.probability("a") == Fraction(1, 2)

    def test_non_simplex_rejected(self):
        with pytest.raises(NonSimplexError):
            validate_scenario(scenario_data(covariate_distribution={"a": 0.5, "b": 0.4}))

    def test_out_of_range_rejected(self):
        with pytest.raises(OutOfRangeError):
            validate_scenario(scenario_data(experimental_marginals={"0": 1.2, "1": 0.5}))

    def test_missing_distribution_entry(self):
        with pytest.raises(MissingAssignmentError):
            validate_scenario(scenario_data(covariate_distribution={"a": 1}))

    def test_missing_field(self):
        data = scenario_data()
        del data["treatments"]
        with pytest.raises(MissingAssignmentError):
            validate_scenario(data)

    def test_duplicate_labels(self):
        with pytest.raises(DuplicateLabelError):
            validate_scenario(scenario_data(covariates=["a", "a"]))

    def test_consistent_joint_accepted(self):
        scenario = validate_scenario(
            scenario_data(
                joint={
                    "0": {"a": "0.98", "b": "0"},
                    "1": {"a": "0.34", "b": "1"},
                }
            )
        )
        assert scenario.joint is not None
        assert scenario.joint.success("0", "a") == Fraction(49, 50)

    def test_inconsistent_joint_rejected(self):
        with pytest.raises(InconsistentJointError):
            validate_scenario(
                scenario_data(
                    covariate_distribution={"a": "0.1", "b": "0.9"},
                    joint={
                        "0": {"a": "0.98", "b": "0"},
                        "1": {"a": "0.34", "b": "1"},
                    },
                )
            )

    def test_idempotent_on_scenario(self):
        scenario = validate_scenario(scenario_data())
        assert validate_scenario(scenario) == scenario

    def test_idempotent_through_mapping(self):
        scenario = validate_scenario(scenario_data())
        assert validate_scenario(scenario.to_mapping()) == scenario

    def test_simplex_slack_renormalized_exactly(self):
        off = Fraction(1, 10**10)  # inside the 1e-9 tolerance
        scenario = validate_scenario(
            scenario_data(
                covariate_distribution={"a": Fraction(1, 2) + off, "b": Fraction(1, 2)}
            )
        )
        total = sum(scenario.distribution.mass.values())
        assert total == 1

    def test_marginal_order_follows_treatment_list(self):
        data = scenario_data(experimental_marginals={"1": "0.67", "0": "0.49"})
        scenario = validate_scenario(data)
        assert scenario.marginals.labels == ("0", "1")


class TestSpaces:
    def test_labels_distinct_and_ordered(self):
        space = CovariateSpace(("b", "a", "c"))
        assert space.labels == ("b", "a", "c")
        assert space.index("a") == 1

    def test_empty_rejected(self):
        with pytest.raises(MissingAssignmentError):
            TreatmentSet(())


class TestInterval:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(OutOfRangeError):
            Interval(Fraction(3, 4), Fraction(1, 4))

    def test_contains(self):
        interval = Interval(Fraction(1, 4), Fraction(3, 4))
        assert interval.contains(Fraction(1, 2))
        assert not interval.contains(Fraction(9, 10))


class TestEnumerateRules:
    def test_two_by_two(self):
        rules = enumerate_rules(CovariateSpace(("a", "b")), TreatmentSet(("0", "1")))
        assert len(rules) == 4
        signatures = [rule.treatments_in(("a", "b")) for rule in rules]
        assert signatures == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]

    def test_counts(self):
        assert len(enumerate_rules(CovariateSpace(("a", "b", "c")), TreatmentSet(("0", "1")))) == 8
        assert len(enumerate_rules(CovariateSpace(("a",)), TreatmentSet(("0", "1", "2")))) == 3

    def test_covers_every_total_map(self):
        covs = CovariateSpace(("a", "b", "c"))
        treats = TreatmentSet(("0", "1", "2"))
        rules = enumerate_rules(covs, treats)
        assert len(rules) == len(set(rules)) == 27
        expected = {
            TreatmentRule(tuple(zip(covs.labels, choice)))
            for choice in itertools.product(treats.labels, repeat=3)
        }
        assert set(rules) == expected

    def test_size_limit(self):
        covs = CovariateSpace(tuple(f"x{i}" for i in range(13)))
        with pytest.raises(SizeLimitError):
            enumerate_rules(covs, TreatmentSet(("0", "1")))  # 2^13 > 4096


class TestMarginalizeJoint:
    def test_hypothetical_world(self, hypothetical_world):
        marginals = marginalize_joint(hypothetical_world)
        assert marginals.success_rate("0") == Fraction(49, 100)
        assert marginals.success_rate("1") == Fraction(67, 100)

    def test_constant_conditional_mean(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.25", "b": "0.75"}),
            {"0": {"a": "0.3", "b": "0.3"}, "1": {"a": "0.8", "b": "0.8"}},
        )
        marginals = marginalize_joint(joint)
        assert marginals.success_rate("0") == Fraction(3, 10)
        assert marginals.success_rate("1") == Fraction(4, 5)

    def test_three_cell_weighted_sum(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.2", "b": "0.3", "c": "0.5"}),
            {"0": {"a": 1, "b": 0, "c": "0.4"}},
        )
        assert marginalize_joint(joint).success_rate("0") == Fraction(2, 5)


class TestTrueRuleValue:
    def test_hypothetical_world_values(self, hypothetical_world):
        assert true_rule_value(hypothetical_world, RULE_01) == Fraction(99, 100)
        assert true_rule_value(hypothetical_world, RULE_10) == Fraction(17, 100)

    def test_constant_rule_equals_marginal(self):
        rng = random.Random(7)
        for _ in range(25):
            joint = random_joint(rng, rng.randint(1, 3), rng.randint(2, 3))
            marginals = marginalize_joint(joint)
            for treatment in joint.treatments:
                rule = TreatmentRule.constant(treatment, joint.covariates)
                assert true_rule_value(joint, rule) == marginals.success_rate(treatment)

    def test_missing_assignment(self, hypothetical_world):
        with pytest.raises(MissingAssignmentError):
            true_rule_value(hypothetical_world, TreatmentRule({"a": "0"}))


class TestTreatmentRule:
    def test_canonical_equality(self):
        assert TreatmentRule({"b": "1", "a": "0"}) == TreatmentRule({"a": "0", "b": "1"})

    def test_constant_constructor(self):
        rule = TreatmentRule.constant("1", ("a", "b"))
        assert rule.treatments_in(("a", "b")) == ("1", "1")

    def test_hashable(self):
        assert len({TreatmentRule({"a": "0"}), TreatmentRule({"a": "0"})}) == 1


class TestExperimentalMarginals:
    def test_probabilities_validated(self):
        with pytest.raises(OutOfRangeError):
            ExperimentalMarginals({"0": "-0.1"})

    def test_nan_rejected(self):
        with pytest.raises(OutOfRangeError):
            ExperimentalMarginals({"0": float("nan")})
