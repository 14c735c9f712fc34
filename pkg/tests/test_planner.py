"""Full-knowledge benchmark: optimal/worst rules and coarsening comparisons."""

import random
from fractions import Fraction

from conftest import RULE_01, random_coarsening, random_joint
from rulebounds import (
    Coarsening,
    CovariateDistribution,
    JointResponseModel,
    TreatmentRule,
    coarsen,
    enumerate_rules,
    jensen_check,
    marginalize_joint,
    optimal_rule,
    true_rule_value,
    worst_case_value,
)
from rulebounds.distributions import CovariateSpace, TreatmentSet


class TestOptimalRule:
    def test_hypothetical_world(self, hypothetical_world):
        rule, value = optimal_rule(hypothetical_world)
        assert rule == RULE_01
        assert value == Fraction("0.99")

    def test_homogeneous_rates_give_constant_rule(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.4", "b": "0.6"}),
            {"0": {"a": "0.3", "b": "0.3"}, "1": {"a": "0.7", "b": "0.7"}},
        )
        rule, value = optimal_rule(joint)
        assert rule == TreatmentRule.constant("1", ("a", "b"))
        assert value == Fraction("0.7")

    def test_cellwise_argmax(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.5", "b": "0.5"}),
            {"0": {"a": "0.9", "b": "0.2"}, "1": {"a": "0.3", "b": "0.8"}},
        )
        rule, value = optimal_rule(joint)
        assert rule == RULE_01
        assert value == Fraction("0.85")

    def test_ties_break_to_first_treatment(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": 1}),
            {"0": {"a": "0.5"}, "1": {"a": "0.5"}},
        )
        rule, _ = optimal_rule(joint)
        assert rule == TreatmentRule({"a": "0"})

    def test_brackets_every_rule(self):
        rng = random.Random(3)
        for _ in range(50):
            joint = random_joint(rng, rng.randint(1, 3), rng.randint(2, 3))
            _, best = optimal_rule(joint)
            worst = worst_case_value(joint)
            rules = enumerate_rules(
                CovariateSpace(joint.covariates), TreatmentSet(joint.treatments)
            )
            for rule in rules:
                assert worst <= true_rule_value(joint, rule) <= best


class TestWorstCaseValue:
    def test_hypothetical_world(self, hypothetical_world):
        assert worst_case_value(hypothetical_world) == Fraction("0.17")

    def test_homogeneous_rates(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.4", "b": "0.6"}),
            {"0": {"a": "0.3", "b": "0.3"}, "1": {"a": "0.7", "b": "0.7"}},
        )
        assert worst_case_value(joint) == Fraction("0.3")


class TestCoarsen:
    def test_collapse_all_hypothetical_world(self, hypothetical_world):
        coarse = coarsen(hypothetical_world, Coarsening.collapse_all(("a", "b")))
        assert coarse.covariates == ("all",)
        assert coarse.success("0", "all") == Fraction("0.49")
        assert coarse.success("1", "all") == Fraction("0.67")

    def test_identity_coarsening_is_noop(self, hypothetical_world):
        coarse = coarsen(hypothetical_world, Coarsening.identity(("a", "b")))
        assert coarse == hypothetical_world

    def test_weighted_average(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.2", "b": "0.3", "c": "0.5"}),
            {"0": {"a": 1, "b": 0, "c": "0.4"}},
        )
        merge_first_two = Coarsening({"a": "w", "b": "w", "c": "c"})
        coarse = coarsen(joint, merge_first_two)
        assert coarse.distribution.probability("w") == Fraction("0.5")
        assert coarse.success("0", "w") == Fraction("0.4")

    def test_zero_mass_cells_dropped(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": 1, "b": 0}),
            {"0": {"a": "0.5", "b": "0.9"}},
        )
        coarse = coarsen(joint, Coarsening({"a": "u", "b": "v"}))
        assert coarse.covariates == ("u",)

    def test_preserves_marginals_exactly(self):
        rng = random.Random(17)
        for _ in range(100):
            joint = random_joint(rng, rng.randint(1, 4), rng.randint(2, 3))
            coarse = coarsen(joint, random_coarsening(rng, joint.covariates))
            assert marginalize_joint(coarse) == marginalize_joint(joint)


class TestJensenCheck:
    def test_hypothetical_world_collapse(self, hypothetical_world):
        comparison = jensen_check(hypothetical_world, Coarsening.collapse_all(("a", "b")))
        assert comparison.fine_optimum == Fraction("0.99")
        assert comparison.coarse_optimum == Fraction("0.67")
        assert comparison.fine_worst == Fraction("0.17")
        assert comparison.coarse_worst == Fraction("0.49")
        assert comparison.fine_optimum > comparison.coarse_optimum
        assert comparison.fine_worst < comparison.coarse_worst

    def test_homogeneous_world_collapses_with_equality(self):
        joint = JointResponseModel(
            CovariateDistribution({"a": "0.4", "b": "0.6"}),
            {"0": {"a": "0.3", "b": "0.3"}, "1": {"a": "0.7", "b": "0.7"}},
        )
        comparison = jensen_check(joint, Coarsening.collapse_all(("a", "b")))
        assert comparison.fine_optimum == comparison.coarse_optimum == Fraction("0.7")
        assert comparison.fine_worst == comparison.coarse_worst == Fraction("0.3")

    def test_inequalities_on_random_joints(self):
        rng = random.Random(29)
        for _ in range(200):
            joint = random_joint(rng, rng.randint(1, 4), rng.randint(2, 3))
            comparison = jensen_check(joint, random_coarsening(rng, joint.covariates))
            assert comparison.fine_optimum >= comparison.coarse_optimum
            assert comparison.fine_worst <= comparison.coarse_worst
