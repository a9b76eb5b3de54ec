"""Kripke structures: validation, evaluation, frame checks, label checks,
JSON serialization."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from doxa.formula import Agent, And, Atom, Bel, Comp, Iff, Implies, Not, Or
from doxa.models import (
    LabeledModelSystem,
    LogicProfile,
    ModelSystem,
    PROFILES_BY_STRENGTH,
    Violation,
    check_frame,
    check_model_set,
    evaluate,
    labeled_from_json_dict,
    labeled_to_json_dict,
    model_from_json_dict,
    model_to_json_dict,
)

P, Q = Atom("p"), Atom("q")
A = Agent("a")


def chain_model() -> ModelSystem:
    """w0 -a-> w1 -a-> w1, with p true at w1 only and q true at w0."""
    return ModelSystem(
        worlds=2,
        designated=0,
        valuation={0: frozenset({"q"}), 1: frozenset({"p"})},
        alternatives={"a": frozenset({(0, 1), (1, 1)})},
    )


class TestConstruction:
    def test_needs_a_world(self):
        with pytest.raises(ValueError, match="at least one world"):
            ModelSystem(worlds=0, designated=0)

    def test_designated_in_range(self):
        with pytest.raises(ValueError, match="designated world 2 out of range"):
            ModelSystem(worlds=2, designated=2)

    def test_valuation_world_in_range(self):
        with pytest.raises(ValueError, match="world 3 out of range 0..1"):
            ModelSystem(worlds=2, designated=0, valuation={3: frozenset({"p"})})

    def test_edge_worlds_in_range(self):
        with pytest.raises(ValueError, match="world 9 out of range"):
            ModelSystem(worlds=2, designated=0, alternatives={"a": {(0, 9)}})

    def test_collections_are_normalised(self):
        m = ModelSystem(
            worlds=1, designated=0, valuation={0: ["p", "p"]}, alternatives={"a": [(0, 0)]}
        )
        assert m.valuation[0] == frozenset({"p"})
        assert m.alternatives["a"] == frozenset({(0, 0)})

    def test_successors_and_atoms(self):
        m = chain_model()
        assert m.successors("a", 0) == frozenset({1})
        assert m.successors("a", 1) == frozenset({1})
        assert m.successors("b", 0) == frozenset()
        assert m.atoms_at(0) == frozenset({"q"})
        assert m.atoms_at(1) == frozenset({"p"})


class TestEvaluate:
    def test_propositional_connectives(self):
        m = chain_model()
        assert evaluate(m, 0, Q)
        assert not evaluate(m, 0, P)
        assert evaluate(m, 0, Or(P, Q))
        assert not evaluate(m, 0, And(P, Q))
        assert evaluate(m, 0, Implies(P, Q))
        assert not evaluate(m, 0, Iff(P, Q))
        assert evaluate(m, 0, Not(P))

    def test_belief_is_universal(self):
        m = chain_model()
        assert evaluate(m, 0, Bel(A, P))
        assert not evaluate(m, 0, Bel(A, Q))
        assert evaluate(m, 1, Bel(A, P))

    def test_compatibility_is_existential(self):
        m = chain_model()
        assert evaluate(m, 0, Comp(A, P))
        assert not evaluate(m, 0, Comp(A, Q))

    def test_empty_successor_set(self):
        m = ModelSystem(worlds=1, designated=0, valuation={0: frozenset({"p"})})
        assert evaluate(m, 0, Bel(A, P))  # vacuously
        assert not evaluate(m, 0, Comp(A, P))

    def test_world_must_exist(self):
        with pytest.raises(ValueError, match="out of range"):
            evaluate(chain_model(), 5, P)

    @given(st.integers(0, 1), st.sampled_from([P, Q, And(P, Q), Bel(A, P)]))
    @settings(max_examples=40)
    def test_duality(self, w, f):
        m = chain_model()
        assert evaluate(m, w, Bel(A, f)) == (not evaluate(m, w, Comp(A, Not(f))))


def _single_agent(n: int, edges: set[tuple[int, int]]) -> ModelSystem:
    return ModelSystem(worlds=n, designated=0, alternatives={"a": frozenset(edges)})


class TestCheckFrame:
    def test_clean_models_have_no_violations(self):
        m = chain_model()
        for profile in PROFILES_BY_STRENGTH:
            assert check_frame(m, profile) == []

    def test_serial_violation(self):
        m = _single_agent(2, {(0, 1)})
        violations = check_frame(m, LogicProfile.KD)
        assert violations == [
            Violation("serial", (1,), None, "world 1 has no a-alternative")
        ]

    def test_transitive_violation(self):
        m = _single_agent(3, {(0, 1), (1, 2), (2, 2)})
        violations = check_frame(m, LogicProfile.HINTIKKA)
        assert Violation("transitive", (0, 2), None, "missing a-edge 0->2 (via 1)") in violations
        assert all(v.kind == "transitive" for v in violations)

    def test_euclidean_violation(self):
        m = _single_agent(3, {(0, 1), (0, 2), (1, 1), (2, 2)})
        violations = check_frame(m, LogicProfile.KD45)
        kinds = {(v.kind, v.worlds) for v in violations}
        assert ("euclidean", (1, 2)) in kinds
        assert ("euclidean", (2, 1)) in kinds

    def test_witness_violation(self):
        m = _single_agent(2, {(0, 1), (1, 0)})
        violations = check_frame(m, LogicProfile.HSTAR)
        assert [v.kind for v in violations] == ["a3-witness", "a3-witness"]
        assert [v.worlds for v in violations] == [(0,), (1,)]

    def test_witness_satisfied_by_self_loop(self):
        m = _single_agent(2, {(0, 1), (1, 1)})
        assert check_frame(m, LogicProfile.HSTAR) == []

    def test_multi_agent_checked_independently(self):
        m = ModelSystem(
            worlds=2,
            designated=0,
            alternatives={"a": frozenset({(0, 0), (1, 1)}), "b": frozenset({(0, 1)})},
        )
        violations = check_frame(m, LogicProfile.KD)
        assert violations == [
            Violation("serial", (1,), None, "world 1 has no b-alternative")
        ]


def _edges_from_mask(mask: int, n: int) -> set[tuple[int, int]]:
    return {(w, v) for w in range(n) for v in range(n) if mask >> (w * n + v) & 1}


class TestFrameClassInclusion:
    """Admissible frames nest kd45 within hintikka within hstar within kd."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_inclusion_chain_over_all_relations(self, n):
        order = list(PROFILES_BY_STRENGTH)
        for mask in range(1 << (n * n)):
            m = _single_agent(n, _edges_from_mask(mask, n))
            admitted = [not check_frame(m, profile) for profile in order]
            for smaller, larger in itertools.pairwise(range(len(order))):
                if admitted[smaller]:
                    assert admitted[larger], (n, mask, order[smaller], order[larger])


class TestCheckModelSet:
    def test_sugar_labels_rejected(self):
        with pytest.raises(ValueError, match="not desugared"):
            LabeledModelSystem(
                model=_single_agent(1, {(0, 0)}), labels={0: (Implies(P, Q),)}
            )

    def test_clean_label_set(self):
        lm = LabeledModelSystem(
            model=chain_model(),
            labels={0: (Bel(A, P), Q), 1: (P, Bel(A, P))},
        )
        assert check_model_set(lm, LogicProfile.HSTAR) == []

    def test_clash_reported_once_per_pair(self):
        lm = LabeledModelSystem(
            model=_single_agent(1, {(0, 0)}), labels={0: (P, Not(P), Not(P))}
        )
        violations = check_model_set(lm, LogicProfile.KD)
        assert [v.kind for v in violations] == ["C.~"]
        assert violations[0].formula == P

    def test_missing_conjunct(self):
        lm = LabeledModelSystem(
            model=_single_agent(1, {(0, 0)}), labels={0: (And(P, Q), P)}
        )
        violations = check_model_set(lm, LogicProfile.KD)
        assert [v.kind for v in violations] == ["C.&"]
        assert "right conjunct missing" in violations[0].message

    def test_missing_disjunct_and_negations(self):
        lm = LabeledModelSystem(
            model=_single_agent(1, {(0, 0)}),
            labels={0: (Or(P, Q), Not(Not(P)), Not(And(P, Q)), Not(Or(P, Q)))},
        )
        kinds = [v.kind for v in check_model_set(lm, LogicProfile.KD)]
        assert kinds.count("C.v") == 1
        assert kinds.count("C.~~") == 1
        assert kinds.count("C.~&") == 1
        assert kinds.count("C.~v") == 2  # both disjunct negations absent

    def test_unsupported_belief(self):
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Bel(A, Q),)}
        )
        violations = check_model_set(lm, LogicProfile.KD)
        kinds = {(v.kind, v.worlds) for v in violations}
        assert ("C.B", (0,)) in kinds
        assert ("C.B*", (0, 1)) in kinds

    def test_unwitnessed_compatibility(self):
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Not(Bel(A, P)),)}
        )
        violations = check_model_set(lm, LogicProfile.KD)
        assert [(v.kind, v.worlds) for v in violations] == [("C.C", (0,))]

    def test_compatibility_witness_accepts_collapsed_negation(self):
        # ~B[a] ~p is witnessed by a world labelled p (not only ~~p).
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Not(Bel(A, Not(P))),), 1: (P,)}
        )
        assert check_model_set(lm, LogicProfile.KD) == []

    def test_hstar_belief_must_reach_itself(self):
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Bel(A, P),), 1: (P,)}
        )
        assert check_model_set(lm, LogicProfile.KD) == []
        hstar = check_model_set(lm, LogicProfile.HSTAR)
        assert [(v.kind, v.worlds) for v in hstar] == [("C.CB", (0,))]

    def test_transitive_profiles_propagate_beliefs(self):
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Bel(A, P),), 1: (P,)}
        )
        hintikka = check_model_set(lm, LogicProfile.HINTIKKA)
        assert ("C.BB*", (0, 1)) in {(v.kind, v.worlds) for v in hintikka}

    def test_kd45_propagates_negated_beliefs(self):
        m = ModelSystem(
            worlds=2,
            designated=0,
            valuation={},
            alternatives={"a": frozenset({(0, 1), (1, 1)})},
        )
        lm = LabeledModelSystem(model=m, labels={0: (Not(Bel(A, P)),), 1: (Not(P),)})
        kd45 = check_model_set(lm, LogicProfile.KD45)
        assert ("C.~B*", (0, 1)) in {(v.kind, v.worlds) for v in kd45}


class TestJsonRoundTrip:
    def test_model_round_trip(self):
        m = chain_model()
        data = model_to_json_dict(m)
        assert data["worlds"] == 2
        assert data["valuation"] == {"0": ["q"], "1": ["p"]}
        assert data["alternatives"] == {"a": [[0, 1], [1, 1]]}
        assert model_from_json_dict(data) == m

    def test_labeled_round_trip(self):
        lm = LabeledModelSystem(
            model=chain_model(), labels={0: (Bel(A, P), Q), 1: (P,)}
        )
        data = labeled_to_json_dict(lm)
        assert data["labels"] == {"0": ["B[a] p", "q"], "1": ["p"]}
        back = labeled_from_json_dict(data)
        assert back.model == lm.model
        assert back.labels == lm.labels

    def test_labels_are_desugared_on_load(self):
        data = model_to_json_dict(_single_agent(1, {(0, 0)}))
        data["labels"] = {"0": ["C[a] p"]}
        back = labeled_from_json_dict(data)
        assert back.label(0) == (Not(Bel(A, Not(P))),)

    @pytest.mark.parametrize(
        ("mutation", "message"),
        [
            (lambda d: d.update(extra=1), "unknown model key"),
            (lambda d: d.update(worlds="2"), "'worlds' must be an integer"),
            (lambda d: d.update(worlds=True), "'worlds' must be an integer"),
            (lambda d: d.update(designated="0"), "'designated' must be an integer"),
            (lambda d: d.update(valuation={"x": ["p"]}), "not a world index"),
            (lambda d: d.update(valuation={"0": "p"}), "must be a list of atom names"),
            (lambda d: d.update(alternatives={"a": [[0]]}), "must be a \\[from, to\\] pair"),
            (lambda d: d.update(alternatives={"a": [[0, True]]}), "must be a \\[from, to\\] pair"),
            (lambda d: d.update(labels={"0": "p"}), "must be a list of formula strings"),
        ],
    )
    def test_strict_validation(self, mutation, message):
        data = model_to_json_dict(chain_model())
        mutation(data)
        with pytest.raises(ValueError, match=message):
            labeled_from_json_dict(data)

    def test_top_level_must_be_object(self):
        with pytest.raises(ValueError, match="must be a JSON object"):
            model_from_json_dict([1, 2])
