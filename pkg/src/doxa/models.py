"""Relational models for belief formulas, frame checks and model-set checks.

A ``ModelSystem`` is a finite Kripke structure: worlds 0..n-1, one binary
alternativeness relation per agent, an atom valuation per world, and a
designated world where queries are evaluated.  ``B[a] p`` holds at a world
when ``p`` holds at every a-alternative; ``C[a] p`` when ``p`` holds at some
a-alternative.

Each ``LogicProfile`` names a frame class:

    kd        every relation is serial
    hstar     serial, and every world has an alternative v whose successor
              set is included in its own (the weak-introspection witness,
              validating  B[a] p -> C[a] B[a] p)
    hintikka  serial and transitive (validating  B[a] p -> B[a] B[a] p)
    kd45      serial, transitive and euclidean

These classes are nested: kd45 frames are hintikka frames, hintikka frames
are hstar frames (a transitive world's own successors are witnesses), and
hstar frames are kd frames.  Satisfiability therefore propagates outward
through the profiles in that order.

A ``LabeledModelSystem`` attaches a set of (desugared) formulas to each
world; ``check_model_set`` audits the labels against the closure conditions
of the profile, reporting each breach as a ``Violation``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .formula import (
    And,
    Atom,
    Bel,
    Comp,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    desugar,
    neg,
    render,
)
from .parser import parse


class LogicProfile(enum.Enum):
    HSTAR = "hstar"
    HINTIKKA = "hintikka"
    KD = "kd"
    KD45 = "kd45"

    @classmethod
    def from_name(cls, name: str) -> LogicProfile:
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown profile {name!r}; expected one of: {valid}") from None


#: Profiles ordered by frame-class inclusion, smallest class first.  A model
#: admitted by an earlier entry is admitted by every later one.
PROFILES_BY_STRENGTH: tuple[LogicProfile, ...] = (
    LogicProfile.KD45,
    LogicProfile.HINTIKKA,
    LogicProfile.HSTAR,
    LogicProfile.KD,
)


@dataclass(frozen=True)
class ModelSystem:
    """Immutable Kripke structure with a designated world.

    ``valuation`` maps a world to the atoms true there (absent atoms are
    false), ``alternatives`` maps an agent name to its set of (from, to)
    edges.  Both mappings are normalised to plain dicts with frozenset
    values at construction and must not be mutated afterwards.
    """

    worlds: int
    designated: int
    valuation: dict[int, frozenset[str]] = field(default_factory=dict)
    alternatives: dict[str, frozenset[tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.worlds < 1:
            raise ValueError("a model needs at least one world")
        if not 0 <= self.designated < self.worlds:
            raise ValueError(f"designated world {self.designated} out of range")
        valuation: dict[int, frozenset[str]] = {}
        for w, atoms_at_w in self.valuation.items():
            self._check_world(int(w))
            valuation[int(w)] = frozenset(atoms_at_w)
        alternatives: dict[str, frozenset[tuple[int, int]]] = {}
        for agent, pairs in self.alternatives.items():
            edges = set()
            for u, v in pairs:
                self._check_world(int(u))
                self._check_world(int(v))
                edges.add((int(u), int(v)))
            alternatives[str(agent)] = frozenset(edges)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "alternatives", alternatives)

    def _check_world(self, w: int) -> None:
        if not 0 <= w < self.worlds:
            raise ValueError(f"world {w} out of range 0..{self.worlds - 1}")

    def successors(self, agent: str, w: int) -> frozenset[int]:
        """a-alternatives of world ``w``."""
        return frozenset(v for (u, v) in self.alternatives.get(agent, ()) if u == w)

    def atoms_at(self, w: int) -> frozenset[str]:
        return self.valuation.get(w, frozenset())


@dataclass(frozen=True)
class LabeledModelSystem:
    """A model whose worlds carry the formulas they are meant to satisfy.

    Labels must be desugared (kernel connectives only); label order is kept
    so that checking reports violations deterministically.
    """

    model: ModelSystem
    labels: dict[int, tuple[Formula, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        labels: dict[int, tuple[Formula, ...]] = {}
        for w, formulas in self.labels.items():
            self.model._check_world(int(w))
            for f in formulas:
                if _has_sugar(f):
                    raise ValueError(f"label {render(f)!r} is not desugared")
            labels[int(w)] = tuple(formulas)
        object.__setattr__(self, "labels", labels)

    def label(self, w: int) -> tuple[Formula, ...]:
        return self.labels.get(w, ())


def _has_sugar(f: Formula) -> bool:
    if isinstance(f, (Implies, Iff, Comp)):
        return True
    if isinstance(f, (Not, Bel)):
        return _has_sugar(f.sub)
    if isinstance(f, (And, Or)):
        return _has_sugar(f.left) or _has_sugar(f.right)
    return False


@dataclass(frozen=True)
class Violation:
    """One breached closure or frame condition.

    ``kind`` is drawn from a fixed catalog: the propositional conditions
    "C.~", "C.&", "C.v", "C.~~", "C.~&", "C.~v", the modal conditions
    "C.B", "C.B*", "C.C", "C.CB", "C.BB*", "C.~B*", "C.BDef", "C.CDef",
    and the frame conditions "serial", "transitive", "euclidean",
    "a3-witness".
    """

    kind: str
    worlds: tuple[int, ...]
    formula: Formula | None = None
    message: str = ""


def evaluate(m: ModelSystem, w: int, f: Formula) -> bool:
    """Truth of ``f`` at world ``w``, with Bel universal and Comp existential.

    The two modalities are exact duals by construction:
    ``evaluate(m, w, Bel(a, f))`` equals ``not evaluate(m, w, Comp(a, Not(f)))``.
    """
    m._check_world(w)
    if isinstance(f, Atom):
        return f.name in m.atoms_at(w)
    if isinstance(f, Not):
        return not evaluate(m, w, f.sub)
    if isinstance(f, And):
        return evaluate(m, w, f.left) and evaluate(m, w, f.right)
    if isinstance(f, Or):
        return evaluate(m, w, f.left) or evaluate(m, w, f.right)
    if isinstance(f, Implies):
        return not evaluate(m, w, f.left) or evaluate(m, w, f.right)
    if isinstance(f, Iff):
        return evaluate(m, w, f.left) == evaluate(m, w, f.right)
    if isinstance(f, Bel):
        return all(evaluate(m, v, f.sub) for v in sorted(m.successors(f.agent.name, w)))
    if isinstance(f, Comp):
        return any(evaluate(m, v, f.sub) for v in sorted(m.successors(f.agent.name, w)))
    raise TypeError(f"not a formula: {f!r}")


def _successor_map(m: ModelSystem, agent: str) -> dict[int, set[int]]:
    succ: dict[int, set[int]] = {w: set() for w in range(m.worlds)}
    for u, v in m.alternatives.get(agent, ()):
        succ[u].add(v)
    return succ


def check_frame(m: ModelSystem, profile: LogicProfile) -> list[Violation]:
    """Frame-condition violations of ``m`` for ``profile``, empty if none."""
    violations: list[Violation] = []
    for agent in sorted(m.alternatives):
        succ = _successor_map(m, agent)
        for w in range(m.worlds):
            if not succ[w]:
                violations.append(
                    Violation("serial", (w,), None, f"world {w} has no {agent}-alternative")
                )
        if profile in (LogicProfile.HINTIKKA, LogicProfile.KD45):
            seen: set[tuple[int, int]] = set()
            for w in range(m.worlds):
                for u in sorted(succ[w]):
                    for v in sorted(succ[u]):
                        if v not in succ[w] and (w, v) not in seen:
                            seen.add((w, v))
                            violations.append(
                                Violation(
                                    "transitive",
                                    (w, v),
                                    None,
                                    f"missing {agent}-edge {w}->{v} (via {u})",
                                )
                            )
        if profile is LogicProfile.KD45:
            seen = set()
            for w in range(m.worlds):
                for u in sorted(succ[w]):
                    for v in sorted(succ[w]):
                        if v not in succ[u] and (u, v) not in seen:
                            seen.add((u, v))
                            violations.append(
                                Violation(
                                    "euclidean",
                                    (u, v),
                                    None,
                                    f"missing {agent}-edge {u}->{v} (both seen from {w})",
                                )
                            )
        if profile is LogicProfile.HSTAR:
            for w in range(m.worlds):
                if succ[w] and not any(succ[v] <= succ[w] for v in succ[w]):
                    violations.append(
                        Violation(
                            "a3-witness",
                            (w,),
                            None,
                            f"no {agent}-alternative of {w} has successors within those of {w}",
                        )
                    )
    return violations


def _neg_in(label: set[Formula], f: Formula) -> bool:
    return Not(f) in label or (isinstance(f, Not) and f.sub in label)


def check_model_set(lm: LabeledModelSystem, profile: LogicProfile) -> list[Violation]:
    """Frame violations plus closure-condition violations of the labels.

    The propositional conditions and the base modal conditions (C.B), (C.B*)
    and (C.C) are checked for every profile.  (C.CB) is added for hstar,
    (C.BB*) for hintikka and kd45, and (C.~B*) for kd45.  A negated belief
    formula ~B[a] q counts as the compatibility statement C[a] ~q when (C.C)
    looks for its witness, which is the dual-definition reading; the "C.BDef"
    and "C.CDef" kinds never fire on desugared labels.
    """
    m = lm.model
    violations = check_frame(m, profile)
    succ_by_agent = {agent: _successor_map(m, agent) for agent in m.alternatives}
    label_sets = {w: set(lm.label(w)) for w in range(m.worlds)}

    for w in range(m.worlds):
        label = label_sets[w]
        seen_clashes: set[Formula] = set()
        for f in lm.label(w):
            if isinstance(f, Not) and f.sub in label:
                positive = f.sub
                if positive not in seen_clashes:
                    seen_clashes.add(positive)
                    violations.append(
                        Violation(
                            "C.~", (w,), positive,
                            f"both {render(positive)} and its negation labeled at {w}",
                        )
                    )
        for f in lm.label(w):
            if isinstance(f, And):
                for side, sub in (("left", f.left), ("right", f.right)):
                    if sub not in label:
                        violations.append(
                            Violation("C.&", (w,), f, f"{side} conjunct missing at {w}")
                        )
            elif isinstance(f, Or):
                if f.left not in label and f.right not in label:
                    violations.append(
                        Violation("C.v", (w,), f, f"no disjunct labeled at {w}")
                    )
            elif isinstance(f, Not) and isinstance(f.sub, Not):
                if f.sub.sub not in label:
                    violations.append(
                        Violation("C.~~", (w,), f, f"unwrapped formula missing at {w}")
                    )
            elif isinstance(f, Not) and isinstance(f.sub, And):
                if not (_neg_in(label, f.sub.left) or _neg_in(label, f.sub.right)):
                    violations.append(
                        Violation("C.~&", (w,), f, f"no negated conjunct labeled at {w}")
                    )
            elif isinstance(f, Not) and isinstance(f.sub, Or):
                for side, sub in (("left", f.sub.left), ("right", f.sub.right)):
                    if not _neg_in(label, sub):
                        violations.append(
                            Violation(
                                "C.~v", (w,), f,
                                f"negated {side} disjunct missing at {w}",
                            )
                        )

        for f in lm.label(w):
            if isinstance(f, Bel):
                agent = f.agent.name
                succ = succ_by_agent.get(agent, {}).get(w, set())
                if not any(f.sub in label_sets[v] for v in succ):
                    violations.append(
                        Violation(
                            "C.B", (w,), f,
                            f"no {agent}-alternative of {w} labels the believed formula",
                        )
                    )
                for v in sorted(succ):
                    if f.sub not in label_sets[v]:
                        violations.append(
                            Violation(
                                "C.B*", (w, v), f,
                                f"believed formula missing at {agent}-alternative {v}",
                            )
                        )
                if profile is LogicProfile.HSTAR:
                    if not any(f in label_sets[v] for v in succ):
                        violations.append(
                            Violation(
                                "C.CB", (w,), f,
                                f"no {agent}-alternative of {w} labels the belief itself",
                            )
                        )
                if profile in (LogicProfile.HINTIKKA, LogicProfile.KD45):
                    for v in sorted(succ):
                        if f not in label_sets[v]:
                            violations.append(
                                Violation(
                                    "C.BB*", (w, v), f,
                                    f"belief not propagated to {agent}-alternative {v}",
                                )
                            )
            elif isinstance(f, Not) and isinstance(f.sub, Bel):
                agent = f.sub.agent.name
                succ = succ_by_agent.get(agent, {}).get(w, set())
                witness = neg(f.sub.sub)
                if not any(
                    witness in label_sets[v] or Not(f.sub.sub) in label_sets[v]
                    for v in succ
                ):
                    violations.append(
                        Violation(
                            "C.C", (w,), f,
                            f"no {agent}-alternative of {w} labels the denied formula's negation",
                        )
                    )
                if profile is LogicProfile.KD45:
                    for v in sorted(succ):
                        if f not in label_sets[v]:
                            violations.append(
                                Violation(
                                    "C.~B*", (w, v), f,
                                    f"negated belief not propagated to {agent}-alternative {v}",
                                )
                            )
    return violations


def model_to_json_dict(m: ModelSystem) -> dict:
    """Plain-data form of ``m``: world count, designated world, sorted
    valuation lists keyed by world index strings, sorted edge lists keyed
    by agent."""
    return {
        "worlds": m.worlds,
        "designated": m.designated,
        "valuation": {str(w): sorted(m.atoms_at(w)) for w in range(m.worlds)},
        "alternatives": {
            agent: [list(pair) for pair in sorted(pairs)]
            for agent, pairs in sorted(m.alternatives.items())
        },
    }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def model_from_json_dict(data: object) -> ModelSystem:
    """Validate and build a ModelSystem from parsed JSON data."""
    _require(isinstance(data, dict), "model must be a JSON object")
    assert isinstance(data, dict)
    known = {"worlds", "designated", "valuation", "alternatives", "labels"}
    for key in data:
        _require(key in known, f"unknown model key {key!r}")
    worlds = data.get("worlds")
    _require(isinstance(worlds, int) and not isinstance(worlds, bool), "'worlds' must be an integer")
    designated = data.get("designated", 0)
    _require(
        isinstance(designated, int) and not isinstance(designated, bool),
        "'designated' must be an integer",
    )
    valuation_raw = data.get("valuation", {})
    _require(isinstance(valuation_raw, dict), "'valuation' must be an object")
    valuation: dict[int, frozenset[str]] = {}
    for key, atom_list in valuation_raw.items():
        _require(key.isdigit(), f"valuation key {key!r} is not a world index")
        _require(
            isinstance(atom_list, list) and all(isinstance(s, str) for s in atom_list),
            f"valuation for world {key} must be a list of atom names",
        )
        valuation[int(key)] = frozenset(atom_list)
    alternatives_raw = data.get("alternatives", {})
    _require(isinstance(alternatives_raw, dict), "'alternatives' must be an object")
    alternatives: dict[str, frozenset[tuple[int, int]]] = {}
    for agent, pair_list in alternatives_raw.items():
        _require(isinstance(pair_list, list), f"alternatives for {agent!r} must be a list")
        pairs = set()
        for pair in pair_list:
            _require(
                isinstance(pair, list)
                and len(pair) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in pair),
                f"alternative for {agent!r} must be a [from, to] pair: {pair!r}",
            )
            pairs.add((pair[0], pair[1]))
        alternatives[agent] = frozenset(pairs)
    return ModelSystem(
        worlds=worlds, designated=designated, valuation=valuation, alternatives=alternatives
    )


def labeled_to_json_dict(lm: LabeledModelSystem) -> dict:
    data = model_to_json_dict(lm.model)
    data["labels"] = {
        str(w): [render(f) for f in lm.label(w)]
        for w in range(lm.model.worlds)
        if lm.label(w)
    }
    return data


def labeled_from_json_dict(data: object) -> LabeledModelSystem:
    """Build a LabeledModelSystem from parsed JSON; label strings are parsed
    in the concrete syntax and desugared."""
    model = model_from_json_dict(data)
    assert isinstance(data, dict)
    labels_raw = data.get("labels", {})
    _require(isinstance(labels_raw, dict), "'labels' must be an object")
    labels: dict[int, tuple[Formula, ...]] = {}
    for key, texts in labels_raw.items():
        _require(key.isdigit(), f"labels key {key!r} is not a world index")
        _require(
            isinstance(texts, list) and all(isinstance(s, str) for s in texts),
            f"labels for world {key} must be a list of formula strings",
        )
        labels[int(key)] = tuple(desugar(parse(text)) for text in texts)
    return LabeledModelSystem(model=model, labels=labels)
