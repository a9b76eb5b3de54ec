"""Tableau decision procedure with verified countermodels and refutation traces.

``decide_sat`` desugars the query, seeds a single world with it, and
saturates worlds under the closure conditions of the chosen profile using a
fixed rule priority:

    1. non-branching propositional rules      (C.&), (C.~~), (C.~v)
    2. negated-modal rewrites                 (C.BDef-rewrite)
    3. branching propositional rules          (C.v), (C.~&), left first
    4. propagation into and out of alternatives
                                              (C.B*), (C.CB), (C.BB*),
                                              (C.~B*), (C.B-lift)
    5. world creation                         (C.C), (C.CB), (C.B)

    Propagation outranks world creation so that a world's label is saturated
    with everything flowing into it before the label can spawn successors;
    creating worlds from half-filled labels would let each late arrival
    spawn another sibling and the tree outgrow its blocking bound.

A negated belief ``~B[a] q`` is read as the compatibility statement
``C[a] ~q``; the rewrite records that reading as a trace step and the
demand then spawns one fresh alternative containing ``~q`` per (C.C).

Profiles differ only in the modal rules.  Every profile propagates believed
formulas into alternatives per (C.B*) and spawns a seriality witness per
(C.B) when a believing world has no alternative.  The hstar profile adds
the weak-introspection witness (C.CB): each believing world designates one
alternative that receives the belief formulas themselves, first trying to
reuse an existing alternative and backtracking to a fresh witness world if
reuse closes the branch.  The hintikka profile instead propagates beliefs
into every alternative per (C.BB*).  The kd45 profile propagates beliefs
and negated beliefs into every alternative, and additionally lifts beliefs
from an alternative back to its creator; the lift is what makes every
member of a belief cluster agree on what is believed, so that a euclidean
model can be read off an open branch.

Termination: world labels are subsets of the query's subformula closure, so
only finitely many labels exist.  A world whose label equals the label of a
strict ancestor reached through alternatives of the same agent (the blocker
itself being created for that agent) is never expanded; at model extraction
its incoming edge is redirected to the blocker, yielding a finite, possibly
cyclic model.  Extraction then completes the relations to the profile's
frame class (seriality loops, the hstar witness fixpoint, transitive
closure, or belief clusters) and finally re-verifies the model with
``check_frame`` and ``evaluate``; a failed re-verification is an internal
error, never a verdict.

Branch exploration is depth-first and wholly deterministic: identical
inputs yield byte-identical traces and models.  On an unsatisfiable input
the reported trace is the last fully closed exploration, numbered
consecutively, and its final step is always the (C.~-clash) that closed it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    And,
    Atom,
    Bel,
    Comp,
    Formula,
    Not,
    Or,
    agents,
    desugar,
    neg,
    render,
    subformula_closure,
)
from .models import (
    LogicProfile,
    ModelSystem,
    check_frame,
    evaluate,
    model_to_json_dict,
)

#: Every rule name that may appear in a proof trace.
RULES: tuple[str, ...] = (
    "seed",
    "C.&",
    "C.v-left",
    "C.v-right",
    "C.~~",
    "C.~&-left",
    "C.~&-right",
    "C.~v",
    "C.B*",
    "C.BB*",
    "C.~B*",
    "C.B-lift",
    "C.C",
    "C.CB",
    "C.B",
    "C.BDef-rewrite",
    "C.~-clash",
)


class InternalVerificationError(Exception):
    """A produced model failed its own verification, or a termination bound
    was exceeded.  Indicates a defect in the engine, never a property of the
    input formula."""


@dataclass(frozen=True)
class ProofStep:
    """One line of a refutation trace: formula ``formula`` entered world
    ``world`` at position ``i`` by ``rule`` from the premises at the given
    earlier positions."""

    i: int
    world: str
    formula: Formula
    rule: str
    premises: tuple[int, ...] = ()


@dataclass
class TableauStats:
    worlds_created: int = 0
    rules_fired: int = 0
    blocks_applied: int = 0


@dataclass(frozen=True)
class SatVerdict:
    model: ModelSystem
    stats: TableauStats

    @property
    def is_sat(self) -> bool:
        return True


@dataclass(frozen=True)
class UnsatVerdict:
    trace: tuple[ProofStep, ...]
    stats: TableauStats

    @property
    def is_sat(self) -> bool:
        return False


@dataclass(frozen=True)
class ValidityVerdict:
    """Validity via refutation: valid when the negated query is
    unsatisfiable (carrying that refutation trace), invalid otherwise
    (carrying a countermodel that falsifies the query)."""

    valid: bool
    trace: tuple[ProofStep, ...] | None
    countermodel: ModelSystem | None
    stats: TableauStats


class _Closed(Exception):
    """Internal: the current branch closed; carries the branch trace."""

    def __init__(self, trace: list[ProofStep]) -> None:
        super().__init__("branch closed")
        self.trace = trace


class _World:
    __slots__ = ("id", "parent", "label", "rewritten", "demands", "spawn_cursor", "cb")

    def __init__(self, wid: int, parent: tuple[str, int] | None) -> None:
        self.id = wid
        self.parent = parent
        self.label: dict[Formula, int] = {}
        self.rewritten: set[Formula] = set()
        # (agent, formula for the fresh alternative, premise step index)
        self.demands: list[tuple[str, Formula, int]] = []
        self.spawn_cursor = 0
        self.cb: dict[str, int] = {}

    def clone(self) -> _World:
        w = _World(self.id, self.parent)
        w.label = dict(self.label)
        w.rewritten = set(self.rewritten)
        w.demands = list(self.demands)
        w.spawn_cursor = self.spawn_cursor
        w.cb = dict(self.cb)
        return w

    def bel_agents(self) -> list[str]:
        """Agent names with a believed formula here, in label order."""
        seen: list[str] = []
        for f in self.label:
            if isinstance(f, Bel) and f.agent.name not in seen:
                seen.append(f.agent.name)
        return seen


class _State:
    __slots__ = ("worlds", "edges", "trace")

    def __init__(self) -> None:
        self.worlds: list[_World] = [_World(0, None)]
        self.edges: list[tuple[str, int, int]] = []
        self.trace: list[ProofStep] = []

    def clone(self) -> _State:
        st = _State.__new__(_State)
        st.worlds = [w.clone() for w in self.worlds]
        st.edges = list(self.edges)
        st.trace = list(self.trace)
        return st


class _Engine:
    def __init__(self, query: Formula, profile: LogicProfile, stats: TableauStats) -> None:
        self.query = query
        self.kernel = desugar(query)
        self.profile = profile
        self.stats = stats
        self.agent_names = sorted(a.name for a in agents(self.kernel))
        closure = subformula_closure(self.kernel)
        self.world_bound = 2 ** min(len(closure), 20)

    # ------------------------------------------------------------------
    # search

    def run(self) -> ModelSystem:
        state = _State()
        self._add(state, 0, self.kernel, "seed", ())
        return self._expand(state)

    def _expand(self, state: _State) -> ModelSystem:
        while True:
            action = self._step(state)
            if action is None:
                return self._extract(state)
            if action[0] == "applied":
                continue
            if action[0] == "branch":
                return self._explore_branch(state, action[1], action[2])
            return self._explore_cb(state, action[1], action[2])

    def _explore_branch(self, state: _State, wid: int, f: Formula) -> ModelSystem:
        if isinstance(f, Or):
            options = ((f.left, "C.v-left"), (f.right, "C.v-right"))
        else:
            assert isinstance(f, Not) and isinstance(f.sub, And)
            options = ((neg(f.sub.left), "C.~&-left"), (neg(f.sub.right), "C.~&-right"))
        premise = state.worlds[wid].label[f]
        last: _Closed | None = None
        for g, rule in options:
            sub = state.clone()
            try:
                self._add(sub, wid, g, rule, (premise,))
                return self._expand(sub)
            except _Closed as closed:
                last = closed
        assert last is not None
        raise last

    def _explore_cb(self, state: _State, wid: int, agent: str) -> ModelSystem:
        candidates: list[int | None] = []
        for edge_agent, src, dst in state.edges:
            if edge_agent == agent and src == wid:
                candidates.append(dst)
                break
        candidates.append(None)  # None means: spawn a fresh witness world
        last: _Closed | None = None
        for candidate in candidates:
            sub = state.clone()
            if candidate is None:
                sub.worlds[wid].cb[agent] = self._spawn(sub, wid, agent)
            else:
                sub.worlds[wid].cb[agent] = candidate
            try:
                return self._expand(sub)
            except _Closed as closed:
                last = closed
        assert last is not None
        raise last

    # ------------------------------------------------------------------
    # one deterministic rule application

    def _step(self, state: _State) -> tuple | None:
        # 1. non-branching propositional saturation
        for w in state.worlds:
            for f in list(w.label):
                if isinstance(f, And):
                    if f.left not in w.label or f.right not in w.label:
                        premise = (w.label[f],)
                        if f.left not in w.label:
                            self._add(state, w.id, f.left, "C.&", premise)
                        if f.right not in w.label:
                            self._add(state, w.id, f.right, "C.&", premise)
                        return ("applied",)
                elif isinstance(f, Not):
                    g = f.sub
                    if isinstance(g, Not) and g.sub not in w.label:
                        self._add(state, w.id, g.sub, "C.~~", (w.label[f],))
                        return ("applied",)
                    if isinstance(g, Or):
                        if neg(g.left) not in w.label or neg(g.right) not in w.label:
                            premise = (w.label[f],)
                            if neg(g.left) not in w.label:
                                self._add(state, w.id, neg(g.left), "C.~v", premise)
                            if neg(g.right) not in w.label:
                                self._add(state, w.id, neg(g.right), "C.~v", premise)
                            return ("applied",)

        # 2. negated-modal rewrites: ~B[a] q is the demand C[a] ~q
        for w in state.worlds:
            for f in list(w.label):
                if isinstance(f, Not) and isinstance(f.sub, Bel) and f not in w.rewritten:
                    w.rewritten.add(f)
                    demanded = neg(f.sub.sub)
                    step = self._record(
                        state, w.id, Comp(f.sub.agent, demanded),
                        "C.BDef-rewrite", (w.label[f],),
                    )
                    w.demands.append((f.sub.agent.name, demanded, step))
                    return ("applied",)

        # 3. branching propositional rules
        for w in state.worlds:
            for f in list(w.label):
                if isinstance(f, Or) and f.left not in w.label and f.right not in w.label:
                    return ("branch", w.id, f)
                if (
                    isinstance(f, Not)
                    and isinstance(f.sub, And)
                    and neg(f.sub.left) not in w.label
                    and neg(f.sub.right) not in w.label
                ):
                    return ("branch", w.id, f)

        # 4. propagation
        for agent, src, dst in state.edges:
            source = state.worlds[src]
            target = state.worlds[dst]
            for f in list(source.label):
                if isinstance(f, Bel) and f.agent.name == agent and f.sub not in target.label:
                    self._add(state, dst, f.sub, "C.B*", (source.label[f],))
                    return ("applied",)
        if self.profile is LogicProfile.HSTAR:
            for w in state.worlds:
                for f in list(w.label):
                    if isinstance(f, Bel) and f.agent.name in w.cb:
                        target = state.worlds[w.cb[f.agent.name]]
                        if f not in target.label:
                            self._add(state, target.id, f, "C.CB", (w.label[f],))
                            return ("applied",)
        if self.profile in (LogicProfile.HINTIKKA, LogicProfile.KD45):
            for agent, src, dst in state.edges:
                source = state.worlds[src]
                target = state.worlds[dst]
                for f in list(source.label):
                    if isinstance(f, Bel) and f.agent.name == agent and f not in target.label:
                        self._add(state, dst, f, "C.BB*", (source.label[f],))
                        return ("applied",)
        if self.profile is LogicProfile.KD45:
            for agent, src, dst in state.edges:
                source = state.worlds[src]
                target = state.worlds[dst]
                for f in list(source.label):
                    if (
                        isinstance(f, Not)
                        and isinstance(f.sub, Bel)
                        and f.sub.agent.name == agent
                        and f not in target.label
                    ):
                        self._add(state, dst, f, "C.~B*", (source.label[f],))
                        return ("applied",)
            for agent, src, dst in state.edges:
                source = state.worlds[src]
                target = state.worlds[dst]
                for f in list(target.label):
                    if isinstance(f, Bel) and f.agent.name == agent and f not in source.label:
                        self._add(state, src, f, "C.B-lift", (target.label[f],))
                        return ("applied",)

        # 5. world creation (skipped while a world is blocked)
        for w in state.worlds:
            if self._blocker(state, w) is not None:
                continue
            if w.spawn_cursor < len(w.demands):
                agent, g, premise = w.demands[w.spawn_cursor]
                w.spawn_cursor += 1
                new_id = self._spawn(state, w.id, agent)
                self._add(state, new_id, g, "C.C", (premise,))
                return ("applied",)
            if self.profile is LogicProfile.HSTAR:
                for agent in w.bel_agents():
                    if agent not in w.cb:
                        return ("cb", w.id, agent)
            for agent in w.bel_agents():
                if not any(e[0] == agent and e[1] == w.id for e in state.edges):
                    first = next(
                        f for f in w.label
                        if isinstance(f, Bel) and f.agent.name == agent
                    )
                    new_id = self._spawn(state, w.id, agent)
                    self._add(state, new_id, first.sub, "C.B", (w.label[first],))
                    return ("applied",)
        return None

    # ------------------------------------------------------------------
    # primitive actions

    def _record(
        self, state: _State, wid: int, f: Formula, rule: str, premises: tuple[int, ...]
    ) -> int:
        index = len(state.trace) + 1
        state.trace.append(ProofStep(index, f"w{wid}", f, rule, premises))
        self.stats.rules_fired += 1
        return index

    def _add(
        self, state: _State, wid: int, f: Formula, rule: str, premises: tuple[int, ...]
    ) -> None:
        w = state.worlds[wid]
        if f in w.label:
            return
        w.label[f] = self._record(state, wid, f, rule, premises)
        if isinstance(f, Not) and f.sub in w.label:
            positive = f.sub
        elif Not(f) in w.label:
            positive = f
        else:
            return
        clash_premises = tuple(sorted((w.label[positive], w.label[Not(positive)])))
        self._record(state, wid, positive, "C.~-clash", clash_premises)
        raise _Closed(state.trace)

    def _spawn(self, state: _State, parent: int, agent: str) -> int:
        new_id = len(state.worlds)
        state.worlds.append(_World(new_id, (agent, parent)))
        state.edges.append((agent, parent, new_id))
        self.stats.worlds_created += 1
        if len(state.worlds) > self.world_bound:
            raise InternalVerificationError(
                f"world count exceeded the closure bound {self.world_bound}"
            )
        return new_id

    def _blocker(self, state: _State, w: _World) -> _World | None:
        """Nearest strict ancestor with an identical label, reached through
        an unbroken chain of alternatives for the creating agent.  Only an
        ancestor that was itself created for that agent can block, so a
        redirect target always lies inside the same cluster."""
        if w.parent is None:
            return None
        agent = w.parent[0]
        keys = set(w.label)
        current = state.worlds[w.parent[1]]
        while current.parent is not None and current.parent[0] == agent:
            if set(current.label) == keys:
                return current
            current = state.worlds[current.parent[1]]
        return None

    # ------------------------------------------------------------------
    # model extraction

    def _extract(self, state: _State) -> ModelSystem:
        blocked: dict[int, int] = {}
        for w in state.worlds:
            blocker = self._blocker(state, w)
            if blocker is not None:
                blocked[w.id] = blocker.id
        self.stats.blocks_applied += len(blocked)

        def resolve(i: int) -> int:
            while i in blocked:
                i = blocked[i]
            return i

        redirected = [
            (agent, src, resolve(dst))
            for agent, src, dst in state.edges
            if src not in blocked
        ]

        reachable = {0}
        frontier = [0]
        outgoing: dict[int, list[int]] = {}
        for _, src, dst in redirected:
            outgoing.setdefault(src, []).append(dst)
        while frontier:
            u = frontier.pop()
            for v in outgoing.get(u, ()):
                if v not in reachable:
                    reachable.add(v)
                    frontier.append(v)

        keep = sorted(reachable)
        index = {old: new for new, old in enumerate(keep)}
        n = len(keep)
        labels = [state.worlds[old].label for old in keep]
        created_for = [
            None if state.worlds[old].parent is None else state.worlds[old].parent[0]
            for old in keep
        ]

        succ: dict[str, list[set[int]]] = {a: [set() for _ in range(n)] for a in self.agent_names}
        for agent, src, dst in redirected:
            if src in reachable and dst in reachable:
                succ[agent][index[src]].add(index[dst])

        for agent in self.agent_names:
            self._complete_relation(state, agent, succ[agent], labels, created_for, index, resolve, keep)

        valuation = {
            w: frozenset(f.name for f in labels[w] if isinstance(f, Atom))
            for w in range(n)
        }
        alternatives = {
            agent: frozenset((u, v) for u in range(n) for v in succ[agent][u])
            for agent in self.agent_names
        }
        model = ModelSystem(
            worlds=n, designated=0, valuation=valuation, alternatives=alternatives
        )
        violations = check_frame(model, self.profile)
        if violations:
            raise InternalVerificationError(
                f"extracted model violates its frame class: {violations[0].kind}"
            )
        if not evaluate(model, 0, self.query):
            raise InternalVerificationError(
                "extracted model does not satisfy the query at the designated world"
            )
        return model

    def _complete_relation(
        self,
        state: _State,
        agent: str,
        succ: list[set[int]],
        labels: list[dict[Formula, int]],
        created_for: list[str | None],
        index: dict[int, int],
        resolve,
        keep: list[int],
    ) -> None:
        """Grow the raw tableau relation for one agent into the profile's
        frame class without disturbing any labeled formula's truth."""
        n = len(succ)
        has_belief = [
            any(isinstance(f, Bel) and f.agent.name == agent for f in labels[w])
            for w in range(n)
        ]
        if self.profile is LogicProfile.KD:
            for w in range(n):
                if not succ[w]:
                    succ[w].add(w)
        elif self.profile is LogicProfile.HSTAR:
            # A world with no beliefs of this agent is its own witness; a
            # believing world inherits the successors of its designated
            # witness so that the witness's successor set nests inside its
            # own.
            witness: dict[int, int] = {}
            for old in keep:
                target = state.worlds[old].cb.get(agent)
                if target is not None:
                    witness[index[old]] = index[resolve(target)]
            for w in range(n):
                if not has_belief[w]:
                    succ[w].add(w)
                elif w not in witness:
                    raise InternalVerificationError(
                        f"believing world {w} saturated without a witness"
                    )
            changed = True
            while changed:
                changed = False
                for w, v in witness.items():
                    if not succ[v] <= succ[w]:
                        succ[w] |= succ[v]
                        changed = True
        elif self.profile is LogicProfile.HINTIKKA:
            changed = True
            while changed:
                changed = False
                for w in range(n):
                    expansion: set[int] = set()
                    for u in succ[w]:
                        if not succ[u] <= succ[w]:
                            expansion |= succ[u]
                    if expansion:
                        succ[w] |= expansion
                        changed = True
            for w in range(n):
                if not succ[w]:
                    succ[w].add(w)
        else:  # KD45: each tree of alternatives collapses into one cluster
            for root in range(n):
                if created_for[root] == agent:
                    continue
                members: set[int] = set()
                frontier = [root]
                while frontier:
                    u = frontier.pop()
                    for v in succ[u]:
                        if v not in members:
                            members.add(v)
                            frontier.append(v)
                if members:
                    for u in members | {root}:
                        succ[u] = set(members)
                else:
                    succ[root].add(root)


def decide_sat(f: Formula, profile: LogicProfile) -> SatVerdict | UnsatVerdict:
    """Decide satisfiability of ``f`` in the given profile.

    A satisfiable verdict carries a model that has already passed
    ``check_frame`` and evaluates the query true at its designated world 0.
    An unsatisfiable verdict carries the closing exploration as a trace
    whose last step is the clash.
    """
    stats = TableauStats()
    engine = _Engine(f, profile, stats)
    try:
        model = engine.run()
    except _Closed as closed:
        return UnsatVerdict(trace=tuple(closed.trace), stats=stats)
    return SatVerdict(model=model, stats=stats)


def decide_valid(f: Formula, profile: LogicProfile) -> ValidityVerdict:
    """Decide validity of ``f``: valid exactly when ``~f`` is unsatisfiable."""
    result = decide_sat(Not(f), profile)
    if isinstance(result, UnsatVerdict):
        return ValidityVerdict(valid=True, trace=result.trace, countermodel=None, stats=result.stats)
    return ValidityVerdict(
        valid=False, trace=None, countermodel=result.model, stats=result.stats
    )


def trace_to_json_dict(trace: tuple[ProofStep, ...] | list[ProofStep]) -> list[dict]:
    return [
        {
            "i": step.i,
            "world": step.world,
            "formula": render(step.formula),
            "rule": step.rule,
            "from": list(step.premises),
        }
        for step in trace
    ]


def verdict_to_json_dict(
    verdict: SatVerdict | UnsatVerdict | ValidityVerdict,
) -> dict:
    """JSON-ready form of any verdict.

    Satisfiable and invalid verdicts embed the (counter)model; unsatisfiable
    and valid verdicts embed the refutation steps.
    """
    if isinstance(verdict, SatVerdict):
        return {"verdict": "sat", "model": model_to_json_dict(verdict.model)}
    if isinstance(verdict, UnsatVerdict):
        return {"verdict": "unsat", "steps": trace_to_json_dict(verdict.trace)}
    if verdict.valid:
        assert verdict.trace is not None
        return {"verdict": "valid", "steps": trace_to_json_dict(verdict.trace)}
    assert verdict.countermodel is not None
    return {"verdict": "invalid", "model": model_to_json_dict(verdict.countermodel)}


def render_trace(
    trace: tuple[ProofStep, ...] | list[ProofStep], output: str = "text"
) -> str:
    """Render a refutation trace.

    Text format prints one step per line:

        (3) p ∈ w1   From (2) by (C.B*)

    with "By (seed)" on premise-free steps.  JSON format returns the
    serialized step list.
    """
    if output == "json":
        import json

        return json.dumps(trace_to_json_dict(trace), sort_keys=True)
    if output != "text":
        raise ValueError(f"unknown trace format {output!r}")
    lines = []
    for step in trace:
        if step.premises:
            cited = ", ".join(f"({p})" for p in step.premises)
            origin = f"From {cited} by ({step.rule})"
        else:
            origin = f"By ({step.rule})"
        lines.append(f"({step.i}) {render(step.formula)} ∈ {step.world}   {origin}")
    return "\n".join(lines)
