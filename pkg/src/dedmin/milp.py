"""0-1 integer linear programs and a deterministic solver for them.

The model (:class:`MilpInstance`) is a plain list of binary variables,
integer-coefficient linear constraints and one linear objective.  The
solver is branch-and-bound over chronological backtracking:

* integer bounds propagation to a fixpoint after every decision
  (:func:`propagate` exposes the same engine on its own);
* branching on the initial-layer state variable occurring in the most
  constraints, value 1 first;
* incumbent pruning with the trivial objective bound (fixed contribution
  plus the best case for everything unfixed);
* an optional root heuristic that mines the and/or structure the
  constraints encode and runs a seeded local search for a good feasible
  start; the incumbent it proposes is always re-checked against the raw
  constraints before being trusted.

All arithmetic is exact integer arithmetic; a reported optimum is the true
optimum of the instance, and ``infeasible`` is only reported after the
search space is exhausted.  Runs are deterministic given the same seed and
limits (modulo a wall-clock budget that cuts a run short).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

LESS_EQUAL = "<="
GREATER_EQUAL = ">="
EQUAL = "="

STATE = "state"
PATH = "path"
OTHER = "other"

MAXIMIZE = "max"
MINIMIZE = "min"


class MalformedInstance(ValueError):
    """Instance references undeclared variables or non-integer data."""


class IncompleteAssignment(ValueError):
    """evaluate() needs a value for every variable."""


@dataclass(frozen=True)
class Variable:
    """A binary decision variable with its structured name.

    ``kind``/``prop``/``copy``/``path`` mirror the naming contract
    (``x{prop}_c{copy}`` for states, ``l{prop}_p{path}_c{copy}`` for
    paths) so tools never have to re-parse names.
    """

    name: str
    kind: str = OTHER
    prop: int | None = None
    copy: int | None = None
    path: int | None = None


@dataclass(frozen=True)
class Constraint:
    """``sum(coef * var) rel rhs`` with integer coefficients."""

    terms: tuple[tuple[int, int], ...]  # (variable id, coefficient)
    rel: str
    rhs: int

    def lhs_value(self, values: Sequence[int]) -> int:
        return sum(coef * values[var] for var, coef in self.terms)

    def satisfied_by(self, values: Sequence[int]) -> bool:
        lhs = self.lhs_value(values)
        if self.rel == LESS_EQUAL:
            return lhs <= self.rhs
        if self.rel == GREATER_EQUAL:
            return lhs >= self.rhs
        return lhs == self.rhs


class MilpInstance:
    """Binary variables, linear constraints, one linear objective."""

    __slots__ = ("variables", "constraints", "objective", "sense",
                 "_index_by_name")

    def __init__(
        self,
        variables: Sequence[Variable],
        constraints: Sequence[Constraint],
        objective: Sequence[tuple[int, int]],
        sense: str = MAXIMIZE,
    ):
        if sense not in (MAXIMIZE, MINIMIZE):
            raise MalformedInstance(f"bad sense {sense!r}")
        self.variables = tuple(variables)
        self.constraints = tuple(constraints)
        self.objective = tuple(objective)
        self.sense = sense
        self._index_by_name = {v.name: i for i, v in enumerate(self.variables)}
        if len(self._index_by_name) != len(self.variables):
            raise MalformedInstance("duplicate variable name")
        self._check_refs()

    def _check_refs(self) -> None:
        n = len(self.variables)
        for ci, c in enumerate(self.constraints):
            if c.rel not in (LESS_EQUAL, GREATER_EQUAL, EQUAL):
                raise MalformedInstance(f"constraint {ci}: bad relation {c.rel!r}")
            if not isinstance(c.rhs, int):
                raise MalformedInstance(f"constraint {ci}: non-integer rhs")
            for var, coef in c.terms:
                if not 0 <= var < n:
                    raise MalformedInstance(
                        f"constraint {ci}: undeclared variable id {var}")
                if not isinstance(coef, int):
                    raise MalformedInstance(
                        f"constraint {ci}: non-integer coefficient {coef!r}")
        for var, coef in self.objective:
            if not 0 <= var < n:
                raise MalformedInstance(f"objective: undeclared variable id {var}")
            if not isinstance(coef, int):
                raise MalformedInstance(f"objective: non-integer coefficient")

    def index_of(self, name: str) -> int:
        try:
            return self._index_by_name[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def has_variable(self, name: str) -> bool:
        return name in self._index_by_name

    def objective_value(self, values: Sequence[int]) -> int:
        return sum(coef * values[var] for var, coef in self.objective)

    def constraint_text(self, index: int) -> str:
        c = self.constraints[index]
        parts = []
        for var, coef in c.terms:
            name = self.variables[var].name
            if not parts:
                lead = "" if coef == 1 else ("-" if coef == -1 else f"{coef} ")
                parts.append(f"{lead}{name}" if coef != -1 else f"-{name}")
            else:
                sign = "+" if coef > 0 else "-"
                mag = abs(coef)
                head = name if mag == 1 else f"{mag} {name}"
                parts.append(f"{sign} {head}")
        body = " ".join(parts) if parts else "0"
        return f"c{index}: {body} {c.rel} {c.rhs}"

    def __repr__(self) -> str:
        return (f"MilpInstance(vars={len(self.variables)}, "
                f"constraints={len(self.constraints)}, sense={self.sense})")


OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
TIME_LIMIT = "time_limit"


@dataclass
class SolveStats:
    nodes: int = 0
    propagations: int = 0
    wall_time: float = 0.0
    heuristic_evals: int = 0

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "propagations": self.propagations,
                "wall_time": round(self.wall_time, 6),
                "heuristic_evals": self.heuristic_evals}


@dataclass
class Solution:
    status: str
    assignment: dict[str, int] | None
    objective: int | None
    stats: SolveStats = field(default_factory=SolveStats)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "objective": self.objective,
            "assignment": (None if self.assignment is None
                           else dict(sorted(self.assignment.items()))),
            "stats": self.stats.to_json(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"


@dataclass(frozen=True)
class SolveLimits:
    time_budget: float = 600.0
    node_budget: int | None = None
    seed: int = 0
    heuristic: bool = True
    heuristic_evals: int | None = None


@dataclass(frozen=True)
class Violation:
    constraint: int
    lhs: int
    text: str


def _values_from_mapping(instance: MilpInstance,
                         assignment: Mapping[str, int]) -> list[int]:
    values = [-1] * len(instance.variables)
    for name, value in assignment.items():
        if not instance.has_variable(name):
            raise MalformedInstance(f"unknown variable {name!r}")
        if value not in (0, 1):
            raise MalformedInstance(f"{name}: non-binary value {value!r}")
        values[instance.index_of(name)] = value
    missing = [v.name for v, val in zip(instance.variables, values) if val < 0]
    if missing:
        raise IncompleteAssignment(
            f"{len(missing)} variables unassigned (first: {missing[0]})")
    return values


@dataclass(frozen=True)
class EvalReport:
    objective: int
    violations: tuple[Violation, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations


def evaluate(instance: MilpInstance, assignment: Mapping[str, int]) -> EvalReport:
    """Exact integer check of a full assignment against every constraint."""
    values = _values_from_mapping(instance, assignment)
    violations = []
    for ci, c in enumerate(instance.constraints):
        if not c.satisfied_by(values):
            violations.append(Violation(ci, c.lhs_value(values),
                                        instance.constraint_text(ci)))
    return EvalReport(instance.objective_value(values), tuple(violations))


# --------------------------------------------------------------------------
# propagation engine
#
# Constraints are normalized to rows ``sum(coef * var) >= rhs``.  Each row
# keeps ``ub``, the largest value its left side can still reach given the
# current fixings.  Fixing a variable away from its best value shrinks the
# ub of the rows it appears in; a row whose ub dropped below its rhs is a
# conflict, and a row that can only survive with some unfixed variable at a
# specific value forces that value.

FIXPOINT = "fixpoint"
CONFLICT = "conflict"


class _Engine:
    def __init__(self, instance: MilpInstance):
        self.instance = instance
        nvars = len(instance.variables)
        rows: list[tuple[tuple[int, int], ...]] = []
        rhs: list[int] = []
        origin: list[int] = []

        def add_row(terms, bound, ci):
            rows.append(tuple(terms))
            rhs.append(bound)
            origin.append(ci)

        for ci, c in enumerate(instance.constraints):
            if c.rel in (GREATER_EQUAL, EQUAL):
                add_row(c.terms, c.rhs, ci)
            if c.rel in (LESS_EQUAL, EQUAL):
                add_row(tuple((v, -a) for v, a in c.terms), -c.rhs, ci)

        self.rows = rows
        self.rhs = rhs
        self.origin = origin
        self.val = [-1] * nvars
        self.ub = [sum(a for _, a in row if a > 0) for row in rows]
        occ: list[list[tuple[int, int]]] = [[] for _ in range(nvars)]
        for ri, row in enumerate(rows):
            for v, a in row:
                occ[v].append((ri, a))
        self.occ = [tuple(entries) for entries in occ]
        self.trail: list[int] = []
        # examine every row once so root-level forcings and trivially
        # impossible rows are caught before any fixing happens
        self.queue: list[int] = list(range(len(rows)))
        self.inq = [True] * len(rows)
        self.fix_count = 0

    def mark(self) -> int:
        return len(self.trail)

    def fix(self, var: int, value: int) -> bool:
        """Record ``var = value``; False when it contradicts a prior fixing."""
        old = self.val[var]
        if old >= 0:
            return old == value
        self.val[var] = value
        self.trail.append(var)
        self.fix_count += 1
        ub = self.ub
        inq = self.inq
        queue = self.queue
        for ri, a in self.occ[var]:
            if (a > 0 and value == 0) or (a < 0 and value == 1):
                ub[ri] -= abs(a)
                if not inq[ri]:
                    inq[ri] = True
                    queue.append(ri)
        return True

    def propagate(self) -> int | None:
        """Run the queue to a fixpoint; returns a conflicting row or None."""
        queue = self.queue
        inq = self.inq
        ub = self.ub
        rhs = self.rhs
        rows = self.rows
        val = self.val
        while queue:
            ri = queue.pop()
            inq[ri] = False
            slack = ub[ri] - rhs[ri]
            if slack < 0:
                for r in queue:
                    inq[r] = False
                queue.clear()
                return ri
            for v, a in rows[ri]:
                if val[v] < 0:
                    if a > 0:
                        if a > slack:
                            self.fix(v, 1)
                    elif -a > slack:
                        self.fix(v, 0)
        return None

    def undo_to(self, mark: int) -> None:
        ub = self.ub
        while len(self.trail) > mark:
            var = self.trail.pop()
            value = self.val[var]
            self.val[var] = -1
            for ri, a in self.occ[var]:
                if (a > 0 and value == 0) or (a < 0 and value == 1):
                    ub[ri] += abs(a)
        for r in self.queue:
            self.inq[r] = False
        self.queue.clear()


@dataclass(frozen=True)
class Propagation:
    status: str
    fixed: dict[str, int]
    conflict: int | None  # constraint index, when status == "conflict"


def propagate(instance: MilpInstance,
              partial: Mapping[str, int]) -> Propagation:
    """Integer bounds reasoning from a partial assignment to a fixpoint.

    Returns the variable values the constraints force on top of ``partial``,
    or the constraint that became unsatisfiable.
    """
    engine = _Engine(instance)
    given = set()
    for name, value in partial.items():
        if not instance.has_variable(name):
            raise MalformedInstance(f"unknown variable {name!r}")
        if value not in (0, 1):
            raise MalformedInstance(f"{name}: non-binary value {value!r}")
        var = instance.index_of(name)
        given.add(var)
        if not engine.fix(var, value):
            raise MalformedInstance(f"{name}: contradictory values given")
    conflict_row = engine.propagate()
    if conflict_row is not None:
        return Propagation(CONFLICT, {}, engine.origin[conflict_row])
    fixed = {
        instance.variables[v].name: engine.val[v]
        for v in engine.trail if v not in given
    }
    return Propagation(FIXPOINT, fixed, None)


# --------------------------------------------------------------------------
# root heuristic: mine the and/or structure and local-search over inputs

class _MinedStructure:
    """Per-variable definitions recovered from the constraint rows.

    ``defs[v] = (singles, batches)`` meaning ``v = OR(singles) OR
    (AND(batch) for some batch)``.  Inputs (variables with no definition
    that everything else depends on) are free; evaluating the definitions
    in dependency order yields the unique completion of an input
    assignment, which is exactly what propagation would compute.
    """

    def __init__(self, order, defs, inputs):
        self.order = order          # list of (var, singles, batches) in eval order
        self.defs = defs
        self.inputs = inputs        # list of input variable ids


def _order_key(variable: Variable) -> int | None:
    if variable.copy is None:
        return None
    if variable.kind == STATE:
        return 2 * variable.copy
    if variable.kind == PATH:
        return 2 * variable.copy + 1
    return None


def _mine_structure(instance: MilpInstance) -> _MinedStructure | None:
    keys = [_order_key(v) for v in instance.variables]
    defs: dict[int, tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]] = {}

    for c in instance.constraints:
        rows = []
        if c.rel in (GREATER_EQUAL, EQUAL):
            rows.append((c.terms, c.rhs))
        if c.rel in (LESS_EQUAL, EQUAL):
            rows.append((tuple((v, -a) for v, a in c.terms), -c.rhs))
        for terms, rhs in rows:
            negatives = [(v, a) for v, a in terms if a < 0]
            positives = [(v, a) for v, a in terms if a > 0]
            if len(negatives) != 1 or not positives:
                continue
            u, cu = negatives[0]
            if keys[u] is None or any(keys[v] is None for v, _ in positives):
                continue
            if keys[u] <= max(keys[v] for v, _ in positives):
                continue  # would define a variable from later layers
            k = -cu
            if k == 2 and rhs == -1 and all(a == 1 for _, a in positives):
                singles: tuple[int, ...] = tuple(v for v, _ in positives)
                batches: tuple[tuple[int, ...], ...] = ()
            elif rhs == 0 and k == 1 and all(a == 1 for _, a in positives):
                singles = tuple(v for v, _ in positives)
                batches = ()
            elif rhs == 0 and k >= 2 and all(a in (1, k) for _, a in positives):
                singles = tuple(v for v, a in positives if a == k)
                batch = tuple(v for v, a in positives if a == 1)
                batches = (batch,) if batch else ()
            else:
                continue
            if u in defs and defs[u] != (singles, batches):
                return None  # ambiguous; stay on the generic path
            defs[u] = (singles, batches)

    inputs = [v for v in range(len(instance.variables))
              if v not in defs and keys[v] is not None]
    if any(keys[v] is None for v in range(len(instance.variables))):
        return None
    if not defs or not inputs:
        return None
    # every defined variable must only reference inputs or other defined vars
    order = sorted(defs, key=lambda v: (keys[v], v))
    known = set(inputs)
    for v in order:
        singles, batches = defs[v]
        refs = set(singles)
        for b in batches:
            refs.update(b)
        if not refs <= known:
            return None
        known.add(v)
    ordered = [(v,) + defs[v] for v in order]
    return _MinedStructure(ordered, defs, inputs)


class _ClosureEval:
    """Fast evaluation of input assignments over a mined structure."""

    def __init__(self, instance: MilpInstance, mined: _MinedStructure):
        self.nvars = len(instance.variables)
        self.order = mined.order
        self.inputs = mined.inputs
        self.obj = list(instance.objective)
        self.required = self._required_ones(instance)

    @staticmethod
    def _required_ones(instance: MilpInstance) -> list[int]:
        required = []
        for c in instance.constraints:
            if c.rel == EQUAL and c.rhs == 1 and len(c.terms) == 1 \
                    and c.terms[0][1] == 1:
                required.append(c.terms[0][0])
        return required

    def run(self, one_inputs: set[int]) -> tuple[int, int]:
        """Objective and the number of unmet must-be-one rows."""
        values = [0] * self.nvars
        for v in one_inputs:
            values[v] = 1
        for v, singles, batches in self.order:
            x = 0
            for s in singles:
                if values[s]:
                    x = 1
                    break
            if not x:
                for batch in batches:
                    for u in batch:
                        if not values[u]:
                            break
                    else:
                        x = 1
                        break
            values[v] = x
        objective = sum(a * values[v] for v, a in self.obj)
        missing = sum(1 for v in self.required if not values[v])
        return objective, missing


def _find_budget(instance: MilpInstance, inputs: list[int]) -> int | None:
    """Locate the axiom-budget row: all-ones <= k over exactly the inputs."""
    input_set = set(inputs)
    for c in instance.constraints:
        if c.rel != LESS_EQUAL or c.rhs < 0:
            continue
        if all(a == 1 for _, a in c.terms) \
                and {v for v, _ in c.terms} == input_set:
            return c.rhs
    return None


class _HeuristicStop(Exception):
    """Internal: eval or time budget of the root heuristic ran out."""


def _heuristic_incumbent(instance, engine, limits, stats, deadline):
    """Seeded local search for a strong feasible start; None when inapplicable.

    Works on the mined closure structure, so candidate evaluation is cheap;
    the winning candidate is completed through the real propagation engine
    and therefore satisfies the instance exactly.  Both senses reduce to
    fixed-size subset climbs over the input layer: maximize climbs the
    objective at the given axiom budget, minimize repeatedly asks whether
    one guess fewer still covers everything the instance requires.
    """
    mined = _mine_structure(instance)
    if mined is None:
        return None
    evaluator = _ClosureEval(instance, mined)
    inputs = mined.inputs
    maximize = instance.sense == MAXIMIZE

    edges = sum(len(s) + sum(len(b) for b in bats)
                for _, s, bats in mined.order) + len(mined.order)
    eval_budget = limits.heuristic_evals
    if eval_budget is None:
        eval_budget = max(3000, min(60000, 200_000_000 // max(1, edges)))
        # small input layers have few distinct subsets; don't oversample
        eval_budget = min(eval_budget,
                          40 * len(inputs) * max(4, len(inputs)))
    rng = random.Random(limits.seed)
    stall_limit = 8

    score = [0] * len(instance.variables)
    for c in instance.constraints:
        for v, _ in c.terms:
            score[v] += 1
    by_score = sorted(inputs, key=lambda v: (-score[v], v))

    evals = 0
    best_sel: set[int] | None = None
    best_obj = None

    def run(selection):
        nonlocal evals
        if evals >= eval_budget:
            raise _HeuristicStop
        if (evals & 63) == 0 and time.monotonic() > deadline:
            raise _HeuristicStop
        evals += 1
        return evaluator.run(selection)

    def consider(selection):
        nonlocal best_sel, best_obj
        objective, missing = run(selection)
        if missing == 0:
            if best_obj is None or (objective > best_obj if maximize
                                    else objective < best_obj):
                best_obj = objective
                best_sel = set(selection)
        return objective, missing

    def metric(selection):
        # larger is better in both senses: coverage, minus any shortfall
        # against rows that demand a variable to be 1
        objective, missing = run(selection)
        return objective - missing * (len(instance.variables) + 1), missing

    def climb(sel: set[int], ideal: int) -> tuple[set[int], int]:
        """First-improvement swap ascent of ``metric`` at fixed size."""
        current, _ = metric(sel)
        improved = True
        while improved and current < ideal:
            improved = False
            ins = [v for v in by_score if v not in sel]
            rng.shuffle(ins)
            for out in sorted(sel):
                for inn in ins:
                    cand = (sel - {out}) | {inn}
                    value, _ = metric(cand)
                    if value > current:
                        sel, current, improved = cand, value, True
                        break
                if improved:
                    break
        return sel, current

    def search_size(k: int, ideal: int, starts) -> tuple[set[int] | None, int]:
        """Iterated local search over size-k subsets; best metric wins."""
        top: tuple[set[int] | None, int] = (None, -(1 << 62))
        stall = 0
        pool = list(starts)
        while (pool or stall < stall_limit) and top[1] < ideal:
            if pool:
                cand = set(pool.pop(0))
            elif top[0] and rng.random() < 0.7:
                cand = set(top[0])
                for _ in range(2):
                    if cand and len(inputs) > len(cand):
                        cand.discard(rng.choice(sorted(cand)))
                        cand.add(rng.choice(
                            [v for v in inputs if v not in cand]))
            else:
                cand = set(rng.sample(inputs, k))
            cand, value = climb(cand, ideal)
            if value > top[1]:
                top = (cand, value)
                stall = 0
            else:
                stall += 1
        return top

    try:
        if maximize:
            axiom_budget = _find_budget(instance, inputs)
            if axiom_budget is None:
                return None
            k = min(axiom_budget, len(inputs))
            ideal = sum(a for _, a in instance.objective if a > 0)
            if k >= len(inputs):
                consider(set(inputs))
                raise _HeuristicStop
            # greedy constructive start plus the raw occurrence ranking
            sel: set[int] = set()
            while len(sel) < k:
                gain_best, pick = None, None
                for v in by_score:
                    if v in sel:
                        continue
                    value, _ = metric(sel | {v})
                    if gain_best is None or value > gain_best:
                        gain_best, pick = value, v
                sel.add(pick)
            found, value = search_size(k, ideal, [set(by_score[:k]), sel])
            if found is not None and value > -(1 << 61):
                consider(found)
        else:
            sel = set(inputs)
            _, missing = consider(sel)
            if missing:
                return None  # even guessing everything fails; leave it to search
            # greedy drop pass, cheapest-looking variables first
            for v in sorted(inputs, key=lambda v: (score[v], v)):
                if v in sel and len(sel) > 1:
                    _, missing = run(sel - {v})
                    if missing == 0:
                        sel -= {v}
            consider(sel)
            # now push below the greedy floor one size at a time
            while len(sel) > 1:
                target = len(sel) - 1
                starts = [sel - {v} for v in sorted(sel, key=lambda v: (score[v], v))[:3]]
                found, value = search_size(target, 0, starts)
                if found is None or value < 0:
                    break
                sel = found
                consider(sel)
    except _HeuristicStop:
        pass

    stats.heuristic_evals = evals
    return _complete_selection(instance, engine, inputs, best_sel)


def _complete_selection(instance, engine, inputs, selection):
    """Push a candidate input layer through the real engine and verify it."""
    if selection is None:
        return None
    mark = engine.mark()
    ok = True
    for v in inputs:
        if not engine.fix(v, 1 if v in selection else 0):
            ok = False
            break
    if ok and engine.propagate() is not None:
        ok = False
    if ok and any(val < 0 for val in engine.val):
        ok = False
    if not ok:
        engine.undo_to(mark)
        return None
    values = list(engine.val)
    engine.undo_to(mark)
    assignment = {v.name: values[i] for i, v in enumerate(instance.variables)}
    report = evaluate(instance, assignment)
    if report.feasible:
        return report.objective, values
    return None


# --------------------------------------------------------------------------
# branch and bound

def _decision_order(instance: MilpInstance) -> list[int]:
    score = [0] * len(instance.variables)
    for c in instance.constraints:
        for v, _ in c.terms:
            score[v] += 1
    initial = [i for i, v in enumerate(instance.variables)
               if v.kind == STATE and v.copy == 0]
    first = set(initial)
    rest = [i for i in range(len(instance.variables)) if i not in first]
    initial.sort(key=lambda v: (-score[v], v))
    rest.sort(key=lambda v: (-score[v], v))
    return initial + rest


def solve(instance: MilpInstance, limits: SolveLimits | None = None) -> Solution:
    """Deterministic branch-and-bound; optima are exact, proofs complete.

    Returns ``optimal`` only when the search tree was exhausted within the
    budgets, ``time_limit`` (with the best incumbent, if any) otherwise,
    and ``infeasible`` only with a completed proof.
    """
    if limits is None:
        limits = SolveLimits()
    start = time.monotonic()
    stats = SolveStats()

    if not instance.variables:
        stats.wall_time = time.monotonic() - start
        status = OPTIMAL if not any(
            not c.satisfied_by([]) for c in instance.constraints) else INFEASIBLE
        if status == OPTIMAL:
            return Solution(OPTIMAL, {}, 0, stats)
        return Solution(INFEASIBLE, None, None, stats)

    engine = _Engine(instance)
    maximize = instance.sense == MAXIMIZE
    obj_terms = list(instance.objective)

    def bound() -> int:
        val = engine.val
        total = 0
        for v, a in obj_terms:
            x = val[v]
            if x < 0:
                if (a > 0) == maximize:
                    total += a
            else:
                total += a * x
        return total

    best_obj: int | None = None
    best_values: list[int] | None = None

    def better(candidate: int) -> bool:
        if best_obj is None:
            return True
        return candidate > best_obj if maximize else candidate < best_obj

    def prunable(b: int) -> bool:
        if best_obj is None:
            return False
        return b <= best_obj if maximize else b >= best_obj

    # root propagation: a conflict here is a completed infeasibility proof
    for c in instance.constraints:
        if not c.terms:
            ok = ((c.rel == LESS_EQUAL and 0 <= c.rhs)
                  or (c.rel == GREATER_EQUAL and 0 >= c.rhs)
                  or (c.rel == EQUAL and c.rhs == 0))
            if not ok:
                stats.wall_time = time.monotonic() - start
                return Solution(INFEASIBLE, None, None, stats)
    if engine.propagate() is not None:
        stats.propagations = engine.fix_count
        stats.wall_time = time.monotonic() - start
        return Solution(INFEASIBLE, None, None, stats)
    root_mark = engine.mark()

    if limits.heuristic:
        # leave at least half the budget to the exact search
        deadline = start + limits.time_budget * 0.5
        seeded = _heuristic_incumbent(instance, engine, limits, stats, deadline)
        if seeded is not None:
            best_obj, best_values = seeded

    order = _decision_order(instance)

    def next_unfixed() -> int | None:
        val = engine.val
        for v in order:
            if val[v] < 0:
                return v
        return None

    # chronological DFS; each stack entry is (var, values_left, trail_mark)
    stack: list[tuple[int, list[int], int]] = []
    out_of_budget = False
    exhausted = False
    check_mask = 0x3F

    def budget_hit() -> bool:
        if limits.node_budget is not None and stats.nodes >= limits.node_budget:
            return True
        if (stats.nodes & check_mask) == 0 \
                and time.monotonic() - start > limits.time_budget:
            return True
        return False

    while True:
        conflict = engine.propagate()
        if conflict is None and not prunable(bound()):
            var = next_unfixed()
            if var is None:
                values = list(engine.val)
                objective = instance.objective_value(values)
                if better(objective):
                    best_obj, best_values = objective, values
                # a leaf cannot be extended; fall through to backtrack
            else:
                stats.nodes += 1
                if budget_hit():
                    out_of_budget = True
                    break
                mark = engine.mark()
                stack.append((var, [0], mark))
                engine.fix(var, 1)
                continue
        # backtrack: retry the deepest decision with an untried value
        while stack:
            var, values_left, mark = stack[-1]
            engine.undo_to(mark)
            if values_left:
                engine.fix(var, values_left.pop())
                break
            stack.pop()
        else:
            exhausted = True
            break

    stats.propagations = engine.fix_count
    stats.wall_time = time.monotonic() - start

    if best_values is not None:
        assignment = {v.name: best_values[i]
                      for i, v in enumerate(instance.variables)}
    else:
        assignment = None

    if exhausted:
        if best_values is None:
            return Solution(INFEASIBLE, None, None, stats)
        return Solution(OPTIMAL, assignment, best_obj, stats)
    if out_of_budget:
        return Solution(TIME_LIMIT, assignment, best_obj, stats)
    # not reachable: the loop only exits via exhaustion or budget
    raise AssertionError("search loop exited unexpectedly")
