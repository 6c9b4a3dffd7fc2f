"""System simplifications applied before encoding.

Three transformations, all minimum-preserving:

* :func:`expand_rules` unfolds every symmetric rule into its directed
  readings so downstream code only deals with one rule shape.
* :func:`merge_equalities` collapses pairs proven mutually derivable by a
  two-member symmetric rule into a single representative.
* :func:`eliminate_independent` strips variables that occur in exactly one
  rule; depending on how they occur they are either derivable for free or
  forced into every guess set, and the returned records say which.

``merge_equalities`` and ``eliminate_independent`` both return enough
bookkeeping to translate a guess set for the reduced system back into one
for the original (see :func:`extend_guess`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (DeductionSystem, DirectedRule, SymmetricRule, require_valid)


def expand_rules(system: DeductionSystem) -> DeductionSystem:
    """Unfold symmetric rules; the result has directed rules only.

    A symmetric rule of size k yields k directed rules, one per member as
    conclusion.  Original directed rules keep their positions; expansions
    follow in declaration order.  Exact duplicates are dropped (first
    occurrence wins) so mechanically generated models stay clean.
    """
    require_valid(system)
    rules: list[DirectedRule] = []
    seen: set[tuple] = set()

    def push(premises: Iterable[int], conclusion: int) -> None:
        rule = DirectedRule.of(premises, conclusion)
        key = (rule.premises, rule.conclusion)
        if key not in seen:
            seen.add(key)
            rules.append(rule)

    for rule in system.directed_rules:
        push(rule.premises, rule.conclusion)
    for rule in system.symmetric_rules:
        for pos, member in enumerate(rule.members):
            push((m for i, m in enumerate(rule.members) if i != pos), member)
    return DeductionSystem(system.propositions, (), rules, name=system.name)


def is_expanded(system: DeductionSystem) -> bool:
    return not system.symmetric_rules


@dataclass(frozen=True)
class MergeMap:
    """Name-level record of equality merging.

    ``representative`` maps every original proposition name to the name
    that survived for its equality class (identity for survivors).
    """

    representative: dict[str, str]
    removed: tuple[str, ...]
    rules_removed: int

    def resolve(self, name: str) -> str:
        return self.representative.get(name, name)

    def translate_guess(self, names: Iterable[str]) -> set[str]:
        return {self.resolve(n) for n in names}

    def to_json(self) -> dict:
        merged = {k: v for k, v in sorted(self.representative.items()) if k != v}
        return {"merged_into": merged,
                "variables_removed": len(self.removed),
                "rules_removed": self.rules_removed}


def merge_equalities(system: DeductionSystem) -> tuple[DeductionSystem, MergeMap]:
    """Collapse every pair related by a two-member symmetric rule.

    Union-find over all such pairs, so chains like ``[a,b], [b,c]`` end in a
    single class; the member with the lowest index survives.  Rules are
    rewritten onto representatives; a bigger symmetric rule whose members
    collapse degenerates into the directed readings that still say
    something.  Repeats until no two-member symmetric rule is left.
    """
    require_valid(system)
    parent = list(range(system.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            parent[hi] = lo

    current = system
    total_rules_removed = 0
    while True:
        pairs = [r for r in current.symmetric_rules if len(r.members) == 2]
        if not pairs:
            break
        parent = list(range(current.n))
        for rule in pairs:
            union(rule.members[0], rule.members[1])

        survivors = [i for i in range(current.n) if find(i) == i]
        new_index = {old: new for new, old in enumerate(survivors)}

        def relabel(old: int) -> int:
            return new_index[find(old)]

        symmetric: list[SymmetricRule] = []
        directed: list[DirectedRule] = []
        seen_sym: set[tuple] = set()
        seen_dir: set[tuple] = set()

        def push_directed(premises, conclusion):
            if conclusion in premises or not premises:
                return
            rule = DirectedRule.of(premises, conclusion)
            key = (rule.premises, rule.conclusion)
            if key not in seen_dir:
                seen_dir.add(key)
                directed.append(rule)

        for rule in current.symmetric_rules:
            if len(rule.members) == 2:
                continue  # consumed by the merge itself
            members = tuple(relabel(m) for m in rule.members)
            if len(set(members)) == len(members):
                key = tuple(sorted(members))
                if key not in seen_sym:
                    seen_sym.add(key)
                    symmetric.append(SymmetricRule(members))
            else:
                # Members collapsed: keep the per-position readings that
                # still deduce one proposition from genuinely different
                # ones.  A reading whose premises contain its own
                # conclusion (because a duplicate of the concluded class
                # sits among the other members) says nothing and is
                # dropped inside push_directed.
                for pos, conclusion in enumerate(members):
                    premises = {m for j, m in enumerate(members) if j != pos}
                    push_directed(premises, conclusion)
        for rule in current.directed_rules:
            push_directed({relabel(p) for p in rule.premises},
                          relabel(rule.conclusion))

        merged_system = DeductionSystem.from_names(
            [current.name_of(i) for i in survivors], symmetric, directed,
            name=current.name)
        total_rules_removed += current.rule_count - merged_system.rule_count

        # record name-level mapping for this pass
        pass_map = {current.name_of(i): current.name_of(find(i))
                    for i in range(current.n)}
        if current is system:
            representative = pass_map
        else:
            representative = {name: pass_map.get(rep, rep)
                              for name, rep in representative.items()}
            for name, rep in pass_map.items():
                representative.setdefault(name, rep)
        current = merged_system

    if current is system:
        representative = {p.name: p.name for p in system.propositions}
    removed = tuple(sorted(set(representative) - set(current.names())))
    return current, MergeMap(representative, removed, total_rules_removed)


@dataclass(frozen=True)
class EliminatedVar:
    """One independent-variable elimination and how to undo it.

    ``kind`` is ``must_guess`` when the variable has to be part of every
    full guess set (it occurred only as a premise, so nothing ever derives
    it), or ``derived_member`` / ``derived_conclusion`` when the recorded
    rule derives it for free once the rest is known.
    """

    name: str
    kind: str
    premises: tuple[str, ...]
    conclusion: str | None

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind,
                "premises": list(self.premises), "conclusion": self.conclusion}


def eliminate_independent(
    system: DeductionSystem,
) -> tuple[DeductionSystem, list[EliminatedVar]]:
    """Strip variables occurring in exactly one rule, to a fixpoint.

    Three cases, processed in ascending index order:

    * member of a symmetric rule: the variable and the rule go away; the
      variable is derivable from the other members, so the minimum is
      untouched.
    * conclusion of a directed rule: same, the rule was its only source.
    * premise of a directed rule: nothing ever derives the variable, so
      every full guess set must contain it.  The variable is dropped, the
      rule keeps its remaining premises (the variable is known by
      assumption), and the record says "must guess".

    A rule containing two or more independent variables is left alone, as
    is a single-premise rule whose premise is independent; both would need
    arguments the simple cases do not cover.

    Duplicate rules (same members regardless of order, or same premises and
    conclusion) are collapsed before counting, so occurrences reflect
    distinct rules; premise rewrites can mint new duplicates, hence the
    dedup runs every round.
    """
    require_valid(system)
    names = list(system.names())
    symmetric = list(system.symmetric_rules)
    directed = list(system.directed_rules)
    eliminated: list[EliminatedVar] = []

    def dedup() -> None:
        nonlocal symmetric, directed
        seen: set = set()
        unique_sym = []
        for rule in symmetric:
            key = tuple(sorted(rule.members))
            if key not in seen:
                seen.add(key)
                unique_sym.append(rule)
        symmetric = unique_sym
        seen = set()
        unique_dir = []
        for rule in directed:
            key = (rule.premises, rule.conclusion)
            if key not in seen:
                seen.add(key)
                unique_dir.append(rule)
        directed = unique_dir

    def occurrences() -> dict[int, list[tuple[str, int]]]:
        occ: dict[int, list[tuple[str, int]]] = {i: [] for i in range(len(names))}
        for ri, rule in enumerate(symmetric):
            for m in rule.members:
                occ[m].append(("sym", ri))
        for ri, rule in enumerate(directed):
            for p in rule.premises:
                occ[p].append(("dir", ri))
            occ[rule.conclusion].append(("dir", ri))
        return occ

    def drop_var(victim: int) -> None:
        nonlocal symmetric, directed
        remap = {old: (old if old < victim else old - 1)
                 for old in range(len(names)) if old != victim}
        del names[victim]
        symmetric = [SymmetricRule(tuple(remap[m] for m in r.members))
                     for r in symmetric]
        directed = [DirectedRule(tuple(remap[p] for p in r.premises),
                                 remap[r.conclusion]) for r in directed]

    while True:
        dedup()
        occ = occurrences()
        progressed = False
        for var in range(len(names)):
            if len(occ[var]) != 1:
                continue
            kind, ri = occ[var][0]
            rule_vars = (set(symmetric[ri].members) if kind == "sym"
                         else set(directed[ri].premises) | {directed[ri].conclusion})
            independents = [v for v in rule_vars if len(occ[v]) == 1]
            if len(independents) != 1:
                continue  # two independents in one rule: out of scope

            if kind == "sym":
                rule = symmetric[ri]
                others = tuple(names[m] for m in rule.members if m != var)
                eliminated.append(EliminatedVar(names[var], "derived_member",
                                                others, None))
                del symmetric[ri]
                drop_var(var)
            else:
                rule = directed[ri]
                if var == rule.conclusion:
                    eliminated.append(EliminatedVar(
                        names[var], "derived_conclusion",
                        tuple(names[p] for p in rule.premises), None))
                    del directed[ri]
                    drop_var(var)
                else:
                    if len(rule.premises) == 1:
                        continue  # rule would lose all premises; leave it
                    eliminated.append(EliminatedVar(
                        names[var], "must_guess",
                        tuple(names[p] for p in rule.premises if p != var),
                        names[rule.conclusion]))
                    directed[ri] = DirectedRule.of(
                        (p for p in rule.premises if p != var), rule.conclusion)
                    drop_var(var)
            progressed = True
            break
        if not progressed:
            break

    return DeductionSystem.from_names(names, symmetric, directed,
                                      name=system.name), eliminated


def must_guess_names(eliminated: Iterable[EliminatedVar]) -> set[str]:
    return {e.name for e in eliminated if e.kind == "must_guess"}


def extend_guess(witness_names: Iterable[str],
                 eliminated: Iterable[EliminatedVar]) -> set[str]:
    """Turn a reduced-system guess set into one for the original system.

    Must-guess variables are added back; derived variables need nothing,
    their recorded rule re-derives them once everything else is known.
    """
    out = set(witness_names)
    out.update(must_guess_names(eliminated))
    return out


@dataclass(frozen=True)
class SimplifyResult:
    system: DeductionSystem
    merge_map: MergeMap
    eliminated: tuple[EliminatedVar, ...]

    def to_json(self) -> dict:
        return {"merge": self.merge_map.to_json(),
                "eliminated": [e.to_json() for e in self.eliminated],
                "must_guess": sorted(must_guess_names(self.eliminated))}


def simplify(system: DeductionSystem) -> SimplifyResult:
    """Equality merging then independent elimination, to a joint fixpoint."""
    current = system
    merge_map: MergeMap | None = None
    eliminated: list[EliminatedVar] = []
    while True:
        merged, mm = merge_equalities(current)
        if merge_map is None:
            merge_map = mm
        else:
            merge_map = MergeMap(
                {name: mm.resolve(rep)
                 for name, rep in merge_map.representative.items()},
                merge_map.removed + mm.removed,
                merge_map.rules_removed + mm.rules_removed)
        reduced, elim = eliminate_independent(merged)
        eliminated.extend(elim)
        if reduced == current:
            return SimplifyResult(reduced, merge_map, tuple(eliminated))
        current = reduced
