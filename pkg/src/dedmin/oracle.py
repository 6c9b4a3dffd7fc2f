"""Ground truth independent of the integer-programming route.

Everything here works by plain forward chaining over the rules:

* :func:`closure` - least fixpoint of the known set under all rules,
  with an auditable step-by-step trace.
* :func:`brute_force_min` - exhaustive search for the smallest guess set,
  used as the oracle against which the solver route is verified.
* :func:`extract_trace` - turn a solver assignment back into a deduction
  course and cross-check it against the closure semantics.

Closure proceeds in sweeps: a sweep derives every proposition whose rule
premises were known at the start of the sweep.  One sweep therefore models
exactly one unrolling step on the solver side, so ``rounds`` is the number
of unrolling steps that guess set actually needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import DeductionSystem, require_valid


class UnknownProposition(KeyError):
    """A guess referenced a proposition the system does not declare."""


class TraceMismatch(ValueError):
    """A solver assignment marked something known that closure cannot justify."""


@dataclass(frozen=True)
class TraceStep:
    """One deduction: ``premises`` were known, ``rule`` derived ``deduced``."""

    premises: tuple[int, ...]
    rule: int
    deduced: int


@dataclass(frozen=True)
class ClosureResult:
    known: frozenset[int]
    trace: tuple[TraceStep, ...]
    rounds: int

    def known_names(self, system: DeductionSystem) -> list[str]:
        return [system.name_of(i) for i in sorted(self.known)]


def deduction_options(system: DeductionSystem) -> list[tuple[tuple[int, ...], int]]:
    """All single-step derivations as ``(premises, conclusion)`` pairs.

    Directed rules come first, in declaration order, so for an expanded
    system the option id equals the directed-rule index.  Symmetric rules
    are unfolded on the fly (each member derivable from the rest) and get
    ids after the directed block; this keeps closure total on un-expanded
    systems without mutating them.
    """
    options: list[tuple[tuple[int, ...], int]] = []
    for rule in system.directed_rules:
        options.append((rule.premises, rule.conclusion))
    for rule in system.symmetric_rules:
        for pos, member in enumerate(rule.members):
            others = tuple(sorted(m for i, m in enumerate(rule.members) if i != pos))
            options.append((others, member))
    return options


def _option_masks(options) -> list[tuple[int, int, int]]:
    masks = []
    for rid, (premises, conclusion) in enumerate(options):
        pmask = 0
        for p in premises:
            pmask |= 1 << p
        masks.append((pmask, 1 << conclusion, rid))
    return masks


def closure_mask(masks: Sequence[tuple[int, int, int]], known: int) -> int:
    """Fixpoint of the known-set bitmask; fast path shared by the searches."""
    while True:
        new = 0
        for pmask, cbit, _ in masks:
            if known & cbit == 0 and known & pmask == pmask:
                new |= cbit
        if not new:
            return known
        known |= new


def _check_guess(system: DeductionSystem, guess: Iterable[int]) -> frozenset[int]:
    out = set()
    for g in guess:
        if not 0 <= g < system.n:
            raise UnknownProposition(f"proposition index {g} not in system")
        out.add(g)
    return frozenset(out)


def closure(system: DeductionSystem, guess: Iterable[int]) -> ClosureResult:
    """Least fixpoint of ``guess`` under all rules, with a deterministic trace.

    Each sweep tests options in ascending id against the knowledge held at
    the start of the sweep; the lowest-id applicable option wins when
    several can derive the same proposition.  Replaying the trace from the
    guess set reproduces ``known`` exactly.
    """
    require_valid(system)
    start = _check_guess(system, guess)
    options = deduction_options(system)

    known = set(start)
    trace: list[TraceStep] = []
    rounds = 0
    while True:
        frontier = frozenset(known)
        new: dict[int, TraceStep] = {}
        for rid, (premises, conclusion) in enumerate(options):
            if conclusion in known or conclusion in new:
                continue
            if all(p in frontier for p in premises):
                new[conclusion] = TraceStep(premises, rid, conclusion)
        if not new:
            break
        rounds += 1
        for conclusion in sorted(new):
            known.add(conclusion)
        trace.extend(sorted(new.values(), key=lambda s: s.rule))
    return ClosureResult(frozenset(known), tuple(trace), rounds)


@dataclass(frozen=True)
class BruteForceMin:
    """Result of exhaustive minimum search; ``k_min is None`` means not found."""

    k_min: int | None
    witness: tuple[int, ...] | None
    max_k: int

    @property
    def found(self) -> bool:
        return self.k_min is not None


def brute_force_min(system: DeductionSystem, max_k: int | None = None) -> BruteForceMin:
    """Smallest guess set whose closure covers every proposition.

    Tests subsets in increasing size, lexicographically within a size, and
    returns the first that works; intended for systems of up to ~20
    propositions.  ``max_k`` defaults to ``n`` (where a solution always
    exists: guess everything).
    """
    require_valid(system)
    n = system.n
    if max_k is None:
        max_k = n
    max_k = min(max_k, n)
    masks = _option_masks(deduction_options(system))
    target = (1 << n) - 1
    if n == 0:
        return BruteForceMin(0, (), max_k)
    for size in range(max_k + 1):
        for subset in combinations(range(n), size):
            known = 0
            for v in subset:
                known |= 1 << v
            if closure_mask(masks, known) == target:
                return BruteForceMin(size, subset, max_k)
    return BruteForceMin(None, None, max_k)


def covers_all(system: DeductionSystem, guess: Iterable[int]) -> bool:
    """True when the closure of ``guess`` reaches every proposition."""
    masks = _option_masks(deduction_options(system))
    known = 0
    for v in _check_guess(system, guess):
        known |= 1 << v
    return closure_mask(masks, known) == (1 << system.n) - 1


def extract_trace(system: DeductionSystem, solution, cfg) -> ClosureResult:
    """Rebuild the deduction course behind a solver assignment.

    Reads the initial guesses from the copy-0 state variables, recomputes
    the closure, and checks that at every unrolling step the closure knows
    at least what the assignment marks known.  A violation means the
    instance or the solver is wrong, which is exactly what
    :class:`TraceMismatch` reports.
    """
    from . import encoder  # local import; encoder does not import oracle

    if solution.assignment is None:
        raise TraceMismatch("solution carries no assignment")
    assignment = solution.assignment
    guess = [
        p.index for p in system.propositions
        if assignment.get(encoder.state_var_name(p.index, 0)) == 1
    ]
    result = closure(system, guess)

    # Known set after each sweep, for per-step containment checks.
    masks = _option_masks(deduction_options(system))
    per_round = [0]
    for v in guess:
        per_round[0] |= 1 << v
    while True:
        frontier = per_round[-1]
        new = 0
        for pmask, cbit, _ in masks:
            if frontier & cbit == 0 and frontier & pmask == pmask:
                new |= cbit
        if not new:
            break
        per_round.append(frontier | new)

    for copy in range(0, cfg.nu + 1):
        justified = per_round[min(copy, len(per_round) - 1)]
        for p in system.propositions:
            marked = assignment.get(encoder.state_var_name(p.index, copy))
            if marked == 1 and justified & (1 << p.index) == 0:
                raise TraceMismatch(
                    f"assignment marks {p.name} known at step {copy} "
                    f"but closure cannot derive it yet")
    return result


def render_trace(system: DeductionSystem, result: ClosureResult) -> str:
    """Markdown table of the deduction course: step, premises, rule, deduced."""
    lines = ["| No. | Known | Rule | Deduced |", "| --- | --- | --- | --- |"]
    for i, step in enumerate(result.trace, start=1):
        premises = ", ".join(system.name_of(p) for p in step.premises)
        lines.append(f"| {i} | {premises} | r{step.rule + 1} | "
                     f"{system.name_of(step.deduced)} |")
    return "\n".join(lines) + "\n"
