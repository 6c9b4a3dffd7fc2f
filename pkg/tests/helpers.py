"""Shared test utilities: random systems, fixture loading, assignments."""

from __future__ import annotations

import random
from pathlib import Path

from dedmin import encoder, oracle
from dedmin.core import DeductionSystem, DirectedRule, SymmetricRule

DATA = Path(__file__).parent / "data"

PAPER_SNOW_GUESS = [f"R_{i}" for i in range(4, 13)]
PAPER_ENOCORO_GUESS = ("a_3 a_5 b_2 b_5 b_6 c_2 c_3 c_8 c_9 c_10 "
                       "e_6 e_11 e_15 f_3 f_6 g_1 g_2 g_5").split()


def random_system(rng: random.Random, max_n: int = 10,
                  max_m: int = 16) -> DeductionSystem:
    """Well-formed system with mixed rule shapes, sizes bounded as given."""
    n = rng.randint(1, max_n)
    m = rng.randint(0, max_m)
    symmetric, directed = [], []
    for _ in range(m):
        if n < 2:
            break
        if rng.random() < 0.4:
            size = rng.randint(2, min(4, n))
            symmetric.append(SymmetricRule.of(rng.sample(range(n), size)))
        else:
            conclusion = rng.randrange(n)
            pool = [v for v in range(n) if v != conclusion]
            k = rng.randint(1, min(3, len(pool)))
            directed.append(DirectedRule.of(rng.sample(pool, k), conclusion))
    return DeductionSystem.from_names([f"v{i}" for i in range(n)],
                                      symmetric, directed)


def load_paths_fixture(name: str) -> dict[str, list[frozenset[str]]]:
    return encoder.parse_path_table_text((DATA / name).read_text())


def load_course(name: str) -> list[tuple[tuple[str, ...], str]]:
    """Deduction-course fixture rows as (premise names, deduced name)."""
    rows = []
    for line in (DATA / name).read_text().splitlines():
        _, premises, deduced = line.split("\t")
        rows.append((tuple(premises.split()), deduced))
    return rows


def path_table_as_name_sets(system: DeductionSystem) -> dict[str, set[frozenset[str]]]:
    table = encoder.enumerate_paths(system)
    out = {}
    for p in system.propositions:
        out[p.name] = {
            frozenset(system.name_of(m) for m in path.premises)
            for path in table.row(p.index)
        }
    return out


def replay_course(system: DeductionSystem, guess_names, course) -> set[int]:
    """Replay a course row by row; asserts each row is a valid next step."""
    known = {system.index_of(n) for n in guess_names}
    rules = {(r.premises, r.conclusion) for r in system.directed_rules}
    for premises_names, deduced_name in course:
        premises = tuple(sorted(system.index_of(p) for p in premises_names))
        deduced = system.index_of(deduced_name)
        assert (premises, deduced) in rules, \
            f"no rule {premises_names} => {deduced_name}"
        assert all(p in known for p in premises), \
            f"premises {premises_names} not known before deducing {deduced_name}"
        assert deduced not in known, f"{deduced_name} deduced twice"
        known.add(deduced)
    return known


def assignment_from_closure(system: DeductionSystem, cfg: encoder.EncodeConfig,
                            guess) -> dict[str, int]:
    """Full plain-mode assignment implied by a guess set.

    States follow the per-round closure; a path variable is 1 exactly when
    all its premises were known at its source step.
    """
    assert cfg.mode == encoder.PLAIN
    table = encoder.enumerate_paths(system)
    per_round = [set(guess)]
    options = oracle.deduction_options(system)
    while True:
        frontier = per_round[-1]
        new = {c for premises, c in options
               if c not in frontier and all(p in frontier for p in premises)}
        if not new:
            break
        per_round.append(frontier | new)

    def known_at(i: int) -> set[int]:
        return per_round[min(i, len(per_round) - 1)]

    values: dict[str, int] = {}
    for copy in range(cfg.nu + 1):
        known = known_at(copy)
        for p in system.propositions:
            values[encoder.state_var_name(p.index, copy)] = \
                1 if p.index in known else 0
    for step in range(cfg.nu):
        known = known_at(step)
        for p in system.propositions:
            for j, path in enumerate(table.row(p.index)):
                fired = all(q in known for q in path.premises)
                values[encoder.path_var_name(p.index, j + 1, step)] = \
                    1 if fired else 0
    return values
