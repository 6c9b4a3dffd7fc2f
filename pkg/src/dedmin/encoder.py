"""Unroll a deduction system into a 0-1 integer program.

One unrolling step (a "copy") models one round of deduction.  Copy ``i+1``
of a proposition is known exactly when one of its *paths* fires at copy
``i``: path 1 is always the carry-over of the proposition's own previous
value, and every further path is one directed rule concluding it.  Two
small inequality groups make that exact over binaries:

* state link (``tau`` paths feeding state ``x``)::

      -2x + sum(l) + 1 >= 0        # known implies some path fired
      tau * x - sum(l) >= 0        # a fired path implies known

  with the single equality ``x = l1`` when ``tau == 1``.

* path firing (``kappa`` premises feeding path ``l``)::

      l - sum(x) + (kappa - 1) >= 0    # all premises known => fires
      -kappa * l + sum(x) >= 0         # fires => all premises known

  with the single equality ``l = x1`` when ``kappa == 1``.

Compact mode folds, per state and step, the carry-over path and one
designated multi-premise path directly into the state link, dropping two
path variables and three rows::

      ((tau-1)*kappa + 1) x' - kappa*(x + sum(l_mid)) - sum(p) + kappa - 1 >= 0
      -kappa x' + kappa*(x + sum(l_mid)) + sum(p) >= 0

where ``l_mid`` are the surviving paths and ``p`` the designated path's
premises.  The admitted 0/1 combinations are identical, so both modes have
the same optima.

The initial layer is budgeted (``sum(x at copy 0) <= k``) and the
objective maximizes the final layer; the alternative sense minimizes the
initial layer subject to full final coverage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import DeductionSystem, require_valid
from .milp import (Constraint, EQUAL, GREATER_EQUAL, LESS_EQUAL, MAXIMIZE,
                   MINIMIZE, MilpInstance, PATH, STATE, Variable)
from .preprocess import is_expanded

PLAIN = "plain"
COMPACT = "compact"
MAX_COVERAGE = "max"
MIN_GUESSES = "min"


class ConfigError(ValueError):
    """Encode configuration violates its invariants."""


class NotExpandedError(ValueError):
    """Operation requires a system without symmetric rules."""


def state_var_name(prop: int, copy: int) -> str:
    return f"x{prop}_c{copy}"


def path_var_name(prop: int, path: int, copy: int) -> str:
    return f"l{prop}_p{path}_c{copy}"


@dataclass(frozen=True)
class Path:
    """One way to learn a proposition: ``premises`` at the previous copy.

    ``rule`` is the index of the directed rule behind the path, or None
    for the carry-over path.
    """

    premises: tuple[int, ...]
    rule: int | None

    @property
    def is_copy(self) -> bool:
        return self.rule is None


@dataclass(frozen=True)
class PathTable:
    """Per-proposition list of paths; row order follows proposition order."""

    rows: tuple[tuple[Path, ...], ...]

    def row(self, prop: int) -> tuple[Path, ...]:
        return self.rows[prop]

    @property
    def total_paths(self) -> int:
        return sum(len(r) for r in self.rows)


def enumerate_paths(system: DeductionSystem) -> PathTable:
    """All paths per proposition: carry-over first, then concluding rules
    in declaration order."""
    require_valid(system)
    if not is_expanded(system):
        raise NotExpandedError("system still has symmetric rules; expand first")
    rows: list[list[Path]] = [[Path((p.index,), None)]
                              for p in system.propositions]
    for ri, rule in enumerate(system.directed_rules):
        rows[rule.conclusion].append(Path(rule.premises, ri))
    return PathTable(tuple(tuple(r) for r in rows))


def render_path_table(system: DeductionSystem, table: PathTable) -> str:
    """Text form used by the committed fixtures: ``name: set; set; ...``."""
    lines = []
    for p in system.propositions:
        sets = ["{" + ", ".join(system.name_of(m) for m in path.premises) + "}"
                for path in table.row(p.index)]
        lines.append(f"{p.name}: " + "; ".join(sets))
    return "\n".join(lines) + "\n"


def parse_path_table_text(text: str) -> dict[str, list[frozenset[str]]]:
    """Parse the fixture format back into name-level premise sets."""
    out: dict[str, list[frozenset[str]]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, body = line.partition(":")
        paths = []
        for chunk in body.split(";"):
            chunk = chunk.strip().strip("{}")
            paths.append(frozenset(x.strip() for x in chunk.replace(",", " ").split()))
        out[name.strip()] = paths
    return out


@dataclass(frozen=True)
class EncodeConfig:
    """Unrolling depth, axiom budget, constraint mode and objective sense."""

    nu: int
    budget_k: int = 0
    mode: str = COMPACT
    sense: str = MAX_COVERAGE

    def check(self, n: int) -> None:
        if self.nu < 1:
            raise ConfigError("nu must be >= 1")
        if self.mode not in (PLAIN, COMPACT):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.sense not in (MAX_COVERAGE, MIN_GUESSES):
            raise ConfigError(f"unknown sense {self.sense!r}")
        if self.budget_k < 0:
            raise ConfigError("budget must be >= 0")
        if self.sense == MAX_COVERAGE and self.budget_k > n:
            raise ConfigError(f"budget {self.budget_k} exceeds {n} propositions")


def default_nu(system: DeductionSystem) -> int:
    """Unrolling depth that always reaches the fixpoint: one per proposition."""
    return max(1, system.n)


class _Builder:
    def __init__(self):
        self.variables: list[Variable] = []
        self.index: dict[str, int] = {}
        self.constraints: list[Constraint] = []

    def add_var(self, variable: Variable) -> int:
        self.index[variable.name] = len(self.variables)
        self.variables.append(variable)
        return len(self.variables) - 1

    def add(self, terms: Iterable[tuple[int, int]], rel: str, rhs: int) -> None:
        self.constraints.append(Constraint(tuple(terms), rel, rhs))


def encode(system: DeductionSystem, cfg: EncodeConfig) -> MilpInstance:
    """Build the unrolled instance; deterministic down to variable order."""
    require_valid(system)
    if not is_expanded(system):
        raise NotExpandedError("system still has symmetric rules; expand first")
    cfg.check(system.n)
    table = enumerate_paths(system)
    n = system.n
    b = _Builder()

    state_ids = [[-1] * n for _ in range(cfg.nu + 1)]
    for v in range(n):
        state_ids[0][v] = b.add_var(Variable(state_var_name(v, 0), STATE, v, 0))

    # which path, per proposition, gets folded into the state link: the
    # last multi-premise one; None keeps the full per-path form
    plans: list[int | None] = []
    for v in range(n):
        paths = table.row(v)
        folded = None
        if cfg.mode == COMPACT and len(paths) >= 2:
            for j in range(len(paths) - 1, 0, -1):
                if len(paths[j].premises) >= 2:
                    folded = j
                    break
        plans.append(folded)

    for step in range(cfg.nu):
        path_ids: list[dict[int, int]] = [dict() for _ in range(n)]
        for v in range(n):
            folded = plans[v]
            for j, path in enumerate(table.row(v)):
                if folded is not None and (j == 0 or j == folded):
                    continue  # folded into the state link below
                path_ids[v][j] = b.add_var(
                    Variable(path_var_name(v, j + 1, step), PATH, v, step, j + 1))
        for v in range(n):
            state_ids[step + 1][v] = b.add_var(
                Variable(state_var_name(v, step + 1), STATE, v, step + 1))

        for v in range(n):
            paths = table.row(v)
            folded = plans[v]
            x_new = state_ids[step + 1][v]
            x_old = state_ids[step][v]

            for j, path in enumerate(paths):
                if j not in path_ids[v]:
                    continue
                lvar = path_ids[v][j]
                premises = ([x_old] if path.is_copy else
                            [state_ids[step][p] for p in path.premises])
                kappa = len(premises)
                if kappa == 1:
                    b.add(((lvar, 1), (premises[0], -1)), EQUAL, 0)
                else:
                    b.add(((lvar, 1),) + tuple((p, -1) for p in premises),
                          GREATER_EQUAL, 1 - kappa)
                    b.add(((lvar, -kappa),) + tuple((p, 1) for p in premises),
                          GREATER_EQUAL, 0)

            if folded is None:
                tau = len(paths)
                lvars = [path_ids[v][j] for j in range(tau)]
                if tau == 1:
                    b.add(((x_new, 1), (lvars[0], -1)), EQUAL, 0)
                else:
                    b.add(((x_new, -2),) + tuple((l, 1) for l in lvars),
                          GREATER_EQUAL, -1)
                    b.add(((x_new, tau),) + tuple((l, -1) for l in lvars),
                          GREATER_EQUAL, 0)
            else:
                tau = len(paths)
                group = [x_old] + [path_ids[v][j] for j in range(1, tau)
                                   if j != folded]
                premises = [state_ids[step][p] for p in paths[folded].premises]
                kappa = len(premises)
                b.add(((x_new, (tau - 1) * kappa + 1),)
                      + tuple((g, -kappa) for g in group)
                      + tuple((p, -1) for p in premises),
                      GREATER_EQUAL, 1 - kappa)
                b.add(((x_new, -kappa),)
                      + tuple((g, kappa) for g in group)
                      + tuple((p, 1) for p in premises),
                      GREATER_EQUAL, 0)

    if cfg.sense == MAX_COVERAGE:
        b.add(((state_ids[0][v], 1) for v in range(n)), LESS_EQUAL,
              cfg.budget_k)
        objective = tuple((state_ids[cfg.nu][v], 1) for v in range(n))
        sense = MAXIMIZE
    else:
        for v in range(n):
            b.add(((state_ids[cfg.nu][v], 1),), EQUAL, 1)
        objective = tuple((state_ids[0][v], 1) for v in range(n))
        sense = MINIMIZE

    return MilpInstance(b.variables, b.constraints, objective, sense)


@dataclass(frozen=True)
class ReductionReport:
    """Size difference between the plain and compact encodings."""

    plain_variables: int
    compact_variables: int
    plain_constraints: int
    compact_constraints: int

    @property
    def variables_removed(self) -> int:
        return self.plain_variables - self.compact_variables

    @property
    def constraints_removed(self) -> int:
        return self.plain_constraints - self.compact_constraints

    def to_json(self) -> dict:
        return {
            "plain": {"variables": self.plain_variables,
                      "constraints": self.plain_constraints},
            "compact": {"variables": self.compact_variables,
                        "constraints": self.compact_constraints},
            "variables_removed": self.variables_removed,
            "constraints_removed": self.constraints_removed,
        }


def count_reduction(system: DeductionSystem, cfg: EncodeConfig) -> ReductionReport:
    """Build both modes and report how much the folding saves."""
    plain = encode(system, EncodeConfig(cfg.nu, cfg.budget_k, PLAIN, cfg.sense))
    compact = encode(system, EncodeConfig(cfg.nu, cfg.budget_k, COMPACT, cfg.sense))
    return ReductionReport(len(plain.variables), len(compact.variables),
                           len(plain.constraints), len(compact.constraints))
