"""
Noncontextual measurement-assignment polytope.

Variables are the per-context joint outcome probabilities xi(outcome | context).
The polytope is cut out by nonnegativity, one normalization equality per
context, and marginal-consistency equalities for every measurement shared by
two contexts. Vertices are enumerated exactly with the double-description
method: equalities are eliminated first, the remaining inequalities are
homogenized and processed one at a time over primitive integer rays.
"""

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property, reduce
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd

from .exceptions import InfeasibleSystemError
from .logger import get_logger
from .scenario import Scenario, ensure_valid

Row = tuple[Fraction, ...]


class VertexKind(str, Enum):
    """Deterministic (all entries 0/1) or indeterministic vertex."""

    DETERMINISTIC = "deterministic"
    INDETERMINISTIC = "indeterministic"


@dataclass(frozen=True)
class ContextBlock:
    """Layout of one context's variables: members and their outcome counts."""

    member_ids: tuple[str, ...]
    outcome_counts: tuple[int, ...]

    @property
    def joint_outcomes(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(k) for k in self.outcome_counts)))

    @property
    def size(self) -> int:
        return math.prod(self.outcome_counts)


@dataclass(frozen=True)
class HRep:
    """
    H-representation over the variables (context_index, joint_outcome).

    ``equalities`` hold (row, rhs) meaning row.x = rhs; ``inequalities`` hold
    (row, rhs) meaning row.x >= rhs.
    """

    blocks: tuple[ContextBlock, ...]
    variables: tuple[tuple[int, tuple[int, ...]], ...]
    equalities: tuple[tuple[Row, Fraction], ...]
    inequalities: tuple[tuple[Row, Fraction], ...]

    @cached_property
    def variable_index(self) -> dict[tuple[int, tuple[int, ...]], int]:
        return {key: column for column, key in enumerate(self.variables)}


@dataclass(frozen=True)
class ContextTable:
    """A probability table over the joint outcomes of one context."""

    member_ids: tuple[str, ...]
    outcome_counts: tuple[int, ...]
    values: tuple[Fraction, ...]

    @property
    def joint_outcomes(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(k) for k in self.outcome_counts)))

    def probability(self, outcome: Sequence[int]) -> Fraction:
        """Entry for one joint outcome."""
        index = 0
        for o, k in zip(outcome, self.outcome_counts):
            index = index * k + o
        return self.values[index]

    def marginal(self, measurement_id: str) -> tuple[Fraction, ...]:
        """Marginal response function of one member."""
        if measurement_id not in self.member_ids:
            raise ValueError(f"Measurement '{measurement_id}' is not in this context")
        position = self.member_ids.index(measurement_id)
        sums = [Fraction(0)] * self.outcome_counts[position]
        for outcome, value in zip(self.joint_outcomes, self.values):
            sums[outcome[position]] += value
        return tuple(sums)


@dataclass(frozen=True)
class Vertex:
    """One noncontextual assignment: a probability table per context."""

    tables: tuple[ContextTable, ...]
    kind: Optional[VertexKind] = None

    @property
    def coordinates(self) -> tuple[Fraction, ...]:
        """All table entries in variable order (context-major)."""
        return tuple(value for table in self.tables for value in table.values)


def build_hrep(s: Scenario) -> HRep:
    """
    Transcribe the scenario's polytope constraints.

    For each measurement, consecutive contexts in the list of contexts
    containing it are linked by one marginal-consistency equality per outcome.
    The equality made redundant by normalization is kept on purpose; the
    enumerator removes redundancy.

    Args:
        s: Valid scenario

    Returns:
        HRep
    """
    ensure_valid(s)
    blocks = tuple(
        ContextBlock(c.member_ids, s.outcome_counts(i)) for i, c in enumerate(s.contexts)
    )
    variables = tuple(
        (i, outcome) for i, block in enumerate(blocks) for outcome in block.joint_outcomes
    )
    index = {key: column for column, key in enumerate(variables)}
    n = len(variables)

    def row_for(entries: dict[int, int]) -> Row:
        row = [Fraction(0)] * n
        for column, coeff in entries.items():
            row[column] += coeff
        return tuple(row)

    equalities: list[tuple[Row, Fraction]] = []
    for i, block in enumerate(blocks):
        equalities.append(
            (row_for({index[(i, o)]: 1 for o in block.joint_outcomes}), Fraction(1))
        )

    for m in s.measurements:
        containing = s.contexts_containing(m.id)
        for alpha, beta in zip(containing, containing[1:]):
            pos_a = blocks[alpha].member_ids.index(m.id)
            pos_b = blocks[beta].member_ids.index(m.id)
            for outcome in range(m.outcome_count):
                entries: dict[int, int] = {}
                for o in blocks[alpha].joint_outcomes:
                    if o[pos_a] == outcome:
                        entries[index[(alpha, o)]] = 1
                for o in blocks[beta].joint_outcomes:
                    if o[pos_b] == outcome:
                        entries[index[(beta, o)]] = entries.get(index[(beta, o)], 0) - 1
                equalities.append((row_for(entries), Fraction(0)))

    inequalities = tuple((row_for({column: 1}), Fraction(0)) for column in range(n))
    return HRep(
        blocks=blocks,
        variables=variables,
        equalities=tuple(equalities),
        inequalities=inequalities,
    )


def _solve_equalities(
    equalities: Sequence[tuple[Row, Fraction]], n: int
) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Reduced row echelon form: particular solution and nullspace basis."""
    matrix = [list(row) + [rhs] for row, rhs in equalities]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == len(matrix):
            break
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        matrix[r] = [v / lead for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1

    if any(row[-1] != 0 for row in matrix[r:]):
        raise InfeasibleSystemError("Equality constraints are inconsistent")

    pivot_set = set(pivots)
    particular = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        particular[c] = matrix[i][-1]

    basis = []
    for f in (c for c in range(n) if c not in pivot_set):
        vector = [Fraction(0)] * n
        vector[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vector[c] = -matrix[i][f]
        basis.append(vector)
    return particular, basis


def _primitive(vector: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*vector) if vector else 0
    if g > 1:
        return tuple(v // g for v in vector)
    return tuple(vector)


def _integer_row(values: Sequence[Fraction]) -> tuple[int, ...]:
    scale = reduce(math.lcm, (v.denominator for v in values), 1)
    return _primitive([int(v * scale) for v in values])


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _combine(p: int, u: Sequence[int], q: int, w: Sequence[int]) -> tuple[int, ...]:
    """Primitive form of p*u + q*w."""
    return _primitive([p * x + q * y for x, y in zip(u, w)])


def _popcount(bits: int) -> int:
    return bin(bits).count("1")


def _adjacent(common: int, zero_sets: Sequence[int]) -> bool:
    """Only the two rays that define ``common`` may have zero sets containing it."""
    hits = 0
    for z in zero_sets:
        if z & common == common:
            hits += 1
            if hits > 2:
                return False
    return True


def _double_description(constraints: Sequence[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """
    Extreme rays of {z : a.z >= 0 for every a in constraints}.

    The cone starts as the whole space (lineality = identity basis). A
    constraint that cuts the lineality space turns one lineality vector into a
    ray; otherwise rays are split by sign and adjacent (+, -) pairs are
    combined. Zero sets are bitmasks over processed constraints.

    Raises:
        InfeasibleSystemError: If lineality survives (the cone is not pointed)
    """
    logger = get_logger()
    lineality = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    zero_sets: list[int] = []
    total = len(constraints)

    for step, a in enumerate(constraints):
        bit = 1 << step
        values = [_dot(a, v) for v in lineality]
        pick = next((i for i, v in enumerate(values) if v != 0), None)

        if pick is not None:
            pivot = lineality.pop(pick)
            pv = values.pop(pick)
            if pv < 0:
                pivot = tuple(-x for x in pivot)
                pv = -pv
            lineality = [
                _combine(pv, v, -value, pivot) if value else v
                for v, value in zip(lineality, values)
            ]
            adjusted = []
            for ray in rays:
                ar = _dot(a, ray)
                adjusted.append(_combine(pv, ray, -ar, pivot) if ar else ray)
            rays = adjusted + [pivot]
            # The pivot was orthogonal to every earlier constraint.
            zero_sets = [z | bit for z in zero_sets] + [bit - 1]
        else:
            signs = [_dot(a, ray) for ray in rays]
            plus = [i for i, v in enumerate(signs) if v > 0]
            minus = [i for i, v in enumerate(signs) if v < 0]
            zero = [i for i, v in enumerate(signs) if v == 0]

            new_rays = [rays[i] for i in plus] + [rays[i] for i in zero]
            new_zero_sets = [zero_sets[i] for i in plus] + [zero_sets[i] | bit for i in zero]

            threshold = dim - len(lineality) - 2
            for i in plus:
                for j in minus:
                    common = zero_sets[i] & zero_sets[j]
                    if _popcount(common) < threshold:
                        continue
                    if not _adjacent(common, zero_sets):
                        continue
                    new_rays.append(_combine(signs[i], rays[j], -signs[j], rays[i]))
                    new_zero_sets.append(common | bit)

            rays, zero_sets = new_rays, new_zero_sets

        logger.log_enumeration_step(step + 1, total, len(rays), len(lineality))

    if lineality:
        raise InfeasibleSystemError("Constraint system does not describe a bounded polytope")
    return rays


def _kind_of(tables: Sequence[ContextTable]) -> VertexKind:
    if all(value in (0, 1) for table in tables for value in table.values):
        return VertexKind.DETERMINISTIC
    return VertexKind.INDETERMINISTIC


def enumerate_vertices(h: HRep) -> list[Vertex]:
    """
    Enumerate every vertex of the polytope exactly.

    Args:
        h: H-representation of a bounded polytope

    Returns:
        Classified vertices, each once, sorted lexicographically by coordinates

    Raises:
        InfeasibleSystemError: If the system has no point or is unbounded
    """
    logger = get_logger()
    n = len(h.variables)
    particular, basis = _solve_equalities(h.equalities, n)
    logger.debug(f"Equalities eliminated: {n} variables, {len(basis)} free parameters")

    # Homogenized over (t0, t): (row.p - rhs) t0 + (row.N) t >= 0, plus t0 >= 0.
    constraints: dict[tuple[int, ...], None] = {(1,) + (0,) * len(basis): None}
    for row, rhs in h.inequalities:
        constant = sum(a * b for a, b in zip(row, particular)) - rhs
        coeffs = [sum(a * b for a, b in zip(row, vector)) for vector in basis]
        integer = _integer_row([constant] + coeffs)
        if any(integer):
            constraints.setdefault(integer, None)

    rays = _double_description(list(constraints), len(basis) + 1)
    if not rays:
        raise InfeasibleSystemError("Constraint system has no feasible point")

    points: dict[tuple[Fraction, ...], None] = {}
    for ray in rays:
        t0 = ray[0]
        if t0 == 0:
            raise InfeasibleSystemError("Constraint system does not describe a bounded polytope")
        weights = [Fraction(t, t0) for t in ray[1:]]
        point = tuple(
            particular[j] + sum(w * vector[j] for w, vector in zip(weights, basis) if w)
            for j in range(n)
        )
        points.setdefault(point, None)

    vertices = []
    for point in sorted(points):
        tables = []
        start = 0
        for block in h.blocks:
            tables.append(
                ContextTable(
                    block.member_ids, block.outcome_counts, point[start : start + block.size]
                )
            )
            start += block.size
        tables = tuple(tables)
        vertices.append(Vertex(tables=tables, kind=_kind_of(tables)))

    logger.info(f"Enumerated {len(vertices)} vertices over {n} variables")
    return vertices


def classify_vertex(v: Vertex, s: Scenario) -> VertexKind:
    """
    Deterministic iff every table entry is 0 or 1.

    Raises:
        ValueError: If the vertex does not have one table per scenario context
    """
    if len(v.tables) != len(s.contexts):
        raise ValueError(
            f"Vertex has {len(v.tables)} tables but the scenario has {len(s.contexts)} contexts"
        )
    return _kind_of(v.tables)


def classify_vertices(vertices: Sequence[Vertex], s: Scenario) -> list[Vertex]:
    """Return the vertices with ``kind`` set."""
    return [replace(v, kind=classify_vertex(v, s)) for v in vertices]


def marginal_response(v: Vertex, measurement_id: str, context_index: int) -> tuple[Fraction, ...]:
    """
    Marginal response function of a measurement in one context.

    Raises:
        ValueError: If the measurement does not belong to the context
    """
    if not 0 <= context_index < len(v.tables):
        raise ValueError(f"Context index {context_index} out of range")
    return v.tables[context_index].marginal(measurement_id)


def satisfies(h: HRep, v: Vertex) -> bool:
    """Exact check of every equality and inequality of ``h`` at ``v``."""
    x = v.coordinates
    if len(x) != len(h.variables):
        return False
    for row, rhs in h.equalities:
        if sum(a * b for a, b in zip(row, x)) != rhs:
            return False
    return all(sum(a * b for a, b in zip(row, x)) >= rhs for row, rhs in h.inequalities)


VERTEX_COLUMNS = ["vertex", "context", "outcome_tuple", "value_num", "value_den", "kind"]


def vertex_table(vertices: Sequence[Vertex]) -> pd.DataFrame:
    """One row per table entry; ``vertex`` separates the vertices."""
    records = []
    for index, v in enumerate(vertices):
        kind = (v.kind or _kind_of(v.tables)).value
        for context, table in enumerate(v.tables):
            for outcome, value in zip(table.joint_outcomes, table.values):
                records.append(
                    {
                        "vertex": index,
                        "context": context,
                        "outcome_tuple": ";".join(str(o) for o in outcome),
                        "value_num": value.numerator,
                        "value_den": value.denominator,
                        "kind": kind,
                    }
                )
    return pd.DataFrame.from_records(records, columns=VERTEX_COLUMNS)


def vertex_csv(vertices: Sequence[Vertex]) -> str:
    """The vertex dump as CSV text."""
    return vertex_table(vertices).to_csv(index=False, lineterminator="\n")


def write_vertex_csv(vertices: Sequence[Vertex], path: Union[str, Path]) -> None:
    """Write the vertex dump to a file."""
    Path(path).write_text(vertex_csv(vertices), encoding="utf-8")
