"""H-representation polytopes with exact vertex enumeration and structure tests.

A polytope is the solution set of ``<a_i, x> + b_i >= 0`` for integer
normals ``a_i`` and rational offsets ``b_i``.  All geometry here is done
in exact rational arithmetic; there is no floating point and no LP solver.
Vertices come from exhaustive subset solving, boundedness from the dual
positive-dependence criterion (the normals admit a strictly positive
integer relation iff the recession cone is trivial).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg

DEFAULT_SUBSET_BUDGET = 2_000_000


class PolytopeError(ValueError):
    """Base class for polytope-level failures."""


class PolytopeFormatError(PolytopeError):
    """Malformed polytope input (JSON shape, dimensions, zero normals)."""


class SubsetBudgetError(PolytopeError):
    """The requested enumeration exceeds the configured subset budget."""


class LatticeRankError(PolytopeError):
    """The normal lattice does not have full rank."""


@dataclass(frozen=True)
class HPolytope:
    """Inequalities ``<a_i, x> + b_i >= 0`` with ``a_i = normals[i]``."""

    dim: int
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.normals) != len(self.offsets):
            raise PolytopeFormatError("offset count does not match inequality count")
        for i, a in enumerate(self.normals):
            if len(a) != self.dim:
                raise PolytopeFormatError(f"normal {i} has wrong dimension")
            if self.dim > 0 and not any(a):
                raise PolytopeFormatError(f"normal {i} is the zero vector")

    @property
    def n(self) -> int:
        return len(self.normals)

    def matrix(self) -> list[list[int]]:
        """The k x n matrix whose columns are the normals."""
        return [[a[r] for a in self.normals] for r in range(self.dim)]

    def drop(self, index: int) -> "HPolytope":
        keep = [i for i in range(self.n) if i != index]
        return HPolytope(
            self.dim,
            tuple(self.normals[i] for i in keep),
            tuple(self.offsets[i] for i in keep),
        )


@dataclass(frozen=True)
class Vertex:
    point: tuple[Fraction, ...]
    active: tuple[int, ...]


@dataclass(frozen=True)
class VertexSet:
    vertices: tuple[Vertex, ...]
    bounded: bool
    empty: bool
    pointed: bool


@dataclass(frozen=True)
class StructureReport:
    bounded: bool
    empty: bool
    simple: bool | None
    generic: bool | None
    delzant: bool | None
    fano: bool
    fano_constant: Fraction | None
    fano_translation: tuple[Fraction, ...] | None
    redundant: tuple[int, ...]
    strict_redundant: tuple[int, ...]
    monotone_ready: bool
    notes: tuple[str, ...] = field(default_factory=tuple)


def _parse_integer(value, what: str) -> int:
    if isinstance(value, bool):
        raise PolytopeFormatError(f"{what} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            raise PolytopeFormatError(f"{what} is not a decimal integer: {value!r}") from None
    raise PolytopeFormatError(f"{what} must be an integer or decimal string")


def parse_rational(value, what: str = "rational") -> Fraction:
    if isinstance(value, bool):
        raise PolytopeFormatError(f"{what} must be rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise PolytopeFormatError(f"{what} is not a valid p/q rational: {value!r}") from None
    raise PolytopeFormatError(f"{what} must be an integer or a p/q string")


def parse_polytope(text: str | bytes) -> HPolytope:
    """Parse the polytope JSON schema ``{"A": [[...]], "b": [...]}``.

    ``A`` is row-major (k rows, n columns; column i is the normal a_i) and
    ``b`` holds n rationals as integers or ``"p/q"`` strings.  Arbitrary
    precision integers may be given as decimal strings.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeFormatError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict) or "A" not in data or "b" not in data:
        raise PolytopeFormatError("polytope JSON needs keys 'A' and 'b'")
    rows = data["A"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise PolytopeFormatError("'A' must be a list of rows")
    k = len(rows)
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise PolytopeFormatError("dimension mismatch: rows of 'A' have unequal lengths")
    n = widths.pop() if widths else 0
    matrix = [[_parse_integer(x, "entry of A") for x in row] for row in rows]
    b_raw = data["b"]
    if not isinstance(b_raw, list):
        raise PolytopeFormatError("'b' must be a list")
    if len(b_raw) != n:
        raise PolytopeFormatError(
            f"dimension mismatch: 'b' has {len(b_raw)} entries for {n} inequalities"
        )
    offsets = tuple(parse_rational(x, "entry of b") for x in b_raw)
    normals = tuple(tuple(matrix[r][i] for r in range(k)) for i in range(n))
    return HPolytope(k, normals, offsets)


def polytope_to_json(poly: HPolytope) -> dict:
    return {
        "A": [[a[r] for a in poly.normals] for r in range(poly.dim)],
        "b": [format_rational(b) for b in poly.offsets],
    }


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _integer_rows(poly: HPolytope) -> list[tuple[tuple[int, ...], int]]:
    """Clear offset denominators: rows (g_i, e_i) with <g_i,x> + e_i >= 0."""
    rows = []
    for a, b in zip(poly.normals, poly.offsets):
        d = b.denominator
        rows.append((tuple(x * d for x in a), b.numerator))
    return rows


def _scaled_values(rows, point_nums: Sequence[int], den: int) -> list[int] | None:
    """Scaled inequality values den*(<g,x> + e) at x = nums/den; None on violation."""
    values = []
    for grow, e in rows:
        value = sum(g * x for g, x in zip(grow, point_nums) if g) + e * den
        if value < 0:
            return None
        values.append(value)
    return values


def _vertex_candidates(rows, k: int, indices: Iterable[int], budget: int):
    """Yield (point, scaled values) for each feasible basic solution."""
    idx = list(indices)
    if math.comb(len(idx), k) > budget:
        raise SubsetBudgetError(
            f"{math.comb(len(idx), k)} subsets exceed the budget of {budget}"
        )
    seen = set()
    for subset in combinations(idx, k):
        sol = linalg.solve_square(
            [rows[i][0] for i in subset], [-rows[i][1] for i in subset]
        )
        if sol is None:
            continue
        key = tuple(sol)
        if key in seen:
            continue
        seen.add(key)
        den = math.lcm(*(f.denominator for f in sol)) if sol else 1
        nums = [int(f * den) for f in sol]
        values = _scaled_values(rows, nums, den)
        if values is not None:
            yield tuple(sol), values


@lru_cache(maxsize=4096)
def _relations_cached(normals: tuple[tuple[int, ...], ...], dim: int):
    matrix = [[a[r] for a in normals] for r in range(dim)]
    return tuple(tuple(row) for row in linalg.integer_kernel(matrix))


@lru_cache(maxsize=4096)
def _normals_rank(normals: tuple[tuple[int, ...], ...]) -> int:
    return linalg.rational_rank([list(a) for a in normals])


def _relation_rows(poly: HPolytope) -> list[list[int]]:
    """Saturated basis of the integer relations among the normals."""
    if poly.n == 0:
        return []
    return [list(r) for r in _relations_cached(poly.normals, poly.dim)]


def _has_positive_relation(relations: list[list[int]], n: int, budget: int) -> bool:
    """Whether the relation space meets the strictly positive orthant.

    Decided exactly by enumerating basic solutions of ``<c, col_j> >= 1``;
    the constraint normals span the relation space, so feasibility is
    equivalent to some basic solution being feasible.
    """
    m = len(relations)
    if m == 0:
        return n == 0
    cols = [tuple(relations[r][j] for r in range(m)) for j in range(n)]
    if math.comb(n, m) > budget:
        raise SubsetBudgetError("positive-relation search exceeds the subset budget")
    for subset in combinations(range(n), m):
        sol = linalg.solve_square([cols[i] for i in subset], [1] * m)
        if sol is None:
            continue
        if all(linalg.dot(sol, col) >= 1 for col in cols):
            return True
    return False


def is_bounded(poly: HPolytope, budget: int = DEFAULT_SUBSET_BUDGET) -> bool:
    """Exact boundedness: full-rank normals plus a strictly positive relation."""
    if poly.dim == 0:
        return True
    if _normals_rank(poly.normals) < poly.dim:
        return False
    return _has_positive_relation(_relation_rows(poly), poly.n, budget)


def _reduced_feasible(poly: HPolytope, budget: int) -> bool:
    """Feasibility of a rank-deficient system via quotient coordinates."""
    basis = linalg.row_basis([list(a) for a in poly.normals])
    r = len(basis)
    if r == 0:
        return all(b >= 0 for b in poly.offsets)
    reduced_normals = tuple(
        tuple(linalg.dot(row, a) for row in basis) for a in poly.normals
    )
    reduced = HPolytope(r, reduced_normals, poly.offsets)
    return not enumerate_vertices(reduced, budget=budget).empty


def enumerate_vertices(poly: HPolytope, budget: int = DEFAULT_SUBSET_BUDGET) -> VertexSet:
    """All vertices with their full active sets, plus emptiness/boundedness flags.

    Exhaustive k-subset solving with exact rational elimination.  A system
    whose normals do not span R^k has no vertices; its feasibility is still
    decided (in quotient coordinates) and reported through the flags.
    """
    k, n = poly.dim, poly.n
    rows = _integer_rows(poly)
    if k == 0:
        feasible = all(b >= 0 for b in poly.offsets)
        if not feasible:
            return VertexSet((), True, True, True)
        active = tuple(i for i, b in enumerate(poly.offsets) if b == 0)
        return VertexSet((Vertex((), active),), True, False, True)
    pointed = _normals_rank(poly.normals) == k
    if not pointed:
        feasible = _reduced_feasible(poly, budget)
        return VertexSet((), bounded=False, empty=not feasible, pointed=False)
    vertices = []
    for point, values in _vertex_candidates(rows, k, range(n), budget):
        active = tuple(i for i, v in enumerate(values) if v == 0)
        vertices.append(Vertex(point, active))
    vertices.sort(key=lambda v: v.point)
    if not vertices:
        return VertexSet((), bounded=True, empty=True, pointed=True)
    bounded = _has_positive_relation(_relation_rows(poly), n, budget)
    return VertexSet(tuple(vertices), bounded=bounded, empty=False, pointed=True)


def is_simple(vertex_set: VertexSet, dim: int) -> bool:
    """Exactly ``dim`` inequalities tight at every vertex."""
    return all(len(v.active) == dim for v in vertex_set.vertices)


def is_generic(poly: HPolytope, vertex_set: VertexSet) -> bool:
    """The normals tight at each vertex are linearly independent."""
    for v in vertex_set.vertices:
        rows = [list(poly.normals[i]) for i in v.active]
        if len(rows) > poly.dim:
            return False
        if len(rows) == poly.dim:
            if linalg.det(rows) == 0:
                return False
        elif linalg.rational_rank(rows) != len(rows):
            return False
    return True


def normal_lattice_basis(poly: HPolytope) -> list[list[int]]:
    basis = linalg.row_basis([list(a) for a in poly.normals])
    if len(basis) < poly.dim:
        raise LatticeRankError(
            f"normal lattice has rank {len(basis)} < ambient dimension {poly.dim}"
        )
    return basis


def is_delzant(poly: HPolytope, vertex_set: VertexSet) -> bool:
    """At every vertex the active normals are a basis of the normal lattice.

    Requires the simple and generic conditions; the index of the active
    sublattice equals |det(active normals)| / |det(lattice basis)|.
    """
    if not (is_simple(vertex_set, poly.dim) and is_generic(poly, vertex_set)):
        raise PolytopeError("Delzant test requires a simple and generic presentation")
    basis = normal_lattice_basis(poly)
    lattice_det = abs(linalg.det(basis))
    for v in vertex_set.vertices:
        active_det = abs(linalg.det([list(poly.normals[i]) for i in v.active]))
        index, rem = divmod(active_det, lattice_det)
        if rem:
            raise LatticeRankError("active normals leave the normal lattice")
        if index != 1:
            return False
    return True


def is_fano(poly: HPolytope):
    """Fano up to translation.

    True iff every normal is primitive and there are ``C > 0`` and rational
    ``y`` with ``b - C*1 = A^T y``, i.e. translating by ``-y`` makes every
    offset equal to ``C``.  Returns ``(flag, C, y)``.
    """
    for a in poly.normals:
        if math.gcd(*(abs(x) for x in a)) != 1:
            return False, None, None
    system = [list(a) + [1] for a in poly.normals]
    sol = linalg.solve_affine(system, list(poly.offsets))
    if sol is None:
        return False, None, None
    particular, null_basis = sol
    constant_free = any(vec[-1] for vec in null_basis)
    constant = Fraction(1) if constant_free else particular[-1]
    if constant <= 0:
        return False, None, None
    target = [b - constant for b in poly.offsets]
    reduced = linalg.solve_affine([list(a) for a in poly.normals], target)
    if reduced is None:
        return False, None, None
    translation, _ = reduced
    return True, constant, tuple(translation)


def redundancy(
    poly: HPolytope,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> dict[int, bool]:
    """Indices whose inequality can be dropped without changing the set.

    Returns ``{index: strict}`` where ``strict`` means the inequality is
    never tight on the intersection of the others.  Exact: index i is
    redundant iff the relaxation obtained by dropping it is bounded and the
    minimum of ``<a_i, x> + b_i`` over its vertices is >= 0; an unbounded
    relaxation of a bounded polytope always escapes through inequality i.
    """
    if not is_bounded(poly, budget):
        if not enumerate_vertices(poly, budget).empty:
            raise PolytopeError("redundancy analysis requires a bounded polytope")
    relations = _relation_rows(poly)
    result: dict[int, bool] = {}
    for i in range(poly.n):
        relaxed = poly.drop(i)
        # dropping normal i loses rank exactly when no relation involves it
        if poly.dim > 0 and not any(row[i] for row in relations):
            if not _reduced_feasible(relaxed, budget):
                result[i] = True
            continue
        rows = _integer_rows(relaxed)
        a_i, b_i = poly.normals[i], poly.offsets[i]
        minimum = None
        feasible = False
        for point, _ in _vertex_candidates(rows, relaxed.dim, range(relaxed.n), budget):
            feasible = True
            value = linalg.dot(a_i, point) + b_i
            if minimum is None or value < minimum:
                minimum = value
            if minimum < 0:
                break
        if not feasible:
            result[i] = True  # both sides empty
            continue
        if minimum < 0:
            continue
        if not is_bounded(relaxed, budget):
            continue
        result[i] = minimum > 0
    return result


def structure_report(poly: HPolytope, budget: int = DEFAULT_SUBSET_BUDGET) -> StructureReport:
    """Run every structural predicate and assemble the report."""
    notes: list[str] = []
    vertex_set = enumerate_vertices(poly, budget)
    bounded = vertex_set.bounded and not vertex_set.empty
    if vertex_set.empty:
        notes.append("empty feasible set")
    if not vertex_set.pointed:
        notes.append("normals are rank-deficient: no vertices, unbounded if nonempty")
    simple = generic = delzant = None
    if vertex_set.vertices:
        simple = is_simple(vertex_set, poly.dim)
        generic = is_generic(poly, vertex_set)
        if simple and generic:
            try:
                delzant = is_delzant(poly, vertex_set)
            except LatticeRankError as exc:
                delzant = None
                notes.append(str(exc))
        else:
            delzant = False
    fano, constant, translation = is_fano(poly)
    redundant: tuple[int, ...] = ()
    strict: tuple[int, ...] = ()
    if bounded:
        flags = redundancy(poly, budget)
        redundant = tuple(sorted(flags))
        strict = tuple(sorted(i for i, s in flags.items() if s))
    elif not vertex_set.empty:
        notes.append("redundancy analysis skipped: polytope is not bounded")
    monotone_ready = bool(bounded and delzant and not redundant)
    return StructureReport(
        bounded=vertex_set.bounded,
        empty=vertex_set.empty,
        simple=simple,
        generic=generic,
        delzant=delzant,
        fano=fano,
        fano_constant=constant,
        fano_translation=translation,
        redundant=redundant,
        strict_redundant=strict,
        monotone_ready=monotone_ready,
        notes=tuple(notes),
    )


def structure_to_json(report: StructureReport) -> dict:
    return {
        "bounded": report.bounded,
        "empty": report.empty,
        "simple": report.simple,
        "generic": report.generic,
        "delzant": report.delzant,
        "fano": report.fano,
        "fano_constant": None
        if report.fano_constant is None
        else format_rational(report.fano_constant),
        "fano_translation": None
        if report.fano_translation is None
        else [format_rational(x) for x in report.fano_translation],
        "redundant": list(report.redundant),
        "strict_redundant": list(report.strict_redundant),
        "monotone_ready": report.monotone_ready,
        "notes": list(report.notes),
    }
