"""Set functions on 2^{1..m}: submodularity, Lovász extensions, base polytopes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InputError, ResourceError
from .exact_core import PointConfig, find_circuit, affine_rank, matrix_rank, rat

SUBMODULAR_CHECK_CAP = 16
BASE_POLYTOPE_CAP = 8

Subset = frozenset[int]

KINDS = ("table", "neg_gcd", "neg_indicator_full", "matrix_rank", "neg_card_ratio")


@dataclass(frozen=True)
class SetFunction:
    """A rational-valued function on subsets of {1..m} of size >= min_size.

    Kinds:
      table              explicit values with a default for unlisted subsets
      neg_gcd            -gcd of the 1D integer points indexed by the subset
      neg_indicator_full -1 exactly on subsets containing the marked element
      matrix_rank        rank over Q of the selected columns
      neg_card_ratio     -|X|/m
    """

    kind: str
    m: int
    min_size: int = 0
    table: Optional[dict] = None
    default: Fraction = Fraction(0)
    gcd_points: Optional[tuple[int, ...]] = None
    columns: Optional[tuple[tuple[Fraction, ...], ...]] = None
    point: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown set-function kind {self.kind!r}")
        if self.m < 1:
            raise InputError("ground size must be positive")
        if not 0 <= self.min_size <= self.m:
            raise InputError("min_size out of range")
        if self.kind == "neg_gcd":
            if self.gcd_points is None or len(self.gcd_points) != self.m:
                raise InputError("neg_gcd needs one integer point per ground element")
            if any(a == 0 for a in self.gcd_points):
                raise InputError("neg_gcd needs nonzero integer points")
        if self.kind == "matrix_rank":
            if self.columns is None or len(self.columns) != self.m:
                raise InputError("matrix_rank needs one column per ground element")
        if self.kind == "neg_indicator_full" and not 1 <= self.point <= self.m:
            raise InputError("marked element out of range")
        if self.kind == "table":
            if self.table is None:
                raise InputError("table kind needs a value map")
            if self.min_size == 0 and self.table.get(frozenset(), Fraction(0)) != 0:
                raise InputError("F(empty set) must be 0 when min_size is 0")

    def ground(self) -> Subset:
        return frozenset(range(1, self.m + 1))


def table_function(m: int, values: dict, default=0, min_size: int = 0) -> SetFunction:
    tbl = {frozenset(k): rat(v) for k, v in values.items()}
    return SetFunction(kind="table", m=m, min_size=min_size, table=tbl, default=rat(default))


def neg_gcd_function(config_or_points, min_size: int = 0) -> SetFunction:
    if isinstance(config_or_points, PointConfig):
        if config_or_points.n != 1:
            raise InputError("neg_gcd needs a one-dimensional configuration")
        pts = tuple(int(p[0]) for p in config_or_points.points)
        if any(Fraction(a) != p[0] for a, p in zip(pts, config_or_points.points)):
            raise InputError("neg_gcd needs integer points")
    else:
        pts = tuple(int(a) for a in config_or_points)
    return SetFunction(kind="neg_gcd", m=len(pts), min_size=min_size, gcd_points=pts)


def neg_indicator_function(m: int, point: int = 1, min_size: int = 0) -> SetFunction:
    return SetFunction(kind="neg_indicator_full", m=m, min_size=min_size, point=point)


def matrix_rank_function(columns, min_size: int = 0) -> SetFunction:
    cols = tuple(tuple(rat(x) for x in col) for col in columns)
    return SetFunction(kind="matrix_rank", m=len(cols), min_size=min_size, columns=cols)


def neg_card_ratio_function(m: int, min_size: int = 0) -> SetFunction:
    return SetFunction(kind="neg_card_ratio", m=m, min_size=min_size)


def evaluate_f(f: SetFunction, subset) -> Fraction:
    """Value of F on a subset of the ground set."""
    x = frozenset(subset)
    if not x <= f.ground():
        raise InputError(f"subset {sorted(x)} not within 1..{f.m}")
    if len(x) < f.min_size and not (len(x) == 0 and f.min_size == 0):
        raise InputError(f"F is only defined on subsets of size >= {f.min_size}")
    if f.kind == "table":
        if not x:
            return f.table.get(x, Fraction(0))
        return f.table.get(x, f.default)
    if f.kind == "neg_gcd":
        if not x:
            return Fraction(0)
        return Fraction(-math.gcd(*(abs(f.gcd_points[i - 1]) for i in x)))
    if f.kind == "neg_indicator_full":
        return Fraction(-1) if f.point in x else Fraction(0)
    if f.kind == "matrix_rank":
        if not x:
            return Fraction(0)
        cols = [f.columns[i - 1] for i in sorted(x)]
        return Fraction(matrix_rank(cols))
    if f.kind == "neg_card_ratio":
        return Fraction(-len(x), f.m)
    raise InputError(f"unknown kind {f.kind!r}")


@dataclass(frozen=True)
class SubmodularityReport:
    holds: bool
    witness: Optional[tuple] = None  # (X, x1, x2, the four values)

    def __bool__(self) -> bool:
        return self.holds


def _pair_violation(f: SetFunction, x: Subset, x1: int, x2: int) -> Optional[tuple]:
    a = evaluate_f(f, x | {x1})
    b = evaluate_f(f, x | {x2})
    c = evaluate_f(f, x)
    d = evaluate_f(f, x | {x1, x2})
    if a + b < c + d:
        return (tuple(sorted(x)), x1, x2, (a, b, c, d))
    return None


def _subsets_by_mask(m: int, min_size: int = 0):
    ground = list(range(1, m + 1))
    for mask in range(1 << m):
        if mask.bit_count() < min_size:
            continue
        yield frozenset(ground[i] for i in range(m) if mask >> i & 1)


def is_submodular(f: SetFunction) -> SubmodularityReport:
    """Exhaustive submodularity check; reports the first violation found."""
    if f.min_size != 0:
        raise InputError("submodularity check needs min_size 0")
    return is_submodular_above(f, 0)


def is_submodular_above(f: SetFunction, n: int) -> SubmodularityReport:
    """Element-pair submodularity restricted to base sets of size >= n."""
    if f.m > SUBMODULAR_CHECK_CAP:
        raise ResourceError(f"exhaustive check capped at m = {SUBMODULAR_CHECK_CAP}")
    for x in _subsets_by_mask(f.m, max(n, f.min_size)):
        rest = sorted(f.ground() - x)
        for x1, x2 in itertools.combinations(rest, 2):
            hit = _pair_violation(f, x, x1, x2)
            if hit is not None:
                return SubmodularityReport(holds=False, witness=hit)
    return SubmodularityReport(holds=True)


@dataclass(frozen=True)
class CircuitConditionReport:
    passed: bool
    rows: tuple[tuple[tuple[int, ...], Fraction], ...] = field(default=())


def circuit_condition_check(f: SetFunction, config: PointConfig) -> CircuitConditionReport:
    """Evaluate the circuit inequality on every spanning (n+2)-subset.

    For each J with full-rank image and circuit support J0, the tested value
    is sum_{k in J0} F(J \\ k) - (|J0|-1) F(J) - F(ground); the report passes
    when every value is >= 0.
    """
    n = config.n
    if f.m != config.m:
        raise InputError("set function and configuration disagree on m")
    ground = f.ground()
    f_full = evaluate_f(f, ground)
    rows = []
    ok = True
    for j in itertools.combinations(range(1, config.m + 1), n + 2):
        pts = config.subset_points(j)
        if affine_rank(pts) != n:
            continue  # hyperplane case is outside the theorem's hypothesis
        circuit = find_circuit(pts, labels=list(j))
        value = -(len(circuit.support) - 1) * evaluate_f(f, j) - f_full
        for k in circuit.support:
            value += evaluate_f(f, frozenset(j) - {k})
        rows.append((tuple(j), value))
        if value < 0:
            ok = False
    return CircuitConditionReport(passed=ok, rows=tuple(rows))


def lovasz_extension(f: SetFunction, x) -> Fraction:
    """Piecewise-linear extension via descending coordinate sorting.

    Ties are broken by ascending index; the value does not depend on the
    tie break.
    """
    if f.min_size != 0:
        raise InputError("Lovász extension needs min_size 0")
    vec = [rat(c) for c in x]
    if len(vec) != f.m:
        raise InputError(f"expected a vector of length {f.m}")
    order = sorted(range(1, f.m + 1), key=lambda i: (-vec[i - 1], i))
    total = Fraction(0)
    prev = Fraction(0)
    chain: set[int] = set()
    for i in order:
        chain.add(i)
        cur = evaluate_f(f, chain)
        total += vec[i - 1] * (cur - prev)
        prev = cur
    return total


def greedy_vertex(f: SetFunction, order) -> tuple[Fraction, ...]:
    """Telescoping increments of F along a permutation of the ground set."""
    if f.min_size != 0:
        raise InputError("greedy construction needs min_size 0")
    perm = list(order)
    if sorted(perm) != list(range(1, f.m + 1)):
        raise InputError("order must be a permutation of 1..m")
    y = [Fraction(0)] * f.m
    prev = Fraction(0)
    chain: set[int] = set()
    for i in perm:
        chain.add(i)
        cur = evaluate_f(f, chain)
        y[i - 1] = cur - prev
        prev = cur
    return tuple(y)


def base_polytope(f: SetFunction) -> tuple[tuple[Fraction, ...], ...]:
    """Deduplicated greedy vertices over all m! orders (submodular f only)."""
    if f.m > BASE_POLYTOPE_CAP:
        raise ResourceError(f"full vertex enumeration capped at m = {BASE_POLYTOPE_CAP}")
    report = is_submodular(f)
    if not report.holds:
        raise InputError(f"not submodular; witness {report.witness}")
    seen = []
    for order in itertools.permutations(range(1, f.m + 1)):
        v = greedy_vertex(f, order)
        if v not in seen:
            seen.append(v)
    return tuple(sorted(seen))


def submodular_polyhedron_contains(f: SetFunction, y) -> bool:
    """Whether sum_{s in X} y_s <= F(X) for every subset X."""
    if f.min_size != 0:
        raise InputError("submodular polyhedron needs min_size 0")
    vec = [rat(c) for c in y]
    if len(vec) != f.m:
        raise InputError(f"expected a vector of length {f.m}")
    for x in _subsets_by_mask(f.m):
        if not x:
            continue
        if sum(vec[i - 1] for i in x) > evaluate_f(f, x):
            return False
    return True
