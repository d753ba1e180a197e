"""Basecondary functions: supports, orderings, evaluators, convexity machinery.

The function attached to a point configuration A and a set function F is
piecewise linear in the height vector; this module provides two independent
evaluation routes (a threshold sum over subdivision cells and the
simplicial-support expansion), wall defects across secondary walls, the
minimal convexifying multiple of the secondary support, and reconstruction
of the per-cone gradient representation with an exact convexity certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import InputError, InternalError, ResourceError
from .exact_core import (
    CircuitData,
    PointConfig,
    affine_rank,
    lattice_volume,
    oriented_volume,
)
from .secondary import (
    Covector,
    Wall,
    cone_witness,
    covector,
    discover_cones_random,
    enumerate_triangulations_1d,
    enumerate_walls_1d,
    regular_subdivision,
    secondary_support,
    upper_cells,
    _affine_through,
    _values_under,
)
from .setfun import SetFunction, evaluate_f

STEP_SEARCH_CAP = 64
ORDER_CONE_CAP = 8


@dataclass(frozen=True)
class SimplicialSupport:
    """Affine functional whose offset heights peak on exactly n+1 spanning points."""

    linear: tuple[Fraction, ...]
    max_value: Fraction
    maximizers: tuple[int, ...]
    generic: bool


@dataclass(frozen=True)
class CircuitalSupport:
    """Affine functional whose offset heights peak on exactly n+2 spanning points."""

    linear: tuple[Fraction, ...]
    max_value: Fraction
    maximizers: tuple[int, ...]
    circuit: CircuitData


@dataclass(frozen=True)
class OrderedSupport:
    """Full arrangement of the ground set: head block first, then descending tail."""

    tuple: tuple[int, ...]
    head: int


@dataclass(frozen=True)
class PiecewiseLinearRep:
    """Per-cone (witness, gradient) pairs with an exact convexity certificate."""

    entries: tuple[tuple[Covector, tuple[Fraction, ...]], ...]
    certified: bool
    failure_witness: Optional[tuple[Covector, int, int]] = None

    @property
    def gradients(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(g for _, g in self.entries)


# ---------------------------------------------------------------------------
# supports and orderings


def enumerate_simplicial(config: PointConfig, gamma) -> tuple[SimplicialSupport, ...]:
    """All affine supports maximized on exactly n+1 affinely spanning points."""
    gamma = covector(config, gamma)
    n = config.n
    out = []
    seen = set()
    for base in itertools.combinations(range(1, config.m + 1), n + 1):
        if affine_rank(config.subset_points(base)) != n:
            continue
        fit = _affine_through(config, gamma, base)
        if fit is None:
            continue
        linear, _ = fit
        values = _values_under(config, gamma, linear)
        top = max(values)
        maximizers = tuple(i for i in range(1, config.m + 1) if values[i - 1] == top)
        if maximizers != base or maximizers in seen:
            continue
        seen.add(maximizers)
        off = [values[i - 1] for i in range(1, config.m + 1) if i not in base]
        out.append(
            SimplicialSupport(
                linear=linear,
                max_value=top,
                maximizers=maximizers,
                generic=len(off) == len(set(off)),
            )
        )
    return tuple(sorted(out, key=lambda s: s.maximizers))


def enumerate_circuital(config: PointConfig, gamma) -> tuple[CircuitalSupport, ...]:
    """All affine supports maximized on exactly n+2 affinely spanning points."""
    gamma = covector(config, gamma)
    n = config.n
    out = []
    for base in itertools.combinations(range(1, config.m + 1), n + 2):
        pts = config.subset_points(base)
        if affine_rank(pts) != n:
            continue
        fit = _affine_through(config, gamma, base)
        if fit is None:  # lifted points not coplanar
            continue
        linear, _ = fit
        values = _values_under(config, gamma, linear)
        top = max(values)
        maximizers = tuple(i for i in range(1, config.m + 1) if values[i - 1] == top)
        if maximizers != base:
            continue
        out.append(
            CircuitalSupport(
                linear=linear,
                max_value=top,
                maximizers=maximizers,
                circuit=find_circuit_for(config, base),
            )
        )
    return tuple(sorted(out, key=lambda s: s.maximizers))


def find_circuit_for(config: PointConfig, labels: Sequence[int]) -> CircuitData:
    from .exact_core import find_circuit

    return find_circuit(config.subset_points(labels), labels=list(labels))


def is_generic(config: PointConfig, gamma) -> bool:
    """Whether gamma sits in the open interior of a full secondary cone.

    Requires the induced subdivision to be a triangulation, every simplicial
    support generic, and no circuital support.
    """
    gamma = covector(config, gamma)
    if not regular_subdivision(config, gamma).is_triangulation:
        return False
    if any(not s.generic for s in enumerate_simplicial(config, gamma)):
        return False
    return not enumerate_circuital(config, gamma)


def _positive_orientation(config: PointConfig, labels: Sequence[int]) -> tuple[int, ...]:
    """Even-permutation representative with positive base orientation."""
    head = sorted(labels)
    if config.n == 0:
        return tuple(head)
    vol = oriented_volume(config.subset_points(head))
    if vol == 0:
        raise InternalError("support maximizers must span affinely")
    if vol < 0:
        head[-1], head[-2] = head[-2], head[-1]
    return tuple(head)


def order_simplicial(
    config: PointConfig, gamma, s: SimplicialSupport
) -> OrderedSupport:
    """Maximizers in positive orientation, then the tail strictly descending."""
    if not s.generic:
        raise InputError("ordering needs a generic simplicial support")
    gamma = covector(config, gamma)
    values = _values_under(config, gamma, s.linear)
    head = _positive_orientation(config, s.maximizers)
    tail = sorted(
        (i for i in range(1, config.m + 1) if i not in s.maximizers),
        key=lambda i: (-values[i - 1], i),
    )
    return OrderedSupport(tuple=head + tuple(tail), head=config.n + 1)


def order_circuital(
    config: PointConfig, gamma, c: CircuitalSupport
) -> OrderedSupport:
    """Circuit-compatible arrangement validated by the double alternating sum.

    The head holds the positive side, the negative side, then the
    zero-coefficient members; among the arrangements satisfying the exact
    volume identities the lexicographically smallest is returned.
    """
    gamma = covector(config, gamma)
    values = _values_under(config, gamma, c.linear)
    off = [values[i - 1] for i in range(1, config.m + 1) if i not in c.maximizers]
    if len(off) != len(set(off)):
        raise InputError("tail values must be pairwise distinct to order a circuit")
    tail = sorted(
        (i for i in range(1, config.m + 1) if i not in c.maximizers),
        key=lambda i: -values[i - 1],
    )
    circ = c.circuit
    pos = [i for i, _ in circ.positive]
    neg = [i for i, _ in circ.negative]
    zer = list(circ.zeros)
    n = config.n
    # hull of a circuit configuration = union of the simplices obtained by
    # dropping one positive-side point, with disjoint interiors
    target = sum(
        abs(oriented_volume(config.subset_points([j for j in c.maximizers if j != i])))
        for i in pos
    )
    best = None
    for pp in itertools.permutations(pos):
        for nn in itertools.permutations(neg):
            for zz in itertools.permutations(zer):
                head = list(pp) + list(nn) + list(zz)
                if best is not None and tuple(head) >= best:
                    continue
                if _circuit_identity_holds(config, head, len(pp), len(nn), target):
                    best = tuple(head)
    if best is None:
        raise InternalError("no arrangement satisfies the circuit volume identity")
    return OrderedSupport(tuple=best + tuple(tail), head=n + 2)


def _circuit_identity_holds(config, head, p, q, target) -> bool:
    first = Fraction(0)
    second = Fraction(0)
    for i in range(1, p + q + 1):  # 1-based position within the head
        rest = [head[k] for k in range(len(head)) if k != i - 1]
        vol = oriented_volume(config.subset_points(rest))
        if i <= p:
            first += vol if i % 2 == 0 else -vol
        else:
            second += vol if i % 2 == 1 else -vol
    return first == target and second == target


# ---------------------------------------------------------------------------
# the two evaluators


def _check_f(config: PointConfig, f: SetFunction):
    if f.m != config.m:
        raise InputError("set function and configuration disagree on m")
    if f.min_size > config.n:
        raise InputError("F must be defined on all sets of size >= n")


def eval_basecondary_general(config: PointConfig, f: SetFunction, gamma) -> Fraction:
    """Threshold-form evaluation, valid for arbitrary (also non-generic) heights.

    Per full-dimensional upper cell with offset heights v and maximum M:
    volume(cell) * sum over values c < M of (c - M) * (F{v >= c} - F{v > c}).
    Only subsets with more than n elements are ever queried.
    """
    _check_f(config, f)
    gamma = covector(config, gamma)
    total = Fraction(0)
    for cell in upper_cells(config, gamma):
        vol = lattice_volume(config.subset_points(cell.cell))
        if vol == 0:
            continue
        v = cell.values
        top = cell.max_value
        for c in sorted(set(v)):
            if c >= top:
                continue
            ge = frozenset(i for i in range(1, config.m + 1) if v[i - 1] >= c)
            gt = frozenset(i for i in range(1, config.m + 1) if v[i - 1] > c)
            total += vol * (c - top) * (evaluate_f(f, ge) - evaluate_f(f, gt))
    return total


def expansion_terms(
    config: PointConfig, f: SetFunction, gamma
) -> tuple[tuple[tuple[int, ...], Fraction, Fraction], ...]:
    """Nonzero summands of the simplicial-support expansion at a generic height.

    Each term is (ordered simplex tuple, F-difference, lifted volume); the
    lifted volume is taken with maximizers first in positive base orientation
    and is positive for every genuine tail point.
    """
    _check_f(config, f)
    gamma = covector(config, gamma)
    if not is_generic(config, gamma):
        raise InputError("expansion needs a generic height vector; use the general evaluator")
    n = config.n
    terms = []
    for s in enumerate_simplicial(config, gamma):
        ordered = order_simplicial(config, gamma, s).tuple
        lifted = {
            i: tuple(config.image(i)) + (gamma[i - 1],) for i in range(1, config.m + 1)
        }
        head_pts = [lifted[i] for i in ordered[: n + 1]]
        prefix = set(ordered[: n + 1])
        prev = evaluate_f(f, prefix)
        for pos in range(n + 1, config.m):
            i = ordered[pos]
            prefix.add(i)
            cur = evaluate_f(f, prefix)
            diff = prev - cur
            prev = cur
            if diff == 0:
                continue
            volume = -oriented_volume(head_pts + [lifted[i]])
            terms.append((ordered[: n + 1] + (i,), diff, volume))
    return tuple(terms)


def eval_basecondary_generic(config: PointConfig, f: SetFunction, gamma) -> Fraction:
    """Simplicial-expansion evaluation; requires a generic height vector."""
    return sum(
        (diff * volume for _, diff, volume in expansion_terms(config, f, gamma)),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# wall defects


def _second_difference(
    config: PointConfig, fn: Callable[[Covector], Fraction], wall: Wall
) -> tuple[Fraction, Fraction]:
    """Normalized second difference across a wall and the step that realized it.

    The step is halved until both offsets land in the advertised adjacent
    cones and the normalized value is stable under one further halving, so
    the result is the exact one-sided gradient jump.
    """
    w = wall.witness
    u = wall.direction
    base = fn(w)
    eps = Fraction(1)
    prev: Optional[Fraction] = None
    for _ in range(STEP_SEARCH_CAP):
        plus = tuple(a + eps * b for a, b in zip(w, u))
        minus = tuple(a - eps * b for a, b in zip(w, u))
        ok = (
            regular_subdivision(config, plus).cells == wall.left.cells
            and regular_subdivision(config, minus).cells == wall.right.cells
        )
        if ok:
            value = (fn(plus) + fn(minus) - 2 * base) / eps
            if prev is not None and value == prev:
                return value, eps * 2
            prev = value
        else:
            prev = None
        eps /= 2
    raise InternalError("no stable step found across the wall; malformed wall data")


def wall_defect_numeric(config: PointConfig, f: SetFunction, wall: Wall) -> Fraction:
    """Second difference of the basecondary function across the wall, per unit step."""
    _check_f(config, f)
    value, _ = _second_difference(
        config, lambda g: eval_basecondary_general(config, f, g), wall
    )
    return value


def wall_defect_symbolic(config: PointConfig, f: SetFunction, wall: Wall) -> Fraction:
    """Closed-form wall defect: lifted circuit volume times the circuit expression.

    The volume factor is the unsigned volume of the lifted maximizer set at
    the same probe point the numeric defect uses, so the two defects share
    their sign and differ by a positive per-wall constant.
    """
    _check_f(config, f)
    _, eps = _second_difference(
        config, lambda g: eval_basecondary_general(config, f, g), wall
    )
    probe = tuple(a - eps * b for a, b in zip(wall.witness, wall.direction))
    supports = enumerate_circuital(config, wall.witness)
    if len(supports) != 1:
        raise InternalError("wall witness must carry exactly one circuital support")
    i_alpha = supports[0].maximizers
    circ = supports[0].circuit
    lifted = [tuple(config.image(i)) + (probe[i - 1],) for i in i_alpha]
    vol = abs(oriented_volume(lifted))
    ground = frozenset(range(1, config.m + 1))
    expr = -(len(circ.support) - 1) * evaluate_f(f, i_alpha) - evaluate_f(f, ground)
    for k in circ.support:
        expr += evaluate_f(f, frozenset(i_alpha) - {k})
    return vol * expr


# ---------------------------------------------------------------------------
# gradients, convexifier, reconstruction


def gradient_on_cone(
    config: PointConfig,
    f: Optional[SetFunction],
    witness,
    fn: Optional[Callable[[Covector], Fraction]] = None,
) -> tuple[Fraction, ...]:
    """Exact gradient of the (piecewise linear) function at a generic witness.

    Coordinate steps are halved until the perturbed height keeps the same
    subdivision and the difference quotient is stable under halving; the
    result is checked against the homogeneity identity <g, witness> = value.
    """
    witness = covector(config, witness)
    if fn is None:
        if f is None:
            raise InputError("either a set function or an explicit fn is required")
        _check_f(config, f)
        fn = lambda g: eval_basecondary_general(config, f, g)
    if not is_generic(config, witness):
        raise InputError("gradients are taken at generic witnesses")
    base_cells = regular_subdivision(config, witness).cells
    value = fn(witness)
    grad = []
    for k in range(config.m):
        eps = Fraction(1)
        prev: Optional[Fraction] = None
        slope: Optional[Fraction] = None
        for _ in range(STEP_SEARCH_CAP):
            pert = tuple(
                w + (eps if i == k else 0) for i, w in enumerate(witness)
            )
            if regular_subdivision(config, pert).cells == base_cells:
                q = (fn(pert) - value) / eps
                if prev is not None and q == prev:
                    slope = q
                    break
                prev = q
            else:
                prev = None
            eps /= 2
        if slope is None:
            raise InternalError("no stable coordinate step inside the cone")
        grad.append(slope)
    if sum(g * w for g, w in zip(grad, witness)) != value:
        raise InternalError("gradient fails the homogeneity identity at its witness")
    return tuple(grad)


def convexity_certificate(rep_or_entries) -> tuple[bool, Optional[tuple]]:
    """Pairwise support maximality: <g_j, w_j> >= <g_k, w_j> for all pairs.

    Returns (True, None) or (False, (witness_j, j, k)) for the first failing
    pair; with full cone coverage success certifies that the represented
    function is the support function of the convex hull of the gradients.
    """
    if isinstance(rep_or_entries, PiecewiseLinearRep):
        entries = rep_or_entries.entries
    else:
        entries = tuple(rep_or_entries)
    if not entries:
        raise InputError("certificate needs at least one entry")
    for j, (wj, gj) in enumerate(entries):
        own = sum(a * b for a, b in zip(gj, wj))
        for k, (_, gk) in enumerate(entries):
            if k == j:
                continue
            if sum(a * b for a, b in zip(gk, wj)) > own:
                return False, (wj, j, k)
    return True, None


def _order_cone_witnesses(config: PointConfig) -> list[Covector]:
    """Witnesses of the strict-order cones for a zero-dimensional configuration."""
    if config.m > ORDER_CONE_CAP:
        raise ResourceError(f"order-cone enumeration capped at m = {ORDER_CONE_CAP}")
    out = []
    for perm in itertools.permutations(range(1, config.m + 1)):
        gamma = [Fraction(0)] * config.m
        for rank, i in enumerate(perm):
            gamma[i - 1] = Fraction(config.m - rank)
        out.append(tuple(gamma))
    return out


def cone_witnesses(
    config: PointConfig, samples: Optional[int] = None, seed: Optional[int] = None
) -> tuple[Covector, ...]:
    """Generic witnesses covering the secondary cones (exact for n <= 1)."""
    if config.n == 0:
        return tuple(_order_cone_witnesses(config))
    if config.n == 1:
        return tuple(
            cone_witness(config, t) for t in enumerate_triangulations_1d(config)
        )
    if samples is None or seed is None:
        raise InputError("cone discovery for n >= 2 needs samples and a seed")
    return tuple(w for _, w in discover_cones_random(config, samples, seed))


@dataclass(frozen=True)
class MinConvexifier:
    value: Fraction
    exact: bool
    walls: tuple[tuple[tuple[int, ...], Fraction, Fraction], ...] = ()


def min_convexifier(
    config: PointConfig,
    f: SetFunction,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> MinConvexifier:
    """Smallest c >= 0 making the function wall-convex after adding c times
    the secondary support.

    Exact via wall enumeration for n = 1 (and via order cones for n = 0);
    for n >= 2 a lower bound over discovered cones, flagged not exact.
    """
    _check_f(config, f)
    if config.n == 1:
        rows = []
        best = Fraction(0)
        for wall in enumerate_walls_1d(config):
            d_f = wall_defect_numeric(config, f, wall)
            d_sec, _ = _second_difference(
                config, lambda g: secondary_support(config, g), wall
            )
            if d_sec <= 0:
                raise InternalError("secondary support must be strictly wall-convex")
            rows.append((wall.circuit.support, d_f, d_sec))
            if -d_f / d_sec > best:
                best = -d_f / d_sec
        return MinConvexifier(value=best, exact=True, walls=tuple(rows))
    witnesses = cone_witnesses(config, samples=samples, seed=seed)
    f_grads = [
        gradient_on_cone(config, f, w) for w in witnesses
    ]
    s_grads = [
        gradient_on_cone(
            config, None, w, fn=lambda g: secondary_support(config, g)
        )
        for w in witnesses
    ]
    best = Fraction(0)
    for j, wj in enumerate(witnesses):
        for k in range(len(witnesses)):
            if k == j:
                continue
            denom = sum((a - b) * c for a, b, c in zip(s_grads[j], s_grads[k], wj))
            numer = sum((a - b) * c for a, b, c in zip(f_grads[k], f_grads[j], wj))
            if denom > 0 and numer / denom > best:
                best = numer / denom
    return MinConvexifier(value=best, exact=config.n == 0)


def reconstruct_polytope(
    config: PointConfig,
    f: SetFunction,
    convexifier=0,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> PiecewiseLinearRep:
    """Per-cone gradients of the (optionally convexified) function.

    A failed certificate is a legitimate result describing a non-convex
    function, returned with the failing pair, never raised.
    """
    from .exact_core import rat

    _check_f(config, f)
    c = rat(convexifier)
    if c == 0:
        fn = lambda g: eval_basecondary_general(config, f, g)
    else:
        fn = lambda g: eval_basecondary_general(config, f, g) + c * secondary_support(
            config, g
        )
    entries = []
    seen_gradients = set()
    for w in cone_witnesses(config, samples=samples, seed=seed):
        g = gradient_on_cone(config, None, w, fn=fn)
        if g not in seen_gradients:
            seen_gradients.add(g)
            entries.append((w, g))
    ok, failure = convexity_certificate(entries)
    return PiecewiseLinearRep(
        entries=tuple(entries), certified=ok, failure_witness=failure
    )
