"""Exact enumeration and counting of lattice points in dilated bodies.

Counting ``#(mu*K  meet  Lattice)`` is reduced to the standard lattice: with
``Lattice = B @ Z^d`` the points of ``mu*K meet B Z^d`` are exactly ``B y``
for integer ``y`` in ``mu * (B^-1 K)``, so every routine first pulls the body
back through the basis and then walks integer vectors coordinate by
coordinate.  Interval bounds for each coordinate come from the body's cached
projection cascade; the final coordinate is resolved against the full
constraint system, which also decides strict (interior) membership exactly.

All arithmetic on the hot path is plain integer arithmetic: polytope rows
and ellipsoid Gram forms are pre-scaled to integers, and a rational dilation
``p/q`` is folded into those integers rather than into the body.

Dilations that are square roots of rationals are exact for ellipsoids.  For
the polyhedral shapes such a dilation cannot be folded into rational data,
so enumeration walks a rational cover and keeps only points passing the
exact gauge comparison; results are still exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .bodies import (Box, Ellipsoid, HPolytope, InvalidBodyError,
                     SymmetricBody)
from .gauges import GaugeValue
from .lattices import Lattice
from .matrices import DimensionMismatch, Matrix

IntPoint = tuple[int, ...]


@dataclass(frozen=True)
class PointSet:
    """Lattice points of a dilated body, in lattice-basis coordinates."""

    dim: int
    lattice: Lattice
    points: tuple[IntPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[IntPoint]:
        return iter(self.points)

    def ambient(self) -> tuple[tuple[Fraction, ...], ...]:
        """The points in ambient coordinates (basis applied)."""
        return tuple(self.lattice.point(p) for p in self.points)


def _standard_body(body: SymmetricBody, lattice: Lattice) -> SymmetricBody:
    if body.dim != lattice.dim:
        raise DimensionMismatch("body and lattice dimensions differ")
    if lattice.is_standard:
        return body
    return body.preimage(lattice.basis)


def _ceil_div(a: int, b: int) -> int:
    # b > 0
    return -((-a) // b)


# ---------------------------------------------------------------------------
# polytope jobs: lists of integer rows per prefix length


def _scaled_systems(body: HPolytope, num: int,
                    den: int) -> list[list[tuple[tuple[int, ...], int]]]:
    """The projection cascade with the dilation ``num/den`` folded in."""
    return [[(tuple(den * c for c in coeffs), num * rhs)
             for coeffs, rhs in system] for system in body._cascade]


def _poly_interval(rows, prefix: IntPoint, k: int) -> tuple[int, int] | None:
    lo = None
    hi = None
    for coeffs, rhs in rows:
        r = rhs
        for c, p in zip(coeffs, prefix):
            if c:
                r -= c * p
        cj = coeffs[k]
        if cj == 0:
            if r < 0:
                return None
        elif cj > 0:
            b = r // cj
            if hi is None or b < hi:
                hi = b
        else:
            b = -(r // (-cj))
            if lo is None or b > lo:
                lo = b
    if lo is None or hi is None:
        raise InvalidBodyError("unbounded enumeration interval")
    if lo > hi:
        return None
    return lo, hi


def _poly_last_interval(rows, prefix: IntPoint, k: int,
                        strict: bool) -> tuple[int, int] | None:
    """Exact integer range for the final coordinate.

    For ``strict`` the range describes interior points: a point is interior
    iff every defining inequality holds strictly."""
    lo = None
    hi = None
    for coeffs, rhs in rows:
        r = rhs
        for c, p in zip(coeffs, prefix):
            if c:
                r -= c * p
        cj = coeffs[k]
        if cj == 0:
            if (r <= 0) if strict else (r < 0):
                return None
        elif cj > 0:
            b = _ceil_div(r, cj) - 1 if strict else r // cj
            if hi is None or b < hi:
                hi = b
        else:
            b = (r // cj) + 1 if strict else -(r // (-cj))
            if lo is None or b > lo:
                lo = b
    if lo is None or hi is None:
        raise InvalidBodyError("unbounded enumeration interval")
    if lo > hi:
        return None
    return lo, hi


# ---------------------------------------------------------------------------
# ellipsoid jobs: integer quadratic forms per prefix length


def _scaled_forms(body: Ellipsoid, num: int, den: int,
                  sqrt_kind: bool) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """Integer forms ``(M, T)`` with ``x M x <= T`` equivalent to membership
    in the dilated body.  ``num/den`` is the dilation itself for rational
    dilations, or its *square* when ``sqrt_kind``."""
    out = []
    for m, s in body._integer_forms:
        if sqrt_kind:
            scaled = tuple(tuple(e * den for e in row) for row in m)
            out.append((scaled, s * num))
        else:
            dd = den * den
            scaled = tuple(tuple(e * dd for e in row) for row in m)
            out.append((scaled, s * num * num))
    return out


def _quad_interval(form, prefix: IntPoint,
                   k: int) -> tuple[int, int, int, int, int] | None:
    """Closed integer range plus the quadratic data at a prefix.

    Returns ``(lo, hi, alpha, beta, rest)`` where membership of ``t`` means
    ``alpha t^2 + 2 beta t + rest <= 0``; ``None`` for an empty slice."""
    m, t_bound = form
    alpha = m[k][k]
    beta = 0
    gamma = 0
    for i in range(k):
        pi = prefix[i]
        if pi:
            beta += m[i][k] * pi
            row = m[i]
            gamma += pi * sum(row[j] * prefix[j] for j in range(k))
    rest = gamma - t_bound
    disc = beta * beta - alpha * rest
    if disc < 0:
        return None
    root = math.isqrt(disc)
    hi = (-beta + root) // alpha
    lo = -((beta + root) // alpha)
    if lo > hi:
        return None
    return lo, hi, alpha, beta, rest


def _quad_count(form, prefix: IntPoint, k: int, strict: bool) -> int:
    iv = _quad_interval(form, prefix, k)
    if iv is None:
        return 0
    lo, hi, alpha, beta, rest = iv
    n = hi - lo + 1
    if strict:
        # Equality holds only at the two real roots, so only the extreme
        # integer candidates can sit on the boundary.
        for t in {lo, hi}:
            if alpha * t * t + 2 * beta * t + rest == 0:
                n -= 1
    return max(n, 0)


def _quad_points(form, prefix: IntPoint, k: int, strict: bool) -> list[int]:
    iv = _quad_interval(form, prefix, k)
    if iv is None:
        return []
    lo, hi, alpha, beta, rest = iv
    values = list(range(lo, hi + 1))
    if strict:
        values = [t for t in values
                  if alpha * t * t + 2 * beta * t + rest != 0]
    return values


# ---------------------------------------------------------------------------
# box closed forms


def _axis_range(width: Fraction, strict: bool) -> range:
    num, den = width.numerator, width.denominator
    m = num // den
    if strict and den == 1:
        return range(-m + 1, m)
    return range(-m, m + 1)


# ---------------------------------------------------------------------------
# exact gauge filter (used when a sqrt dilation meets a polyhedral body)


def _gauge_filter(body: SymmetricBody, mu: GaugeValue,
                  strict: bool) -> Callable[[IntPoint], bool]:
    if strict:
        return lambda x: body.gauge(x) < mu
    return lambda x: body.gauge(x) <= mu


def _cover_job(body: SymmetricBody, mu: GaugeValue, strict: bool):
    """Fallback for sqrt dilations of polyhedral bodies: walk the closed
    rational cover ``mu_up * K`` and keep exact gauge matches."""
    cover = mu.rational_upper_bound()
    return cover, _gauge_filter(body, mu, strict)


# ---------------------------------------------------------------------------
# public API


def count_points(body: SymmetricBody, lattice: Lattice,
                 mu: "GaugeValue | Fraction | int",
                 strict: bool = False) -> int:
    """Number of lattice points in ``mu * body`` (interior when strict)."""
    mu = GaugeValue.coerce(mu)
    if mu.is_zero():
        return 0 if strict else 1
    zbody = _standard_body(body, lattice)
    dim = zbody.dim

    if isinstance(zbody, Ellipsoid):
        v = mu.value
        forms = _scaled_forms(zbody, v.numerator, v.denominator, mu.is_sqrt)

        def rec(depth: int, prefix: IntPoint) -> int:
            if depth == dim - 1:
                return _quad_count(forms[depth], prefix, depth, strict)
            iv = _quad_interval(forms[depth], prefix, depth)
            if iv is None:
                return 0
            return sum(rec(depth + 1, prefix + (t,))
                       for t in range(iv[0], iv[1] + 1))

        return rec(0, ())

    if mu.is_sqrt:
        cover, keep = _cover_job(zbody, mu, strict)
        return sum(1 for p in _walk_closed(zbody, cover) if keep(p))

    if isinstance(zbody, Box):
        v = mu.value
        total = 1
        for w in zbody.halfwidths:
            total *= len(_axis_range(w * v, strict))
        return total

    v = mu.value
    systems = _scaled_systems(zbody, v.numerator, v.denominator)

    def rec(depth: int, prefix: IntPoint) -> int:
        if depth == dim - 1:
            iv = _poly_last_interval(systems[depth], prefix, depth, strict)
            return 0 if iv is None else iv[1] - iv[0] + 1
        iv = _poly_interval(systems[depth], prefix, depth)
        if iv is None:
            return 0
        return sum(rec(depth + 1, prefix + (t,))
                   for t in range(iv[0], iv[1] + 1))

    return rec(0, ())


def enumerate_points(body: SymmetricBody, lattice: Lattice,
                     mu: "GaugeValue | Fraction | int",
                     strict: bool = False) -> PointSet:
    """All lattice points of ``mu * body``, in lattice-basis coordinates.

    Points come out in lexicographic order.  The cardinality always matches
    :func:`count_points` for identical arguments.
    """
    mu = GaugeValue.coerce(mu)
    dim = body.dim
    if mu.is_zero():
        pts = () if strict else ((0,) * dim,)
        return PointSet(dim, lattice, pts)
    zbody = _standard_body(body, lattice)

    if isinstance(zbody, Ellipsoid):
        v = mu.value
        forms = _scaled_forms(zbody, v.numerator, v.denominator, mu.is_sqrt)
        out: list[IntPoint] = []

        def rec(depth: int, prefix: IntPoint) -> None:
            if depth == dim - 1:
                out.extend(prefix + (t,) for t in
                           _quad_points(forms[depth], prefix, depth, strict))
                return
            iv = _quad_interval(forms[depth], prefix, depth)
            if iv is None:
                return
            for t in range(iv[0], iv[1] + 1):
                rec(depth + 1, prefix + (t,))

        rec(0, ())
        return PointSet(dim, lattice, tuple(out))

    if mu.is_sqrt:
        cover, keep = _cover_job(zbody, mu, strict)
        pts = tuple(p for p in _walk_closed(zbody, cover) if keep(p))
        return PointSet(dim, lattice, pts)

    if isinstance(zbody, Box):
        v = mu.value
        ranges = [_axis_range(w * v, strict) for w in zbody.halfwidths]
        return PointSet(dim, lattice, tuple(itertools.product(*ranges)))

    v = mu.value
    systems = _scaled_systems(zbody, v.numerator, v.denominator)
    out = []

    def rec(depth: int, prefix: IntPoint) -> None:
        if depth == dim - 1:
            iv = _poly_last_interval(systems[depth], prefix, depth, strict)
            if iv is not None:
                out.extend(prefix + (t,) for t in range(iv[0], iv[1] + 1))
            return
        iv = _poly_interval(systems[depth], prefix, depth)
        if iv is None:
            return
        for t in range(iv[0], iv[1] + 1):
            rec(depth + 1, prefix + (t,))

    rec(0, ())
    return PointSet(dim, lattice, tuple(out))


def _walk_closed(zbody: SymmetricBody, mu: Fraction) -> Iterator[IntPoint]:
    """Iterate integer points of the closed rational dilation ``mu*zbody``."""
    dim = zbody.dim
    if isinstance(zbody, Box):
        ranges = [_axis_range(w * mu, False) for w in zbody.halfwidths]
        yield from itertools.product(*ranges)
        return
    assert isinstance(zbody, HPolytope)
    systems = _scaled_systems(zbody, mu.numerator, mu.denominator)

    def rec(depth: int, prefix: IntPoint) -> Iterator[IntPoint]:
        if depth == dim - 1:
            iv = _poly_last_interval(systems[depth], prefix, depth, False)
            if iv is not None:
                for t in range(iv[0], iv[1] + 1):
                    yield prefix + (t,)
            return
        iv = _poly_interval(systems[depth], prefix, depth)
        if iv is None:
            return
        for t in range(iv[0], iv[1] + 1):
            yield from rec(depth + 1, prefix + (t,))

    yield from rec(0, ())


# ---------------------------------------------------------------------------
# independent oracle and helpers


def count_oracle(body: SymmetricBody, lattice: Lattice,
                 mu: "GaugeValue | Fraction | int", box_radius: int,
                 strict: bool = False) -> int:
    """Reference count: scan the integer box ``[-R, R]^d`` and test the
    defining inequalities of the body point by point.

    The caller must guarantee (e.g. via :func:`enclosing_radius`) that every
    solution has all coordinates within ``box_radius``.  Deliberately shares
    no interval machinery with :func:`count_points`.
    """
    mu = GaugeValue.coerce(mu)
    zbody = _standard_body(body, lattice)
    dim = zbody.dim
    test = _membership_test(zbody, mu, strict)
    return sum(1 for p in itertools.product(
        range(-box_radius, box_radius + 1), repeat=dim) if test(p))


def _membership_test(zbody: SymmetricBody, mu: GaugeValue,
                     strict: bool) -> Callable[[IntPoint], bool]:
    """Integer-only membership predicate straight from the definitions."""
    musq = mu.squared()
    a, b = musq.numerator, musq.denominator

    if isinstance(zbody, Box):
        # |x_i| <= mu w_i, squared to stay integral for sqrt dilations.
        limits = [(w.numerator, w.denominator) for w in zbody.halfwidths]

        def test_box(x: IntPoint) -> bool:
            for (wn, wd), xi in zip(limits, x):
                lhs = xi * xi * wd * wd * b
                rhs = wn * wn * a
                if lhs > rhs or (strict and lhs == rhs):
                    return False
            return True

        return test_box

    if isinstance(zbody, HPolytope):
        rows = []
        for normal in zbody.normals.entries:
            lcm = 1
            for e in normal:
                lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
            rows.append((tuple(int(e * lcm) for e in normal), lcm))

        def test_poly(x: IntPoint) -> bool:
            for coeffs, scale in rows:
                dot = sum(c * xi for c, xi in zip(coeffs, x))
                lhs = dot * dot * b
                rhs = scale * scale * a
                if lhs > rhs or (strict and lhs == rhs):
                    return False
            return True

        return test_poly

    lcm = 1
    for row in zbody.gram.entries:
        for e in row:
            lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    m = [[int(e * lcm) for e in row] for row in zbody.gram.entries]

    def test_ell(x: IntPoint) -> bool:
        val = sum(x[i] * m[i][j] * x[j]
                  for i in range(len(x)) for j in range(len(x)))
        lhs = val * b
        rhs = lcm * a
        return lhs < rhs or (not strict and lhs == rhs)

    return test_ell


def axis_extent_bounds(body: SymmetricBody,
                       lattice: Lattice) -> tuple[Fraction, ...]:
    """Rational upper bounds ``e_i >= max { |y_i| : y in body }`` in lattice
    coordinates (exact for boxes and polytopes; for ellipsoids a tight
    rational bound on the irrational extent ``sqrt((G^-1)_ii)``)."""
    zbody = _standard_body(body, lattice)
    dim = zbody.dim
    if isinstance(zbody, Ellipsoid):
        inv = zbody.gram.inverse()
        return tuple(GaugeValue.sqrt_of(inv[j, j]).rational_upper_bound()
                     for j in range(dim))
    extents = []
    for axis in range(dim):
        if axis == 0:
            view = zbody
        else:
            swap = Matrix.from_rows(
                [[int(_swap_entry(i, j, axis)) for j in range(dim)]
                 for i in range(dim)])
            view = zbody.preimage(swap)
        bounds = view.coordinate_bounds(())
        assert bounds is not None  # a valid body contains the origin
        lo, hi = bounds
        extents.append(max(abs(lo), abs(hi)))
    return tuple(extents)


def axis_radii(body: SymmetricBody, lattice: Lattice,
               mu: "GaugeValue | Fraction | int") -> tuple[int, ...]:
    """Per-axis integer radii ``R_i`` such that every point of ``mu*body``
    in lattice coordinates has ``|y_i| <= R_i``."""
    mu_up = GaugeValue.coerce(mu).rational_upper_bound()
    return tuple(_ceil_div((e * mu_up).numerator, (e * mu_up).denominator)
                 for e in axis_extent_bounds(body, lattice))


def enclosing_radius(body: SymmetricBody, lattice: Lattice,
                     mu: "GaugeValue | Fraction | int") -> int:
    """An integer ``R`` such that every point of ``mu*body`` in lattice
    coordinates has ``|y_i| <= R`` for every coordinate."""
    return max(axis_radii(body, lattice, mu), default=0)


def _swap_entry(i: int, j: int, axis: int) -> bool:
    if i == 0:
        return j == axis
    if i == axis:
        return j == 0
    return i == j


def min_key_point_outside(view: SymmetricBody, flat: int, mu: int,
                          image_rows: tuple[IntPoint, ...]):
    """Preferred smallest-gauge point of ``mu*view`` off a coordinate subspace.

    Considers integer points whose first ``flat`` coordinates are not all
    zero.  Among those of minimal gauge, the winner is chosen by the image
    ``x = image_rows @ y``: smallest ``(abs(reversed(x)), x)`` after
    normalizing each +-pair so the first nonzero entry of ``x`` is positive.
    Returns ``(gauge, x)`` for the winner, or ``None`` when the dilate
    contains no qualifying point.

    The search is a branch-and-bound walk: coordinate intervals at every
    depth are derived from the best gauge found so far (initially ``mu``)
    via the projection cascade, and each interval is scanned center-out so
    the bound tightens after the first root-to-leaf path.  On the final
    coordinate the tied points form a contiguous run whose preferred image
    is located analytically, so neither time nor memory grows with the
    number of lattice points on a tied gauge face.
    """
    if not 1 <= flat <= view.dim:
        raise ValueError("flat must be in 1..dim")
    if mu <= 0:
        raise ValueError("mu must be a positive integer")
    if isinstance(view, Box):
        return _min_outside_box(view, flat, mu, image_rows)
    if isinstance(view, Ellipsoid):
        return _min_outside_ellipsoid(view, flat, mu, image_rows)
    return _min_outside_poly(view, flat, mu, image_rows)


def _centered(lo: int, hi: int) -> Iterator[int]:
    """``lo..hi`` ordered by distance from the midpoint.

    Visiting the middle of each feasibility interval first makes the
    branch-and-bound reach a near-minimal leaf on its first descent."""
    c = (lo + hi) // 2
    yield c
    down, up = c - 1, c + 1
    while True:
        emitted = False
        if up <= hi:
            yield up
            up += 1
            emitted = True
        if down >= lo:
            yield down
            down -= 1
            emitted = True
        if not emitted:
            return


def _sign_canonical(p: IntPoint) -> IntPoint:
    for v in p:
        if v > 0:
            return p
        if v < 0:
            return tuple(-x for x in p)
    return p


def _convex_int_min(lo: int, hi: int, f) -> tuple[int, int]:
    """A minimizer of a convex integer-valued function on ``lo..hi``."""
    while hi - lo > 2:
        mid = (lo + hi) // 2
        if f(mid) <= f(mid + 1):
            hi = mid
        else:
            lo = mid + 1
    t_best = lo
    v_best = f(lo)
    for t in range(lo + 1, hi + 1):
        v = f(t)
        if v < v_best:
            t_best, v_best = t, v
    return t_best, v_best


def _left_edge(lo: int, t_min: int, f, bound: int) -> int:
    """Smallest ``t`` with ``f(t) <= bound``; ``f`` nonincreasing on the range."""
    hi = t_min
    while lo < hi:
        mid = (lo + hi) // 2
        if f(mid) <= bound:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _right_edge(t_min: int, hi: int, f, bound: int) -> int:
    """Largest ``t`` with ``f(t) <= bound``; ``f`` nondecreasing on the range."""
    lo = t_min
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if f(mid) <= bound:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _run_tie_candidates(a: int, b: int, base: IntPoint,
                        dirv: IntPoint) -> list[int]:
    """The ``t`` in ``a..b`` minimizing ``abs(reversed(base + t*dirv))`` lex.

    Each component ``|base_j + t*dir_j|`` is V-shaped, so its minimum over
    an integer interval sits at the clamped floor/ceil of the vertex and at
    most two values tie; subsequent components filter those.  At most two
    candidates survive (they differ only in later, sign-level preference).
    """
    cand: list[int] | None = None
    for j in reversed(range(len(base))):
        bj, dj = base[j], dirv[j]
        if cand is None:
            if dj == 0:
                continue
            q = -bj // dj
            opts = sorted({min(max(q, a), b), min(max(q + 1, a), b)})
            vals = [abs(bj + t * dj) for t in opts]
            m = min(vals)
            cand = [t for t, v in zip(opts, vals) if v == m]
        else:
            vals = [abs(bj + t * dj) for t in cand]
            m = min(vals)
            cand = [t for t, v in zip(cand, vals) if v == m]
        if len(cand) == 1:
            break
    if cand is None:
        cand = [a]
    return cand


class _OutsideState:
    """Running minimum of a subspace-avoiding search.

    ``best`` is the smallest integer gauge key seen; ``champion`` pairs the
    preference tuple with the canonical image point realizing it.
    """

    __slots__ = ("best", "champion")

    def __init__(self, best: int):
        self.best = best
        self.champion: tuple | None = None

    def absorb_run(self, a0: int, b0: int, key_at, base: IntPoint,
                   dirv: IntPoint, skip_zero: bool) -> None:
        """Fold the leaf run ``t in a0..b0`` (all with key <= best) in.

        ``key_at(t)`` is convex; the run minimum is located by bisection,
        the tied sub-interval recovered exactly, and its preferred image
        chosen analytically.
        """
        runs = ((a0, -1), (1, b0)) if skip_zero else ((a0, b0),)
        for a, b in runs:
            if a > b:
                continue
            t_min, k_run = _convex_int_min(a, b, key_at)
            if k_run > self.best:
                continue
            if k_run < self.best:
                self.best = k_run
                self.champion = None
                a = _left_edge(a, t_min, key_at, k_run)
                b = _right_edge(t_min, b, key_at, k_run)
            for t in _run_tie_candidates(a, b, base, dirv):
                x = _sign_canonical(tuple(bs + t * dv
                                          for bs, dv in zip(base, dirv)))
                entry = (tuple(abs(c) for c in reversed(x)), x)
                if self.champion is None or entry < self.champion:
                    self.champion = entry

    def result(self, to_gauge):
        if self.champion is None:
            return None
        return to_gauge(self.best), self.champion[1]


def _image_run(image_rows: tuple[IntPoint, ...],
               prefix: IntPoint) -> tuple[IntPoint, IntPoint]:
    """Image of the leaf run ``prefix + (t,)`` as ``base + t*dirv``."""
    last = len(prefix)
    base = tuple(sum(row[i] * prefix[i] for i in range(last))
                 for row in image_rows)
    dirv = tuple(row[last] for row in image_rows)
    return base, dirv


def _min_outside_box(view: Box, flat: int, mu: int,
                     image_rows: tuple[IntPoint, ...]):
    dim = view.dim
    key_fn, to_gauge, threshold = integer_gauge_key(view)
    lcm = threshold(1)
    factors = [w.denominator * (lcm // w.numerator) for w in view.halfwidths]
    state = _OutsideState(threshold(mu))

    def rec(depth: int, prefix: IntPoint, pkey: int) -> None:
        if depth == flat and not any(prefix):
            return
        if pkey > state.best:
            return
        f = factors[depth]
        m = state.best // f
        if depth == dim - 1:
            base, dirv = _image_run(image_rows, prefix)
            state.absorb_run(-m, m, lambda t: max(pkey, abs(t) * f),
                             base, dirv, flat == dim and not any(prefix))
            return
        for t in _centered(-m, m):
            rec(depth + 1, prefix + (t,), max(pkey, abs(t) * f))

    rec(0, (), 0)
    return state.result(to_gauge)


def _min_outside_poly(view: HPolytope, flat: int, mu: int,
                      image_rows: tuple[IntPoint, ...]):
    dim = view.dim
    key_fn, to_gauge, threshold = integer_gauge_key(view)
    raw = view._cascade
    lcm = threshold(1)
    state = _OutsideState(threshold(mu))
    built_for = None
    systems: list[list[tuple[tuple[int, ...], int]]] = []

    def ensure_systems() -> None:
        nonlocal built_for, systems
        if built_for != state.best:
            built_for = state.best
            systems = [[(tuple(lcm * c for c in coeffs), state.best * rhs)
                        for coeffs, rhs in rows] for rows in raw]

    def rec(depth: int, prefix: IntPoint) -> None:
        if depth == flat and not any(prefix):
            return
        ensure_systems()
        if depth == dim - 1:
            iv = _poly_last_interval(systems[depth], prefix, depth, False)
            if iv is None:
                return
            base, dirv = _image_run(image_rows, prefix)
            state.absorb_run(iv[0], iv[1], lambda t: key_fn(prefix + (t,)),
                             base, dirv, flat == dim and not any(prefix))
            return
        iv = _poly_interval(systems[depth], prefix, depth)
        if iv is None:
            return
        for t in _centered(iv[0], iv[1]):
            rec(depth + 1, prefix + (t,))

    rec(0, ())
    return state.result(to_gauge)


def _min_outside_ellipsoid(view: Ellipsoid, flat: int, mu: int,
                           image_rows: tuple[IntPoint, ...]):
    dim = view.dim
    key_fn, to_gauge, threshold = integer_gauge_key(view)
    raw = view._integer_forms
    s_full = threshold(1)
    state = _OutsideState(threshold(mu))
    built_for = None
    forms: list[tuple[tuple[tuple[int, ...], ...], int]] = []

    def ensure_forms() -> None:
        nonlocal built_for, forms
        if built_for != state.best:
            built_for = state.best
            forms = [(tuple(tuple(e * s_full for e in row) for row in m),
                      state.best * s) for m, s in raw]

    def rec(depth: int, prefix: IntPoint) -> None:
        if depth == flat and not any(prefix):
            return
        ensure_forms()
        iv = _quad_interval(forms[depth], prefix, depth)
        if iv is None:
            return
        if depth == dim - 1:
            base, dirv = _image_run(image_rows, prefix)
            state.absorb_run(iv[0], iv[1], lambda t: key_fn(prefix + (t,)),
                             base, dirv, flat == dim and not any(prefix))
            return
        for t in _centered(iv[0], iv[1]):
            rec(depth + 1, prefix + (t,))

    rec(0, ())
    return state.result(to_gauge)


def integer_gauge_key(zbody: SymmetricBody):
    """Integer sort key for gauges over the standard lattice.

    Returns ``(key, to_gauge, threshold)`` where ``key(x)`` is a nonnegative
    integer proportional to the gauge (or to its square for ellipsoids),
    ``to_gauge`` converts a key back into the exact :class:`GaugeValue`, and
    ``threshold(mu)`` is the key value of a point of gauge exactly ``mu``
    for integer ``mu`` (so ``key(x) <= threshold(mu)`` iff ``x`` lies in the
    ``mu``-dilate).  Sorting integer keys sorts by exact gauge.
    """
    if isinstance(zbody, Box):
        lcm = 1
        for w in zbody.halfwidths:
            lcm = lcm * w.numerator // math.gcd(lcm, w.numerator)
        factors = [w.denominator * (lcm // w.numerator)
                   for w in zbody.halfwidths]

        def key_box(x: IntPoint) -> int:
            return max(abs(xi) * f for xi, f in zip(x, factors))

        return (key_box, lambda k: GaugeValue.rational(Fraction(k, lcm)),
                lambda mu: mu * lcm)

    if isinstance(zbody, HPolytope):
        rows = zbody._cascade[zbody.dim - 1]
        lcm = 1
        for _, rhs in rows:
            lcm = lcm * rhs // math.gcd(lcm, rhs)
        scaled = [(coeffs, lcm // rhs) for coeffs, rhs in rows]

        def key_poly(x: IntPoint) -> int:
            return max(f * sum(c * xi for c, xi in zip(coeffs, x))
                       for coeffs, f in scaled)

        return (key_poly, lambda k: GaugeValue.rational(Fraction(k, lcm)),
                lambda mu: mu * lcm)

    m, s = zbody._integer_forms[zbody.dim - 1]

    def key_ell(x: IntPoint) -> int:
        return sum(x[i] * m[i][j] * x[j]
                   for i in range(len(x)) for j in range(len(x)))

    return (key_ell, lambda k: GaugeValue.sqrt_of(Fraction(k, s)),
            lambda mu: mu * mu * s)
