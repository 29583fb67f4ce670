"""0-symmetric convex bodies with exact gauge evaluation.

Three shapes are supported, each storing exact rational data:

* :class:`Box` -- ``{x : |x_i| <= w_i}`` with positive rational halfwidths.
* :class:`HPolytope` -- ``{x : |<a_i, x>| <= 1}`` for the rows ``a_i`` of a
  rational matrix of rank ``d`` (rank makes the body bounded).
* :class:`Ellipsoid` -- ``{x : x^T Q x <= 1}`` for a symmetric positive
  definite rational ``Q``.

The gauge (Minkowski functional) of a rational point is rational for the two
polyhedral shapes and a square root of a rational for ellipsoids; both are
returned as :class:`~latmin.gauges.GaugeValue` so callers can compare them
exactly.

Coordinate slicing is the workhorse for point enumeration.  For polytopes we
keep a cascade of Fourier-Motzkin projections (one per prefix length,
eliminating the last coordinate first, redundant rows pruned by pairwise
dominance of parallel rows); for ellipsoids the analogous cascade is the
chain of Schur complements of the Gram matrix.  Both cascades are computed
once per body and cached on the instance; fills are idempotent so concurrent
readers are safe.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from .gauges import GaugeValue
from .lattices import Lattice
from .matrices import DimensionMismatch, Matrix, Scalar, _frac

# One-sided integer inequality `coeffs . x <= rhs`.
IntRow = tuple[tuple[int, ...], int]


class InvalidBodyError(ValueError):
    """Shape data violates a body invariant (positivity, rank, SPD)."""


# ---------------------------------------------------------------------------
# small integer helpers


def _gcd_all(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, abs(v))
    return g


def _integerize(coeffs: Sequence[Fraction], rhs: Fraction) -> IntRow:
    """Scale ``coeffs . x <= rhs`` by a positive rational into primitive ints."""
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    lcm = lcm * rhs.denominator // math.gcd(lcm, rhs.denominator)
    ints = [int(c * lcm) for c in coeffs]
    b = int(rhs * lcm)
    g = _gcd_all(ints + [b])
    if g > 1:
        ints = [c // g for c in ints]
        b //= g
    return tuple(ints), b


def _prune_rows(rows: list[IntRow]) -> list[IntRow]:
    """Drop trivial rows and keep only the tightest of parallel rows."""
    best: dict[tuple[int, ...], Fraction] = {}
    for coeffs, rhs in rows:
        g = _gcd_all(coeffs)
        if g == 0:
            # 0 <= rhs; trivially true for the 0-symmetric bodies we build.
            if rhs < 0:
                raise InvalidBodyError("projection produced an empty system")
            continue
        key = tuple(c // g for c in coeffs)
        ratio = Fraction(rhs, g)
        if key not in best or ratio < best[key]:
            best[key] = ratio
    return [(tuple(c * ratio.denominator for c in key), ratio.numerator)
            for key, ratio in best.items()]


def _eliminate_last(rows: list[IntRow], width: int) -> list[IntRow]:
    """Fourier-Motzkin elimination of variable ``width - 1``."""
    zero: list[IntRow] = []
    pos: list[IntRow] = []
    neg: list[IntRow] = []
    for coeffs, rhs in rows:
        last = coeffs[width - 1]
        if last == 0:
            zero.append((coeffs[:width - 1], rhs))
        elif last > 0:
            pos.append((coeffs, rhs))
        else:
            neg.append((coeffs, rhs))
    out = list(zero)
    for cp, bp in pos:
        a = cp[width - 1]
        for cn, bn in neg:
            d = -cn[width - 1]
            out.append((tuple(d * cp[i] + a * cn[i] for i in range(width - 1)),
                        d * bp + a * bn))
    return _prune_rows(out)


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``{x : |x_i| <= halfwidths[i]}``."""

    halfwidths: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "halfwidths",
                           tuple(_frac(w) for w in self.halfwidths))
        if not self.halfwidths:
            raise InvalidBodyError("box needs at least one axis")
        if any(w <= 0 for w in self.halfwidths):
            raise InvalidBodyError("halfwidths must be positive")

    @property
    def dim(self) -> int:
        return len(self.halfwidths)

    @property
    def kind(self) -> str:
        return "box"

    def gauge(self, x: Sequence[Scalar]) -> GaugeValue:
        if len(x) != self.dim:
            raise DimensionMismatch("point has wrong dimension")
        return GaugeValue.rational(
            max((abs(_frac(v)) / w for v, w in zip(x, self.halfwidths)),
                default=Fraction(0)))

    def scale(self, mu: "Scalar | GaugeValue") -> "Box":
        mu = _rational_scale(mu, "box")
        return Box(tuple(w * mu for w in self.halfwidths))

    def preimage(self, a: Matrix) -> "SymmetricBody":
        """The body ``{y : a @ y in self}`` (gauge pulled back through ``a``)."""
        _check_transform(a, self.dim)
        if a.is_diagonal():
            return Box(tuple(w / abs(a[i, i])
                             for i, w in enumerate(self.halfwidths)))
        normals = Matrix.from_rows(
            [[Fraction(int(i == j), 1) / self.halfwidths[i]
              for j in range(self.dim)] for i in range(self.dim)])
        return HPolytope(normals @ a)

    def coordinate_bounds(
            self, prefix: Sequence[Scalar]) -> tuple[Fraction, Fraction] | None:
        j = _check_prefix(prefix, self.dim)
        if any(abs(_frac(p)) > w for p, w in zip(prefix, self.halfwidths)):
            return None
        w = self.halfwidths[j]
        return (-w, w)

    @property
    def volume(self) -> Fraction:
        vol = Fraction(1)
        for w in self.halfwidths:
            vol *= 2 * w
        return vol


@dataclass(frozen=True)
class HPolytope:
    """Symmetric polytope ``{x : |<a_i, x>| <= 1}`` for rows ``a_i``."""

    normals: Matrix

    def __post_init__(self) -> None:
        if any(all(e == 0 for e in row) for row in self.normals.entries):
            raise InvalidBodyError("zero normal row")
        if self.normals.rank() != self.normals.ncols:
            raise InvalidBodyError(
                "normals must have full column rank (bounded body)")

    @property
    def dim(self) -> int:
        return self.normals.ncols

    @property
    def kind(self) -> str:
        return "hpolytope"

    def gauge(self, x: Sequence[Scalar]) -> GaugeValue:
        if len(x) != self.dim:
            raise DimensionMismatch("point has wrong dimension")
        return GaugeValue.rational(
            max(abs(v) for v in self.normals.apply(x)))

    def scale(self, mu: "Scalar | GaugeValue") -> "HPolytope":
        mu = _rational_scale(mu, "hpolytope")
        return HPolytope(self.normals.scaled(Fraction(1) / mu))

    def preimage(self, a: Matrix) -> "HPolytope":
        _check_transform(a, self.dim)
        return HPolytope(self.normals @ a)

    @cached_property
    def _cascade(self) -> tuple[tuple[IntRow, ...], ...]:
        """Projection systems indexed by width: entry ``k-1`` constrains the
        first ``k`` coordinates.  Entry ``d-1`` is the original row system."""
        rows: list[IntRow] = []
        for normal in self.normals.entries:
            coeffs, rhs = _integerize(normal, Fraction(1))
            rows.append((coeffs, rhs))
            rows.append((tuple(-c for c in coeffs), rhs))
        systems = [tuple(_prune_rows(rows))]
        for width in range(self.dim, 1, -1):
            systems.append(tuple(_eliminate_last(list(systems[-1]), width)))
        systems.reverse()
        for k, system in enumerate(systems):
            has_pos = any(c[k] > 0 for c, _ in system)
            has_neg = any(c[k] < 0 for c, _ in system)
            if not (has_pos and has_neg):
                raise InvalidBodyError(
                    "projection interval unbounded; body is not compact")
        return tuple(systems)

    def coordinate_bounds(
            self, prefix: Sequence[Scalar]) -> tuple[Fraction, Fraction] | None:
        j = _check_prefix(prefix, self.dim)
        pref = [_frac(p) for p in prefix]
        lo: Fraction | None = None
        hi: Fraction | None = None
        for coeffs, rhs in self._cascade[j]:
            residual = Fraction(rhs) - sum(
                c * p for c, p in zip(coeffs, pref) if c)
            c_j = coeffs[j]
            if c_j == 0:
                if residual < 0:
                    return None
            elif c_j > 0:
                bound = residual / c_j
                hi = bound if hi is None or bound < hi else hi
            else:
                bound = residual / c_j
                lo = bound if lo is None or bound > lo else lo
        if lo is None or hi is None:
            raise InvalidBodyError("unbounded slice")  # unreachable: rank d
        if lo > hi:
            return None
        return (lo, hi)


@dataclass(frozen=True)
class Ellipsoid:
    """Ellipsoid ``{x : x^T Q x <= 1}`` with symmetric positive definite Q."""

    gram: Matrix

    def __post_init__(self) -> None:
        q = self.gram
        if not q.is_square:
            raise InvalidBodyError("gram matrix must be square")
        if q != q.transpose():
            raise InvalidBodyError("gram matrix must be symmetric")
        for k in range(1, q.nrows + 1):
            leading = Matrix.from_rows([row[:k] for row in q.entries[:k]])
            if leading.det() <= 0:
                raise InvalidBodyError(
                    "gram matrix must be positive definite")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    @property
    def kind(self) -> str:
        return "ellipsoid"

    def gauge_squared(self, x: Sequence[Scalar]) -> Fraction:
        if len(x) != self.dim:
            raise DimensionMismatch("point has wrong dimension")
        xs = [_frac(v) for v in x]
        return sum(xs[i] * sum(self.gram[i, j] * xs[j]
                               for j in range(self.dim))
                   for i in range(self.dim))

    def gauge(self, x: Sequence[Scalar]) -> GaugeValue:
        return GaugeValue.sqrt_of(self.gauge_squared(x))

    def scale(self, mu: "Scalar | GaugeValue") -> "Ellipsoid":
        if isinstance(mu, GaugeValue):
            sq = mu.squared()
            if sq <= 0:
                raise ValueError("scale factor must be positive")
            return Ellipsoid(self.gram.scaled(Fraction(1) / sq))
        mu = _frac(mu)
        if mu <= 0:
            raise ValueError("scale factor must be positive")
        return Ellipsoid(self.gram.scaled(Fraction(1) / (mu * mu)))

    def preimage(self, a: Matrix) -> "Ellipsoid":
        _check_transform(a, self.dim)
        return Ellipsoid(a.transpose() @ self.gram @ a)

    @cached_property
    def _schur_cascade(self) -> tuple[Matrix, ...]:
        """Gram matrices of the coordinate projections, by prefix width.

        Entry ``k-1`` is the Gram matrix of the projection of the body onto
        its first ``k`` coordinates (Schur complement chain)."""
        forms = [self.gram]
        for k in range(self.dim, 1, -1):
            g = forms[-1]
            c = g[k - 1, k - 1]
            reduced = Matrix.from_rows(
                [[g[i, j] - g[i, k - 1] * g[j, k - 1] / c
                  for j in range(k - 1)] for i in range(k - 1)])
            forms.append(reduced)
        forms.reverse()
        return tuple(forms)

    @cached_property
    def _integer_forms(self) -> tuple[tuple[tuple[tuple[int, ...], ...], int], ...]:
        """Integer-scaled cascade: pairs ``(M, s)`` with ``x M x <= s``
        equivalent to the rational projection inequality ``x G x <= 1``."""
        out = []
        for form in self._schur_cascade:
            lcm = 1
            for row in form.entries:
                for e in row:
                    lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
            m = tuple(tuple(int(e * lcm) for e in row) for row in form.entries)
            out.append((m, lcm))
        return tuple(out)

    def coordinate_bounds(
            self, prefix: Sequence[Scalar]) -> tuple[Fraction, Fraction] | None:
        """Integer-content bounds for the next coordinate over the slice.

        Ellipsoid slice endpoints are generally irrational; the returned
        rational interval contains exactly the same integers as the true
        interval (endpoints resolved by exact integer-square comparisons).
        Returns ``None`` when the slice is empty.
        """
        j = _check_prefix(prefix, self.dim)
        g = self._schur_cascade[j]
        pref = [_frac(p) for p in prefix]
        alpha = g[j, j]
        beta = sum(g[i, j] * pref[i] for i in range(j))
        gamma = sum(pref[i] * g[i, k] * pref[k]
                    for i in range(j) for k in range(j))
        # alpha t^2 + 2 beta t + (gamma - 1) <= 0, scaled to integers.
        lcm = 1
        for v in (alpha, beta, gamma):
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        a, b, c = int(alpha * lcm), int(beta * lcm), int((gamma - 1) * lcm)
        disc = b * b - a * c
        if disc < 0:
            return None
        root = math.isqrt(disc)
        hi = (-b + root) // a
        lo = -((b + root) // a)
        return (Fraction(lo), Fraction(hi))


SymmetricBody = Union[Box, HPolytope, Ellipsoid]


# ---------------------------------------------------------------------------
# shared operations


def _rational_scale(mu: "Scalar | GaugeValue", kind: str) -> Fraction:
    if isinstance(mu, GaugeValue):
        try:
            mu = mu.as_rational()
        except ValueError:
            raise ValueError(
                f"cannot scale a {kind} by an irrational factor exactly")
    mu = _frac(mu)
    if mu <= 0:
        raise ValueError("scale factor must be positive")
    return mu


def _check_transform(a: Matrix, dim: int) -> None:
    if not a.is_square or a.nrows != dim:
        raise DimensionMismatch("transform has wrong shape")
    if a.det() == 0:
        raise InvalidBodyError("transform must be nonsingular")


def _check_prefix(prefix: Sequence[Scalar], dim: int) -> int:
    j = len(prefix)
    if j >= dim:
        raise DimensionMismatch("prefix already fixes every coordinate")
    return j


def contains(body: SymmetricBody, lam: "Scalar | GaugeValue",
             x: Sequence[Scalar], strict: bool = False) -> bool:
    """Is ``x`` in ``lam * body`` (interior if ``strict``)?"""
    g = body.gauge(x)
    lam = GaugeValue.coerce(lam)
    return g < lam if strict else g <= lam


def volume_box(box: Box) -> Fraction:
    return box.volume


def volume_estimate(body: SymmetricBody, lattice: Lattice,
                    resolution: Scalar) -> Fraction:
    """Riemann-sum volume estimate ``r^d * #(K meet r*Lattice) * det``.

    Exact rational output; the counting step is exact, so the only error is
    the discretization itself, which vanishes as ``resolution`` shrinks.
    """
    from .enumeration import count_points

    r = _frac(resolution)
    if r <= 0:
        raise ValueError("resolution must be positive")
    if body.dim != lattice.dim:
        raise DimensionMismatch("body and lattice dimensions differ")
    fine = Lattice(lattice.basis.scaled(r))
    n = count_points(body, fine, GaugeValue.rational(1))
    return r ** body.dim * n * lattice.determinant


def corner_gauge_bound(body: SymmetricBody, lattice: Lattice) -> Fraction:
    """Rational upper bound on ``max`` gauge of ``B c`` over cube corners
    ``c in {-1, 1}^d``; used to bound the Riemann estimate's surface term."""
    best = Fraction(0)
    for corner in itertools.product((-1, 1), repeat=body.dim):
        g = body.gauge(lattice.basis.apply(corner)).rational_upper_bound()
        if g > best:
            best = g
    return best
