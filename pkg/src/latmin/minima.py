"""Successive minima and canonical instances.

The ``i``-th successive minimum of a 0-symmetric convex body ``K`` with
respect to a lattice is the smallest dilation factor at which ``mu*K``
contains ``i`` linearly independent lattice points.  The result equals a
greedy sweep of all lattice points in increasing gauge order keeping each
point that grows the span; the implementation computes the same answer
stage by stage.  With ``k`` witnesses fixed, a unimodular change of basis
moves their span onto a coordinate subspace, and a pruned coordinate search
finds the exact minimal-gauge point outside that subspace without ever
enumerating the (possibly huge) point mass inside it.

Ties are broken deterministically: points are ordered by exact gauge, then
by preferring support on earlier coordinates, after normalizing each
+-pair to the representative whose first nonzero coordinate is positive.

``canonicalize`` moves an instance to the standard lattice and applies the
unimodular change of basis that aligns witness ``i`` with the span of the
first ``i`` standard basis vectors, then recomputes the minima to confirm
nothing moved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bodies import Box, SymmetricBody
from .enumeration import min_key_point_outside
from .gauges import GaugeValue
from .lattices import Lattice
from .matrices import Matrix, align_witnesses

IntPoint = tuple[int, ...]


@dataclass(frozen=True)
class MinimaResult:
    """Successive minima with witness lattice points (basis coordinates).

    ``witnesses[i]`` is linearly independent of the earlier witnesses and
    has gauge exactly ``minima[i]``; the minima are sorted ascending and the
    first one is positive.
    """

    minima: tuple[GaugeValue, ...]
    witnesses: tuple[IntPoint, ...]

    @property
    def dim(self) -> int:
        return len(self.minima)


@dataclass(frozen=True)
class CanonicalInstance:
    """An instance over the standard lattice with flag-aligned witnesses."""

    body: SymmetricBody
    minima: MinimaResult


def _canonical_sign(p: IntPoint) -> IntPoint:
    for v in p:
        if v > 0:
            return p
        if v < 0:
            return tuple(-x for x in p)
    return p


def _tiebreak(p: IntPoint) -> tuple:
    """Deterministic order among equal-gauge points.

    Prefers points supported on earlier coordinates (so unit vectors come
    out in the order e1, e2, ...), then small late coordinates, then the
    plain tuple as a final tie-break between sign patterns.
    """
    return (tuple(abs(c) for c in reversed(p)), p)


def _flag_unimodular(witnesses: list[IntPoint], dim: int) -> Matrix:
    """Integer unimodular map sending ``span(witnesses)`` into the span of
    the *last* ``len(witnesses)`` coordinates.

    A point ``x`` lies in the witness span iff the first
    ``dim - len(witnesses)`` entries of ``A x`` all vanish, which turns the
    span into a single skippable prefix of the coordinate search.
    """
    m = [[w[r] for w in witnesses] for r in range(dim)]
    u = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for col in range(len(witnesses)):
        while True:
            live = [r for r in range(col, dim) if m[r][col]]
            if not live:
                raise AssertionError("witnesses are linearly dependent")
            piv = min(live, key=lambda r: abs(m[r][col]))
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                u[col], u[piv] = u[piv], u[col]
            pv = m[col][col]
            done = True
            for r in range(col + 1, dim):
                q = m[r][col] // pv
                if q:
                    m[r] = [a - q * b for a, b in zip(m[r], m[col])]
                    u[r] = [a - q * b for a, b in zip(u[r], u[col])]
                if m[r][col]:
                    done = False
            if done:
                break
    u.reverse()
    return Matrix.from_rows(u)


def _box_minima(zbody: Box) -> MinimaResult:
    """Closed form for axis boxes over the standard lattice.

    The witnesses are the unit vectors ordered by gauge ``1/w_i`` with ties
    going to the smaller axis index, which is exactly what the general
    greedy sweep picks for a box.
    """
    dim = zbody.dim
    inv = [Fraction(w.denominator, w.numerator) for w in zbody.halfwidths]
    axes = sorted(range(dim), key=lambda i: (inv[i], i))
    minima = tuple(GaugeValue.rational(inv[i]) for i in axes)
    witnesses = tuple(tuple(int(j == i) for j in range(dim)) for i in axes)
    return MinimaResult(minima, witnesses)


def successive_minima(body: SymmetricBody, lattice: Lattice) -> MinimaResult:
    """Compute all ``d`` successive minima with witnesses.

    Witnesses are found one stage at a time.  At each stage the span of the
    current witnesses is mapped unimodularly onto a coordinate subspace and
    :func:`min_key_point_outside` finds the exact minimal-gauge points
    outside it within the dilation ``mu``, doubling ``mu`` until one
    appears.  The dilation never shrinks between stages because the minima
    are nondecreasing.
    """
    dim = body.dim
    zbody = body if lattice.is_standard else body.preimage(lattice.basis)
    if isinstance(zbody, Box):
        return _box_minima(zbody)

    identity = tuple(tuple(int(i == j) for j in range(dim))
                     for i in range(dim))
    minima: list[GaugeValue] = []
    witnesses: list[IntPoint] = []
    mu = 1
    while len(witnesses) < dim:
        k = len(witnesses)
        if k == 0:
            view, rows = zbody, identity
        else:
            back = _flag_unimodular(witnesses, dim).inverse()
            view = zbody.preimage(back)
            # The alignment is unimodular, so its inverse is integer; the
            # search receives it to express its preference directly on the
            # original coordinates.
            rows = tuple(tuple(int(e) for e in row) for row in back.entries)
        found = min_key_point_outside(view, dim - k, mu, rows)
        if found is None:
            mu *= 2
            continue
        gauge, witness = found
        minima.append(gauge)
        witnesses.append(witness)
    return MinimaResult(tuple(minima), tuple(witnesses))


def canonicalize(body: SymmetricBody, lattice: Lattice) -> CanonicalInstance:
    """Standard-lattice instance with witnesses aligned to the flag.

    The returned body is the original pulled back through the lattice basis
    and then mapped by the unimodular alignment, so witness ``i`` lies in
    the span of the first ``i`` standard basis vectors and all gauges (hence
    all minima) are preserved.  The minima are recomputed on the canonical
    instance as a self-check.
    """
    zbody = body if lattice.is_standard else body.preimage(lattice.basis)
    base = successive_minima(zbody, Lattice.standard(body.dim))
    u = align_witnesses(base.witnesses)
    aligned_body = zbody.preimage(u.inverse())
    aligned_wits = tuple(tuple(int(c) for c in u.apply(w))
                         for w in base.witnesses)
    for w, lam in zip(aligned_wits, base.minima):
        if aligned_body.gauge(w) != lam:
            raise AssertionError("alignment changed a witness gauge")
    recheck = successive_minima(aligned_body, Lattice.standard(body.dim))
    if recheck.minima != base.minima:
        raise AssertionError("canonicalization changed the minima")
    return CanonicalInstance(aligned_body,
                             MinimaResult(base.minima, aligned_wits))
