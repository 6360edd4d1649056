"""Empty-sphere machinery: circumspheres, ellipsoid enumeration, certificates.

Every decision is exact.  The enumerator rescales the LDL factorization of
the form to a common denominator so the whole search tree runs on Python
integers; per-level ranges come from ``math.isqrt`` and are tight, and every
reported point is re-evaluated with ``Fraction`` arithmetic before it is
returned.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from . import exact
from .errors import Degenerate, EnumerationLimitExceeded, NotCospherical, Singular
from .lattice import QuadraticForm

log = logging.getLogger(__name__)

DEFAULT_POINT_CAP = 10**6


@dataclass(frozen=True)
class Sphere:
    center: tuple[Fraction, ...]
    radius_sq: Fraction

    def __post_init__(self):
        if self.radius_sq <= 0:
            raise ValueError("radius_sq must be positive")


class Verdict(enum.Enum):
    DELONE = "delone"
    NOT_DELONE = "not_delone"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class DeloneCertificate:
    sphere: Sphere | None
    on_sphere: tuple[tuple[int, ...], ...]
    verdict: Verdict
    witness: tuple[int, ...] | None = None

    @property
    def is_delone(self) -> bool:
        return self.verdict is Verdict.DELONE


def _as_points(points) -> list[tuple[int, ...]]:
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise Degenerate("empty point set")
    if len(set(pts)) != len(pts):
        raise Degenerate("repeated points")
    return pts


def circumsphere(points: Sequence[Sequence[int]], q: QuadraticForm) -> Sphere:
    """Sphere through all ``points`` in the metric of ``q``.

    The center solves ``(v_i - v_0)^T G c = (q[v_i] - q[v_0]) / 2``; more
    than d+1 points give an overdetermined system whose consistency is
    decided exactly.
    """
    pts = _as_points(points)
    d = q.dim
    if any(len(p) != d for p in pts):
        raise ValueError(f"points must have length {d}")
    if len(pts) < d + 1:
        raise Degenerate(f"{len(pts)} points cannot span dimension {d}")
    g = q.gram
    v0 = pts[0]
    q0 = q(v0)
    rows, rhs = [], []
    for v in pts[1:]:
        e = [a - b for a, b in zip(v, v0)]
        rows.append(exact.matvec(g, e))  # g symmetric: e^T g == (g e)^T
        rhs.append((q(v) - q0) / 2)
    try:
        c = exact.solve_full_column_rank(rows, rhs)
    except Singular:
        raise Degenerate("points do not affinely span the space") from None
    if c is None:
        raise NotCospherical("points do not lie on a common sphere")
    r2 = q([a - b for a, b in zip(v0, c)])
    return Sphere(c, r2)


def enumerate_in_ellipsoid(q: QuadraticForm, center: Sequence, radius_sq,
                           max_points: int = DEFAULT_POINT_CAP) -> list[tuple[int, ...]]:
    """All ``v`` in Z^d with ``q[v - center] <= radius_sq``, sorted lexicographically."""
    d = q.dim
    center = tuple(Fraction(x) for x in center)
    radius_sq = Fraction(radius_sq)
    if len(center) != d:
        raise ValueError(f"center must have length {d}")
    if radius_sq < 0:
        raise ValueError("radius_sq must be non-negative")
    dec = exact.ldl(q.gram)  # QuadraticForm guarantees this succeeds

    # Integer rescaling.  With Y_j = cd*x_j - cn_j and u_ij = m_ij/M,
    #   Z_i = M*Y_i + sum_{j>i} m_ij*Y_j
    # and q[x - c] <= R  <=>  sum_i w_i Z_i^2 <= B.
    cd = exact.lcm_of_denominators(center)
    cn = [int(c * cd) for c in center]
    mden = exact.lcm_of_denominators(dec.u[i][j] for i in range(d) for j in range(i + 1, d))
    m = [[int(dec.u[i][j] * mden) for j in range(d)] for i in range(d)]
    dden = exact.lcm_of_denominators(dec.d)
    w = [int(di * dden) * radius_sq.denominator for di in dec.d]
    k = mden * cd
    bound = radius_sq.numerator * dden * k * k

    found: list[tuple[int, ...]] = []
    x = [0] * d
    y = [0] * d

    def level(i: int, rem: int) -> None:
        e = -mden * cn[i]
        mi = m[i]
        for j in range(i + 1, d):
            e += mi[j] * y[j]
        s = isqrt(rem // w[i])
        # K*x + e in [-s, s]
        lo = -((s + e) // k)
        hi = (s - e) // k
        wi = w[i]
        for xi in range(lo, hi + 1):
            z = k * xi + e
            r = rem - wi * z * z
            if r < 0:
                continue
            x[i] = xi
            y[i] = cd * xi - cn[i]
            if i == 0:
                found.append(tuple(x))
                if len(found) > max_points:
                    raise EnumerationLimitExceeded(
                        f"more than {max_points} lattice points in the ellipsoid")
            else:
                level(i - 1, r)

    if d:
        level(d - 1, bound)
    found.sort()
    for v in found:
        if q([a - b for a, b in zip(v, center)]) > radius_sq:  # pragma: no cover
            raise AssertionError(f"enumerator returned outside point {v}")
    return found


def certify_delone(points: Sequence[Sequence[int]], q: QuadraticForm,
                   max_points: int = DEFAULT_POINT_CAP) -> DeloneCertificate:
    """Decide whether ``points`` is exactly the lattice point set of an empty sphere.

    Returns a ``NotDelone`` certificate with a witness when another lattice
    point lies inside or on the circumsphere; strictly interior witnesses
    are preferred.
    """
    pts = _as_points(points)
    sphere = circumsphere(pts, q)
    c, r2 = sphere.center, sphere.radius_sq
    inside = enumerate_in_ellipsoid(q, c, r2, max_points=max_points)
    on, strict = [], []
    for v in inside:
        (on if q([a - b for a, b in zip(v, c)]) == r2 else strict).append(v)
    wanted = set(pts)
    if not strict and set(on) == wanted:
        return DeloneCertificate(sphere, tuple(on), Verdict.DELONE)
    witness = strict[0] if strict else next(v for v in on if v not in wanted)
    log.debug("not Delone: witness %s", witness)
    return DeloneCertificate(sphere, tuple(on), Verdict.NOT_DELONE, witness)
