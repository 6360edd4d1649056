"""Stand-alone re-checker for Delone certificates.

Reads only a certificate document and a form document (the JSON shapes
written by the CLI) and re-derives every claim.  It deliberately shares no
code with the rest of the package: emptiness is re-established with a
forward-order search whose per-coordinate ranges come from Schur
complements and the quadratic formula, not from an LDL factorization.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt


class CertificateInvalid(Exception):
    pass


def _q(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise CertificateInvalid(f"bad number {x!r}")
    return Fraction(x)


def _z(x) -> int:
    v = _q(x)
    if v.denominator != 1:
        raise CertificateInvalid(f"expected an integer, got {x!r}")
    return v.numerator


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        d = v.denominator
        a, b = out, d
        while b:
            a, b = b, a % b
        out = out // a * d
    return out


def _value(g, y) -> Fraction:
    n = len(y)
    return sum(g[i][j] * y[i] * y[j] for i in range(n) for j in range(n))


def _schur_minimizers(g):
    """For each k, the form on the first k coordinates obtained by minimizing
    over the remaining ones: G_AA - G_AB G_BB^-1 G_BA."""
    d = len(g)
    out = []
    for k in range(d + 1):
        a = list(range(k))
        b = list(range(k, d))
        if not b:
            out.append([row[:] for row in g])
            continue
        gbb = [[g[i][j] for j in b] for i in b]
        gba = [[g[i][j] for j in a] for i in b]
        x = _gauss_solve(gbb, gba)  # G_BB^-1 G_BA
        out.append([[g[a[r]][a[s]] - sum(g[a[r]][b[t]] * x[t][s] for t in range(len(b)))
                     for s in range(k)] for r in range(k)])
    return out


def _gauss_solve(m, rhs):
    n = len(m)
    cols = len(rhs[0]) if rhs else 0
    aug = [list(m[i]) + list(rhs[i]) for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[c])]
    return [row[n:n + cols] for row in aug]


def _positive_definite(g) -> bool:
    # Sylvester's criterion: every leading principal minor is positive
    d = len(g)
    for k in range(1, d + 1):
        a = [row[:k] for row in g[:k]]
        det = Fraction(1)
        for c in range(k):
            p = next((i for i in range(c, k) if a[i][c] != 0), None)
            if p is None:
                return False
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for i in range(c + 1, k):
                f = a[i][c] / a[c][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[c])]
        if det <= 0:
            return False
    return True


def points_in_ball(g, center, r2, limit=10**6):
    """Integer points x with (x-c)^T g (x-c) <= r2, found coordinate by coordinate."""
    d = len(g)
    schur = _schur_minimizers(g)
    cd = _lcm_den(center)
    cn = [int(c * cd) for c in center]
    levels = []
    for k in range(d):
        s = schur[k + 1]
        den = _lcm_den([v for row in s for v in row]) * r2.denominator
        si = [[int(v * den) for v in row] for row in s]
        # scaled ball bound: Y^T si Y <= r2 * den * cd^2
        levels.append((si, r2.numerator * (den // r2.denominator) * cd * cd))
    found = []
    ys = []
    xs = []

    def go(k):
        si, bound = levels[k]
        row = si[k]
        alpha = row[k]
        beta = sum(row[j] * ys[j] for j in range(k))
        gamma = sum(si[i][j] * ys[i] * ys[j] for i in range(k) for j in range(k))
        # alpha T^2 + 2 beta T + gamma <= bound, with T = cd*x - cn[k]
        disc = beta * beta - alpha * (gamma - bound)
        if disc < 0:
            return
        root = isqrt(disc) + 1
        t_lo, t_hi = -beta - root, -beta + root  # times 1/alpha
        x_lo = -((-(t_lo) - cn[k] * alpha) // (alpha * cd))
        x_hi = (t_hi + cn[k] * alpha) // (alpha * cd)
        for x in range(x_lo, x_hi + 1):
            t = cd * x - cn[k]
            if alpha * t * t + 2 * beta * t + gamma > bound:
                continue
            xs.append(x)
            ys.append(t)
            if k == d - 1:
                found.append(tuple(xs))
                if len(found) > limit:
                    raise CertificateInvalid("too many points to re-check")
            else:
                go(k + 1)
            xs.pop()
            ys.pop()

    go(0)
    return sorted(found)


def recheck(certificate: dict, form: dict, points=None) -> str:
    """Re-validate a certificate; returns its verdict or raises CertificateInvalid.

    ``points`` (the queried vertex set) is optional; when given it must match
    the on-sphere set for a Delone verdict and exclude the witness otherwise.
    """
    try:
        g = [[_q(x) for x in row] for row in form["gram"]]
    except (KeyError, TypeError) as exc:
        raise CertificateInvalid(f"malformed form: {exc}") from None
    d = len(g)
    if any(len(row) != d for row in g) or any(g[i][j] != g[j][i] for i in range(d) for j in range(d)):
        raise CertificateInvalid("gram matrix is not square and symmetric")
    if not _positive_definite(g):
        raise CertificateInvalid("gram matrix is not positive definite")

    verdict = certificate.get("verdict")
    if verdict not in ("delone", "not_delone", "degenerate"):
        raise CertificateInvalid(f"unknown verdict {verdict!r}")
    if verdict == "degenerate":
        return verdict

    center = [_q(x) for x in certificate["center"]]
    r2 = _q(certificate["radius_sq"])
    if len(center) != d or r2 <= 0:
        raise CertificateInvalid("bad sphere")
    on = [tuple(_z(x) for x in p) for p in certificate["on_sphere"]]
    if on != sorted(set(on)):
        raise CertificateInvalid("on_sphere list is not sorted and duplicate-free")

    def dist(p):
        return _value(g, [Fraction(a) - b for a, b in zip(p, center)])

    for p in on:
        if len(p) != d or dist(p) != r2:
            raise CertificateInvalid(f"{p} is not on the sphere")
    wanted = None if points is None else sorted(tuple(int(x) for x in p) for p in points)

    witness = certificate.get("witness")
    if verdict == "delone":
        if witness is not None:
            raise CertificateInvalid("Delone certificate carries a witness")
        if wanted is not None and on != wanted:
            raise CertificateInvalid("on-sphere set differs from the queried points")
        if points_in_ball(g, center, r2) != on:
            raise CertificateInvalid("sphere is not empty")
        return verdict

    if witness is None:
        raise CertificateInvalid("not_delone certificate lacks a witness")
    w = tuple(_z(x) for x in witness)
    dw = dist(w)
    if dw > r2:
        raise CertificateInvalid("witness lies outside the sphere")
    if dw == r2 and w not in on:
        raise CertificateInvalid("on-sphere witness missing from on_sphere")
    if wanted is not None:
        if w in wanted:
            raise CertificateInvalid("witness is one of the queried points")
        for p in wanted:
            if dist(p) != r2:
                raise CertificateInvalid(f"queried point {p} is not on the sphere")
    return verdict


def recheck_files(certificate_path, form_path) -> str:
    with open(certificate_path) as fh:
        cert = json.load(fh)
    with open(form_path) as fh:
        form = json.load(fh)
    return recheck(cert, form)
