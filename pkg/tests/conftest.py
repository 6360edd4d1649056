import itertools
import math
from fractions import Fraction

import pytest

ACCEPTANCE_RESULTS: list[str] = []


def cofactor_det(m):
    """Laplace expansion along the first row; an independent determinant oracle."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n) if m[0][j] != 0)


def brute_force_ball(gram, center, r2, box):
    """Every integer point of ``box`` (per-coordinate ranges) inside the ellipsoid.

    Plain scan over the box; everything is scaled to integers first.
    """
    d = len(gram)
    r2 = Fraction(r2)
    cden = 1
    for c in center:
        cden = cden * Fraction(c).denominator // math.gcd(cden, Fraction(c).denominator)
    gden = 1
    for row in gram:
        for x in row:
            gden = gden * Fraction(x).denominator // math.gcd(gden, Fraction(x).denominator)
    g = [[int(Fraction(x) * gden) for x in row] for row in gram]
    cn = [int(Fraction(c) * cden) for c in center]
    # sum g_ij Y_i Y_j <= r2 * gden * cden^2, with Y = cden*v - cn
    lhs_scale = r2.denominator
    rhs = r2.numerator * gden * cden * cden
    out = []
    for v in itertools.product(*box):
        y = [cden * a - c for a, c in zip(v, cn)]
        val = sum(g[i][j] * y[i] * y[j] for i in range(d) for j in range(d))
        if val * lhs_scale <= rhs:
            out.append(tuple(v))
    return sorted(out)


@pytest.fixture
def brute_ball():
    return brute_force_ball


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
