"""Tables of bounds on the maximum relative volume mv(d) and related counts.

Integer-valued bounds are exact.  Irrational quantities (log ratios, growth
constants) are evaluated in interval arithmetic and only printed once the
enclosing interval fixes every printed digit.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb, factorial, isqrt
from typing import Callable

from mpmath import iv
from mpmath.libmp import round_floor, to_int

RATIO_DIGITS = 6
DEFAULT_PREC = 53
MAX_PREC = 8192
CUBE_UPPER_CONSTANT = "0.816"
LEECH_DIM = 24
LEECH_RELVOL = 20480

NOTES = (
    "t_lower is ceil(d! * 6^(d/2) / (2 * (d+1)^((d+1)/2))); the simplified form "
    "sqrt(6/(d+1)) is only asymptotic and is not used.",
    f"asymptotic upper constant for (t(d)/d!)^(1/d): {CUBE_UPPER_CONSTANT} (metadata only).",
    "ratio columns are log(bound) / (d log d), reported without asserting a limit.",
)


def _hadamard_seed(d: int) -> int | None:
    n = (d + 1).bit_length() - 1
    if n < 1 or d + 1 != 2**n:
        return None
    num = (d + 1) ** ((d + 3) // 2)
    den = 4**d
    if num % den:  # pragma: no cover
        raise ArithmeticError(f"Hadamard value not integral at d={d}")
    return num // den


# Precedence order matters: it breaks ties between seeds of equal value.
SEEDS: tuple[tuple[str, Callable[[int], int | None]], ...] = (
    ("seed-voronoi", lambda d: 1 if 1 <= d <= 4 else None),
    ("seed-mv5", lambda d: 2 if d == 5 else None),
    ("seed-mv6", lambda d: 3 if d == 6 else None),
    ("seed-leech", lambda d: LEECH_RELVOL if d == LEECH_DIM else None),
    ("seed-hadamard", _hadamard_seed),
    ("seed-erdahl-rybnikov", lambda d: d - 3 if d >= 4 else None),
    ("seed-ryshkov", lambda d: (d - 1) // 2 if d >= 3 and d % 2 else None),
)


@dataclass(frozen=True)
class LowerBound:
    d: int
    value: int
    source: str


def seed_value(d: int) -> tuple[int, str] | None:
    best = None
    for name, fn in SEEDS:
        v = fn(d)
        if v is not None and v >= 1 and (best is None or v > best[0]):
            best = (v, name)
    return best


def mv_lower_table(dmax: int) -> list[LowerBound]:
    """lb(d) = max(seeds at d, lb(d-1), max_{a+b=d} lb(a) lb(b)).

    Ties go to a seed, then monotonicity, then the product with smallest a.
    """
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    lb = {0: 1}
    rows = []
    for d in range(1, dmax + 1):
        cands = []
        s = seed_value(d)
        if s is not None:
            cands.append(s)
        if d > 1:
            cands.append((lb[d - 1], "monotone"))
        for a in range(1, d // 2 + 1):
            cands.append((lb[a] * lb[d - a], f"product({a},{d - a})"))
        value = max(v for v, _ in cands)
        source = next(name for v, name in cands if v == value)
        lb[d] = value
        rows.append(LowerBound(d, value, source))
    return rows


def mv_upper(d: int) -> int:
    """floor(2^d d! / binom(2d, d))."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return (2**d * factorial(d)) // comb(2 * d, d)


def dt_lower(d: int) -> int:
    """ceil(binom(2d, d) / 2^d)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return -(-comb(2 * d, d) // 2**d)


def dt_combine(seeds: dict[int, int], dmax: int) -> dict[int, int]:
    """Upper bounds on dt(d) from known values and the product recurrence
    dt(a+b) <= binom(a+b, a) dt(a) dt(b)."""
    if not seeds:
        raise ValueError("seed map is empty")
    if 1 not in seeds:
        raise ValueError("seeds must include dimension 1")
    if any(v < 1 for v in seeds.values()):
        raise ValueError("seed values must be positive integers")
    ub: dict[int, int] = {}
    for d in range(1, dmax + 1):
        cands = [seeds[d]] if d in seeds else []
        cands += [comb(d, a) * ub[a] * ub[d - a] for a in range(1, d // 2 + 1)]
        ub[d] = min(cands)
    return ub


def cube_lower(d: int) -> int:
    """ceil(d! 6^(d/2) / (2 (d+1)^((d+1)/2))), decided exactly via squares."""
    if d < 1:
        raise ValueError("d must be at least 1")
    num = factorial(d) ** 2 * 6**d
    den = 4 * (d + 1) ** (d + 1)
    k = isqrt(num // den)
    while k * k * den < num:
        k += 1
    return k


def cube_bounds(dmax: int) -> dict:
    return {"t_lower": {d: cube_lower(d) for d in range(1, dmax + 1)},
            "asymptotic_upper_constant": CUBE_UPPER_CONSTANT}


def certified_decimal(fn: Callable, digits: int, prec: int = DEFAULT_PREC) -> str:
    """Round ``fn(iv)`` (an interval) half-up to ``digits`` places.

    Precision doubles from ``prec`` bits until both interval endpoints round
    to the same decimal, so the printed digits do not depend on ``prec``.
    """
    saved = iv.prec
    try:
        p = prec
        while p <= MAX_PREC:
            iv.prec = p
            x = fn(iv) * 10**digits + iv.mpf(1) / 2
            lo, hi = (to_int(e, round_floor) for e in x._mpi_)
            if lo == hi:
                sign = "-" if lo < 0 else ""
                q, r = divmod(abs(lo), 10**digits)
                return f"{sign}{q}.{r:0{digits}d}" if digits else f"{sign}{q}"
            p *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("could not certify rounding")  # pragma: no cover


def log_ratio(value: int, d: int, digits: int = RATIO_DIGITS, prec: int = DEFAULT_PREC) -> str | None:
    """log(value) / (d log d), or None for d = 1."""
    if d < 2:
        return None
    return certified_decimal(lambda ctx: ctx.log(ctx.mpf(value)) / (d * ctx.log(ctx.mpf(d))),
                             digits, prec)


def growth_constants(digits: int = 4, prec: int = DEFAULT_PREC) -> dict[str, str]:
    """Per-dimension growth rates of 2^floor(d/5) and 20480^floor(d/24)."""
    return {
        "mv5_product_rate": certified_decimal(lambda c: c.mpf(2) ** (c.mpf(1) / 5), digits, prec),
        "leech_product_rate": certified_decimal(
            lambda c: c.mpf(LEECH_RELVOL) ** (c.mpf(1) / LEECH_DIM), digits, prec),
    }


@dataclass(frozen=True)
class BoundTableRow:
    d: int
    mv_lower: int
    mv_lower_source: str
    mv_upper: int
    lower_ratio: str | None
    upper_ratio: str | None
    dt_lower: int
    t_lower: int


COLUMNS = ("d", "mv_lower", "mv_lower_source", "mv_upper", "lower_ratio", "upper_ratio",
           "dt_lower", "t_lower")


def ratio_bracket(dmax: int, prec: int = DEFAULT_PREC) -> list[tuple[int, str | None, str | None]]:
    lows = mv_lower_table(dmax)
    return [(r.d, log_ratio(r.value, r.d, prec=prec), log_ratio(mv_upper(r.d), r.d, prec=prec))
            for r in lows]


def bound_table(dmax: int, prec: int = DEFAULT_PREC) -> list[BoundTableRow]:
    rows = []
    for low in mv_lower_table(dmax):
        d = low.d
        up = mv_upper(d)
        rows.append(BoundTableRow(d, low.value, low.source, up,
                                  log_ratio(low.value, d, prec=prec), log_ratio(up, d, prec=prec),
                                  dt_lower(d), cube_lower(d)))
    return rows


def table_to_csv(rows: list[BoundTableRow]) -> str:
    lines = [",".join(COLUMNS)]
    for r in rows:
        vals = asdict(r)
        lines.append(",".join("" if vals[c] is None else str(vals[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def table_to_doc(rows: list[BoundTableRow], prec: int = DEFAULT_PREC) -> dict:
    return {
        "rows": [asdict(r) for r in rows],
        "constants": {**growth_constants(prec=prec),
                      "cube_asymptotic_upper": CUBE_UPPER_CONSTANT},
        "notes": list(NOTES),
    }
