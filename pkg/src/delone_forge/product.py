"""Products of Delone simplices and their staircase refinement.

The product of two Delone simplices is a Delone polytope of the direct-sum
lattice.  Coupling the two blocks of the form by ``-eps * a b^T``, where
``a . (v_i - v_0) = i`` and ``b . (w_j - w_0) = j``, lifts the product
vertex ``(v_i, w_j)`` by ``-2 eps i j`` plus an affine function.  That
lifting induces the staircase triangulation whose cells are the monotone
lattice paths from (0, 0) to (d1, d2).  Each cell is then certified Delone
directly instead of relying on the perturbation argument.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import exact
from .delone import DeloneCertificate, certify_delone
from .errors import CertificationFailed, EpsilonExhausted, NotPositiveDefinite
from .hadamard import DeloneInstance
from .lattice import (EmbeddedLattice, LatticeSimplex, QuadraticForm, block_diagonal, direct_sum,
                      relative_volume)

log = logging.getLogger(__name__)

THREADS_ENV = "DELONE_FORGE_THREADS"
EXHAUSTIVE_LIMIT = 64
DEFAULT_SAMPLE_SIZE = 64
MAX_HALVINGS = 60


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


def staircase_triangulation(d1: int, d2: int) -> list[str]:
    """All monotone paths from (0, 0) to (d1, d2) as R/U words, sorted."""
    if d1 < 1 or d2 < 1:
        raise ValueError("dimensions must be positive")
    n = d1 + d2
    paths = []
    for ups in combinations(range(n), d2):
        word = ["R"] * n
        for k in ups:
            word[k] = "U"
        paths.append("".join(word))
    paths.sort()
    return paths


def path_grid_points(path: str) -> list[tuple[int, int]]:
    i = j = 0
    out = [(0, 0)]
    for step in path:
        if step == "R":
            i += 1
        elif step == "U":
            j += 1
        else:
            raise ValueError(f"bad path step {step!r}")
        out.append((i, j))
    return out


def product_points(verts1, verts2) -> list[tuple[int, ...]]:
    return [tuple(v) + tuple(w) for v in verts1 for w in verts2]


def staircase_simplex(path: str, verts1, verts2) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(verts1[i]) + tuple(verts2[j]) for i, j in path_grid_points(path))


def _index_functional(vertices) -> tuple[Fraction, ...]:
    """The linear functional taking ``v_i - v_0`` to ``i``."""
    v0 = vertices[0]
    edges = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    return exact.solve_exact(edges, list(range(1, len(vertices))))


@dataclass(frozen=True)
class PerturbedForm:
    base: QuadraticForm
    epsilon: Fraction
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    form: QuadraticForm = field(repr=False)


def coupled_gram(base_gram, epsilon, a, b) -> tuple[tuple[Fraction, ...], ...]:
    d1 = len(a)
    g = [list(r) for r in base_gram]
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            g[i][d1 + j] = g[d1 + j][i] = -epsilon * ai * bj
    return tuple(tuple(r) for r in g)


def perturbation_form(q1: QuadraticForm, simplex1: LatticeSimplex,
                      q2: QuadraticForm, simplex2: LatticeSimplex, epsilon) -> PerturbedForm:
    """Block form ``[[Q1, -eps a b^T], [-eps b a^T, Q2]]``.

    Raises NotPositiveDefinite when ``epsilon`` is too large.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a = _index_functional(simplex1.vertices)
    b = _index_functional(simplex2.vertices)
    base = QuadraticForm(block_diagonal(q1.gram, q2.gram))
    gram = coupled_gram(base.gram, epsilon, a, b)
    if not exact.is_positive_definite(gram):
        raise NotPositiveDefinite(f"coupled form is not positive definite at epsilon={epsilon}")
    return PerturbedForm(base, epsilon, a, b, QuadraticForm(gram))


def sample_indices(count: int, size: int = DEFAULT_SAMPLE_SIZE) -> list[int]:
    """Deterministic evenly strided sample that always has the first and last index."""
    if count <= size:
        return list(range(count))
    return sorted({round(k * (count - 1) / (size - 1)) for k in range(size)})


def _certify_job(args):
    points, form = args
    return certify_delone(points, form)


def certify_all(simplices, form: QuadraticForm, workers: int = 1,
                stop_on_failure: bool = True) -> list[DeloneCertificate]:
    """Certify each vertex list; results keep input order for any worker count."""
    jobs = [(s, form) for s in simplices]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_certify_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    out = []
    for job in jobs:
        cert = _certify_job(job)
        out.append(cert)
        if stop_on_failure and not cert.is_delone:
            break
    return out


@dataclass
class ProductResult:
    lattice: EmbeddedLattice
    base_form: QuadraticForm
    polytope_certificate: DeloneCertificate
    perturbed: PerturbedForm
    paths: list[str]
    relvols: list[int]
    relvol_each: int
    certified: dict[int, DeloneCertificate]
    attempts: int

    @property
    def count(self) -> int:
        return len(self.paths)

    @property
    def epsilon(self) -> Fraction:
        return self.perturbed.epsilon


def theorem1_product(left: DeloneInstance, right: DeloneInstance, *, exhaustive: bool = False,
                     epsilon=None, sample_size: int = DEFAULT_SAMPLE_SIZE,
                     workers: int | None = None, max_halvings: int = MAX_HALVINGS) -> ProductResult:
    """Staircase simplices of the product of two Delone simplices, certified
    Delone under a coupled form, each of relative volume ``rv1 * rv2``.

    ``epsilon`` fixes the coupling strength; otherwise 1/2, 1/4, ... is tried
    until the coupled form is positive definite and every checked simplex is
    Delone.  Up to 64 simplices (or with ``exhaustive``) all are checked;
    beyond that a strided sample including both extreme paths is checked.
    """
    if workers is None:
        workers = default_workers()
    s1, s2 = left.simplex, right.simplex
    rv1, rv2 = relative_volume(s1), relative_volume(s2)
    lattice, base = direct_sum(left.lattice, left.form, right.lattice, right.form)

    poly_cert = certify_delone(product_points(s1.vertices, s2.vertices), base)
    if not poly_cert.is_delone:
        raise CertificationFailed("product polytope is not Delone under the block form", poly_cert)

    paths = staircase_triangulation(s1.dim, s2.dim)
    simplices = [staircase_simplex(p, s1.vertices, s2.vertices) for p in paths]
    relvols = [relative_volume(s) for s in simplices]
    if any(r != rv1 * rv2 for r in relvols):  # pragma: no cover
        raise AssertionError("staircase simplices do not all have relative volume rv1*rv2")

    if exhaustive or len(paths) <= EXHAUSTIVE_LIMIT:
        chosen = list(range(len(paths)))
    else:
        chosen = sample_indices(len(paths), sample_size)

    schedule = [Fraction(epsilon)] if epsilon is not None else \
        [Fraction(1, 2**k) for k in range(1, max_halvings + 1)]
    last_failure = None
    for attempt, eps in enumerate(schedule, start=1):
        try:
            pf = perturbation_form(left.form, s1, right.form, s2, eps)
        except NotPositiveDefinite:
            log.debug("epsilon %s: coupled form not positive definite", eps)
            continue
        certs = certify_all([simplices[i] for i in chosen], pf.form, workers=workers)
        bad = next((c for c in certs if not c.is_delone), None)
        if bad is None:
            log.info("epsilon %s certifies %d of %d staircase simplices", eps, len(chosen), len(paths))
            return ProductResult(lattice, base, poly_cert, pf, paths, relvols, rv1 * rv2,
                                 dict(zip(chosen, certs)), attempt)
        last_failure = bad
        log.debug("epsilon %s: witness %s", eps, bad.witness)
    if epsilon is not None:
        if last_failure is None:
            raise NotPositiveDefinite(f"coupled form is not positive definite at epsilon={epsilon}")
        raise CertificationFailed(f"staircase simplex not Delone at epsilon={epsilon}", last_failure)
    raise EpsilonExhausted(f"no epsilon in 1/2 .. 1/2^{max_halvings} certifies the staircase")


def expected_count(d1: int, d2: int) -> int:
    return comb(d1 + d2, d1)
