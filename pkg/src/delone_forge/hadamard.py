"""Sylvester Hadamard matrices, the binary simplex code, and Construction A.

The pipeline is: Sylvester matrix of order 2^n -> columns normalized to a
first row of +1 -> first row dropped and (+1, -1) mapped to (0, 1) -> the
lattice of integer vectors whose parity lies in that code.  The columns of
the 0/1 matrix then form a Delone simplex of that lattice.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .delone import DeloneCertificate, certify_delone
from .errors import CertificationFailed, Degenerate, NotHadamard, NotLinearCode, NotNormalized
from .lattice import (EmbeddedLattice, LatticeSimplex, QuadraticForm, ambient_to_lattice_coords,
                      gram_of_basis, relative_volume)

log = logging.getLogger(__name__)

# d = 2^n - 1 <= 15; n = 5 only on request
DEFAULT_CERTIFY_MAX_N = 4


def sylvester(n: int) -> np.ndarray:
    """Order-2^n Hadamard matrix from H_1 = (1), H_2k = [[H, H], [-H, H]]."""
    if n < 0:
        raise ValueError("n must be non-negative")
    h = np.ones((1, 1), dtype=np.int64)
    for _ in range(n):
        h = np.block([[h, h], [-h, h]])
    return h


def _as_sign_matrix(h) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHadamard(f"expected a square matrix, got shape {h.shape}")
    if not np.isin(h, (1, -1)).all():
        raise NotHadamard("entries must be +1 or -1")
    return h.astype(np.int64)


def is_hadamard(h) -> bool:
    """``H^T H == order * I`` in exact int64 arithmetic (|entries of H^T H| <= order)."""
    h = _as_sign_matrix(h)
    order = h.shape[0]
    return bool((h.T @ h == order * np.eye(order, dtype=np.int64)).all())


def normalize_columns(h) -> np.ndarray:
    h = _as_sign_matrix(h)
    if not is_hadamard(h):
        raise NotHadamard("input is not a Hadamard matrix")
    return h * h[0]


def reduce_to_binary(h) -> np.ndarray:
    """Drop the all-ones first row and map +1 -> 0, -1 -> 1."""
    h = _as_sign_matrix(h)
    if not (h[0] == 1).all():
        raise NotNormalized("first row must be all +1")
    return ((1 - h[1:]) // 2).astype(np.int64)


def is_linear_code(hb) -> bool:
    """Whether the columns of a 0/1 matrix are closed under addition mod 2."""
    cols = {tuple(int(x) for x in c) for c in np.asarray(hb).T}
    if tuple([0] * np.asarray(hb).shape[0]) not in cols:
        return False
    return all(tuple((a + b) % 2 for a, b in zip(u, v)) in cols for u in cols for v in cols)


def construction_a(hb) -> EmbeddedLattice:
    """{v in Z^d : v mod 2 is a column of hb}, as an HNF basis."""
    hb = np.asarray(hb)
    if not is_linear_code(hb):
        raise NotLinearCode("columns are not closed under addition mod 2")
    d = hb.shape[0]
    gens = [tuple(int(x) for x in c) for c in hb.T if c.any()]
    gens += [tuple(2 * int(i == j) for j in range(d)) for i in range(d)]
    return EmbeddedLattice(gens)


@dataclass(frozen=True)
class DeloneInstance:
    """A lattice (as Z^d with a form) together with one of its simplices."""

    lattice: EmbeddedLattice
    form: QuadraticForm
    simplex: LatticeSimplex
    expected_relvol: int
    certificate: DeloneCertificate | None = None

    @property
    def dim(self) -> int:
        return self.form.dim


def hadamard_relvol_formula(n: int) -> int:
    """(d+1)^((d+3)/2) / 4^d for d = 2^n - 1, exactly."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = 2**n - 1
    num = (d + 1) ** ((d + 3) // 2)  # d is odd
    den = 4**d
    if num % den:
        raise ValueError(f"formula is not integral at n={n}")
    return num // den


def hadamard_simplex_instance(n: int, certify: bool | None = None) -> DeloneInstance:
    """The Hadamard simplex of dimension 2^n - 1 in its Construction-A lattice.

    ``certify=None`` certifies automatically when ``n <= 4``.
    """
    if n < 1:
        raise Degenerate("n must be at least 1")
    hb = reduce_to_binary(normalize_columns(sylvester(n)))
    lattice = construction_a(hb)
    form = gram_of_basis(lattice.basis)
    simplex = LatticeSimplex([ambient_to_lattice_coords(lattice, tuple(int(x) for x in col))
                              for col in hb.T])
    expected = hadamard_relvol_formula(n)
    got = relative_volume(simplex)
    if got != expected:  # pragma: no cover
        raise AssertionError(f"relative volume {got} != formula value {expected}")
    if certify is None:
        certify = n <= DEFAULT_CERTIFY_MAX_N
    cert = None
    if certify:
        cert = certify_delone(simplex.vertices, form)
        if not cert.is_delone:  # pragma: no cover
            raise CertificationFailed(f"Hadamard simplex n={n} is not Delone", cert)
        log.info("certified Hadamard simplex d=%d", simplex.dim)
    return DeloneInstance(lattice, form, simplex, expected, cert)


def unit_interval_instance() -> DeloneInstance:
    """Z with the unit form and the simplex {0, 1}."""
    return DeloneInstance(EmbeddedLattice.standard(1), QuadraticForm.identity(1),
                          LatticeSimplex([(0,), (1,)]), 1)


def ambient_relvol(n: int) -> int:
    """Relative volume of the 0/1 Hadamard simplex in Z^d itself."""
    hb = reduce_to_binary(normalize_columns(sylvester(n)))
    return relative_volume([tuple(int(x) for x in c) for c in hb.T])


__all__ = [
    "DeloneInstance", "construction_a", "hadamard_relvol_formula", "hadamard_simplex_instance",
    "is_hadamard", "is_linear_code", "normalize_columns", "reduce_to_binary", "sylvester",
    "unit_interval_instance", "ambient_relvol",
]
