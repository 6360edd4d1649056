"""Lattices, quadratic forms and lattice simplices.

Every (lattice, form) pair is normalized to "Z^d with a Gram matrix": an
embedded lattice only matters when it is built, after which points are
written in coordinates of its HNF basis and distances come from the Gram
matrix of that basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import Degenerate, NotInLattice, NotPositiveDefinite, NotSymmetric, RankDeficient


@dataclass(frozen=True)
class QuadraticForm:
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        gram = exact.as_fraction_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        if not exact.is_symmetric(gram):
            raise NotSymmetric("gram matrix is not symmetric")
        if not exact.is_positive_definite(gram):
            raise NotPositiveDefinite("gram matrix is not positive definite")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, v: Sequence) -> Fraction:
        return exact.quad(self.gram, v)

    @classmethod
    def identity(cls, d: int) -> "QuadraticForm":
        return cls(exact.identity(d))


@dataclass(frozen=True)
class EmbeddedLattice:
    """Full-rank sublattice of Z^m; ``basis`` rows are kept in canonical HNF."""

    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows, cols = exact.shape(self.basis)
        if rows < cols:
            raise RankDeficient(f"{rows} generators cannot span Z^{cols}")
        object.__setattr__(self, "basis", exact.hnf_rows(self.basis))

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def determinant(self) -> int:
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    @classmethod
    def standard(cls, m: int) -> "EmbeddedLattice":
        return cls(exact.identity(m))


@dataclass(frozen=True)
class LatticeSimplex:
    """Vertices in lattice coordinates; the first one is the apex v_0."""

    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        d = len(verts) - 1
        if d < 1 or any(len(v) != d for v in verts):
            raise Degenerate(f"a simplex in Z^d needs d+1 points of length d, got {len(verts)}")
        if edge_determinant(verts) == 0:
            raise Degenerate("simplex vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def edge_determinant(vertices: Sequence[Sequence[int]]) -> int:
    v0 = vertices[0]
    return exact.det_exact([[a - b for a, b in zip(v, v0)] for v in vertices[1:]])


def gram_of_basis(basis, ambient_form: QuadraticForm | None = None) -> QuadraticForm:
    """``B G B^T``: the form that makes Z^d isometric to the row span of B."""
    rows, cols = exact.shape(basis)
    if exact.rank(basis) < rows:
        raise RankDeficient("basis rows are linearly dependent")
    g = ambient_form.gram if ambient_form is not None else exact.identity(cols)
    return QuadraticForm(exact.matmul(exact.matmul(basis, g), exact.transpose(basis)))


def ambient_to_lattice_coords(lattice, point: Sequence[int]) -> tuple[int, ...]:
    """Integer x with ``x . basis == point``; raises NotInLattice otherwise.

    ``lattice`` is an EmbeddedLattice or a square basis matrix used as given.
    """
    basis = lattice.basis if isinstance(lattice, EmbeddedLattice) else lattice
    if len(point) != len(basis[0]):
        raise ValueError("point has the wrong length")
    x = exact.solve_exact(exact.transpose(basis), point)
    if any(c.denominator != 1 for c in x):
        raise NotInLattice(f"{tuple(point)} is not a lattice point")
    return tuple(c.numerator for c in x)


def relative_volume(simplex: LatticeSimplex | Sequence[Sequence[int]]) -> int:
    """Normalized volume, i.e. ``|det(v_1 - v_0, ..., v_d - v_0)|``."""
    verts = simplex.vertices if isinstance(simplex, LatticeSimplex) else simplex
    vol = abs(edge_determinant(verts))
    if vol == 0:
        raise Degenerate("simplex is degenerate")
    return vol


def block_diagonal(a, b) -> tuple[tuple, ...]:
    na, nb = len(a), len(b)
    ca = len(a[0]) if na else 0
    cb = len(b[0]) if nb else 0
    top = [tuple(r) + (0,) * cb for r in a]
    bottom = [(0,) * ca + tuple(r) for r in b]
    return tuple(top + bottom)


def direct_sum(l1: EmbeddedLattice, q1: QuadraticForm,
               l2: EmbeddedLattice, q2: QuadraticForm) -> tuple[EmbeddedLattice, QuadraticForm]:
    if q1.dim != l1.rank or q2.dim != l2.rank:
        raise ValueError("form dimension does not match lattice rank")
    return (EmbeddedLattice(block_diagonal(l1.basis, l2.basis)),
            QuadraticForm(block_diagonal(q1.gram, q2.gram)))
