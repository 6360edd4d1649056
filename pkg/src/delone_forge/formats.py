"""JSON documents exchanged by the CLI.

Matrix entries, coordinates and rationals are strings in the ``"p/q"``
encoding (``"p"`` for integers); plain counts (dimensions, relative volumes)
are JSON integers.  Output is canonical: sorted keys, fixed indentation.
"""
from __future__ import annotations

import json
from pathlib import Path

from .delone import DeloneCertificate, Sphere, Verdict
from .errors import DeloneForgeError, NotPositiveDefinite, NotSymmetric, RankDeficient
from .exact import format_rational, parse_integer, parse_rational
from .hadamard import DeloneInstance
from .lattice import EmbeddedLattice, LatticeSimplex, QuadraticForm


class InvalidInput(DeloneForgeError):
    pass


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _int_rows(rows):
    return [[format_rational(x) for x in r] for r in rows]


def _parse_int_rows(rows, what):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InvalidInput(f"{what} must be a list of lists")
    try:
        return [tuple(parse_integer(x) for x in r) for r in rows]
    except ValueError as exc:
        raise InvalidInput(f"{what}: {exc}") from None


def form_to_doc(q: QuadraticForm) -> dict:
    return {"dim": q.dim, "gram": _int_rows(q.gram)}


def doc_to_form(doc) -> QuadraticForm:
    try:
        gram = [[parse_rational(x) for x in row] for row in doc["gram"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"form document needs a 'gram' matrix ({exc})") from None
    except ValueError as exc:
        raise InvalidInput(f"gram: {exc}") from None
    d = len(gram)
    if d == 0 or any(len(r) != d for r in gram):
        raise InvalidInput("gram matrix must be square and non-empty")
    if "dim" in doc and doc["dim"] != d:
        raise InvalidInput(f"dim {doc['dim']} does not match gram size {d}")
    try:
        return QuadraticForm(gram)
    except NotSymmetric:
        raise InvalidInput("gram matrix is not symmetric") from None
    except NotPositiveDefinite:
        raise InvalidInput("gram matrix is not positive definite") from None


def lattice_to_doc(lat: EmbeddedLattice) -> dict:
    return {"ambient_dim": lat.ambient_dim, "basis": _int_rows(lat.basis)}


def doc_to_lattice(doc) -> EmbeddedLattice:
    try:
        basis = _parse_int_rows(doc["basis"], "basis")
    except (KeyError, TypeError):
        raise InvalidInput("lattice document needs a 'basis' matrix") from None
    if not basis or any(len(r) != len(basis[0]) for r in basis):
        raise InvalidInput("basis rows must be non-empty and of equal length")
    if "ambient_dim" in doc and doc["ambient_dim"] != len(basis[0]):
        raise InvalidInput("ambient_dim does not match basis width")
    try:
        return EmbeddedLattice(basis)
    except RankDeficient:
        raise InvalidInput("basis is rank deficient") from None


def simplex_to_doc(s: LatticeSimplex) -> dict:
    return {"vertices": _int_rows(s.vertices)}


def doc_to_simplex(doc) -> LatticeSimplex:
    try:
        verts = _parse_int_rows(doc["vertices"], "vertices")
    except (KeyError, TypeError):
        raise InvalidInput("simplex document needs 'vertices'") from None
    return LatticeSimplex(verts)


def points_to_doc(points) -> dict:
    return {"points": _int_rows(points)}


def doc_to_points(doc) -> list[tuple[int, ...]]:
    """Accepts ``{"points": ...}`` or a simplex document ``{"vertices": ...}``."""
    key = "points" if "points" in doc else "vertices"
    try:
        pts = _parse_int_rows(doc[key], key)
    except (KeyError, TypeError):
        raise InvalidInput("point document needs 'points' or 'vertices'") from None
    if not pts or any(len(p) != len(pts[0]) for p in pts):
        raise InvalidInput("points must be non-empty and of equal length")
    return pts


def certificate_to_doc(cert: DeloneCertificate) -> dict:
    sphere = cert.sphere
    return {
        "center": None if sphere is None else [format_rational(c) for c in sphere.center],
        "radius_sq": None if sphere is None else format_rational(sphere.radius_sq),
        "on_sphere": _int_rows(cert.on_sphere),
        "verdict": cert.verdict.value,
        "witness": None if cert.witness is None else [format_rational(x) for x in cert.witness],
    }


def degenerate_certificate() -> DeloneCertificate:
    return DeloneCertificate(None, (), Verdict.DEGENERATE)


def doc_to_certificate(doc) -> DeloneCertificate:
    try:
        verdict = Verdict(doc["verdict"])
        if verdict is Verdict.DEGENERATE:
            return degenerate_certificate()
        sphere = Sphere(tuple(parse_rational(c) for c in doc["center"]),
                        parse_rational(doc["radius_sq"]))
        on = tuple(_parse_int_rows(doc["on_sphere"], "on_sphere"))
        w = doc.get("witness")
        witness = None if w is None else tuple(parse_integer(x) for x in w)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed certificate: {exc}") from None
    return DeloneCertificate(sphere, on, verdict, witness)


def instance_to_doc(inst: DeloneInstance) -> dict:
    doc = {
        "dim": inst.dim,
        "lattice": lattice_to_doc(inst.lattice),
        "form": form_to_doc(inst.form),
        "simplex": simplex_to_doc(inst.simplex),
        "expected_relvol": inst.expected_relvol,
    }
    if inst.certificate is not None:
        doc["certificate"] = certificate_to_doc(inst.certificate)
    return doc


def doc_to_instance(doc) -> DeloneInstance:
    try:
        lat = doc_to_lattice(doc["lattice"])
        form = doc_to_form(doc["form"])
        simplex = doc_to_simplex(doc["simplex"])
        expected = doc["expected_relvol"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed instance: missing {exc}") from None
    if not (lat.rank == form.dim == simplex.dim):
        raise InvalidInput("lattice, form and simplex dimensions disagree")
    if isinstance(expected, bool) or not isinstance(expected, int):
        raise InvalidInput("expected_relvol must be an integer")
    cert = doc_to_certificate(doc["certificate"]) if doc.get("certificate") else None
    return DeloneInstance(lat, form, simplex, expected, cert)


LOADERS = {
    "form": doc_to_form,
    "lattice": doc_to_lattice,
    "simplex": doc_to_simplex,
    "points": doc_to_points,
    "certificate": doc_to_certificate,
    "instance": doc_to_instance,
}


def validate_and_load(path, kind: str):
    """Parse ``path`` as a ``kind`` document, enforcing every type invariant."""
    if kind not in LOADERS:
        raise ValueError(f"unknown document kind {kind!r}")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    try:
        return LOADERS[kind](doc)
    except InvalidInput as exc:
        raise InvalidInput(f"{path}: {exc}") from None
    except DeloneForgeError as exc:
        raise InvalidInput(f"{path}: {exc}") from None
