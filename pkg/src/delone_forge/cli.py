"""Command-line interface.

Exit status: 0 on success (or a Delone verdict), 2 when a verdict is
NotDelone (the witness is printed), 1 on invalid input or any other error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, formats
from .delone import certify_delone, enumerate_in_ellipsoid
from .errors import CertificationFailed, Degenerate, DeloneForgeError, NotCospherical
from .exact import format_rational, parse_rational
from .hadamard import hadamard_simplex_instance, unit_interval_instance
from .lattice import relative_volume
from .product import DEFAULT_SAMPLE_SIZE, theorem1_product
from .verify import CertificateInvalid, recheck

log = logging.getLogger("delone_forge")

EXIT_OK, EXIT_ERROR, EXIT_NOT_DELONE = 0, 1, 2


class UsageError(DeloneForgeError):
    pass


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _rational_arg(s: str) -> Fraction:
    try:
        return parse_rational(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_instance(source: str):
    """An instance file, or one of the built-ins ``interval`` / ``hadamard:N``."""
    if source == "interval":
        return unit_interval_instance()
    if source.startswith("hadamard:"):
        try:
            n = int(source.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad instance source {source!r}") from None
        return hadamard_simplex_instance(n, certify=n <= 4)
    return formats.validate_and_load(source, "instance")


def cmd_hadamard(args) -> int:
    inst = hadamard_simplex_instance(args.n, certify=args.certify)
    _emit(formats.dumps(formats.instance_to_doc(inst)), args.output)
    if inst.certificate is not None and not inst.certificate.is_delone:  # pragma: no cover
        return EXIT_NOT_DELONE
    return EXIT_OK


def cmd_certify(args) -> int:
    form = formats.validate_and_load(args.form, "form")
    points = formats.validate_and_load(args.points, "points")
    if any(len(p) != form.dim for p in points):
        raise formats.InvalidInput(f"points must have length {form.dim}")
    try:
        cert = certify_delone(points, form, max_points=args.max_points)
    except (Degenerate, NotCospherical) as exc:
        _emit(formats.dumps(formats.certificate_to_doc(formats.degenerate_certificate())), args.output)
        log.error("%s", exc)
        return EXIT_ERROR
    _emit(formats.dumps(formats.certificate_to_doc(cert)), args.output)
    if not cert.is_delone:
        print(f"not Delone; witness {list(cert.witness)}", file=sys.stderr)
        return EXIT_NOT_DELONE
    return EXIT_OK


def cmd_relvol(args) -> int:
    simplex = formats.validate_and_load(args.simplex, "simplex")
    _emit(f"{relative_volume(simplex)}\n", args.output)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    form = formats.validate_and_load(args.form, "form")
    center = tuple(_rational_arg(c) for c in args.center.split(","))
    if len(center) != form.dim:
        raise UsageError(f"center needs {form.dim} coordinates")
    r2 = _rational_arg(args.r2)
    if r2 < 0:
        raise UsageError("r2 must be non-negative")
    pts = enumerate_in_ellipsoid(form, center, r2, max_points=args.max_points)
    _emit(formats.dumps(formats.points_to_doc(pts)), args.output)
    return EXIT_OK


def product_report(left, right, result) -> dict:
    certified = result.certified
    return {
        "left": formats.instance_to_doc(left),
        "right": formats.instance_to_doc(right),
        "lattice": formats.lattice_to_doc(result.lattice),
        "base_form": formats.form_to_doc(result.base_form),
        "polytope_certificate": formats.certificate_to_doc(result.polytope_certificate),
        "form": formats.form_to_doc(result.perturbed.form),
        "epsilon": format_rational(result.epsilon),
        "a": [format_rational(x) for x in result.perturbed.a],
        "b": [format_rational(x) for x in result.perturbed.b],
        "count": result.count,
        "relvol_each": result.relvol_each,
        "certified_count": len(certified),
        "mode": "exhaustive" if len(certified) == result.count else "sampled",
        "simplices": [
            {"index": i, "path": p, "relvol": rv,
             "certificate": formats.certificate_to_doc(certified[i]) if i in certified else None}
            for i, (p, rv) in enumerate(zip(result.paths, result.relvols))
        ],
    }


def cmd_product(args) -> int:
    left, right = _load_instance(args.left), _load_instance(args.right)
    eps = _rational_arg(args.eps) if args.eps is not None else None
    if eps is not None and eps <= 0:
        raise UsageError("--eps must be positive")
    try:
        result = theorem1_product(left, right, exhaustive=args.exhaustive, epsilon=eps,
                                  sample_size=args.sample_size)
    except CertificationFailed as exc:
        doc = {"error": str(exc), "verdict": "not_delone",
               "certificate": formats.certificate_to_doc(exc.certificate)}
        _emit(formats.dumps(doc), args.output)
        print(f"{exc}; witness {list(exc.certificate.witness)}", file=sys.stderr)
        return EXIT_NOT_DELONE
    _emit(formats.dumps(product_report(left, right, result)), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    rows = bounds.bound_table(args.dmax, prec=args.prec)
    if args.format == "csv":
        text = bounds.table_to_csv(rows)
    else:
        text = formats.dumps(bounds.table_to_doc(rows, prec=args.prec))
    _emit(text, args.output)
    return EXIT_OK


def cmd_recheck(args) -> int:
    def load(path):
        try:
            return json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise formats.InvalidInput(f"cannot load {path}: {exc}") from None

    cert, form = load(args.certificate), load(args.form)
    points = formats.validate_and_load(args.points, "points") if args.points else None
    try:
        verdict = recheck(cert, form, points)
    except (CertificateInvalid, KeyError, TypeError, ValueError) as exc:
        print(f"certificate invalid: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(f"valid {verdict}\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delone-forge", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("hadamard", cmd_hadamard, "Hadamard simplex of dimension 2^n - 1 in its lattice")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--certify", action="store_true", help="attach a Delone certificate")

    sp = add("certify", cmd_certify, "empty-sphere certificate for a point set")
    sp.add_argument("--form", required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--max-points", type=int, default=10**6)

    sp = add("relvol", cmd_relvol, "relative volume of a simplex")
    sp.add_argument("--simplex", required=True)

    sp = add("enumerate", cmd_enumerate, "lattice points in an ellipsoid")
    sp.add_argument("--form", required=True)
    sp.add_argument("--center", required=True, help="comma-separated p/q coordinates")
    sp.add_argument("--r2", required=True, help="squared radius as p/q")
    sp.add_argument("--max-points", type=int, default=10**6)

    sp = add("product", cmd_product, "staircase simplices of a product of Delone simplices")
    sp.add_argument("--left", required=True, help="instance file, 'interval' or 'hadamard:N'")
    sp.add_argument("--right", required=True, help="instance file, 'interval' or 'hadamard:N'")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--eps", help="fixed coupling strength p/q (default: halving search)")
    sp.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_SIZE)

    sp = add("bounds", cmd_bounds, "table of bounds on mv(d), dt(d) and t(d)")
    sp.add_argument("--dmax", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--prec", type=int, default=bounds.DEFAULT_PREC,
                    help="starting interval precision in bits")

    sp = add("recheck", cmd_recheck, "independently re-validate a certificate")
    sp.add_argument("--certificate", required=True)
    sp.add_argument("--form", required=True)
    sp.add_argument("--points")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DeloneForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
