"""Command-line interface: ``pertsemi <command> [options]``.

Element inputs are JSON documents read from files or ``-`` (stdin). Every
command writes JSON to stdout (or CSV with ``--csv`` where offered). Exit
status is 0 on success, 1 for invalid input and 2 when a numerical contract
(membership, unitarity, canonical structure) is violated.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys

import numpy as np

from . import io
from .algebra import Algebra
from .canonical import (
    CanonicalStructureError,
    canonicalize,
    canonicalize_parts,
    closed_form_dimensions,
    decomposition_report,
    sample_member,
)
from .fluctuation import fluctuate
from .matalg import hermitian_eigenvalues
from .oracle import OracleCostError, affine_dimension
from .pert import (
    DEFAULT_TOL,
    MembershipError,
    PertMatrix,
    TensorElement,
    is_member,
    is_normalized,
    is_self_adjoint,
    membership_residual,
    multiply,
    realize,
    structure_data,
)
from .unitary import UnitaryElement, embed_unitary, random_unitary, verify_rep_decomposition

DEFAULT_TABLE = ("C^2", "C^3", "C^4", "M2(C)", "M3(C)", "M2(R)", "M3(R)", "H", "M2(H)")


class ContractError(Exception):
    """A numerical contract failed; maps to exit status 2."""


def _read(path, stdin):
    try:
        if path == "-":
            text = stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise io.ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise io.ValidationError(f"malformed JSON in {path}: {exc.msg} (line {exc.lineno})") from None


def _algebra(text):
    """``--algebra`` value: inline JSON, ``@file`` or shorthand like ``M2(H)``."""
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise io.ValidationError(f"cannot read {text[1:]}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.strip()
    return io.algebra_from_json(data)


def _as_matrix(e):
    return e if isinstance(e, PertMatrix) else realize(e)


def _require_member(e, tol, label="element"):
    m = _as_matrix(e)
    if not is_member(m, tol * max(1.0, np.abs(m.mat).max())):
        raise ContractError(f"{label} is not in the perturbation semigroup "
                            f"(residual {membership_residual(m):.3g})")
    return m


def _csv(rows, header):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return buf.getvalue().rstrip("\n")


def cmd_check(args, stdin):
    e = io.element_from_json(_read(args.input, stdin))
    m = _as_matrix(e)
    tol = args.tol
    if isinstance(e, TensorElement):
        normalized, self_adjoint = is_normalized(e, tol), is_self_adjoint(e, tol)
    else:
        sd = structure_data(m.algebra)
        v = sd.fixed_vector
        normalized = bool(np.linalg.norm(m.mat @ v - v) <= tol)
        self_adjoint = bool(sd.constraint("omega").residual(m.mat) <= tol)
    residual = membership_residual(m)
    return {
        "member": bool(residual <= tol),
        "normalized": normalized,
        "self_adjoint": self_adjoint,
        "residual": residual,
    }


def cmd_mul(args, stdin):
    x = io.element_from_json(_read(args.left, stdin))
    y = io.element_from_json(_read(args.right, stdin))
    if x.algebra != y.algebra:
        raise io.ValidationError(f"algebra mismatch: {x.algebra} vs {y.algebra}")
    _require_member(x, args.tol, "left factor")
    _require_member(y, args.tol, "right factor")
    if isinstance(x, TensorElement) and isinstance(y, TensorElement):
        return io.tensor_to_json(multiply(x, y))
    return io.pert_matrix_to_json(_as_matrix(x) @ _as_matrix(y))


def _form_json(c):
    return {
        "case": c.case,
        "algebra": str(c.algebra),
        "matrix": io.matrix_to_json(c.matrix),
        "blocks": {k: io.matrix_to_json(v) for k, v in c.blocks.items()},
        "residual": c.residual,
    }


def cmd_canon(args, stdin):
    m = _require_member(io.element_from_json(_read(args.input, stdin)), args.tol)
    if len(m.algebra.blocks) == 1:
        return {"v": io.SCHEMA_VERSION, **_form_json(canonicalize(m, args.tol))}
    forms, cross = canonicalize_parts(m, args.tol)
    return {
        "v": io.SCHEMA_VERSION,
        "algebra": str(m.algebra),
        "parts": [_form_json(c) for c in forms],
        "cross": [{"pair": [c.i, c.j], "forward": io.matrix_to_json(c.forward)} for c in cross],
    }


def cmd_decompose(args, stdin):
    m = _require_member(io.element_from_json(_read(args.input, stdin)), args.tol)
    if len(m.algebra.blocks) == 1:
        return decomposition_report(canonicalize(m, args.tol))
    forms, _ = canonicalize_parts(m, args.tol)
    reports = [decomposition_report(c) for c in forms]
    return {
        "algebra": str(m.algebra),
        "parts": reports,
        "dims": closed_form_dimensions(m.algebra),
        "invertible": all(r["invertible"] for r in reports),
    }


def cmd_embed(args, stdin):
    if args.random:
        algebra = args.algebra or Algebra.matrix("C", 2)
        if len(algebra.blocks) != 1:
            raise io.ValidationError("--random needs a single matrix block")
        block = algebra.blocks[0]
        u = random_unitary(block.field, block.n, args.seed)
    else:
        doc = _read(args.input, stdin)
        if not isinstance(doc, dict) or "u" not in doc or "algebra" not in doc:
            raise io.ValidationError("expected {\"v\": 1, \"algebra\": ..., \"u\": matrix}")
        algebra = io.algebra_from_json(doc["algebra"])
        try:
            u = UnitaryElement(algebra, io.matrix_from_json(doc["u"]))
        except io.ValidationError:
            raise
        except ValueError as exc:
            raise ContractError(str(exc)) from None
    return io.tensor_to_json(embed_unitary(u))


def cmd_rep_check(args, stdin):
    algebra = args.algebra or Algebra.matrix("C", 2)
    if len(algebra.blocks) != 1:
        raise io.ValidationError("rep-check needs a single matrix block")
    block = algebra.blocks[0]
    report = verify_rep_decomposition(block.field, block.n, args.samples, args.seed)
    if max(report["max_off_block_residual"], report["max_structure_residual"]) > args.tol:
        raise ContractError(io.dumps(report))
    return report


def cmd_fluctuate(args, stdin):
    e = io.element_from_json(_read(args.element, stdin))
    D = io.dirac_from_json(_read(args.dirac, stdin))
    try:
        before = [float(x) for x in hermitian_eigenvalues(D)]
    except ValueError as exc:
        if not args.force:
            raise ContractError(f"Dirac operator: {exc}") from None
        before = None
    if not args.force:
        _require_member(e, args.tol)
    try:
        out = fluctuate(e, D, args.tol, force=args.force)
    except MembershipError as exc:
        raise ContractError(str(exc)) from None
    except ValueError as exc:
        raise io.ValidationError(str(exc)) from None
    try:
        after = [float(x) for x in hermitian_eigenvalues(out, tol=max(1e-10, args.tol))]
    except ValueError:
        if not args.force:
            raise ContractError("fluctuated operator is not hermitian") from None
        after = None
    if args.csv:
        rows = [(i, b, a) for i, (b, a) in enumerate(zip(before or [], after or []))]
        return _csv(rows, ("index", "before", "after"))
    return {
        "v": io.SCHEMA_VERSION,
        "D": io.matrix_to_json(out),
        "spectrum_before": before,
        "spectrum_after": after,
    }


def cmd_sample(args, stdin):
    algebra = args.algebra or Algebra.matrix("C", 2)
    return io.pert_matrix_to_json(sample_member(algebra, args.seed, args.scale))


def _table_algebras(args):
    return args.algebras or [Algebra.parse(s) for s in DEFAULT_TABLE]


def cmd_oracle_dims(args, stdin):
    rows = []
    for algebra in _table_algebras(args):
        rows.append({
            "algebra": str(algebra),
            "oracle": affine_dimension(algebra),
            "closed_form": closed_form_dimensions(algebra)["total"],
        })
    for r in rows:
        r["agree"] = r["oracle"] == r["closed_form"]
    if args.csv:
        return _csv([tuple(r.values()) for r in rows], tuple(rows[0]))
    return {"v": io.SCHEMA_VERSION, "table": rows}


def _spec_dims(algebra):
    dims = closed_form_dimensions(algebra)
    if "blocks" in dims:
        return {"blocks": [_trim(b) for b in dims["blocks"]],
                "cross": [c["dim"] for c in dims["cross"]], "total": dims["total"]}
    return _trim(dims)


def _trim(dims):
    return {k: v for k, v in dims.items() if k in ("V", "S", "T", "total")}


def cmd_spec_table(args, stdin):
    algebras = _table_algebras(args)
    if args.csv:
        rows = []
        for a in algebras:
            d = closed_form_dimensions(a)
            rows.append((str(a), d.get("V", ""), d.get("S", ""), d.get("T", ""), d["total"]))
        return _csv(rows, ("algebra", "V", "S", "T", "total"))
    return "\n".join(io.dumps(_spec_dims(a)) for a in algebras)


def _add_tol(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance (default 1e-9)")


def build_parser():
    parser = argparse.ArgumentParser(prog="pertsemi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="membership, normalization and self-adjointness")
    p.add_argument("input", nargs="?", default="-")
    _add_tol(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mul", help="product of two elements")
    p.add_argument("left")
    p.add_argument("right")
    _add_tol(p)
    p.set_defaults(func=cmd_mul)

    for name, func, text in (
        ("canon", cmd_canon, "canonical matrix and blocks"),
        ("decompose", cmd_decompose, "semidirect-product report"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", nargs="?", default="-")
        _add_tol(p)
        p.set_defaults(func=func)

    p = sub.add_parser("embed", help="u -> u (x) u^*o for a unitary u")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--random", action="store_true", help="draw u from the unitary group of --algebra")
    p.add_argument("--algebra", type=_algebra_arg)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("rep-check", help="block decomposition of embedded unitaries")
    p.add_argument("--algebra", type=_algebra_arg)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_rep_check)

    p = sub.add_parser("fluctuate", help="apply an element to a Dirac operator")
    p.add_argument("element")
    p.add_argument("dirac")
    p.add_argument("--force", action="store_true", help="allow non-members and non-hermitian input")
    p.add_argument("--csv", action="store_true", help="emit both spectra as CSV")
    _add_tol(p)
    p.set_defaults(func=cmd_fluctuate)

    p = sub.add_parser("sample", help="random member")
    p.add_argument("--algebra", type=_algebra_arg)
    p.add_argument("--seed", type=int)
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_sample)

    for name, func, text in (
        ("oracle-dims", cmd_oracle_dims, "dimensions by brute-force elimination"),
        ("spec-table", cmd_spec_table, "closed-form dimensions"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--algebra", dest="algebras", action="append", type=_algebra_arg,
                       help="algebra to tabulate (repeatable)")
        p.add_argument("--csv", action="store_true")
        p.set_defaults(func=func)
    return parser


def _algebra_arg(text):
    try:
        return _algebra(text)
    except io.ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        result = args.func(args, stdin)
    except (io.ValidationError, OracleCostError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (ContractError, MembershipError, CanonicalStructureError) as exc:
        print(f"contract violation: {exc}", file=stderr)
        return 2
    print(result if isinstance(result, str) else io.dumps(result), file=stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
