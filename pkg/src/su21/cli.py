"""Command-line entry point: `su21 COMMAND INPUT.json [options]`.

Reports are JSON on stdout (or --out). Exit status: 0 success, 2 when an
algorithm's hypotheses could not be certified at the given depth, 1 on error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import arithmetic, isometry, tetrahedron, tracefield
from .errors import HypothesisNotCertified, SchemaError, Su21Error
from .hermitian import charpoly, siegel_matrix
from .linalg import DEFAULT_TOL, EXACT, FLOAT
from .numberfield import subfield_generated
from .serialize import Reader, as_list, encode, require

COMMANDS = (
    "classify",
    "trace-field",
    "cube-trace-field",
    "rationalize",
    "tetra-invariants",
    "tetra-reconstruct",
    "tetra-field",
    "arith-check",
    "arith-dichotomy",
    "density-check",
)


@dataclass
class JobSpec:
    command: str
    input: str
    mode: str | None = None  # None: take it from the document, default exact
    depth: int = 4
    tol: float = DEFAULT_TOL
    allow_nonintegral: bool = False
    normalized: bool = False
    verbose: bool = False
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise SchemaError("", f"unknown command {self.command!r}")
        if self.depth < 1:
            raise SchemaError("", "--depth must be at least 1")
        if not self.tol > 0:
            raise SchemaError("", "--tol must be positive")
        if self.allow_nonintegral and self.command != "arith-dichotomy":
            raise SchemaError("", "--allow-nonintegral only applies to arith-dichotomy")
        if self.normalized and self.command != "tetra-field":
            raise SchemaError("", "--normalized only applies to tetra-field")


def _form(doc, rd: Reader, n: int = 3):
    if "form" in doc:
        return rd.matrix(doc["form"], "/form")
    if n != 3:
        raise SchemaError("/form", "a form is required for matrices that are not 3x3")
    return siegel_matrix(rd.field if rd.mode == EXACT else None, rd.mode)


def _generators(doc, rd: Reader):
    gens = [rd.matrix(g, f"/generators/{k}") for k, g in enumerate(as_list(require(doc, "generators"), "/generators"))]
    if not gens:
        raise SchemaError("/generators", "at least one generator is required")
    n = gens[0].shape[0]
    for k, g in enumerate(gens):
        if g.shape[0] != n:
            raise SchemaError(f"/generators/{k}", "generators must have the same size")
    return gens


def _tetrahedra(doc, rd: Reader):
    out = []
    for k, t in enumerate(as_list(require(doc, "tetrahedra"), "/tetrahedra")):
        if not isinstance(t, list) or len(t) != 4:
            raise SchemaError(f"/tetrahedra/{k}", "a tetrahedron is a list of four vertices")
        verts = tuple(rd.vector(v, f"/tetrahedra/{k}/{j}", 3) for j, v in enumerate(t))
        out.append(tetrahedron.IdealTetrahedron(verts))
    return out


def _eigenvalues(M, c: isometry.IsometryClass, mode: str) -> list:
    """Float: all eigenvalues. Exact: the distinct ones lying in the field."""
    if mode == FLOAT:
        return list(c.eigenvalues_approx)
    roots = M.field.poly_roots(charpoly(M))
    return sorted(roots, key=lambda r: tuple(r.coords))


def _classification(M, c: isometry.IsometryClass, mode: str) -> dict:
    out = {
        "tag": c.tag,
        "trace": c.trace,
        "discriminant": c.discriminant,
        "eigenvalue": c.eigenvalue,
        "fixed_points": list(c.fixed_points),
        "nilpotency_index": c.nilpotency_index,
        "eigenvalues": _eigenvalues(M, c, mode),
    }
    if mode == FLOAT:
        out["eigenvalues_approx"] = list(c.eigenvalues_approx)
    return out


def cmd_classify(doc, rd, spec):
    M = rd.matrix(require(doc, "matrix"), "/matrix")
    H = _form(doc, rd)
    return _classification(M, isometry.classify(M, H, tol=spec.tol), rd.mode)


def _cmd_trace_field(doc, rd, spec, cubes):
    gens = _generators(doc, rd)
    if rd.mode == FLOAT:
        words = [str(w) for w, _ in tracefield.enumerate_words(gens, spec.depth)]
        traces = tracefield.word_traces(gens, spec.depth, cubes=cubes)
        return {"traces": [{"word": w, "trace": t} for w, t in zip(words, traces)]}
    rep = (tracefield.cube_trace_field if cubes else tracefield.trace_field)(gens, spec.depth)
    return {"field": rep.field, "degree": rep.field.degree, "stabilized": rep.stabilized, "degrees": list(rep.degrees)}


def cmd_trace_field(doc, rd, spec):
    return _cmd_trace_field(doc, rd, spec, cubes=False)


def cmd_cube_trace_field(doc, rd, spec):
    return _cmd_trace_field(doc, rd, spec, cubes=True)


def cmd_density_check(doc, rd, spec):
    gens = _generators(doc, rd)
    res = tracefield.zariski_density_check(gens, spec.depth, tol=spec.tol)
    out = {"dense": res.dense, "dimension": res.dimension, "witness_words": list(res.witness)}
    if spec.verbose:
        out["witness_matrices"] = list(res.witness_matrices)
    return out


def cmd_rationalize(doc, rd, spec):
    gens = _generators(doc, rd)
    res = tracefield.rationalize_group(gens, spec.depth, H=_form(doc, rd), tol=spec.tol)
    out = {
        "case": res.case_tag,
        "conjugator": res.conjugator,
        "conjugated_generators": list(res.conjugated_gens),
        "trace_field": res.trace_field,
        "certificates": res.certificates,
        "form": res.form,
        "parabolic_word": res.parabolic_word,
        "companion_word": res.companion_word,
    }
    if spec.verbose:
        out["basis_words"] = list(res.basis_words)
        out["basis_matrices"] = [w.evaluate(gens) for w in res.basis_words]
        out["recovery"] = res.recovery
        out["diagnostics"] = res.diagnostics
    return out


def _invariant_dict(inv: tetrahedron.TetraInvariant) -> dict:
    return dict(zip(("z1", "z1p", "z1t", "z1tp"), inv.as_tuple()))


def cmd_tetra_invariants(doc, rd, spec):
    H = _form(doc, rd)
    out = []
    for T in _tetrahedra(doc, rd):
        inv = tetrahedron.invariants(T, H)
        out.append({"invariant": _invariant_dict(inv), "conjugate": _invariant_dict(tetrahedron.conjugate_invariant(inv))})
    return {"tetrahedra": out}


def cmd_tetra_reconstruct(doc, rd, spec):
    H = _form(doc, rd)
    verts = as_list(require(doc, "vertices"), "/vertices")
    if len(verts) != 3:
        raise SchemaError("/vertices", "expected three vertices")
    p0, p1, p2 = (rd.vector(v, f"/vertices/{k}", 3) for k, v in enumerate(verts))
    raw = as_list(require(doc, "invariant"), "/invariant")
    if len(raw) != 4:
        raise SchemaError("/invariant", "expected [z1, z1', z1~, z1~']")
    inv = tetrahedron.TetraInvariant(*(rd.element(z, f"/invariant/{k}") for k, z in enumerate(raw)))
    return {"p3": tetrahedron.reconstruct_p3(p0, p1, p2, inv, H, tol=max(spec.tol, 1e-8))}


def cmd_tetra_field(doc, rd, spec):
    rep = tetrahedron.invariant_field(_tetrahedra(doc, rd), normalized=spec.normalized, H=_form(doc, rd))
    out = {"field": rep.field, "degree": rep.field.degree}
    if spec.normalized:
        out["coordinate_field"] = rep.coordinate_field
        out["equal"] = rep.equal
    return out


def _require_exact_mode(rd, cmd):
    if rd.mode != EXACT:
        raise SchemaError("/mode", f"{cmd} needs exact mode")


def cmd_arith_check(doc, rd, spec):
    _require_exact_mode(rd, "arith-check")
    ext = arithmetic.cm_extension(rd.field, doc.get("places"))
    H = _form(doc, rd, n=0)
    pair = arithmetic.is_admissible(H, ext)
    places = []
    for k, idx in enumerate(ext.places):
        entry = {"root_index": idx, "signature": list(pair.signatures[k])}
        form = pair.conjugate_forms[k]
        if form.mode == EXACT:
            entry["form"] = form
        places.append(entry)
    return {"admissible": pair.admissible, "real_subfield": ext.F_basis, "places": places}


def _sub(doc, key, rd):
    elems = [rd.element(x, f"/{key}/{k}") for k, x in enumerate(as_list(require(doc, key), f"/{key}"))]
    return subfield_generated(elems, rd.field)


def cmd_arith_dichotomy(doc, rd, spec):
    _require_exact_mode(rd, "arith-dichotomy")
    gens = _generators(doc, rd)
    E_sub, F_sub = _sub(doc, "E", rd), _sub(doc, "F", rd)
    witness = None
    if "integral_basis" in doc:
        basis = [rd.element(x, f"/integral_basis/{k}") for k, x in enumerate(as_list(doc["integral_basis"], "/integral_basis"))]
        witness = arithmetic.IntegralityWitness(tuple(basis))
    elif "sqrt_generators" in doc:
        pairs = []
        for k, p in enumerate(as_list(doc["sqrt_generators"], "/sqrt_generators")):
            if not isinstance(p, list) or len(p) != 2 or not isinstance(p[0], int):
                raise SchemaError(f"/sqrt_generators/{k}", "expected [m, sqrt(m)]")
            pairs.append((p[0], rd.element(p[1], f"/sqrt_generators/{k}/1")))
        witness = arithmetic.subfield_integral_basis(pairs)
    H = _form(doc, rd, n=gens[0].shape[0]) if "form" in doc or gens[0].shape[0] == 3 else None
    rep = arithmetic.trace_dichotomy_report(
        gens, spec.depth, E_sub, F_sub, witness=witness, allow_nonintegral=spec.allow_nonintegral, H=H
    )
    out = {
        "verdict": rep.verdict,
        "trace_field": rep.trace_field,
        "loxodromic_word": rep.loxodromic_word,
        "stabilized": rep.stabilized,
    }
    if rep.offending_word is not None:
        out["offending_word"] = rep.offending_word
        out["offending_trace"] = rep.offending_trace
    if witness is not None:
        out["generators_integral"] = [arithmetic.is_integral(g, witness) for g in gens]
    return out


HANDLERS = {
    "classify": cmd_classify,
    "trace-field": cmd_trace_field,
    "cube-trace-field": cmd_cube_trace_field,
    "rationalize": cmd_rationalize,
    "tetra-invariants": cmd_tetra_invariants,
    "tetra-reconstruct": cmd_tetra_reconstruct,
    "tetra-field": cmd_tetra_field,
    "arith-check": cmd_arith_check,
    "arith-dichotomy": cmd_arith_dichotomy,
    "density-check": cmd_density_check,
}


def run(spec: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit code, report)."""
    report = {"command": spec.command}
    try:
        spec.validate()
        try:
            doc = json.loads(Path(spec.input).read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
        rd = Reader.from_document(doc, spec.mode)
        report["mode"] = rd.mode
        report["result"] = HANDLERS[spec.command](doc, rd, spec)
        report["status"] = "ok"
        return 0, encode(report)
    except HypothesisNotCertified as exc:
        report.update(status="hypothesis_not_certified", reason=str(exc))
        return 2, encode(report)
    except SchemaError as exc:
        report.update(status="error", error="SchemaError", pointer=exc.pointer, message=str(exc))
        return 1, encode(report)
    except (Su21Error, OSError, ValueError, ZeroDivisionError) as exc:
        report.update(status="error", error=type(exc).__name__, message=str(exc))
        return 1, encode(report)


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="su21", description="Trace fields, tetrahedra and arithmeticity in SU(2,1).")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="input JSON file")
    p.add_argument("--mode", choices=(EXACT, FLOAT), help="arithmetic mode (default: the document's, else exact)")
    p.add_argument("--depth", type=int, default=4, help="maximal word length (default 4)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float-mode tolerance")
    p.add_argument("--allow-nonintegral", action="store_true", help="arith-dichotomy: skip the integrality hypothesis")
    p.add_argument("--normalized", action="store_true", help="tetra-field: compare with the vertex coordinate field")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--verbose", action="store_true", help="include the full witness chain")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = JobSpec(
        command=args.command,
        input=args.input,
        mode=args.mode,
        depth=args.depth,
        tol=args.tol,
        allow_nonintegral=args.allow_nonintegral,
        normalized=args.normalized,
        verbose=args.verbose,
    )
    code, report = run(spec)
    text = render(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == 1:
        print(f"su21: {report.get('message')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
