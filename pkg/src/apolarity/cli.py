"""Command line front end: parse an expression, run one analysis, print a report."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import apolar, decomp, orbits, raysum, scheme
from .errors import ApolarityError
from .fields import FieldSpec
from .ideals import hilbert_function_of_quotient
from .parser import parse_operator, parse_poly

COMMANDS = (
    "analyze", "hilbert", "decompose", "standard-form", "tangent", "orbit",
    "catalecticant", "raysum", "flatness", "gm-limit",
)


def _ints(seq):
    return [str(x) for x in seq]


def _hilbert(f, args):
    return {"hilbert_function": _ints(apolar.hilbert_function(f))}


def _decompose(f, args):
    sd = decomp.symmetric_decomposition(f)
    filt = decomp.linear_filtration(f)
    return {
        "symmetric_decomposition": [_ints(r) for r in sd.rows],
        "linear_filtration": [[str(v) for v in space] for space in filt.spaces],
    }


def _standard_form(f, args):
    verdict = decomp.is_standard_form(f)
    out = {"is_standard_form": verdict.ok}
    if not verdict.ok:
        out["violating_component"] = str(verdict.component)
    res = decomp.standard_form(f)
    out["normalized"] = str(res.g)
    out["automorphism"] = [str(im) for im in res.phi.images]
    out["unit"] = str(res.unit)
    return out


def _tangent(f, args):
    cert = scheme.hs_tangent_dim(f)
    return {
        "apolar_degree": str(cert.r),
        "tangent_dim": str(cert.tangent_dim),
        "unobstructed": cert.unobstructed,
        "expected_if_unobstructed": str(cert.r * cert.n),
        "hilbert_of_I2": _ints(cert.hilbert_of_I2),
    }


def _orbit(f, args):
    ot = orbits.orbit_tangent(f)
    out = {
        "orbit_tangent_dim": str(ot.dim),
        "unipotent_tangent_dim": str(ot.dim_unipotent),
        "max_compression": str(orbits.max_compression(f)),
    }
    if f.field.p:
        out["note"] = "positive characteristic: dim t.f may be smaller than the orbit dimension"
    if f.degree >= 3:
        v = orbits.canonical_gradedness_certificate(f)
        out["canonical_gradedness"] = v.kind
        if v.witness is not None:
            out["obstruction"] = str(v.witness)
        if v.reduced is not None:
            out["reduced"] = str(v.reduced)
    return out


def _catalecticant(f, args):
    F = f.top_form()
    degrees = [args.cat_degree] if args.cat_degree is not None else range(F.degree + 1)
    out = {"catalecticant_ranks": {str(a): str(apolar.catalecticant(F, a).rank) for a in degrees}}
    if args.secant_r is not None:
        v = apolar.secant_membership(F, args.secant_r)
        out["secant"] = {
            "r": str(v.r), "rank": str(v.rank), "member": v.member, "proven_regime": v.proven_regime,
        }
    return out


def _ray_op(f, args):
    if args.ray_partial is None:
        raise ApolarityError("this command needs --ray-partial")
    return parse_operator(args.ray_partial, f.n, f.field)


def _raysum(f, args):
    spec = raysum.RaySumSpec(f, _ray_op(f, args), args.ray_degree)
    g = raysum.ray_sum(spec)
    return {
        "ray_sum": str(g),
        "ray_sum_hilbert_function": _ints(apolar.hilbert_function(g)),
        "annihilator_formula_matches": raysum.ray_sum_annihilator(spec) == apolar.annihilator(g),
    }


def _flatness(f, args):
    v = raysum.flatness_criterion(f, _ray_op(f, args))
    out = {"flatness_holds": v.holds}
    if v.witness is not None:
        out["witness"] = str(v.witness)
    return out


def _gm_limit(f, args):
    I = scheme.gm_limit(f)
    return {
        "initial_ideal_generators": [str(g) for g in I.minimal_generators()],
        "colength": str(I.quotient_dimension()),
        "hilbert_function": _ints(hilbert_function_of_quotient(I)),
    }


def _analyze(f, args):
    out = {}
    out.update(_hilbert(f, args))
    out.update(_decompose(f, args))
    out["socle_degree"] = str(f.degree)
    sections = {
        "standard_form": _standard_form,
        "orbit": _orbit,
        "hilbert_scheme": _tangent,
        "catalecticant": _catalecticant,
    }
    if args.ray_partial is not None:
        sections["raysum"] = _raysum
        sections["flatness"] = _flatness
    for name, fn in sections.items():
        try:
            out[name] = fn(f, args)
        except ApolarityError as exc:
            out[name] = {"error": str(exc)}
    return out


HANDLERS = {
    "analyze": _analyze,
    "hilbert": _hilbert,
    "decompose": _decompose,
    "standard-form": _standard_form,
    "tangent": _tangent,
    "orbit": _orbit,
    "catalecticant": _catalecticant,
    "raysum": _raysum,
    "flatness": _flatness,
    "gm-limit": _gm_limit,
}


def build_report(command: str, text: str, args) -> dict:
    field = FieldSpec.parse(args.field)
    f = parse_poly(text, args.vars, field)
    if not f:
        raise ApolarityError("the zero polynomial has no apolar algebra")
    report = {
        "command": command,
        "input": str(f),
        "field": str(field),
        "n": str(f.n),
        "degree": str(f.degree),
    }
    report.update(HANDLERS[command](f, args))
    return report


def _render_text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.append(f"{pad}{key}:")
            for k, row in enumerate(val):
                lines.append(f"{pad}  [{k}] " + " ".join(row))
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: (" + ", ".join(val) + ")")
        elif isinstance(val, bool):
            lines.append(f"{pad}{key}: {'yes' if val else 'no'}")
        else:
            lines.append(f"{pad}{key}: {val}")
    return lines


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, ensure_ascii=False)
    return "\n".join(_render_text(report))


def _write_atomic(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".apolarity-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        # usage mistakes count as parse errors
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="apolarity", description="Inverse systems of finite Gorenstein algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("expr", nargs="*", help="polynomial in divided powers, e.g. 'x1^[3] + x1*x2'")
    p.add_argument("--file", help="read one expression per line")
    p.add_argument("--vars", type=int, default=None, help="number of variables (default: largest index used)")
    p.add_argument("--field", default="q", help="q or fp:<p>")
    p.add_argument("--json", action="store_true", help="canonical JSON output")
    p.add_argument("--ray-partial", default=None, help="operator for ray sums, e.g. 'dx1*dx3'")
    p.add_argument("--ray-degree", type=int, default=2)
    p.add_argument("--cat-degree", type=int, default=None)
    p.add_argument("--secant-r", type=int, default=None)
    p.add_argument("--out", default=None, help="write the report to this file (atomically)")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_intermixed_args(argv)
    inputs = list(args.expr)
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            inputs.extend(line.strip() for line in fh if line.strip() and not line.startswith("#"))
    if not inputs:
        print("error: no input expression", file=stderr)
        return 1
    chunks = []
    for text in inputs:
        try:
            report = build_report(args.command, text, args)
        except ApolarityError as exc:
            print(f"error: {exc}", file=stderr)
            return exc.exit_code
        chunks.append(render(report, args.json))
    out = "\n".join(chunks) + "\n"
    if args.out:
        _write_atomic(args.out, out)
    else:
        stdout.write(out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
