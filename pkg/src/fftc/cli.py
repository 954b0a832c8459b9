"""Command-line entry point: ``fftc <group> <command> ...``.

Exit codes: 0 success, 2 input validation failure, 3 audit found identity
violations (only with ``--strict``), 1 internal error.  Reports go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from fractions import Fraction
from typing import Sequence

from .assoc import (
    NonSplitError,
    cartan_matrix,
    ideal_module,
    load_algebra,
    primitive_idempotents,
    radical_char0,
    regular_module,
    simple_module,
    validate_algebra,
)
from .audit import DatasetError, full_audit, load_dataset, synthetic_dataset
from .exact import GaussianRational, Matrix, ModP, ScalarParseError, rank, render_scalar
from .frobform import (
    CentralForm,
    DegenerateFormError,
    character_form,
    check_central_form,
    find_symmetric_form,
    ideal_report,
)
from .grring import condition_p, load_ring, nilpotent_witness, ring_semisimple, validate_ring
from .sfcat import (
    FIELD,
    IRR,
    PROJECTIVE_COVER,
    ResourceCapError,
    lambda_algebra,
    right_multiplication,
    sf_cartan,
    sf_cartan_from_composition_series,
    sf_check_trace_vs_tg,
    sf_fusion,
    sf_fusion_closed_form,
    sf_modified_trace,
    sf_modular_data,
    sf_object,
    sf_phi_table,
)

__all__ = ["main", "run", "emit", "build_parser"]

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_AUDIT = 0, 1, 2, 3


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# serialization


def _plain(x):
    """Recursively turn report values into JSON-ready data with exact scalar strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (Fraction, GaussianRational, ModP)):
        return render_scalar(x)
    if isinstance(x, Matrix):
        return x.to_strings()
    if isinstance(x, dict):
        return {(",".join(k) if isinstance(k, tuple) else str(k)): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    if v is None:
        return ""
    return str(v).lower() if isinstance(v, bool) else str(v)


def _md(obj, level: int, out: list[str]) -> None:
    """Markdown: dicts become sections (or key/value tables when flat),
    lists of rows become tables; rows keep their input order."""
    if isinstance(obj, dict):
        flat = {k: v for k, v in obj.items() if not isinstance(v, (dict, list))}
        if flat:
            out += ["| key | value |", "|---|---|"]
            out += [f"| {k} | {_cell(v)} |" for k, v in flat.items()]
            out.append("")
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                out.append(f"{'#' * min(level, 6)} {k}")
                out.append("")
                _md(v, level + 1, out)
        return
    if obj and all(isinstance(r, list) for r in obj):
        width = max(len(r) for r in obj)
        out += ["| " + " | ".join(str(c) for c in range(width)) + " |",
                "|" + "---|" * width]
        out += ["| " + " | ".join(_cell(c) for c in r) + " |" for r in obj]
        out.append("")
    elif obj and all(isinstance(r, dict) for r in obj):
        cols: list[str] = []
        for r in obj:
            cols += [k for k in r if k not in cols]
        out += ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        out += ["| " + " | ".join(_cell(r.get(c)) for c in cols) + " |" for r in obj]
        out.append("")
    else:
        out += [f"- {_cell(v)}" for v in obj]
        out.append("")


def emit(report, fmt: str = "json") -> bytes:
    """Deterministic serialization (sorted JSON keys; markdown in label order)."""
    data = _plain(report)
    if fmt == "json":
        return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "md":
        if not data:
            return b""
        out: list[str] = []
        _md(data, 1, out)
        return ("\n".join(out).rstrip("\n") + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# commands


def _labels(v: Sequence, basis: Sequence[str]) -> dict:
    return {b: render_scalar(x) for b, x in zip(basis, v) if x}


def cmd_algebra_analyze(args) -> dict:
    a = load_algebra(args.algebra)
    problems = validate_algebra(a)
    if problems:
        raise InputError("; ".join(problems))
    idems = primitive_idempotents(a)
    rad = radical_char0(a)
    reps = idems.representatives
    simples = [simple_module(a, e, rad) for e in reps]
    projectives = [ideal_module(a, e, "left") for e in reps]
    c = cartan_matrix(a, idems)
    report: dict = {
        "algebra": {"dim": a.dim, "basis": list(a.basis), "field": a.field.to_json()},
        "idempotents": [{"label": idems.labels[k], "element": _labels(e, a.basis)}
                        for k, e in zip(idems.classes, idems.elements)],
        "cartan": {"labels": list(idems.labels), "matrix": c, "rank": rank(c)},
        "simple_dims": dict(zip(idems.labels, (s.dim for s in simples))),
        "regular_character": list(character_form(regular_module(a)).coords),
        "simple_characters": {u: list(character_form(s).coords) for u, s in zip(idems.labels, simples)},
    }
    if args.form:
        with open(args.form) as fh:
            form = CentralForm.from_json(json.load(fh), a)
        status = check_central_form(form)
        if not status["central"]:
            raise InputError("the supplied form is not central")
        report["form"] = {"coords": list(form.coords), "source": "file"}
    else:
        found = find_symmetric_form(a)
        form = found["form"]
        report["form"] = {"coords": list(form.coords) if form else None, "source": "search",
                          "certificate": found["certificate"]}
    if form is not None:
        ideals = ideal_report(a, form, simples, projectives, rad)
        report["ideals"] = ideals
        report["hig_dim"] = ideals["dims"]["Hig"]
    return report


def _t0(args):
    from .exact import parse_scalar

    t0 = parse_scalar(args.t0, FIELD)
    if not t0:
        raise InputError("--t0 must be nonzero")
    return t0


def _beta(args):
    return "symbolic" if args.beta_sq_inv is None else args.beta_sq_inv


def _scalar(x) -> str:
    return str(x) if isinstance(x, int) else render_scalar(x)


def _sf_trace_values(N: int, beta, t0) -> dict:
    lam = lambda_algebra(N, beta)
    top = lam.algebra.basis_vector(lam.top)
    out = {"beta_sq_inv": lam.beta_sq_inv, "cointegral_top": lam.cointegral()[lam.top]}
    for u in IRR:
        p = sf_object(lam, PROJECTIVE_COVER[u])
        if u in ("1", "Pi1"):
            key = f"t_{PROJECTIVE_COVER[u]}(R_top)"
            out[key] = _scalar(sf_modified_trace(p, right_multiplication(p, top), t0))
        else:
            out[f"t_{u}(id)"] = _scalar(sf_modified_trace(p, Matrix.identity(p.dim, FIELD), t0))
    return out


def _fusion_rows(fusion: dict) -> list[dict]:
    return [{"U": u, "V": v, **{w: m for w, m in fusion[(u, v)].items()}} for u in IRR for v in IRR
            if (u, v) in fusion]


def cmd_sf_report(args) -> dict:
    N, t0 = args.n, _t0(args)
    c = sf_cartan(N)
    md = sf_modular_data(N)
    return {
        "N": N,
        "cartan": {"labels": list(IRR), "matrix": c, "rank": rank(c),
                   "matches_composition_series": c == sf_cartan_from_composition_series(N)},
        "trace_values": _sf_trace_values(N, _beta(args), t0),
        "modular_data": {"J": list(md.J), "irrproj": list(md.irrproj), "Btilde": md.Btilde,
                         "Stilde": md.Stilde, "Ctilde": md.Ctilde, "b": md.b},
    }


def cmd_sf_fusion(args) -> dict:
    fusion = sf_fusion(args.n, _beta(args))
    return {"N": args.n, "fusion": _fusion_rows(fusion),
            "matches_closed_form": fusion == sf_fusion_closed_form(args.n)}


def cmd_sf_trace(args) -> dict:
    return {"N": args.n, "trace_values": _sf_trace_values(args.n, _beta(args), _t0(args))}


def cmd_sf_phi(args) -> dict:
    phi = sf_phi_table(args.n, _t0(args), _beta(args))
    return {
        "N": args.n,
        "c": phi["c"],
        "c_pi": phi["c_pi"],
        "b": phi["b"],
        "phi": {f"{u},{v}": m for (u, v), m in phi["table"].items() if u == v},
    }


def cmd_sf_check(args) -> dict:
    return sf_check_trace_vs_tg(args.n, _t0(args), _beta(args))


def _ring(path):
    r = load_ring(path)
    problems = validate_ring(r)
    if problems:
        raise InputError("; ".join(problems))
    return r


def cmd_gr_condition_p(args) -> dict:
    r = _ring(args.ring)
    label = condition_p(r)
    return {"condition_p": label is not None, "non_nilpotent_projective": label}


def cmd_gr_semisimple(args) -> dict:
    r = _ring(args.ring)
    if r.field.characteristic != 0:
        raise InputError("the semisimplicity test needs characteristic 0")
    w = nilpotent_witness(r)
    return {"semisimple": ring_semisimple(r),
            "nilpotent_witness": None if w is None else r.render(w)}


def cmd_audit_run(args) -> dict:
    return full_audit(load_dataset(args.dataset))


def cmd_gen_synthetic(args) -> dict:
    return synthetic_dataset(args.seed)


# --------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fftc", description="Exact finite tensor category toolkit.")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "md"), default="json")
    sf_common = argparse.ArgumentParser(add_help=False)
    sf_common.add_argument("--n", type=int, default=1)
    sf_common.add_argument("--beta-sq-inv", choices=("1", "-1", "i", "-i"), default=None,
                           help="value of beta^-2; default i^N")
    sf_common.add_argument("--t0", default="1")

    groups = parser.add_subparsers(dest="group", required=True)

    alg = groups.add_parser("algebra").add_subparsers(dest="command", required=True)
    p = alg.add_parser("analyze", parents=[fmt])
    p.add_argument("algebra")
    form = p.add_mutually_exclusive_group()
    form.add_argument("--form", help="central form JSON file")
    form.add_argument("--find-form", action="store_true", help="search for a symmetric form (default)")
    p.set_defaults(func=cmd_algebra_analyze)

    sf = groups.add_parser("sf").add_subparsers(dest="command", required=True)
    for name, func in [("report", cmd_sf_report), ("fusion", cmd_sf_fusion), ("trace", cmd_sf_trace),
                       ("phi", cmd_sf_phi), ("check-thm61", cmd_sf_check)]:
        sf.add_parser(name, parents=[fmt, sf_common]).set_defaults(func=func)

    gr = groups.add_parser("gr").add_subparsers(dest="command", required=True)
    for name, func in [("condition-p", cmd_gr_condition_p), ("semisimple", cmd_gr_semisimple)]:
        p = gr.add_parser(name, parents=[fmt])
        p.add_argument("ring")
        p.set_defaults(func=func)

    au = groups.add_parser("audit").add_subparsers(dest="command", required=True)
    p = au.add_parser("run", parents=[fmt])
    p.add_argument("dataset")
    p.add_argument("--strict", action="store_true", help="exit 3 when any identity fails")
    p.set_defaults(func=cmd_audit_run)

    gen = groups.add_parser("gen").add_subparsers(dest="command", required=True)
    p = gen.add_parser("synthetic-modular", parents=[fmt])
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_gen_synthetic)
    return parser


INPUT_ERRORS = (InputError, DatasetError, ScalarParseError, NonSplitError, DegenerateFormError,
                ResourceCapError, FileNotFoundError, IsADirectoryError, json.JSONDecodeError,
                ValueError)


def run(argv: Sequence[str]) -> tuple[int, bytes]:
    """Dispatch ``argv``; returns the exit code and the report bytes."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse: usage errors exit 2, --help exits 0
        return (EXIT_INPUT if exc.code else EXIT_OK), b""
    try:
        report = args.func(args)
    except INPUT_ERRORS as exc:
        print(f"fftc: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT, b""
    except Exception:  # noqa: BLE001 - last-resort boundary
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL, b""
    out = emit(report, args.format)
    code = EXIT_OK
    if getattr(args, "strict", False) and not report["summary"]["all_pass"]:
        print("fftc: audit found identity violations", file=sys.stderr)
        code = EXIT_AUDIT
    return code, out


def main(argv: Sequence[str] | None = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
