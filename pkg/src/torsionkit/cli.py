"""Command-line entry point ``torsionkit``.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad input or
usage.
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import io, lie, symmetric, tau as taumod, torsion, warped
from .errors import NotALieStructureError, SchemaError, TorsionKitError

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_TOL = 1e-8
CONFORMAL_TOL = warped.CONFORMAL_TOL


class InputError(Exception):
    pass


_SIMPLE = {"su": lie.su, "so": lie.so, "sp": lie.sp, "r": lie.abelian}


def generator(name: str) -> lie.MetricLieAlgebra:
    """Built-in algebras: ``su2``, ``su3``, ``so4``, ``so5``, ``sp2``, ``r3``,
    the long form ``so:7``, and sums such as ``su2+su2``."""
    parts = [p.strip() for p in name.split("+")]
    algs = []
    for part in parts:
        m = re.fullmatch(r"(su|so|sp|r)(?::)?(\d+)", part)
        if not m:
            raise InputError(f"unknown generator '{part}'")
        family, k = m.group(1), int(m.group(2))
        if (family == "su" and k < 2) or (family == "so" and k < 3) or \
                (family == "sp" and k < 1) or k > 12:
            raise InputError(f"unsupported size in '{part}'")
        if family == "su" and k == 2:
            algs.append(lie.su2())
        elif family == "su" and k == 3:
            algs.append(lie.su3())
        else:
            algs.append(_SIMPLE[family](k))
    alg = algs[0] if len(algs) == 1 else lie.direct_sum(*algs)
    return lie.MetricLieAlgebra(alg.structure, name)


def _report(command, inputs, seed, tolerances, results, residuals, verdict) -> dict:
    return {"command": command, "inputs": inputs, "seed": seed, "tolerances": tolerances,
            "results": results, "residuals": residuals, "verdict": verdict}


def _text(obj, prefix: str = "") -> str:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            nested = (isinstance(v, dict) and v) or (
                isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v))
            if nested:
                lines.append(f"{prefix}{k}:")
                lines.append(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for n, v in enumerate(obj):
            lines.append(f"{prefix}- [{n}]")
            lines.append(_text(v, prefix + "  "))
    else:
        lines.append(f"{prefix}{_scalar(obj)}")
    return "\n".join(line for line in lines if line)


def _scalar(v) -> str:
    if isinstance(v, float):
        return format(v, ".6g")
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def _emit(args, payload) -> None:
    text = io.dumps(payload) if args.format == "json" else _text(payload) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_decompose(args):
    obj, digest = io.load(args.file)
    t = io.parse_torsion(obj)
    if t.dim < 2:
        raise InputError("torsion decomposition needs n >= 2")
    d = torsion.decompose(t)
    info = torsion.classify_type(t, args.tol)
    total = t.norm()
    rel = d.residual_norm / total if total else d.residual_norm
    results = {
        "dim": t.dim,
        "norms": info["norms"],
        "type": torsion.type_label(info),
        "components": {"vectorial": io.form_to_obj(d.vectorial),
                       "twistorial": io.torsion_to_obj(d.twistorial),
                       "skew": io.form_to_obj(d.skew)},
    }
    verdict = "pass" if rel <= args.tol else "fail"
    return _report("decompose", {args.file: digest}, args.seed, {"type": args.tol},
                   results, {"reconstruction": rel}, verdict)


def _load_tau(path):
    obj, digest = io.load(path)
    form = io.parse_form(obj)
    if form.degree != 3:
        raise SchemaError(f"expected a 3-form, got degree {form.degree}", "form.degree")
    return form, digest


def cmd_check_jacobi(args):
    form, digest = _load_tau(args.file)
    d = taumod.jacobi_defects(form)
    verdicts = {k: v <= args.tol for k, v in d["relative"].items()}
    results = {"dim": form.dim, "norm": form.norm(),
               "kernel_dim": int(taumod.kernel_of_threeform(form).shape[1]),
               "verdicts": verdicts, "formulations_agree": len(set(verdicts.values())) == 1}
    verdict = "pass" if verdicts["derivation"] else "fail"
    return _report("check-jacobi", {args.file: digest}, args.seed, {"defect": args.tol},
                   results, {"raw": d["raw"], "relative": d["relative"]}, verdict)


def cmd_classify(args):
    form, digest = _load_tau(args.file)
    tols = {"defect": args.tol}
    try:
        rep = taumod.classify_bricks(form, args.tol, np.random.default_rng(args.seed))
    except NotALieStructureError as exc:
        return _report("classify", {args.file: digest}, args.seed, tols,
                       {"refused": str(exc)}, {"tau_jacobi": exc.defect}, "fail")
    bricks = [{"dims": b.dim, "rank": b.rank, "candidates": list(b.label.candidates),
               "label": b.label.label, "scale": b.scale, "case_tag": b.case_tag}
              for b in rep.bricks]
    results = {"dim": form.dim, "kernel_dim": rep.kernel_dim, "bricks": bricks}
    return _report("classify", {args.file: digest}, args.seed, tols, results,
                   rep.defects, "pass")


def cmd_example(args):
    kind = args.kind
    alg = generator(args.name)
    if kind == "algebra":
        return io.algebra_to_obj(alg)
    if kind == "canonical":
        return io.form_to_obj(lie.canonical_three_form(alg))
    if kind == "volume":
        return io.form_to_obj(taumod.KForm.basis(alg.dim, *range(alg.dim))
                              if alg.dim else taumod.KForm.zero(0, 0))
    build = symmetric.build_type_II if kind == "type2" else symmetric.build_type_IV
    p = build(alg)
    return {"model": {"kind": p.kind, "epsilon": p.epsilon, "psi_scale": p.psi_scale,
                      "g": io.algebra_to_obj(p.g),
                      "h_basis": p.h_basis.T.tolist(), "m_basis": p.m_basis.T.tolist(),
                      "residuals": symmetric.model_residuals(p)},
            "tau": io.form_to_obj(symmetric.example_tau(p))}


def cmd_verify_warped(args):
    obj, digest = io.load(args.file)
    base = io.parse_algebra(obj)
    if args.t_samples < 1:
        raise InputError("--t-samples must be positive")
    samples = tuple(np.linspace(-2.0, 2.0, args.t_samples))
    model = warped.WarpedModel(base, args.scale, samples)
    par = warped.check_connection_parallel(model)
    elem = warped.check_elemprop(model)
    conf = [warped.conformal_check(model, t) for t in samples]
    frames = [warped.warped_residuals(warped.warped_connection(model, t)) for t in samples]
    residuals = {
        "nabla_xi": par["max_xi"], "nabla_nu": par["max_nu"],
        **elem["max"],
        "warped_a": max(f["a"] for f in frames), "warped_b": max(f["b"] for f in frames),
        "warped_c": max(f["c"] for f in frames), "metric": max(f["metric"] for f in frames),
        "conformal": max(max(c["direct"], c["formula"]) for c in conf),
    }
    table = {"t": list(samples), "nabla_xi": par["xi"], "nabla_nu": par["nu"],
             **{k: elem[k] for k in elem if k not in ("t", "max")}}
    ok = all(v <= args.tol for k, v in residuals.items() if k != "conformal") and \
        residuals["conformal"] <= CONFORMAL_TOL
    results = {"base": base.name, "dim": base.dim, "tau_scale": args.scale,
               "t_samples": args.t_samples, "table": table}
    return _report("verify-warped", {args.file: digest}, args.seed,
                   {"residual": args.tol, "conformal": CONFORMAL_TOL},
                   results, residuals, "pass" if ok else "fail")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance")
    common.add_argument("--seed", type=int, default=lie.DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="torsionkit",
                                     description="Torsion types, tau-structures and warped models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="split a torsion tensor into T1/T2/T3")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check-jacobi", parents=[common], help="tau-Jacobi defects of a 3-form")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_jacobi)

    p = sub.add_parser("classify", parents=[common], help="kernel and bricks of a 3-form")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("example", parents=[common], help="emit a fixture file")
    p.add_argument("kind", choices=("type2", "type4", "canonical", "volume", "algebra"))
    p.add_argument("name", help="su2, su3, so4, so:7, su2+su2, ...")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify-warped", parents=[common], help="frame checks on N x R")
    p.add_argument("file", help="algebra file of the base")
    p.add_argument("--scale", type=float, default=1.0, help="multiple of the canonical form")
    p.add_argument("--t-samples", type=int, default=50)
    p.set_defaults(func=cmd_verify_warped)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except (SchemaError, InputError) as exc:
        print(f"torsionkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TorsionKitError as exc:
        print(f"torsionkit: precondition: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, payload)
    if isinstance(payload, dict) and "verdict" in payload:
        return EXIT_PASS if payload["verdict"] == "pass" else EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
