"""Command-line front end: ``python -m shintani compute|verify|eval``.

Exit codes: 0 success, 1 other library error, 2 invalid problem (schema,
unit modulus, bad datum), 3 precision exhausted, 4 an identity check failed
(the report is still written).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources

import jsonschema
import mpmath

from . import __version__, barnes, invariants as inv, suites
from .cones import Fan, FieldSpace, cone_make
from .errors import InvalidDatum, NotQuadratic, PrecisionExhausted, ShintaniError
from .field import FractionalIdeal, NumberField
from .precision import DEFAULT, PrecisionContext

EXIT_OK, EXIT_ERROR, EXIT_SCHEMA, EXIT_PRECISION, EXIT_IDENTITY = 0, 1, 2, 3, 4
VERIFY_CHOICES = ("factorization", "independence", "relation", "combinatorics", "sine-oracles")
EVAL_CHOICES = ("barnes-zeta-deriv0", "multiple-sine", "shintani-zeta0")


class ProblemError(Exception):
    """The problem file is unreadable, schema-invalid or describes an invalid datum."""


def load_schema(name: str) -> dict:
    return json.loads(resources.files("shintani").joinpath("schemas", name).read_text())


# -- problem parsing -----------------------------------------------------------

def load_problem(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError(f"cannot read problem file {path}: {exc}") from exc
    validator = jsonschema.Draft202012Validator(load_schema("problem.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise ProblemError(f"schema error at {where}: {e.message}")
    return doc


def build_context(doc: dict, args) -> PrecisionContext:
    kw = {}
    prec = doc.get("precision", {})
    if "bits" in prec:
        kw["bits"] = prec["bits"]
    if "target_error" in prec:
        kw["target_error"] = float(prec["target_error"])
    for key in ("shift_ratio", "max_em_order", "sign_bits_cap"):
        if key in prec:
            kw[key] = prec[key]
    if "seed" in doc:
        kw["seed"] = doc["seed"]
    if args.precision is not None:
        kw["bits"] = args.precision
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.tolerance_scale is not None:
        kw["tolerance_scale"] = args.tolerance_scale
    if kw.get("bits", DEFAULT.bits) > DEFAULT.bits and "target_error" not in kw:
        # extra bits buy a proportionally smaller default target
        kw["target_error"] = DEFAULT.target_error * 2.0 ** (DEFAULT.bits - kw["bits"])
    return DEFAULT.with_(**kw)


def build_field(spec: dict, ctx: PrecisionContext) -> NumberField:
    try:
        if spec["mode"] == "quadratic":
            return NumberField.quadratic(spec["D"])
        return NumberField.from_polynomial(spec["polynomial"], integral_basis=spec.get("integral_basis"),
                                           embedding_order=spec.get("embedding_order"),
                                           sign_bits_cap=ctx.sign_bits_cap)
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"invalid field: {exc}") from exc


def _element(F: NumberField, coords):
    if len(coords) != F.n:
        raise ProblemError(f"element {coords} has {len(coords)} coordinates, expected {F.n}")
    return F.element([Fraction(c.replace(" ", "")) for c in coords])


def _ideal(F: NumberField, spec: dict) -> FractionalIdeal:
    try:
        return FractionalIdeal.generated_by(F, [_element(F, g) for g in spec["generators"]])
    except ValueError as exc:
        raise ProblemError(f"invalid ideal: {exc}") from exc


def build_datum(doc: dict, ctx: PrecisionContext):
    """(datum, fan) from a validated problem document."""
    F = build_field(doc["field"], ctx)
    f = _ideal(F, doc["ideal_f"])
    a0 = _ideal(F, doc["ideal_a0"]) if "ideal_a0" in doc else None
    z = _element(F, doc["z"]) if "z" in doc else None
    units = [_element(F, u) for u in doc["units"]] if "units" in doc else None
    mu = [_element(F, m) for m in doc["mu"]] if "mu" in doc else None
    try:
        datum = inv.make_datum(F, f, a0, z, units=units, mu=mu)
    except (InvalidDatum, NotQuadratic) as exc:
        raise ProblemError(str(exc)) from exc
    fan_spec = doc.get("fan", {"kind": "standard-quadratic"})
    if fan_spec["kind"] == "standard-quadratic":
        if not F.is_quadratic:
            raise ProblemError("the standard fan is only available for quadratic fields; give fan.cones")
        fan = inv.standard_fan(datum)
    else:
        space = FieldSpace(F)
        try:
            cones = tuple(cone_make([_element(F, g) for g in c], space=space) for c in fan_spec["cones"])
        except ShintaniError as exc:
            raise ProblemError(f"invalid fan: {exc}") from exc
        fan = Fan(cones, tuple(datum.units.generators), 1, True)
    return datum, fan


# -- reports -------------------------------------------------------------------

def _header(kind: str, ctx: PrecisionContext) -> dict:
    return {"kind": kind,
            "tool": {"name": "shintani", "version": __version__},
            "precision": {"bits": ctx.bits, "target_error": f"{ctx.target_error:.1e}",
                          "tolerance_scale": repr(float(ctx.tolerance_scale))},
            "seed": ctx.seed}


def _datum_json(datum) -> dict:
    return {"field": repr(datum.F),
            "f": [str(b) for b in datum.f.basis],
            "a0": [str(b) for b in datum.a0.basis],
            "z": str(datum.z),
            "b": [str(x) for x in datum.b.basis],
            "units": [str(u) for u in datum.units.generators],
            "mu": [str(m) for m in datum.mu],
            "norm_b_inv_f": str(datum.norm_bf())}


def write_report(report: dict, out: str | None):
    jsonschema.validate(report, load_schema("report.schema.json"))
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------

def cmd_compute(args) -> int:
    doc = load_problem(args.problem)
    if "field" not in doc:
        raise ProblemError("compute needs a field problem")
    ctx = build_context(doc, args)
    t0 = time.perf_counter()
    with mpmath.workprec(ctx.bits):
        datum, fan = build_datum(doc, ctx)
        rep = inv.compute_report(datum, fan, ctx)
    report = _header("compute", ctx)
    report["datum"] = _datum_json(datum)
    report.update(rep.to_json())
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    write_report(report, args.out)
    return EXIT_OK if rep.passed else EXIT_IDENTITY


def _verify_field(which: str, doc: dict, ctx: PrecisionContext):
    datum, fan = build_datum(doc, ctx)
    n = datum.n
    res = []
    if which == "factorization":
        res += inv.verify_factorization(datum, fan, ctx)
    elif which == "independence":
        checks = doc.get("checks", {})
        ks = tuple(checks.get("rescale", (2, 3)))
        lam = _element(datum.F, checks["lambda"]) if "lambda" in checks else None
        for i in range(1, n + 1):
            res += inv.verify_independence(datum, fan, i, ctx, ks=ks, lam=lam)
    elif which == "relation":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                res += inv.verify_relation(datum, fan, i, j, ctx)
        res += inv.verify_mu_flip(datum, fan, ctx)
    return datum, fan, res


def cmd_verify(args) -> int:
    doc = load_problem(args.problem) if args.problem else {"synthetic": {}}
    ctx = build_context(doc, args)
    which = args.which
    t0 = time.perf_counter()
    residuals, suite_results = [], []
    with mpmath.workprec(ctx.bits):
        if which in ("factorization", "independence", "relation"):
            if "field" not in doc:
                raise ProblemError(f"verify {which} needs a field problem")
            _, _, residuals = _verify_field(which, doc, ctx)
        elif which == "combinatorics":
            syn = doc.get("synthetic", {})
            trials = syn.get("trials", 10_000)
            suite_results += suites.combinatorics(ctx.seed, trials, tuple(syn.get("dims", (2, 3))))
            if "field" in doc:
                _, fan = build_datum(doc, ctx)
                suite_results += suites.cover_trials(fan, ctx.seed, trials)
        else:
            suite_results.append(suites.lerch_oracle(ctx))
            suite_results.append(suites.sine_oracle(ctx.seed, 50, ctx))
    report = _header("verify", ctx)
    report["which"] = which
    report["residuals"] = [r.to_json() for r in residuals]
    report["suites"] = [s.to_json() for s in suite_results]
    ok = all(r.passed for r in residuals) and all(s.passed for s in suite_results)
    report["status"] = "PASSED" if ok else "FAILED"
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    write_report(report, args.out)
    return EXIT_OK if ok else EXIT_IDENTITY


def _rationals(text: str) -> tuple:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"expected exact rationals, got {text!r}") from exc


def cmd_eval(args) -> int:
    ctx = build_context({}, args)
    fn = args.function
    with mpmath.workprec(ctx.bits):
        if fn == "shintani-zeta0":
            if args.x is None or args.omega is None:
                raise ProblemError("shintani-zeta0 needs --x and --omega")
            omega = tuple(_rationals(w) for w in args.omega.split(";"))
            x = _rationals(args.x)
            if len(x) != len(omega):
                raise ProblemError("--x needs one coordinate per generator in --omega")
            value = barnes.shintani_zeta_at0(x, omega)
            out = {"function": fn, "value": str(value), "exact": True}
        else:
            if args.z is None or args.omega is None:
                raise ProblemError(f"{fn} needs --z and --omega")
            z, omega = _rationals(args.z)[0], _rationals(args.omega)
            if fn == "barnes-zeta-deriv0":
                est = barnes.barnes_zeta_deriv0(z, omega, ctx)
            else:
                est = barnes.multiple_sine(z, omega, ctx)
            digits = max(15, int(ctx.bits * 0.30103) - 6)
            out = {"function": fn, "value": mpmath.nstr(est.value, digits),
                   "error": mpmath.nstr(est.error, 3), "exact": False}
    sys.stdout.write(json.dumps(out) + "\n")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------

def _common(p: argparse.ArgumentParser, problem_required: bool):
    p.add_argument("--problem", required=problem_required, help="problem JSON file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--precision", type=int, metavar="BITS", help="working precision in bits")
    p.add_argument("--seed", type=int, help="seed for randomized suites")
    p.add_argument("--tolerance-scale", type=float, metavar="X", help="multiply all tolerances by X")
    p.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identity)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shintani", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="full invariant report for one ray class")
    _common(c, True)
    v = sub.add_parser("verify", help="run one verification suite")
    v.add_argument("which", choices=VERIFY_CHOICES)
    _common(v, False)
    e = sub.add_parser("eval", help="evaluate one special function")
    e.add_argument("function", choices=EVAL_CHOICES)
    e.add_argument("--z", help="shift, an exact rational")
    e.add_argument("--omega", help="periods: 'w1,w2,..' (Barnes) or 'a,b;c,d' (one m-vector per generator)")
    e.add_argument("--x", help="barycentric coordinates 'x1,..,xd'")
    _common(e, False)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    handler = {"compute": cmd_compute, "verify": cmd_verify, "eval": cmd_eval}[args.command]
    try:
        return handler(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ShintaniError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
