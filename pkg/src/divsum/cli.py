"""``divsum`` command line: analyze, sum, ce, orbital.

Every run prints one JSON document on stdout.  Exit codes: 0 success,
2 malformed spec, 3 analysis/domain error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import jsonschema

from .coboundary import FiniteDynSys, TrigPoly, nonmeasurability_verdict, solve_finite_ce, solve_trig_ce
from .errors import DivsumError, NotC1Summable, NotSummable, NotRecurrentOnWindow, WindowExhausted
from .ergodic import OrbitalSeriesSpec, default_seed, orbital_report
from .poly import Poly
from .quasiexp import DEG_MAX, QuasiExpSeries, decompose, detect_recurrence, epsilon1, is_summable
from .scalar import ONE, format_scalar, is_exact, parse_scalar
from .sequences import SampledSeries, standard_sum
from .summation import cesaro1, euler_sum, generating_function, periodic_sum, radius

EXIT_OK, EXIT_SCHEMA, EXIT_ANALYSIS, EXIT_IO = 0, 2, 3, 4

_SCALAR = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^\s*[-+]?\d+(\.\d+)?(\s*/\s*\d+)?\s*$"},
        {"type": "array", "minItems": 2, "maxItems": 2,
         "items": {"oneOf": [{"type": "number"}, {"type": "string"}]}},
    ]
}
_COEFF_MAP = {"type": "object", "patternProperties": {r"^[1-9]\d*$": _SCALAR}, "additionalProperties": False}

SCHEMAS = {
    "samples": {
        "type": "object",
        "properties": {"type": {"const": "samples"}, "values": {"type": "array", "minItems": 1, "items": _SCALAR}},
        "required": ["type", "values"],
        "additionalProperties": False,
    },
    "quasiexp": {
        "type": "object",
        "properties": {
            "type": {"const": "quasiexp"},
            "head": {"type": "array", "items": _SCALAR},
            "modes": {"type": "array", "items": {
                "type": "object",
                "properties": {"lambda": _SCALAR, "pi": {"type": "array", "items": _SCALAR}},
                "required": ["lambda", "pi"],
                "additionalProperties": False,
            }},
        },
        "required": ["type"],
        "additionalProperties": False,
    },
    "trigpoly": {
        "type": "object",
        "properties": {
            "type": {"const": "trigpoly"},
            "q": {"type": "integer", "minimum": 2},
            "cos": _COEFF_MAP,
            "sin": _COEFF_MAP,
            "c0": _SCALAR,
        },
        "required": ["type", "q"],
        "additionalProperties": False,
    },
    "findyn": {
        "type": "object",
        "properties": {
            "type": {"const": "findyn"},
            "f": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            "xi0": {"type": "array", "items": _SCALAR},
        },
        "required": ["type", "f", "xi0"],
        "additionalProperties": False,
    },
}

CSV_HELP = "CSV columns: n, exact_norm, numeric_norm, measure_estimate, exact_norm_sq"


class SpecError(Exception):
    pass


# I/O helpers ----------------------------------------------------------------

def _read_spec(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    if not isinstance(spec, dict) or spec.get("type") not in SCHEMAS:
        raise SpecError(f"spec type must be one of {sorted(SCHEMAS)}")
    try:
        jsonschema.validate(spec, SCHEMAS[spec["type"]])
    except jsonschema.ValidationError as exc:
        raise SpecError(f"schema violation at {list(exc.absolute_path)}: {exc.message}") from None
    return spec


def _parse(token):
    try:
        return parse_scalar(token)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def _value(v):
    """JSON rendering: exact values as strings, floats as numbers or [re, im]."""
    if is_exact(v):
        return format_scalar(v)
    z = complex(v)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _float(v):
    z = complex(v)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _sum_json(sv) -> dict:
    return {"method": sv.method, "value": _value(sv.value), "float": _float(sv.value), "exact": sv.exact}


def _series_from_spec(spec: dict):
    """SampledSeries for samples specs, QuasiExpSeries for quasiexp specs."""
    if spec["type"] == "samples":
        return SampledSeries([_parse(v) for v in spec["values"]])
    if spec["type"] == "quasiexp":
        head = [_parse(v) for v in spec.get("head", [])]
        modes = []
        for m in spec.get("modes", []):
            lam = _parse(m["lambda"])
            if (is_exact(lam) and not lam) or lam == 0:
                raise SpecError("mode with lambda = 0; use the head for finite parts")
            modes.append((lam, Poly([_parse(c) for c in m["pi"]])))
        return QuasiExpSeries(head, modes)
    raise SpecError(f"expected a series spec, got type {spec['type']!r}")


def _deg_max(x: SampledSeries) -> int:
    return max(0, min(DEG_MAX, (len(x) - 2) // 2))


def _as_quasiexp(x):
    if isinstance(x, QuasiExpSeries):
        return x, None
    phi = detect_recurrence(x, _deg_max(x))
    return decompose(phi, x), phi


def _spectrum_json(q: QuasiExpSeries) -> list:
    return [{"value": _value(v), "multiplicity": m} for v, m in q.spectrum()]


# subcommands ----------------------------------------------------------------

def cmd_analyze(spec: dict) -> dict:
    x = _series_from_spec(spec)
    try:
        q, phi = _as_quasiexp(x)
    except NotRecurrentOnWindow as exc:
        return {"in_Q": False, "summable": True, "caveat": "x ∉ Q on window", "reason": str(exc)}
    if phi is None:
        phi = q.min_poly()
    out = {
        "in_Q": True,
        "min_poly": phi.format(),
        "min_poly_coeffs": [_value(c) for c in phi.coeffs],
        "spectrum": _spectrum_json(q),
        "exact_roots": q.exact,
    }
    # an exact minimal polynomial decides 1 ∈ spec(x) without touching roots
    has_one = (not phi(ONE)) if phi.is_exact() else not is_summable(q)
    out["summable"] = not has_one
    if has_one:
        out["epsilon1_reason"] = NotSummable.reason
    else:
        try:
            out["epsilon1"] = _value(_eps(x).value)
        except DivsumError as exc:
            out["epsilon1_reason"] = f"{type(exc).__name__}: {exc}"
    try:
        gf = generating_function(x if isinstance(x, SampledSeries) and x.exact else q,
                                 _deg_max(x) if isinstance(x, SampledSeries) else DEG_MAX)
        out["generating_fn"] = gf.fn.to_dict()
        out["poles"] = [{"t": _value(t), "order": m} for t, m in gf.poles]
    except DivsumError as exc:
        out["generating_fn_reason"] = f"{type(exc).__name__}: {exc}"
    r = radius(q)
    out["radius"] = "inf" if math.isinf(r) else r
    return out


def _standard(x):
    if isinstance(x, QuasiExpSeries):
        x = SampledSeries([complex(v) for v in x.window_float(400)]) if not x.exact else x.window(400)
    return standard_sum(x)


def _cesaro(x, tol):
    if isinstance(x, QuasiExpSeries):
        if any(abs(complex(lam)) > 1 + 1e-12 for lam, _ in x.modes):
            raise NotC1Summable("terms grow geometrically (|λ| > 1 in spec(x))")
        return cesaro1(x.window_float(2**15), tol)
    return cesaro1(x, tol)


def _periodic(x, period):
    if period is None:
        raise SpecError("--method periodic needs --period")
    if isinstance(x, QuasiExpSeries):
        x = x.window(2 * period)
    return periodic_sum(x, period)


def _euler(x):
    return euler_sum(x, _deg_max(x)) if isinstance(x, SampledSeries) else euler_sum(x)


def _eps(x):
    return epsilon1(x, _deg_max(x)) if isinstance(x, SampledSeries) else epsilon1(x)


def _precheck_spectrum(x):
    """Refuse every method when the window is recurrent with 1 in the spectrum."""
    try:
        if isinstance(x, SampledSeries):
            if x.exact and len(x) >= 4:
                phi = detect_recurrence(x, _deg_max(x))
                if not phi(ONE):
                    raise NotSummable("1 ∈ spec(x): no summation method applies")
        elif ONE in x.spectrum():
            raise NotSummable("1 ∈ spec(x): no summation method applies")
    except (NotRecurrentOnWindow, WindowExhausted):
        pass


def cmd_sum(spec: dict, method: str, period=None, crosscheck=False, tol=1e-6) -> dict:
    x = _series_from_spec(spec)
    _precheck_spectrum(x)
    runners = {
        "standard": lambda: _standard(x),
        "cesaro1": lambda: _cesaro(x, tol),
        "euler": lambda: _euler(x),
        "epsilon1": lambda: _eps(x),
        "periodic": lambda: _periodic(x, period),
    }
    if not crosscheck:
        return _sum_json(runners[method]())
    # standard and (C,1) need long windows; sample them from the detected
    # recurrence rather than the (short) window itself
    extended = []
    if isinstance(x, SampledSeries):
        try:
            ext, _ = _as_quasiexp(x)
            runners["standard"] = lambda: _standard(ext)
            runners["cesaro1"] = lambda: _cesaro(ext, max(tol, 1e-4))
            extended = ["cesaro1", "standard"]
        except DivsumError:
            pass
    results, skipped = {}, {}
    for name, run in runners.items():
        if name == "periodic" and period is None:
            skipped[name] = "no --period given"
            continue
        try:
            results[name] = run()
        except DivsumError as exc:
            skipped[name] = f"{type(exc).__name__}: {exc}"
    if not results:
        raise NotSummable("no method applies")
    ref = results.get(method) or next(iter(results.values()))
    agree = True
    for sv in results.values():
        if sv.exact and ref.exact:
            agree &= sv.value == ref.value
        else:
            loose = 1e-4 if "cesaro1" in (sv.method, ref.method) else 1e-6
            agree &= abs(complex(sv.value) - complex(ref.value)) <= loose * max(1.0, abs(complex(ref.value)))
    out = _sum_json(ref)
    out["crosscheck"] = {
        "agree": bool(agree),
        "results": {k: _sum_json(v) for k, v in results.items()},
        "skipped": skipped,
        "extended_from_recurrence": extended,
    }
    if not agree:
        raise DivsumError("crosscheck disagreement: " + json.dumps(out["crosscheck"], sort_keys=True))
    return out


def _trig_from_spec(spec: dict) -> TrigPoly:
    try:
        return TrigPoly.from_dict(spec)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def cmd_ce(spec: dict, mode: str = "solve") -> dict:
    if spec["type"] == "findyn":
        try:
            sys_ = FiniteDynSys(spec["f"], [_parse(v) for v in spec["xi0"]])
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        return solve_finite_ce(sys_).to_dict()
    if spec["type"] != "trigpoly":
        raise SpecError("ce needs a trigpoly or findyn spec")
    theta, q = _trig_from_spec(spec), spec["q"]
    if mode == "verdict":
        return nonmeasurability_verdict(theta, q).to_dict(include_psi=True)
    return solve_trig_ce(theta, q).to_dict(include_psi=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def cmd_orbital(spec: dict, n_max=64, gamma=None, seed=None, out=None) -> dict:
    if spec["type"] != "trigpoly":
        raise SpecError("orbital needs a trigpoly spec")
    theta = _trig_from_spec(spec)
    report, bundle = orbital_report(OrbitalSeriesSpec(theta, spec["q"]), n_max=n_max, gamma=gamma,
                                    seed=default_seed() if seed is None else seed)
    bundle = _jsonable(bundle)
    if out:
        with open(out + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
        with open(out + ".json", "w", encoding="utf-8") as fh:
            fh.write(_dumps(bundle) + "\n")
        bundle = dict(bundle, files=[out + ".csv", out + ".json"])
    else:
        bundle = dict(bundle, table=list(report.rows()))
    return bundle


# entry point ----------------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="divsum",
        description="Summation of divergent series and cohomological equations. "
                    "SPEC is a JSON file, or '-' for stdin.",
        epilog="Exit codes: 0 ok, 2 malformed spec, 3 analysis error, 4 I/O error. "
               "DIVSUM_SEED overrides the default seed.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="minimal polynomial, spectrum, summability, ε₁, generating function")
    a.add_argument("spec")
    s = sub.add_parser("sum", help="sum a series by one method")
    s.add_argument("spec")
    s.add_argument("--method", choices=["standard", "cesaro1", "euler", "epsilon1", "periodic"], default="epsilon1")
    s.add_argument("--period", type=int)
    s.add_argument("--tol", type=float, default=1e-6, help="Cesàro block tolerance")
    s.add_argument("--crosscheck", action="store_true", help="run every applicable method and require agreement")
    c = sub.add_parser("ce", help="solve or decide psi(t) - psi(qt) = theta(t), or a finite system")
    c.add_argument("spec")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--solve", dest="mode", action="store_const", const="solve")
    g.add_argument("--verdict", dest="mode", action="store_const", const="verdict")
    c.set_defaults(mode="solve")
    o = sub.add_parser("orbital", help="orbital series report; " + CSV_HELP, description=CSV_HELP)
    o.add_argument("spec")
    o.add_argument("--n-max", type=int, default=64)
    o.add_argument("--gamma", type=float)
    o.add_argument("--seed", type=int)
    o.add_argument("--out", help="write OUT.csv and OUT.json")
    return p


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        spec = _read_spec(args.spec)
        if args.command == "analyze":
            result = cmd_analyze(spec)
        elif args.command == "sum":
            result = cmd_sum(spec, args.method, args.period, args.crosscheck, args.tol)
        elif args.command == "ce":
            result = cmd_ce(spec, args.mode)
        else:
            if args.n_max < 0:
                raise SpecError("--n-max must be >= 0")
            result = cmd_orbital(spec, args.n_max, args.gamma, args.seed, args.out)
    except SpecError as exc:
        stdout.write(_dumps({"error": "SchemaError", "reason": "malformed spec", "detail": str(exc)}) + "\n")
        return EXIT_SCHEMA
    except DivsumError as exc:
        stdout.write(_dumps(exc.to_dict()) + "\n")
        return EXIT_ANALYSIS
    except OSError as exc:
        stdout.write(_dumps({"error": "IOError", "reason": "I/O failure", "detail": str(exc)}) + "\n")
        return EXIT_IO
    stdout.write(_dumps(_jsonable(result)) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
