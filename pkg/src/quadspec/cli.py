"""Command-line front end.

    quadspec eig problem.json [--oracle] [--window LO,HI]
    quadspec weyl problem.json --grid ZRE0,ZRE1,ZIM0,ZIM1,N
    quadspec specmeasure problem.json
    quadspec transform problem.json --input f.json
    quadspec debranges problem.json --c C
    quadspec check problem.json

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 failed checks.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .bounded import eigenvalues_bounded, weyl_m_bounded
from .checks import run_checks
from .debranges import base_point_estimate, embedding_residual
from .errors import PreconditionError, QuadspecError, SingularParameterError, ValidationError
from .line import (HilbertElement, eigenvalues_halfline, eigenvalues_line, residue_mass, residue_radius,
                   singular_M, spectral_measure, transform_at_eigenvalues, weyl_m_halfline)
from .measures import CoefficientMeasure
from .pencil import real_pencil_eigenvalues
from .problem import Bounded, HalfLine, Problem, WholeLine

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3


def fmt(x: float) -> str:
    return f"{float(x):.16e}"


# ---------------------------------------------------------------------------
# problem files


def _measure(data, name: str, signed: bool) -> CoefficientMeasure:
    if data is None:
        return CoefficientMeasure(signed=signed)
    if not isinstance(data, dict):
        raise ValidationError(f"{name}: expected an object with 'atoms' and 'pieces'")
    unknown = set(data) - {"atoms", "pieces"}
    if unknown:
        raise ValidationError(f"{name}: unknown fields {sorted(unknown)}")
    atoms = data.get("atoms", [])
    pieces = data.get("pieces", [])
    for key, val in (("atoms", atoms), ("pieces", pieces)):
        if not isinstance(val, list):
            raise ValidationError(f"{name}.{key}: expected a list")
    try:
        return CoefficientMeasure(tuple(map(tuple, atoms)), tuple(map(tuple, pieces)), signed=signed)
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from None
    except TypeError as exc:
        raise ValidationError(f"{name}: malformed entry ({exc})") from None


def _geometry(data):
    if not isinstance(data, dict) or len(data) != 1:
        raise ValidationError("geometry: expected exactly one of whole_line, half_line, bounded")
    (kind, body), = data.items()
    if not isinstance(body, dict):
        raise ValidationError(f"geometry.{kind}: expected an object")
    try:
        if kind == "whole_line":
            if body:
                raise ValidationError("geometry.whole_line takes no parameters")
            return WholeLine()
        if kind == "half_line":
            return HalfLine(float(body["c"]), str(body.get("side", "+")), float(body.get("gamma", 0.0)))
        if kind == "bounded":
            return Bounded(float(body["a"]), float(body["b"]), float(body.get("alpha", 0.0)),
                           float(body.get("beta", 0.0)))
    except KeyError as exc:
        raise ValidationError(f"geometry.{kind}: missing field {exc}") from None
    except ValidationError as exc:
        raise ValidationError(f"geometry.{kind}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"geometry.{kind}: {exc}") from None
    raise ValidationError(f"geometry: unknown kind {kind!r}")


def problem_from_dict(data) -> Problem:
    if not isinstance(data, dict):
        raise ValidationError("problem file must contain a JSON object")
    unknown = set(data) - {"geometry", "omega", "upsilon"}
    if unknown:
        raise ValidationError(f"unknown top-level fields {sorted(unknown)}")
    if "geometry" not in data:
        raise ValidationError("missing field 'geometry'")
    return Problem(_measure(data.get("omega"), "omega", True),
                   _measure(data.get("upsilon"), "upsilon", False),
                   _geometry(data["geometry"]))


def parse_problem(path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(data)


def problem_to_dict(problem: Problem) -> dict:
    g = problem.geometry
    if isinstance(g, WholeLine):
        geo = {"whole_line": {}}
    elif isinstance(g, HalfLine):
        geo = {"half_line": {"c": g.c, "side": g.side, "gamma": g.gamma}}
    else:
        geo = {"bounded": {"a": g.a, "b": g.b, "alpha": g.alpha, "beta": g.beta}}

    def meas(mu):
        return {"atoms": [list(a) for a in mu.atoms], "pieces": [list(p) for p in mu.pieces]}

    return {"geometry": geo, "omega": meas(problem.omega), "upsilon": meas(problem.upsilon)}


def dump_problem(problem: Problem) -> str:
    return json.dumps(problem_to_dict(problem), indent=2)


def parse_element(path) -> HilbertElement:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict) or "knots" not in data or "values" not in data:
        raise ValidationError("element file needs 'knots' and 'values'")

    def num(v):
        return complex(v[0], v[1]) if isinstance(v, list) else complex(v)

    try:
        return HilbertElement(np.array(data["knots"], dtype=float), np.array([num(v) for v in data["values"]]),
                              tuple((p, num(v)) for p, v in data.get("second", [])))
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"element file: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def _parse_floats(text: str, n: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise ValidationError(f"{what}: expected {n} numbers, got {len(vals)}")
    return vals


def _window(args):
    if args.window is None:
        return None
    lo, hi = _parse_floats(args.window, 2, "--window")
    return lo, hi


def _eigen_list(problem: Problem, window) -> list[tuple[float, int]]:
    g = problem.geometry
    if isinstance(g, WholeLine):
        return [(float(l), 1) for l in eigenvalues_line(problem, window)]
    if isinstance(g, HalfLine):
        return eigenvalues_halfline(problem, window)
    return eigenvalues_bounded(problem, window)


def cmd_eig(problem: Problem, args, out, err) -> int:
    eig = _eigen_list(problem, _window(args))
    w = csv.writer(out, lineterminator="\n")
    whole = isinstance(problem.geometry, WholeLine)
    w.writerow(["lambda"] if whole else ["lambda", "multiplicity"])
    for lam, mult in eig:
        w.writerow([fmt(lam)] if whole else [fmt(lam), mult])
    if args.oracle:
        shoot = np.array([l for l, _ in eig if l != 0.0])
        oracle = real_pencil_eigenvalues(problem)
        if _window(args) is not None:
            lo, hi = _window(args)
            oracle = oracle[(oracle > lo) & (oracle < hi)]
        if len(shoot) != len(oracle):
            err.write(f"oracle mismatch: {len(shoot)} shooting roots vs {len(oracle)} pencil roots\n")
            return EXIT_NUMERIC
        dev = float(np.max(np.abs(shoot - oracle) / np.maximum(1, np.abs(oracle)))) if len(shoot) else 0.0
        err.write(f"oracle_max_deviation={fmt(dev)}\n")
        if dev > 1e-8:
            return EXIT_NUMERIC
    return EXIT_OK


def cmd_weyl(problem: Problem, args, out, err) -> int:
    x0, x1, y0, y1, n = _parse_floats(args.grid, 5, "--grid")
    if n < 1 or n != int(n):
        raise ValidationError("--grid: n must be a positive integer")
    n = int(n)
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    g = problem.geometry
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["z_re", "z_im", "m_re", "m_im"])
    for x in xs:
        for y in ys:
            z = complex(x, y)
            try:
                if isinstance(g, WholeLine):
                    m = singular_M(problem, z)
                elif isinstance(g, HalfLine):
                    m = weyl_m_halfline(problem, z, g.c, g.gamma, g.side)
                else:
                    m = weyl_m_bounded(problem, z)
            except SingularParameterError:
                m = complex(np.nan, np.nan)
            w.writerow([fmt(x), fmt(y), fmt(m.real), fmt(m.imag)])
    return EXIT_OK


def _require_whole_line(problem: Problem, what: str):
    if not isinstance(problem.geometry, WholeLine):
        raise ValidationError(f"{what} requires a whole_line geometry")


def cmd_specmeasure(problem: Problem, args, out, err) -> int:
    _require_whole_line(problem, "specmeasure")
    sm = spectral_measure(problem, _window(args))
    lams = [d.lam for d in sm]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["lambda", "mass", "residue_check"])
    for k, d in enumerate(sm):
        w.writerow([fmt(d.lam), fmt(d.mass), fmt(residue_mass(problem, d.lam, residue_radius(lams, k)))])
    return EXIT_OK


def cmd_transform(problem: Problem, args, out, err) -> int:
    _require_whole_line(problem, "transform")
    f = parse_element(args.input)
    sm = spectral_measure(problem, _window(args))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["lambda", "mass", "fhat_re", "fhat_im"])
    fhat = transform_at_eigenvalues(problem, f, [d.lam for d in sm])
    for d, v in zip(sm, fhat):
        w.writerow([fmt(d.lam), fmt(d.mass), fmt(v.real), fmt(v.imag)])
    return EXIT_OK


_ZETA_PAIRS = [(0j, 0j), (0.5 + 1j, -0.3 + 0.7j), (-1.2 + 0.4j, 2.0 - 0.5j), (0.1 - 1.5j, 0.1 - 1.5j)]


def cmd_debranges(problem: Problem, args, out, err) -> int:
    _require_whole_line(problem, "debranges")
    c = float(args.c)
    sm = spectral_measure(problem)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["kind", "zeta1_re", "zeta1_im", "zeta2_re", "zeta2_im", "value"])
    for z1, z2 in _ZETA_PAIRS:
        r = embedding_residual(problem, z1, z2, c, sm)
        w.writerow(["embedding_residual", fmt(z1.real), fmt(z1.imag), fmt(z2.real), fmt(z2.imag), fmt(r)])
    est = base_point_estimate(problem, c, sm)
    nan = fmt(np.nan)
    w.writerow(["base_point_estimate", nan, nan, nan, nan, fmt(est)])
    w.writerow(["exp_minus_c", nan, nan, nan, nan, fmt(np.exp(-c))])
    return EXIT_OK


def cmd_check(problem: Problem, args, out, err) -> int:
    results = run_checks(problem)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["check", "status", "value", "tolerance"])
    for r in results:
        w.writerow([r.name, "pass" if r.passed else "fail", fmt(r.value), fmt(r.tolerance)])
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadspec", description="Quadratic spectral problems with measure coefficients.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("problem", help="problem JSON file")
        sp.add_argument("-o", "--output", help="write CSV here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("eig", cmd_eig, "eigenvalues")
    sp.add_argument("--oracle", action="store_true", help="cross-check against the pencil oracle")
    sp.add_argument("--window", help="LO,HI search window (default: pencil radius + 1)")
    sp = add("weyl", cmd_weyl, "Weyl function samples on a grid")
    sp.add_argument("--grid", required=True, help="ZRE0,ZRE1,ZIM0,ZIM1,N")
    sp = add("specmeasure", cmd_specmeasure, "spectral measure with residue cross-check")
    sp.add_argument("--window")
    sp = add("transform", cmd_transform, "transform of an element at the eigenvalues")
    sp.add_argument("--input", required=True, help="element JSON (knots, values, second)")
    sp.add_argument("--window")
    sp = add("debranges", cmd_debranges, "embedding residuals and base-point estimate")
    sp.add_argument("--c", required=True, type=float, help="base point (an atom position)")
    add("check", cmd_check, "invariant suite")
    return p


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    buf = io.StringIO()
    try:
        problem = parse_problem(args.problem)
        code = args.func(problem, args, buf, stderr)
    except (ValidationError, PreconditionError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except QuadspecError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except np.linalg.LinAlgError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return code


def main(argv=None):
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
