"""Command-line front end.

Exit codes: 0 success, 1 numerical failure (non-convergence or a verified
identity out of tolerance), 2 schema/config violation.  All structured output
is JSON (complex numbers as [re, im] pairs); tabular reports are CSV.
Outputs are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from .fieldio import (
    SchemaError,
    complex_pair,
    read_field_file,
    read_json,
    validate_keys,
    write_field_file,
)
from .geometry.grid import GridChart
from .geometry.metric import fuchsian_flat, metric_from_lambda_w
from .goldman import (
    PreconditionError,
    Variation,
    fiber_pairing_closed_form,
    pairing,
    variation_q1,
    variation_q2,
)
from .lie import (
    build_chevalley_basis,
    build_root_system,
    defining_representation,
    highest_weight_vectors,
    principal_triple,
    toda_coefficients,
    xi_permutation,
    ConfigurationError,
)
from .opers import (
    OperConnection,
    bd_oper_connection,
    connection_relation_check,
    relative_position_check,
)
from .connection.assemble import ConnectionForm, assemble_connection, curvature
from .connection.holonomy import holonomy as run_holonomy, loop_path, trace_invariants
from .suite import run_suite, suite_csv
from .toda.newton import newton_solve
from .toda.problem import make_problem, real_locus_q2bar


EXIT_NUMERICAL = 1
EXIT_SCHEMA = 2

TYPE_NAMES = {"A1": ("A", 1), "A2": ("A", 2), "C2": ("C", 2), "G2": ("G", 2)}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _lie_stack(typ: str, rank: int):
    rs = build_root_system(typ, rank)
    cb = build_chevalley_basis(rs)
    pt = principal_triple(cb)
    td = toda_coefficients(cb, pt)
    return rs, cb, pt, td


def _stack_from_name(name: str):
    if name not in TYPE_NAMES:
        raise SchemaError(f"--type: unknown Lie type {name!r} "
                          f"(expected one of {sorted(TYPE_NAMES)})")
    return _lie_stack(*TYPE_NAMES[name])


def _cpx(v: complex):
    return [float(v.real), float(v.imag)]


@click.group()
@click.option("--quiet", is_flag=True, default=False, help="suppress stdout chatter")
@click.pass_context
def main(ctx, quiet):
    """Lie-theoretic Toda systems, flat connections, and their identities."""
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet


def _say(ctx, msg):
    if not ctx.obj.get("quiet"):
        click.echo(msg)


# --------------------------------------------------------------------------
# lie dump
# --------------------------------------------------------------------------

@main.group()
def lie():
    """Lie-theoretic data tables."""


@lie.command("dump")
@click.option("--type", "cartan_type", required=True, help="Cartan type letter (A/B/C/D/G)")
@click.option("--rank", required=True, type=int)
@click.option("--out", "out_path", default=None, help="output JSON path (default stdout)")
@click.pass_context
def lie_dump(ctx, cartan_type, rank, out_path):
    try:
        rs, cb, pt, td = _lie_stack(cartan_type, rank)
    except ConfigurationError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    a_mat = td.a_matrix("cartan")
    doc = {
        "type": cartan_type,
        "rank": rank,
        "d": td.d,
        "r": [float(x) for x in td.r],
        "r_exact": [[Fraction(x).numerator, Fraction(x).denominator] for x in td.r],
        "n": list(td.n),
        "a_matrix": [[float(v) for v in row] for row in a_mat],
        "a_delta": [float(v) for v in td.a_delta()],
        "xi": list(xi_permutation(rs)),
        "positive_roots": [list(map(int, r)) for r in rs.roots if rs.height(r) > 0],
        "bracket_table_nonzero": [
            [int(a), int(b), int(c), float(v.real)]
            for (a, b, c), v in np.ndenumerate(cb.bracket_table()) if v != 0
        ],
    }
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out_path:
        Path(out_path).write_text(text)
        _say(ctx, f"wrote {out_path}")
    else:
        click.echo(text, nl=False)


# --------------------------------------------------------------------------
# toda solve
# --------------------------------------------------------------------------

def _metric_from_spec(spec, chart, where):
    validate_keys(spec, {"kind", "lam", "w_linear", "amp", "path"}, {"kind"}, where)
    kind = spec["kind"]
    if kind == "flat":
        lam = complex_pair(spec.get("lam", 1.0), f"{where}.lam")
        return fuchsian_flat(chart, lam.real if lam.imag == 0 else lam)
    if kind == "trig":
        X, Y = chart.nodes()
        amp = float(spec.get("amp", 0.3))
        lam = np.exp(amp * np.sin(2 * np.pi * X)
                     + 0.6 * amp * np.cos(2 * np.pi * (X + Y)) + 1.0)
        a, b = spec.get("w_linear", [0.0, 0.0])
        return metric_from_lambda_w(chart, lam, w_linear=(a, b))
    if kind == "file":
        if "path" not in spec:
            raise SchemaError(f"{where}.path: required for kind 'file'")
        N, fields, _ = read_field_file(spec["path"])
        if N != chart.N:
            raise SchemaError(f"{where}: metric grid N={N} != config N={chart.N}")
        for name in ("lam", "p", "s"):
            if name not in fields:
                raise SchemaError(f"{where}: metric file missing field {name!r}")
        from .geometry.metric import ComplexMetricField
        return ComplexMetricField(chart=chart, lam=fields["lam"],
                                  p=fields["p"], s=fields["s"])
    raise SchemaError(f"{where}.kind: unknown metric kind {kind!r}")


def _differential_from_spec(spec, chart, where):
    validate_keys(spec, {"kind", "value", "path", "name"}, {"kind"}, where)
    kind = spec["kind"]
    if kind == "constant":
        return np.full((chart.N, chart.N),
                       complex_pair(spec.get("value", 0.0), f"{where}.value"))
    if kind == "file":
        if "path" not in spec:
            raise SchemaError(f"{where}.path: required for kind 'file'")
        N, fields, _ = read_field_file(spec["path"])
        name = spec.get("name", "q")
        if N != chart.N:
            raise SchemaError(f"{where}: grid N={N} != config N={chart.N}")
        if name not in fields:
            raise SchemaError(f"{where}: field file missing field {name!r}")
        return fields[name]
    if kind == "real-locus":
        return "real-locus"
    raise SchemaError(f"{where}.kind: unknown differential kind {kind!r}")


def _load_problem_config(path):
    doc = read_json(path)
    validate_keys(
        doc,
        {"type", "N", "form", "metric", "q1", "q2bar", "solver",
         "a_convention", "symmetry", "seed", "backend"},
        {"type", "N", "metric", "q1", "q2bar"},
        str(path),
    )
    if doc["type"] not in TYPE_NAMES:
        raise SchemaError(f"{path}.type: unknown Lie type {doc['type']!r}")
    if not isinstance(doc["N"], int) or doc["N"] < 8 or doc["N"] % 2:
        raise SchemaError(f"{path}.N: expected an even integer >= 8")
    solver = doc.get("solver", {})
    validate_keys(solver, {"tol", "max_iter", "continuation_steps"}, set(),
                  f"{path}.solver")
    rs, cb, pt, td = _stack_from_name(doc["type"])
    chart = GridChart(doc["N"], backend=doc.get("backend", "spectral"))
    metric = _metric_from_spec(doc["metric"], chart, f"{path}.metric")
    q1 = _differential_from_spec(doc["q1"], chart, f"{path}.q1")
    q2bar = _differential_from_spec(doc["q2bar"], chart, f"{path}.q2bar")
    if isinstance(q1, str):
        raise SchemaError(f"{path}.q1: 'real-locus' is only valid for q2bar")
    if isinstance(q2bar, str):
        q2bar = real_locus_q2bar(td, q1)
    problem = make_problem(
        td, metric, q1=q1, q2bar=q2bar,
        form=doc.get("form", "unreduced"),
        symmetry=bool(doc.get("symmetry", False)),
        a_convention=doc.get("a_convention", "cartan"),
    )
    return doc, (rs, cb, pt, td), problem, solver


@main.group()
def toda():
    """Toda-system solves."""


@toda.command("solve")
@click.option("--config", "config_path", required=True)
@click.option("--out", "out_path", required=True)
@click.pass_context
def toda_solve(ctx, config_path, out_path):
    try:
        doc, (rs, cb, pt, td), problem, solver = _load_problem_config(config_path)
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    sol = newton_solve(
        problem,
        tol=float(solver.get("tol", 1e-10)),
        max_iter=int(solver.get("max_iter", 30)),
        continuation_steps=int(solver.get("continuation_steps", 4)),
    )
    N = problem.metric.chart.N
    fields = {f"u_{i}": sol.u[i] for i in range(td.rank)}
    fields["q1"] = problem.q1
    fields["q2bar"] = problem.q2bar
    fields["lam"] = problem.metric.lam
    fields["p"] = problem.metric.p
    fields["s"] = problem.metric.s
    meta = {
        "type": doc["type"],
        "form": problem.form,
        "a_convention": problem.a_convention,
        "residual_norm": sol.residual_norm,
        "newton_iterations": sol.newton_iterations,
        "converged": sol.converged,
    }
    write_field_file(out_path, N, fields, meta)
    _say(ctx, f"residual {sol.residual_norm:.3e} in {sol.newton_iterations} "
              f"iterations -> {out_path}")
    if not sol.converged:
        _fail(EXIT_NUMERICAL, f"Newton did not converge "
                              f"(residual {sol.residual_norm:.3e}); "
                              f"partial solution written to {out_path}")


def _problem_from_solution(path):
    N, fields, meta = read_field_file(path)
    for key in ("type", "form", "a_convention"):
        if key not in meta:
            raise SchemaError(f"{path}.meta.{key}: required")
    rs, cb, pt, td = _stack_from_name(meta["type"])
    for name in ("q1", "q2bar", "lam", "p", "s"):
        if name not in fields:
            raise SchemaError(f"{path}.fields.{name}: required in a solution file")
    for i in range(td.rank):
        if f"u_{i}" not in fields:
            raise SchemaError(f"{path}.fields.u_{i}: required in a solution file")
    chart = GridChart(N)
    from .geometry.metric import ComplexMetricField
    metric = ComplexMetricField(chart=chart, lam=fields["lam"],
                                p=fields["p"], s=fields["s"])
    problem = make_problem(td, metric, q1=fields["q1"], q2bar=fields["q2bar"],
                           form=meta["form"], a_convention=meta["a_convention"])
    u = np.stack([fields[f"u_{i}"] for i in range(td.rank)])
    return (rs, cb, pt, td), problem, u


# --------------------------------------------------------------------------
# connection verify / holonomy
# --------------------------------------------------------------------------

@main.group()
def connection():
    """Flat-connection assembly checks."""


@connection.command("verify")
@click.option("--solution", "sol_path", required=True)
@click.option("--report", "report_path", required=True)
@click.option("--tol", default=1e-7, show_default=True)
@click.pass_context
def connection_verify(ctx, sol_path, report_path, tol):
    try:
        (rs, cb, pt, td), problem, u = _problem_from_solution(sol_path)
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    conn = assemble_connection(cb, pt, problem, u)
    F = curvature(conn)
    node_norm = np.sqrt(np.sum(np.abs(F) ** 2, axis=0))
    N = conn.chart.N
    lines = ["iy,ix,curvature_norm"]
    for iy in range(N):
        for ix in range(N):
            lines.append(f"{iy},{ix},{node_norm[iy, ix]:.6e}")
    Path(report_path).write_text("\n".join(lines) + "\n")
    sup = float(np.max(node_norm))
    _say(ctx, f"curvature sup-norm {sup:.3e} -> {report_path}")
    if sup > tol:
        _fail(EXIT_NUMERICAL, f"curvature sup-norm {sup:.3e} exceeds {tol:.1e}")


def _parse_path_arg(arg):
    if arg == "loop:x":
        return loop_path("x")
    if arg == "loop:y":
        return loop_path("y")
    try:
        pts = json.loads(arg)
        return [(float(p[0]), float(p[1])) for p in pts]
    except (ValueError, TypeError, IndexError) as exc:
        raise SchemaError(
            f"--path: expected 'loop:x', 'loop:y', or a JSON polyline "
            f"[[x,y],...] ({exc})") from exc


@main.command("holonomy")
@click.option("--solution", "sol_path", required=True)
@click.option("--path", "path_arg", default="loop:x", show_default=True)
@click.option("--out", "out_path", required=True)
@click.pass_context
def holonomy_cmd(ctx, sol_path, path_arg, out_path):
    try:
        (rs, cb, pt, td), problem, u = _problem_from_solution(sol_path)
        path = _parse_path_arg(path_arg)
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    conn = assemble_connection(cb, pt, problem, u)
    rep = None if td.cartan_type == "G" else defining_representation(cb)
    hol = run_holonomy(conn, path, rep=rep)
    doc = {
        "path": [list(v) for v in hol.path],
        "steps": hol.steps,
        "refinement_error": hol.refinement_error,
        "matrix": [[_cpx(v) for v in row] for row in hol.matrix],
        "trace": _cpx(hol.trace),
        "determinant": _cpx(hol.determinant),
        "trace_invariants": [_cpx(v) for v in trace_invariants(hol)],
    }
    Path(out_path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    _say(ctx, f"holonomy trace {hol.trace:.6f} -> {out_path}")
    if hol.accuracy_warning:
        _fail(EXIT_NUMERICAL,
              f"holonomy refinement stalled at {hol.refinement_error:.3e}")


# --------------------------------------------------------------------------
# goldman
# --------------------------------------------------------------------------

def _variation_from_file(path, cb):
    N, fields, meta = read_field_file(path)
    a_z = np.zeros((cb.dim, N, N), dtype=complex)
    a_zbar = np.zeros((cb.dim, N, N), dtype=complex)
    seen = False
    for name, f in fields.items():
        if name.startswith("a_z_"):
            a_z[int(name[4:])] = f
            seen = True
        elif name.startswith("a_zbar_"):
            a_zbar[int(name[7:])] = f
            seen = True
    if not seen:
        raise SchemaError(f"{path}: no a_z_<k>/a_zbar_<k> fields found")
    return N, Variation(basis=cb, a_z=a_z, a_zbar=a_zbar, provenance="file")


@main.group()
def goldman():
    """Goldman pairing evaluations."""


@goldman.command("pair")
@click.option("--a", "a_path", required=True)
@click.option("--b", "b_path", required=True)
@click.option("--type", "type_name", required=True)
@click.option("--out", "out_path", required=True)
@click.pass_context
def goldman_pair(ctx, a_path, b_path, type_name, out_path):
    try:
        rs, cb, pt, td = _stack_from_name(type_name)
        Na, va = _variation_from_file(a_path, cb)
        Nb, vb = _variation_from_file(b_path, cb)
        if Na != Nb:
            raise SchemaError(f"grid mismatch: {a_path} N={Na}, {b_path} N={Nb}")
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    chart = GridChart(Na)
    rep = pairing(va, vb, chart, td.invariant_form_scale)
    doc = {"value": _cpx(rep.value), "integrand_sup": rep.integrand_sup,
           "quadrature": rep.quadrature}
    Path(out_path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    _say(ctx, f"pairing {rep.value:.6e} -> {out_path}")


@goldman.command("fiber")
@click.option("--q1", "q1_path", required=True)
@click.option("--q2", "q2_path", required=True)
@click.option("--type", "type_name", required=True)
@click.option("--lam", default=1.0, show_default=True,
              help="constant Fuchsian metric coefficient")
@click.option("--out", "out_path", default=None)
@click.pass_context
def goldman_fiber(ctx, q1_path, q2_path, type_name, lam, out_path):
    try:
        rs, cb, pt, td = _stack_from_name(type_name)
        N1, f1, _ = read_field_file(q1_path)
        N2, f2, _ = read_field_file(q2_path)
        if N1 != N2:
            raise SchemaError(f"grid mismatch: {q1_path} N={N1}, {q2_path} N={N2}")
        if "q" not in f1 or "q" not in f2:
            raise SchemaError("fiber inputs must contain a field named 'q'")
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    chart = GridChart(N1)
    met = fuchsian_flat(chart, lam)
    scale = td.invariant_form_scale
    try:
        closed = fiber_pairing_closed_form(cb, td, f1["q"], f2["q"], met, scale)
    except PreconditionError as exc:
        _fail(EXIT_NUMERICAL, str(exc))
    rep = pairing(variation_q1(cb, f1["q"]),
                  variation_q2(cb, td, f2["q"], met), chart, scale)
    gap = abs(rep.value - closed)
    doc = {"pairing": _cpx(rep.value), "closed_form": _cpx(closed), "gap": gap}
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out_path:
        Path(out_path).write_text(text)
        _say(ctx, f"fiber pairing gap {gap:.3e} -> {out_path}")
    else:
        click.echo(text, nl=False)


# --------------------------------------------------------------------------
# oper
# --------------------------------------------------------------------------

def _read_q_tuple(path, td, chart):
    N, fields, _ = read_field_file(path)
    if N != chart.N:
        raise SchemaError(f"{path}: grid N={N} != expected {chart.N}")
    q = [np.zeros((N, N), dtype=complex) for _ in range(td.rank)]
    if "q" in fields:
        q[-1] = fields["q"]
    for i in range(td.rank):
        if f"q_{i}" in fields:
            q[i] = fields[f"q_{i}"]
    return q


@main.group()
def oper():
    """Oper connections and their checks."""


@oper.command("build")
@click.option("--q", "q_path", required=True)
@click.option("--type", "type_name", required=True)
@click.option("--lam", default=4.0, show_default=True)
@click.option("--out", "out_path", required=True)
@click.pass_context
def oper_build(ctx, q_path, type_name, lam, out_path):
    try:
        rs, cb, pt, td = _stack_from_name(type_name)
        N, _, _ = read_field_file(q_path)
        chart = GridChart(N)
        q = _read_q_tuple(q_path, td, chart)
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    hwv = highest_weight_vectors(cb, pt)
    met = fuchsian_flat(chart, lam)
    op = bd_oper_connection(cb, pt, td, hwv, met, q)
    fields = {}
    for k in range(cb.dim):
        fields[f"A_z_{k}"] = op.conn.A_z[k]
        fields[f"A_zbar_{k}"] = op.conn.A_zbar[k]
    write_field_file(out_path, N, fields, {"type": type_name, "lam": lam})
    _say(ctx, f"oper connection -> {out_path}")


@oper.command("check")
@click.option("--in", "in_path", required=True)
@click.option("--report", "report_path", required=True)
@click.pass_context
def oper_check(ctx, in_path, report_path):
    try:
        N, fields, meta = read_field_file(in_path)
        if "type" not in meta:
            raise SchemaError(f"{in_path}.meta.type: required")
        rs, cb, pt, td = _stack_from_name(meta["type"])
        A_z = np.zeros((cb.dim, N, N), dtype=complex)
        A_zbar = np.zeros((cb.dim, N, N), dtype=complex)
        for k in range(cb.dim):
            if f"A_z_{k}" not in fields or f"A_zbar_{k}" not in fields:
                raise SchemaError(f"{in_path}: missing connection field index {k}")
            A_z[k] = fields[f"A_z_{k}"]
            A_zbar[k] = fields[f"A_zbar_{k}"]
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    chart = GridChart(N)
    op = OperConnection(conn=ConnectionForm(basis=cb, chart=chart,
                                            A_z=A_z, A_zbar=A_zbar))
    report = relative_position_check(op)
    lines = ["simple_root,min_coefficient_magnitude,passed"]
    for i, mag in enumerate(report.min_magnitude):
        lines.append(f"{i},{mag:.6e},{report.passed}")
    Path(report_path).write_text("\n".join(lines) + "\n")
    _say(ctx, f"relative position {'PASS' if report.passed else 'FAIL'} "
              f"-> {report_path}")
    if not report.passed:
        _fail(EXIT_NUMERICAL, "relative position check failed")


@oper.command("relation")
@click.option("--phi", "phi_path", required=True)
@click.option("--q", "q_path", required=True)
@click.option("--type", "type_name", required=True)
@click.option("--lam", default=4.0, show_default=True)
@click.option("--tol", default=1e-8, show_default=True)
@click.pass_context
def oper_relation(ctx, phi_path, q_path, type_name, lam, tol):
    try:
        rs, cb, pt, td = _stack_from_name(type_name)
        Np, fphi, _ = read_field_file(phi_path)
        Nq, fq, _ = read_field_file(q_path)
        if Np != Nq:
            raise SchemaError(f"grid mismatch: {phi_path} N={Np}, {q_path} N={Nq}")
        if "phi" not in fphi:
            raise SchemaError(f"{phi_path}: must contain a field named 'phi'")
        if "q" not in fq:
            raise SchemaError(f"{q_path}: must contain a field named 'q'")
    except SchemaError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    chart = GridChart(Np)
    hwv = highest_weight_vectors(cb, pt)
    lam0 = np.full((Np, Np), float(lam))
    gap = connection_relation_check(cb, pt, td, hwv, chart, lam0,
                                    fphi["phi"], fq["q"])
    _say(ctx, f"relation defect {gap:.3e}")
    if gap > tol:
        _fail(EXIT_NUMERICAL, f"relation defect {gap:.3e} exceeds {tol:.1e}")


# --------------------------------------------------------------------------
# suite
# --------------------------------------------------------------------------

@main.command("suite")
@click.option("--level", default="desk", show_default=True)
@click.option("--out", "out_path", default=None, help="CSV report path")
@click.pass_context
def suite_cmd(ctx, level, out_path):
    try:
        results = run_suite(level)
    except ValueError as exc:
        _fail(EXIT_SCHEMA, str(exc))
    text = suite_csv(results)
    if out_path:
        Path(out_path).write_text(text)
    for r in results:
        _say(ctx, f"criterion {r.number} ({r.name}): {r.status} — {r.detail}")
    if not all(r.passed for r in results):
        _fail(EXIT_NUMERICAL, "one or more acceptance criteria failed")


if __name__ == "__main__":
    main()
