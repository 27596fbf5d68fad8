"""Command-line front end: one subcommand per experiment, CSV or JSON out.

CSV output is ``#``-prefixed metadata lines, a header row, then data rows,
with floats written to 17 significant digits. JSON output is an object
holding the row fields directly when there is exactly one row, or a
``rows`` list otherwise, plus a ``meta`` object. Output never depends on
``--threads``; wall time is only reported with ``--timing``.

Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from farey_audit import __version__
from farey_audit import characters as ch
from farey_audit import discrepancy as disc
from farey_audit import lfunctions as lf
from farey_audit import sieves
from farey_audit.farey import delta_stream

FAREY_LIST_CAP = 1000

COLUMNS = {
    "phi-sum": ["N", "phi_N", "audit"],
    "mertens": ["x", "M", "normalized"],
    "harmonic": ["x", "H", "gamma_estimate"],
    "farey-list": ["nu", "h", "k", "delta_num", "delta_den"],
    "fl-sum": ["N", "phi_N", "fl_sum", "normalized"],
    "fl-scan": ["N", "phi_N", "fl_sum", "normalized"],
    "fl-fit": ["slope", "intercept", "r2", "n_rows"],
    "kintervals": ["N", "k", "j", "count_total", "count_in_k", "count_other", "index_count"],
    "lambda-audit": [
        "N", "k", "cell", "first_nu", "last_nu", "lambda1", "lambda2", "lambda3",
        "holds_width", "holds_spacing", "holds_product",
    ],
    "dev-by-k": ["k", "count", "max_abs_delta", "mean_abs_delta", "scaled"],
    "chars": ["q", "index", "exponents", "principal", "primitive", "conductor", "parity"],
    "gauss-sum": ["q", "index", "re", "im", "abs", "sqrt_q"],
    "theta": ["q", "index", "x", "re", "im", "ratio"],
    "lseries": ["s_re", "s_im", "re", "im", "terms_used", "tail_bound", "method"],
    "inv-l": ["s_re", "s_im", "re", "im", "terms_used", "tail_bound", "method"],
    "feq-check": ["s_re", "s_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"],
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Everything that determines a run's output, plus how to deliver it."""

    subcommand: str
    params: dict[str, Any] = field(default_factory=dict)
    fmt: str = "csv"
    out: str | None = None
    threads: int = 1
    timing: bool = False

    def echo(self) -> dict[str, Any]:
        # threads, out and timing do not change the data, so they stay out of the output
        return {"subcommand": self.subcommand, "format": self.fmt, **self.params}


# --- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _add_n_range(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, nargs="+", help="explicit N values")
    p.add_argument("--n-start", type=int)
    p.add_argument("--n-count", type=int, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n-step", type=int, help="linear step")
    g.add_argument("--n-factor", type=int, help="geometric factor (2 = doubling)")


def _add_character(p: argparse.ArgumentParser, index_required: bool = True) -> None:
    p.add_argument("--q", type=int, required=True, help="modulus")
    p.add_argument("--index", type=int, required=index_required,
                   help="lexicographic rank of the exponent vector (0 = principal)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="farey-audit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=f"{help} Columns: {','.join(COLUMNS[name])}")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--timing", action="store_true", help="add wall time to JSON meta")
        return p

    _add_n_range(add("phi-sum", "Cumulative totient Phi(N) with its asymptotic audit."))
    add("mertens", "Mertens function M(x).").add_argument("--x", type=int, nargs="+", required=True)
    add("harmonic", "Harmonic sum H(x) and H(x) - ln x.").add_argument("--x", type=int, nargs="+", required=True)
    add("farey-list", f"Farey series with exact discrepancies (N <= {FAREY_LIST_CAP}).").add_argument(
        "--n", type=int, required=True)
    p = add("fl-sum", "Franel-Landau sum for given N.")
    _add_n_range(p)
    p.add_argument("--exact", action="store_true", help="append the reduced rational as fl_sum_exact")
    _add_n_range(add("fl-scan", "Franel-Landau sums over an N range."))
    _add_n_range(add("fl-fit", "Log-log slope of Franel-Landau sums over an N range."))
    p = add("kintervals", "k-interval occupancy counts.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = add("lambda-audit", "Run-length audit of h/k hits.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    add("dev-by-k", "Discrepancy by denominator with envelope fits.").add_argument("--n", type=int, required=True)
    _add_character(add("chars", "Characters mod q."), index_required=False)
    _add_character(add("gauss-sum", "Gauss sums."), index_required=False)
    p = add("theta", "Twisted Moebius sums theta(x, chi).")
    _add_character(p)
    p.add_argument("--x", type=int, nargs="+", required=True)
    p = add("lseries", "L(s, chi).")
    _add_character(p)
    p.add_argument("--s", type=_parse_complex, nargs="+", required=True)
    p.add_argument("--method", choices=("direct", "abel", "euler_product"), default="direct")
    p.add_argument("--terms", type=int, default=lf.DEFAULT_TERMS)
    p = add("inv-l", "1/L(s, chi) by Moebius series or theta integral.")
    _add_character(p)
    p.add_argument("--s", type=_parse_complex, nargs="+", required=True)
    p.add_argument("--method", choices=("dirichlet_mu", "integral"), default="dirichlet_mu")
    p.add_argument("--sieve-bound", type=int, default=lf.DEFAULT_TERMS)
    p = add("feq-check", "Functional-equation residuals for zeta or a primitive character.")
    p.add_argument("--subject", choices=("zeta", "chi"), default="zeta")
    p.add_argument("--q", type=int)
    p.add_argument("--index", type=int)
    p.add_argument("--s", type=_parse_complex, nargs="+", required=True)
    return parser


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    sub = ns.pop("subcommand")
    fmt = ns.pop("fmt")
    out = ns.pop("out")
    threads = ns.pop("threads")
    timing = ns.pop("timing")
    params = {k: v for k, v in ns.items() if v is not None}
    return RunConfig(sub, params, fmt, out, max(1, threads), timing)


# --- subcommand bodies -------------------------------------------------------


def _n_values(p: dict[str, Any]) -> list[int]:
    if "n" in p:
        return list(p["n"])
    if "n_start" not in p:
        raise UsageError("give --n or --n-start")
    start, count = p["n_start"], p.get("n_count", 1)
    if count < 1:
        raise UsageError("--n-count must be positive")
    if "n_factor" in p:
        if p["n_factor"] < 2:
            raise UsageError("--n-factor must be at least 2")
        return [start * p["n_factor"] ** i for i in range(count)]
    step = p.get("n_step", 1)
    if step < 1:
        raise UsageError("--n-step must be positive")
    return [start + step * i for i in range(count)]


def _s_fields(s: complex) -> dict[str, float]:
    return {"s_re": s.real, "s_im": s.imag}


def _series_row(s: complex, r: lf.SeriesResult) -> dict[str, Any]:
    return {**_s_fields(s), "re": r.value.real, "im": r.value.imag,
            "terms_used": r.terms_used, "tail_bound": r.tail_bound, "method": r.method}


def _pmap(cfg: RunConfig, fn: Callable, items: list) -> list:
    if cfg.threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


def _character(p: dict[str, Any]) -> ch.DirichletCharacter:
    if "q" not in p or "index" not in p:
        raise UsageError("a character needs --q and --index")
    return ch.character(p["q"], p["index"])


def _cmd_phi_sum(cfg, p, meta):
    ns = _n_values(p)
    table = sieves.sieve_build(max(ns))
    rows = []
    for n in ns:
        c = sieves.totient_cumulative(table, n)
        rows.append({"N": n, "phi_N": c.value, "audit": c.audit})
    return rows


def _cmd_mertens(cfg, p, meta):
    table = sieves.sieve_build(max(p["x"]))
    return [{"x": x, "M": (m := sieves.mertens(table, x)).value, "normalized": m.normalized} for x in p["x"]]


def _cmd_harmonic(cfg, p, meta):
    return [{"x": x, "H": sieves.harmonic_sum(x), "gamma_estimate": sieves.gamma_estimate(x)} for x in p["x"]]


def _cmd_farey_list(cfg, p, meta):
    n = p["n"]
    if not 1 <= n <= FAREY_LIST_CAP:
        raise UsageError(f"--n must be in 1..{FAREY_LIST_CAP} for farey-list")
    phi = sieves.totient_cumulative(sieves.sieve_build(n), n)
    return [
        {"nu": d.nu, "h": d.fraction.numerator, "k": d.fraction.denominator,
         "delta_num": d.delta.numerator, "delta_den": d.delta.denominator}
        for d in delta_stream(n, phi)
    ]


def _fl_row(r: disc.FranelLandauRow) -> dict[str, Any]:
    return {"N": r.N, "phi_N": r.phi_N, "fl_sum": r.fl_sum, "normalized": r.normalized}


def _cmd_fl_sum(cfg, p, meta):
    rows = []
    for r in disc.franel_landau_scan(_n_values(p), threads=cfg.threads):
        row = _fl_row(r)
        if p.get("exact"):
            row["fl_sum_exact"] = str(r.fl_sum_exact)
        rows.append(row)
    return rows


def _cmd_fl_scan(cfg, p, meta):
    return [_fl_row(r) for r in disc.franel_landau_scan(_n_values(p), threads=cfg.threads)]


def _cmd_fl_fit(cfg, p, meta):
    rows = disc.franel_landau_scan(_n_values(p), threads=cfg.threads)
    fit = disc.exponent_fit(rows)
    return [{"slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2,
             "n_rows": sum(r.fl_sum > 0 for r in rows)}]


def _cmd_kintervals(cfg, p, meta):
    rep = disc.k_interval_occupancy(p["n"], p["k"], with_runs=False)
    meta["phi_N"] = rep.phi_N
    meta["mean_other"] = rep.mean_other
    other = rep.count_other
    return [
        {"N": rep.N, "k": rep.k, "j": j, "count_total": int(rep.count_total[j]),
         "count_in_k": int(rep.count_in_k[j]), "count_other": int(other[j]),
         "index_count": int(rep.index_count[j])}
        for j in range(rep.k)
    ]


def _cmd_lambda_audit(cfg, p, meta):
    audit = disc.lambda_audit(p["n"], p["k"])
    meta["phi_N"] = audit.phi_N
    meta["bracketing"] = audit.bracketing
    meta["violations"] = audit.violations
    return [
        {"N": audit.N, "k": audit.k, "cell": r.cell, "first_nu": r.first_nu, "last_nu": r.last_nu,
         "lambda1": r.lambda1, "lambda2": r.lambda2, "lambda3": r.lambda3,
         "holds_width": r.holds_width, "holds_spacing": r.holds_spacing, "holds_product": r.holds_product}
        for r in audit.runs
    ]


def _cmd_dev_by_k(cfg, p, meta):
    rep = disc.deviation_by_denominator(p["n"])
    meta["phi_N"] = rep.phi_N
    for fit in (rep.small_k, rep.large_k):
        meta[f"envelope {fit.regime}"] = {"n_records": fit.n_records, "envelope_c": fit.envelope_c, "ls_c": fit.ls_c}
    return [
        {"k": r.k, "count": r.count, "max_abs_delta": r.max_abs_delta,
         "mean_abs_delta": r.mean_abs_delta, "scaled": r.scaled}
        for r in rep.records
    ]


def _chars_of(p):
    return [_character(p)] if "index" in p else ch.enumerate_characters(p["q"])


def _cmd_chars(cfg, p, meta):
    return [
        {"q": c.modulus, "index": c.index, "exponents": ";".join(map(str, c.exponents)),
         "principal": c.is_principal, "primitive": ch.is_primitive(c),
         "conductor": c.conductor, "parity": ch.parity(c)}
        for c in _chars_of(p)
    ]


def _cmd_gauss_sum(cfg, p, meta):
    rows = []
    for c in _chars_of(p):
        tau = ch.gauss_sum(c).value
        rows.append({"q": c.modulus, "index": c.index, "re": tau.real, "im": tau.imag,
                     "abs": abs(tau), "sqrt_q": math.sqrt(c.modulus)})
    return rows


def _cmd_theta(cfg, p, meta):
    chi = _character(p)
    table = sieves.sieve_build(max(p["x"]))
    rows = []
    for x in p["x"]:
        t = lf.theta_chi(x, chi, table)
        rows.append({"q": chi.modulus, "index": chi.index, "x": x,
                     "re": t.value.real, "im": t.value.imag, "ratio": t.ratio})
    return rows


def _cmd_lseries(cfg, p, meta):
    chi = _character(p)
    return _pmap(cfg, lambda s: _series_row(s, lf.l_series(s, chi, p["method"], p["terms"])), list(p["s"]))


def _cmd_inv_l(cfg, p, meta):
    chi = _character(p)
    table = sieves.sieve_build(p["sieve_bound"])
    rows = []
    for s in p["s"]:
        r = lf.inv_l_series(s, chi, p["method"], table)
        if r.diagnostic:
            meta.setdefault("diagnostic_s", []).append(str(s))
            for n, v in r.trajectory:
                rows.append({**_s_fields(s), "re": v.real, "im": v.imag, "terms_used": n,
                             "tail_bound": math.inf, "method": r.method})
        else:
            rows.append(_series_row(s, r))
    return rows


def _cmd_feq_check(cfg, p, meta):
    if p["subject"] == "zeta":
        subject: lf.Subject = "zeta"
    else:
        subject = _character(p)
        meta["convention"] = lf.FEQ_CONVENTION

    def one(s):
        lhs, rhs = lf.functional_equation_sides(s, subject)
        return {**_s_fields(s), "lhs_re": lhs.real, "lhs_im": lhs.imag, "rhs_re": rhs.real,
                "rhs_im": rhs.imag, "residual": abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)}

    return _pmap(cfg, one, list(p["s"]))


COMMANDS: dict[str, Callable] = {
    "phi-sum": _cmd_phi_sum,
    "mertens": _cmd_mertens,
    "harmonic": _cmd_harmonic,
    "farey-list": _cmd_farey_list,
    "fl-sum": _cmd_fl_sum,
    "fl-scan": _cmd_fl_scan,
    "fl-fit": _cmd_fl_fit,
    "kintervals": _cmd_kintervals,
    "lambda-audit": _cmd_lambda_audit,
    "dev-by-k": _cmd_dev_by_k,
    "chars": _cmd_chars,
    "gauss-sum": _cmd_gauss_sum,
    "theta": _cmd_theta,
    "lseries": _cmd_lseries,
    "inv-l": _cmd_inv_l,
    "feq-check": _cmd_feq_check,
}


# --- rendering ---------------------------------------------------------------


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if v == math.inf else f"{v:.17g}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def render(cfg: RunConfig, rows: list[dict[str, Any]], meta: dict[str, Any]) -> str:
    if cfg.fmt == "json":
        body: dict[str, Any] = dict(rows[0]) if len(rows) == 1 else {"rows": rows}
        body["meta"] = meta
        return json.dumps(_json_value(body), separators=(",", ":")) + "\n"
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {json.dumps(_json_value(value), separators=(',', ':'))}\n")
    cols = list(COLUMNS[cfg.subcommand])
    if rows:
        cols += [c for c in rows[0] if c not in cols]
    buf.write(",".join(cols) + "\n")
    for row in rows:
        buf.write(",".join(_cell(row[c]) for c in cols) + "\n")
    return buf.getvalue()


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".farey-audit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig) -> int:
    if cfg.subcommand not in COMMANDS:
        print(f"farey-audit: unknown subcommand {cfg.subcommand!r}", file=sys.stderr)
        return 1
    meta: dict[str, Any] = {"version": __version__, "config": cfg.echo()}
    start = time.perf_counter()
    try:
        rows = COMMANDS[cfg.subcommand](cfg, cfg.params, meta)
        if cfg.timing:
            meta["wall_time_s"] = time.perf_counter() - start
        _write(cfg.out, render(cfg, rows, meta))
    except disc.ScanError as exc:
        numerical = isinstance(exc.cause, lf.NumericalError)
        print(f"farey-audit: {'numerical failure: ' if numerical else ''}{exc}", file=sys.stderr)
        return 2 if numerical else 1
    except lf.NumericalError as exc:
        print(f"farey-audit: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError, OSError) as exc:
        print(f"farey-audit: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
