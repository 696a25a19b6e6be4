"""Command-line front end: ``pimeasure <command> [args]``.

Exit status is 0 on success, 1 if any certificate or check failed, and 2 for
usage errors.  Reports contain no timestamps or timings, so identical inputs
and cache state give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import __version__
from .cache import TermCache
from .construction import IntegrandParams
from .exactkernel import float_context, frac_str

log = logging.getLogger("pimeasure")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

LEMMAS = ("lemma1", "lemma2", "lemma3", "lemma4", "prop1")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision: int = 64
    jobs: int = 1
    cache_dir: str | None = None
    format: str = "text"
    guess_terms: int = 60
    accelerate: bool = False

    def validate(self) -> "RunConfig":
        if self.precision < 32:
            raise UsageError("precision must be at least 32")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")
        if self.guess_terms < 1:
            raise UsageError("guess_terms must be positive")
        if self.format not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        return self


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def load_config(path: str | Path) -> RunConfig:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in ("precision", "jobs", "guess_terms"):
            try:
                updates[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key == "accelerate":
            updates[key] = _parse_bool(value)
        else:
            updates[key] = value
    return replace(cfg, **updates)


# ---------------------------------------------------------------------------
# Report emission


class Report:
    """Rows of key/value records plus a status; rendered in one of three formats."""

    def __init__(self, command: str, precision: int | None = None):
        self.command = command
        self.precision = precision
        self.rows: list[dict] = []
        self.failed = False

    def add(self, **row):
        self.rows.append(row)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"command": self.command, "status": "fail" if self.failed else "ok", "rows": self.rows}
            if self.precision is not None:
                doc["precision"] = self.precision
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            keys: list[str] = []
            for row in self.rows:
                for k in row:
                    if k not in keys:
                        keys.append(k)
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for row in self.rows:
                w.writerow({k: _csv_cell(v) for k, v in row.items()})
            return buf.getvalue()
        lines = []
        for row in self.rows:
            if "line" in row and len(row) == 1:
                lines.append(row["line"])
            else:
                lines.append("  ".join(f"{k}={_csv_cell(v)}" for k, v in row.items()))
        if self.precision is not None:
            lines.append(f"[precision {self.precision} digits]")
        return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------------------
# Exact terms with optional cache


def classic_form(n: int, cache: TermCache | None):
    from .linforms import LinearForm, linear_form

    params = IntegrandParams.classic(n)
    if cache is not None:
        rec = cache.get("classic", n, params.s, params.v)
        if rec is not None:
            return LinearForm(n, rec.a, rec.b, "cache", params)
    routes = ("gauss", "x5") if n <= 60 else ("x",)
    form = linear_form(n, routes)
    if cache is not None:
        cache.put("classic", n, params.s, params.v, form.a, form.b)
    return form


def _cache(cfg: RunConfig) -> TermCache | None:
    return TermCache(cfg.cache_dir) if cfg.cache_dir else None


def _nstr(x, digits: int) -> str:
    return float_context(digits).nstr(x, digits)


# ---------------------------------------------------------------------------
# Commands


def cmd_form(args, cfg: RunConfig) -> Report:
    n = args.N
    if n < 0:
        raise UsageError("N must be nonnegative")
    f = classic_form(n, _cache(cfg))
    rep = Report("form", cfg.precision)
    rep.add(n=n, a=frac_str(f.a), b=frac_str(f.b), value=_nstr(f.value(cfg.precision), cfg.precision))
    return rep


def cmd_certify(args, cfg: RunConfig) -> Report:
    from .linforms import verify_lemma, verify_prop1

    if args.N < 1:
        raise UsageError("N must be at least 1")
    cache = _cache(cfg)
    rep = Report(f"certify {args.lemma}")
    for n in range(1, args.N + 1):
        if args.lemma == "prop1":
            cert = verify_prop1(n, classic_form(n, cache))
        else:
            cert = verify_lemma(args.lemma, n)
        rep.failed |= not cert.passed
        if cfg.format == "text":
            rep.add(line=cert.line())
        else:
            rep.add(
                lemma=cert.lemma,
                n=n,
                status="PASS" if cert.passed else "FAIL",
                checked=cert.checked,
                count=cert.count,
                counterexample=cert.counterexample or {},
            )
    return rep


def cmd_bound(args, cfg: RunConfig) -> Report:
    from .asymptotics import measure_bounds, rates

    p = cfg.precision
    rI, rb = rates(p)
    mu, _ = measure_bounds(p)
    rep = Report("bound", p)
    rep.add(mu_bound=_nstr(mu, p), rate_I=_nstr(rI, p), rate_b=_nstr(rb, p))
    return rep


def cmd_crude_bound(args, cfg: RunConfig) -> Report:
    from .asymptotics import measure_bounds

    p = cfg.precision
    _, crude = measure_bounds(p)
    rep = Report("crude-bound", p)
    rep.add(mu_crude=_nstr(crude, p))
    return rep


def cmd_asymptotics(args, cfg: RunConfig) -> Report:
    from .asymptotics import asymptotic_data

    data = asymptotic_data(cfg.precision).as_dict()
    rep = Report("asymptotics", cfg.precision)
    for key in sorted(data):
        if key != "precision":
            rep.add(name=key, value=data[key])
    return rep


def cmd_guess_rec(args, cfg: RunConfig) -> Report:
    from .recurrence import guess, indicial_polynomial

    T = args.terms or cfg.guess_terms
    cache = _cache(cfg)
    terms = [classic_form(n, cache).b for n in range(T)]
    rec = guess(terms)
    rep = Report("guess-rec")
    if rec is None:
        rep.failed = True
        rep.add(status="not-found", terms=T)
        return rep
    ind = indicial_polynomial(rec)
    rep.add(
        status="found",
        order=rec.order,
        degree=rec.degree,
        indicial=[str(c) for c in ind.coeffs],
        recurrence=json.loads(rec.to_json()),
    )
    return rep


def cmd_search(args, cfg: RunConfig) -> Report:
    from .familysearch import best_ab

    if min(args.A_MAX, args.B_MAX) < 1 or not 1 <= args.N_LO <= args.N_HI:
        raise UsageError("need A_MAX, B_MAX >= 1 and 1 <= N_LO <= N_HI")
    report = best_ab(
        args.A_MAX,
        args.B_MAX,
        args.N_LO,
        args.N_HI,
        jobs=cfg.jobs,
        accelerate=cfg.accelerate or args.accelerate,
        cache_dir=cfg.cache_dir,
    )
    rep = Report("search")
    if cfg.format == "csv":
        rep.csv_text = report.to_csv()
        return rep
    for rank, fam in enumerate(report.ranking(), 1):
        rep.add(rank=rank, A=fam.A, B=fam.B, min_delta=fam.min_delta_str, method=fam.method)
    for fam in sorted(report.families.values(), key=lambda f: (f.A, f.B)):
        if fam.useless:
            rep.add(rank="useless", A=fam.A, B=fam.B, min_delta=fam.min_delta_str, method=fam.method)
    return rep


def cmd_quad_check(args, cfg: RunConfig) -> Report:
    from .asymptotics import contour_integral

    p = cfg.precision
    tol_exp = p - 24
    ctx = float_context(p)
    tol = ctx.mpf(10) ** (-tol_exp)
    cache = _cache(cfg)
    rep = Report("quad-check", p)
    for n in range(0, args.N + 1):
        f = classic_form(n, cache)
        q = contour_integral(IntegrandParams.classic(n), p)
        diff = abs(q - f.value(p))
        ok = diff < tol and abs(q) <= 1
        rep.failed |= not ok
        rep.add(n=n, status="PASS" if ok else "FAIL", quad=ctx.nstr(q.real, 20), diff=ctx.nstr(diff, 5), tol=f"1e-{tol_exp}")
    return rep


COMMANDS = {
    "form": cmd_form,
    "certify": cmd_certify,
    "bound": cmd_bound,
    "crude-bound": cmd_crude_bound,
    "asymptotics": cmd_asymptotics,
    "guess-rec": cmd_guess_rec,
    "search": cmd_search,
    "quad-check": cmd_quad_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_options(default) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=default, help="working precision in decimal digits (>= 32)")
    common.add_argument("--jobs", type=int, default=default, help="worker processes for scans")
    common.add_argument("--cache-dir", default=default, help="directory for the exact-term cache")
    common.add_argument("--format", choices=("text", "json", "csv"), default=default, help="report format")
    common.add_argument("--config", default=default, help="flat key=value configuration file")
    common.add_argument("-v", "--verbose", action="store_true", default=default or False)
    return common


def build_parser() -> argparse.ArgumentParser:
    # options may appear before or after the command; SUPPRESS keeps the
    # subcommand from overwriting values given before it
    top = _common_options(None)
    common = _common_options(argparse.SUPPRESS)

    p = _Parser(prog="pimeasure", description="Exact linear forms in 1 and pi and irrationality-measure bounds.", parents=[top])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("form", parents=[common], help="exact (a_n, b_n) with I_n = a_n + b_n*pi")
    s.add_argument("N", type=int)
    s = sub.add_parser("certify", parents=[common], help="check a divisibility certificate for n = 1..N")
    s.add_argument("lemma", choices=LEMMAS)
    s.add_argument("N", type=int)
    sub.add_parser("bound", parents=[common], help="the irrationality-measure bound and the two rates")
    sub.add_parser("crude-bound", parents=[common], help="the bound without the prime saving")
    sub.add_parser("asymptotics", parents=[common], help="indicial roots, saddle points and rates")
    s = sub.add_parser("guess-rec", parents=[common], help="guess the recurrence of b_n")
    s.add_argument("--terms", type=int, default=None, help="number of terms b_0..b_{T-1}")
    s = sub.add_parser("search", parents=[common], help="scan exponent families by empirical delta")
    for name in ("A_MAX", "B_MAX", "N_LO", "N_HI"):
        s.add_argument(name, type=int)
    s.add_argument("--accelerate", action="store_true", help="try recurrence extension first")
    s = sub.add_parser("quad-check", parents=[common], help="compare quadrature with exact forms for n = 0..N")
    s.add_argument("N", type=int)
    return p


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    for key in ("precision", "jobs", "cache_dir", "format"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    return cfg.validate()


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
        report = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        err.write(f"pimeasure: error: {exc}\n")
        return EXIT_USAGE
    text = getattr(report, "csv_text", None) or report.render(cfg.format)
    out.write(text)
    return EXIT_FAIL if report.failed else EXIT_OK


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
