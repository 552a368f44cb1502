"""Command line front end: ``spectrum``, ``verify`` and ``algebra``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
3 dimension mismatch in an algebra expression.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .kahler_atiyah import DimensionMismatch, Metric, Multivector, clifford, format_multivector, hodge_star, wedge
from .numbers import I, Num

OPERATORS = ("spin_s3", "kahler_s3", "spin_ideal_s3", "kahler_s2")
FORMATS = ("table", "json", "csv")
CSV_COLUMNS = ("operator", "j", "im", "mult", "predicted_im", "predicted_mult", "matched")
SPIN_SHIFT_IM = -0.75

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIM = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    operator: str | None = None
    j_max: Fraction = Fraction(0)
    format: str = "table"
    seed: int = 0
    out: Path | None = None
    inject_fault: bool = False
    expr_file: str | None = None

    def j_values(self) -> list[Fraction]:
        step = Fraction(1) if self.operator == "kahler_s2" else Fraction(1, 2)
        return [step * k for k in range(int(self.j_max / step) + 1)]


def parse_j(text: str) -> Fraction:
    try:
        j = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read j = {text!r}") from None
    if j < 0 or (2 * j).denominator != 1:
        raise UsageError(f"j must be a non-negative half-integer, got {text}")
    return j


def thread_count() -> int:
    raw = os.environ.get("DIRAC_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"DIRAC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"DIRAC_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------
def spectrum_report(operator: str, j: Fraction):
    if operator == "kahler_s2":
        from .dirac_s2 import s2_spectrum

        return s2_spectrum(j)
    from .dirac_s3 import spectrum

    return spectrum(operator, j)


def _report_dict(rep) -> dict:
    d = rep.to_json()
    if rep.operator == "spin_s3":
        # blocks carry sigma^a L_a; the Dirac operator adds this constant
        d["shift_im"] = SPIN_SHIFT_IM
    return d


def collect_spectra(cfg: RunConfig) -> list:
    js = cfg.j_values()
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(lambda j: spectrum_report(cfg.operator, j), js))


def _fmt_j(j: Fraction) -> str:
    # same spelling as the JSON output
    return str(int(j)) if j.denominator == 1 else str(float(j))


def render_spectra(cfg: RunConfig, reports: Sequence) -> str:
    if cfg.format == "json":
        doc = {
            "operator": cfg.operator,
            "j_max": int(cfg.j_max) if cfg.j_max.denominator == 1 else float(cfg.j_max),
            "matched": all(r.matched for r in reports),
            "reports": [_report_dict(r) for r in reports],
        }
        return json.dumps(doc, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in reports:
            for row in r.rows:
                w.writerow([r.operator, _fmt_j(r.j), row["im"], row["mult"], _blank(row["predicted_im"]), _blank(row["predicted_mult"]), str(row["matched"]).lower()])
        return buf.getvalue()
    lines = [f"operator {cfg.operator}", f"{'j':>5} | {'eigenvalue (imag)':>18} | {'mult':>5} | {'predicted':>18} | verdict"]
    lines.append("-" * len(lines[1]))
    for r in reports:
        for row in r.rows:
            pred = "-" if row["predicted_im"] is None else f"{row['predicted_im']:.10f} x{row['predicted_mult']}"
            verdict = "ok" if row["matched"] else "MISMATCH"
            lines.append(f"{_fmt_j(r.j):>5} | {row['im']:>18.10f} | {row['mult']:>5} | {pred:>18} | {verdict}")
    if cfg.operator == "spin_s3":
        lines.append(f"(Dirac eigenvalues are the listed ones plus {SPIN_SHIFT_IM}i)")
    return "\n".join(lines) + "\n"


def _blank(x):
    return "" if x is None else x


def cmd_spectrum(cfg: RunConfig) -> int:
    if cfg.operator not in OPERATORS:
        raise UsageError(f"unknown operator {cfg.operator!r}")
    if cfg.operator == "kahler_s2" and cfg.j_max.denominator != 1:
        raise UsageError("kahler_s2 has no equivariant sector at half-integer j; use an integer --j-max")
    reports = collect_spectra(cfg)
    _emit(cfg, render_spectra(cfg, reports))
    return EXIT_OK if all(r.matched for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------
def cmd_verify(cfg: RunConfig) -> int:
    from .verification import run_suites

    results = run_suites(cfg.seed, cfg.inject_fault)
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        doc = {
            "seed": cfg.seed,
            "inject_fault": cfg.inject_fault,
            "passed": ok,
            "suites": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }
        text = json.dumps(doc, indent=2) + "\n"
    elif cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("suite", "passed", "detail"))
        for r in results:
            w.writerow((r.name, str(r.passed).lower(), r.detail))
        text = buf.getvalue()
    else:
        width = max(len(r.name) for r in results)
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}".rstrip() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} suites passed")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# algebra expressions
# ---------------------------------------------------------------------------
class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # num, gen, ident, op, end
    text: str
    line: int
    column: int


_OPS = {"^": "^", "∧": "^", "∨": "v", "*": "v", "+": "+", "-": "-", "(": "(", ")": ")", ",": ","}


def tokenize(statement: str, line: int, col0: int = 1) -> list[Token]:
    out = []
    k = 0
    n = len(statement)
    while k < n:
        ch = statement[k]
        col = col0 + k
        if ch.isspace():
            k += 1
            continue
        if ch in _OPS:
            out.append(Token("op", _OPS[ch], line, col))
            k += 1
            continue
        if ch.isdigit():
            s = k
            while k < n and statement[k].isdigit():
                k += 1
            if k < n and statement[k] == "/":
                k += 1
                if k >= n or not statement[k].isdigit():
                    raise ParseError("expected a denominator after '/'", line, col0 + k)
                while k < n and statement[k].isdigit():
                    k += 1
            out.append(Token("num", statement[s:k], line, col))
            continue
        if ch.isalpha() or ch == "_":
            s = k
            while k < n and (statement[k].isalnum() or statement[k] == "_"):
                k += 1
            word = statement[s:k]
            if word == "v":
                out.append(Token("op", "v", line, col))
            elif word[0] == "e" and word[1:].isdigit():
                out.append(Token("gen", word, line, col))
            else:
                out.append(Token("ident", word, line, col))
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("end", "", line, col0 + n))
    return out


class _Parser:
    """Recursive descent: sum := prod (('+'|'-') prod)*; prod := wedge ('v' wedge)*;
    wedge := unary ('^' unary)*; unary := '-' unary | atom."""

    def __init__(self, tokens: list[Token], metric: Metric, orientation: int):
        self.toks = tokens
        self.k = 0
        self.g = metric
        self.orientation = orientation

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def take(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.kind != "op" or t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of statement'!r}", t.line, t.column)
        return self.take()

    def parse(self) -> Multivector:
        m = self.sum()
        if self.tok.kind != "end":
            t = self.tok
            raise ParseError(f"unexpected {t.text!r}", t.line, t.column)
        return m

    def sum(self) -> Multivector:
        out = self.prod()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            rhs = self.prod()
            out = out + rhs if op == "+" else out - rhs
        return out

    def prod(self) -> Multivector:
        out = self.wedge()
        while self.tok.kind == "op" and self.tok.text == "v":
            self.take()
            out = clifford(out, self.wedge(), self.g)
        return out

    def wedge(self) -> Multivector:
        out = self.unary()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            out = wedge(out, self.unary())
        return out

    def unary(self) -> Multivector:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.take()
            return -self.unary()
        return self.atom()

    def atom(self) -> Multivector:
        t = self.tok
        n = self.g.dim
        if t.kind == "num":
            self.take()
            return Multivector.scalar(n, Num(Fraction(t.text)))
        if t.kind == "gen":
            self.take()
            k = int(t.text[1:])
            if not 1 <= k <= n:
                raise DimensionMismatch(f"line {t.line}, column {t.column}: generator {t.text} does not exist for metric of dimension {n}")
            return Multivector.blade(n, 1 << (k - 1))
        if t.kind == "ident" and t.text == "i":
            self.take()
            return Multivector.scalar(n, I)
        if t.kind == "ident" and t.text == "star":
            self.take()
            self.expect("(")
            inner = self.sum()
            self.expect(")")
            return hodge_star(inner, self.g, self.orientation)
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.sum()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {t.text or 'end of statement'!r}", t.line, t.column)


def _metric_from(words: list[Token]) -> Metric:
    if len(words) != 3:
        t = words[-1]
        raise ParseError("expected 'metric <name> <dim>'", t.line, t.column)
    name, dim = words[1], words[2]
    if not dim.text.isdigit():
        raise ParseError(f"metric dimension must be an integer, found {dim.text!r}", dim.line, dim.column)
    n = int(dim.text)
    if not 1 <= n <= 8:
        raise ParseError("metric dimension must lie in 1..8", dim.line, dim.column)
    if name.text == "euclid":
        return Metric.euclidean(n)
    if name.text == "lorentz":
        return Metric.diagonal([-1] + [1] * (n - 1))
    raise ParseError(f"unknown metric {name.text!r} (known: euclid, lorentz)", name.line, name.column)


def split_statements(source: str) -> list[tuple[str, int, int]]:
    """Statements separated by ';' or newlines, with their line and start column; '#' starts a comment."""
    out = []
    for ln, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        start = 0
        for piece in text.split(";"):
            if piece.strip():
                out.append((piece, ln, start + 1))
            start += len(piece) + 1
    return out


def evaluate_program(source: str) -> list[str]:
    metric: Metric | None = None
    orientation = 1
    results = []
    for stmt, ln, col in split_statements(source):
        toks = tokenize(stmt, ln, col)
        head = toks[0]
        if head.kind == "ident" and head.text == "metric":
            metric = _metric_from([t for t in toks if t.kind != "end"])
            continue
        if head.kind == "ident" and head.text == "orientation":
            body = [t for t in toks[1:] if t.kind != "end"]
            txt = "".join(t.text for t in body)
            if txt not in ("1", "+1", "-1"):
                raise ParseError("orientation must be +1 or -1", head.line, head.column)
            orientation = -1 if txt == "-1" else 1
            continue
        if metric is None:
            raise ParseError("no metric declared before the first expression", head.line, head.column)
        results.append(format_multivector(_Parser(toks, metric, orientation).parse()))
    return results


def cmd_algebra(cfg: RunConfig) -> int:
    path = cfg.expr_file
    try:
        source = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        lines = evaluate_program(source)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionMismatch as exc:
        print(f"dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIM
    _emit(cfg, "".join(x + "\n" for x in lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------
def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text, encoding="utf-8")


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="kahler-dirac", description="Dirac spectra on S^3 and S^2 with an exact Clifford engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    sp = sub.add_parser("spectrum", help="eigenvalue tables against the closed forms")
    sp.add_argument("--operator", required=True, choices=OPERATORS)
    sp.add_argument("--j-max", required=True, help="largest j, e.g. 2, 0.5 or 3/2")
    sp.add_argument("--format", default="table", choices=FORMATS)
    sp.add_argument("--out", type=Path)

    vp = sub.add_parser("verify", help="run every invariant suite")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--format", default="table", choices=FORMATS)
    vp.add_argument("--inject-fault", action="store_true", help="flip one gamma entry (the suite must then fail)")
    vp.add_argument("--out", type=Path)

    ap = sub.add_parser("algebra", help="evaluate Clifford/wedge/star expressions from a file ('-' for stdin)")
    ap.add_argument("expr_file")
    ap.add_argument("--out", type=Path)
    return p


def config_from_args(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.command == "spectrum":
        return RunConfig("spectrum", operator=ns.operator, j_max=parse_j(ns.j_max), format=ns.format, out=ns.out)
    if ns.command == "verify":
        return RunConfig("verify", format=ns.format, seed=ns.seed, out=ns.out, inject_fault=ns.inject_fault)
    return RunConfig("algebra", expr_file=ns.expr_file, out=ns.out)


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "algebra": cmd_algebra,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
