"""Command-line front end.

    cosetchar char --algebra A1 --kind integrable --level 1 --weight 0 --order 3
    cosetchar branch gko --algebra A1 --k 1 --mu 0 --nu 1 --order 8
    cosetchar verify gko --algebra A1 --k 1 --order 8

Exit codes: 0 success, 1 a mathematical check or decomposition failed,
2 usage error (bad arguments, invalid weights, budget exceeded).
Only the payload goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import liealg as la
from .affchar import (
    Heisenberg,
    Sugawara,
    WShifted,
    fock_character,
    frenkel_kac_level1_character,
    integrable_character,
    verma_w_character,
    weyl_module_character,
)
from .branching import gko_branching
from .errors import CosetCharError, NegativeMultiplicity
from .gseries import QSeries, frac_str, parse_frac
from . import verify as vf

KINDS = ("integrable", "frenkel-kac", "weyl", "fock", "w-verma")
SUITES = (
    "gko",
    "main1",
    "levelrank-a",
    "levelrank-d-cc",
    "ks-cc",
    "unitarity",
    "heisenberg",
    "ffduality-cc",
    "coset-cc",
    "frenkel-kac",
    "generic",
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    algebra: la.RootSystem | None
    args: argparse.Namespace
    fmt: str
    seed: int
    output: str | None


def parse_rational(s: str) -> Fraction:
    try:
        return parse_frac(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {s!r}") from None


def parse_weight(s: str | None, rs: la.RootSystem, what: str = "weight") -> tuple:
    if s is None:
        raise UsageError(f"--{what} is required")
    parts = [p for p in s.split(",") if p.strip()]
    if len(parts) != rs.rank:
        raise UsageError(f"--{what} needs {rs.rank} comma-separated labels for {rs.name}, got {s!r}")
    return la.weight(parse_rational(p.strip()) for p in parts)


def parse_algebra(s: str | None) -> la.RootSystem:
    if s is None:
        raise UsageError("--algebra is required")
    try:
        return la.root_system(s)
    except CosetCharError as e:
        raise UsageError(str(e)) from None


def _int_arg(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise UsageError(f"{what} must be an integer")
    return int(x)


# -- formatting -----------------------------------------------------------------------


def _coord(x) -> str:
    return frac_str(x)


def _series_csv(x) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(x, QSeries):
        w.writerow(["exponent", "grade", "coefficient"])
        for g in range(x.order + 1):
            w.writerow([frac_str(x.offset + g), g, x[g]])
    else:
        w.writerow(["exponent", "grade", "weight", "coefficient"])
        for g, wt, c in x.items():
            w.writerow([frac_str(x.offset + g), g, ",".join(map(_coord, wt)), c])
    return buf.getvalue()


def _series_text(x) -> str:
    lines = [f"offset {frac_str(x.offset)}  order {x.order}"]
    if isinstance(x, QSeries):
        lines.append(" ".join(str(c) for c in x.coefficients()))
    else:
        for g in range(x.order + 1):
            sl = x.slice(g)
            terms = " ".join(f"{c}*[{','.join(map(_coord, w))}]" for w, c in sorted(sl.items()))
            lines.append(f"q^{frac_str(x.offset + g)}: {terms or '0'}")
    return "\n".join(lines) + "\n"


def _table_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "offset", "grade", "coefficient"])
    for lab in table.labels():
        b = table[lab]
        for g in range(b.order + 1):
            w.writerow([",".join(map(_coord, lab)), frac_str(b.offset), g, b[g]])
    return buf.getvalue()


def _table_text(table) -> str:
    lines = [f"{table.family}  order {table.order}"]
    for lab in table.labels():
        b = table[lab]
        lines.append(f"[{','.join(map(_coord, lab))}] q^{frac_str(b.offset)}: {' '.join(map(str, b.coefficients()))}")
    return "\n".join(lines) + "\n"


def _report_text(r: vf.Report) -> str:
    lines = [f"suite {r.suite}: {'PASS' if r.passed else 'FAIL'}"]
    for c in r.checks:
        d = c.to_dict()
        tail = "" if c.passed else f"  expected {json.dumps(d['expected'])} got {json.dumps(d['actual'])}"
        lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.desc}{tail}")
    return "\n".join(lines) + "\n"


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------------


def cmd_char(cfg: CliConfig) -> int:
    a, rs = cfg.args, cfg.algebra
    lam = parse_weight(a.weight, rs)
    level = parse_rational(a.level) if a.level is not None else None
    kind = a.kind
    if kind != "frenkel-kac" and level is None:
        raise UsageError(f"--level is required for kind {kind}")
    if kind == "integrable":
        x = integrable_character(rs, _int_arg(level, "--level"), lam, a.order)
    elif kind == "frenkel-kac":
        x = frenkel_kac_level1_character(rs, lam, a.order)
    elif kind == "weyl":
        x = weyl_module_character(rs, level, lam, a.order)
    elif kind == "fock":
        rule = {"heisenberg": lambda: Heisenberg(), "sugawara": lambda: Sugawara(_rule_level(a)), "w-shifted": lambda: WShifted(_rule_level(a))}[a.rule]()
        x = fock_character(rs, level, lam, a.order, rule)
    else:
        x = verma_w_character(rs, level, lam, a.order)
    if cfg.fmt == "json":
        _emit(cfg, x.to_json() + "\n")
    elif cfg.fmt == "csv":
        _emit(cfg, _series_csv(x))
    else:
        _emit(cfg, _series_text(x))
    return 0


def _rule_level(a) -> Fraction:
    if a.rule_level is None:
        raise UsageError("--rule-level is required for this offset rule")
    return parse_rational(a.rule_level)


def cmd_branch(cfg: CliConfig) -> int:
    a, rs = cfg.args, cfg.algebra
    k = _int_arg(parse_rational(a.k), "--k")
    if k < 0:
        raise UsageError("--k must be a nonnegative integer")
    mu = parse_weight(a.mu, rs, "mu")
    nu = parse_weight(a.nu, rs, "nu")
    if not la.in_level(rs, mu, k):
        raise UsageError(f"mu = {list(mu)} is not a level-{k} dominant weight")
    if not la.in_level(rs, nu, 1):
        raise UsageError(f"nu = {list(nu)} is not a level-1 dominant weight")
    table = gko_branching(rs, k, mu, nu, a.order)
    if cfg.fmt == "json":
        _emit(cfg, table.to_json() + "\n")
    elif cfg.fmt == "csv":
        _emit(cfg, _table_csv(table))
    else:
        _emit(cfg, _table_text(table))
    return 0


def _budget(a) -> vf.Budget:
    b = vf.Budget.from_env()
    over = {f: getattr(a, f) for f in ("max_rank", "max_level", "max_order") if getattr(a, f) is not None}
    return vf.Budget(**{**b.__dict__, **over})


def _need(a, name):
    v = getattr(a, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for this suite")
    return v


def cmd_verify(cfg: CliConfig) -> int:
    a = cfg.args
    suite = a.suite
    budget = _budget(a)
    rs = cfg.algebra
    timed = a.timed
    order = a.order
    seed = cfg.seed
    if suite in ("gko", "main1", "frenkel-kac", "unitarity", "heisenberg", "ffduality-cc", "coset-cc", "generic") and rs is None:
        raise UsageError("--algebra is required for this suite")
    if suite == "gko":
        r = vf.verify_gko(rs, _int_arg(parse_rational(_need(a, "k")), "--k"), order or 8, budget, timed)
    elif suite == "main1":
        r = vf.verify_main1_vacuum(rs, _int_arg(parse_rational(_need(a, "k")), "--k"), order or 8, budget, timed)
    elif suite == "levelrank-a":
        r = vf.verify_levelrank_A(_need(a, "n"), _need(a, "m"), order or 8, budget, timed)
    elif suite == "levelrank-d-cc":
        r = vf.verify_levelrank_D_cc(_need(a, "n"), _need(a, "m"), timed)
    elif suite == "ks-cc":
        r = vf.verify_ks_cc(_need(a, "n"), _need(a, "m"), timed)
    elif suite == "unitarity":
        r = vf.verify_unitarity(rs, a.pmax or 30, timed)
    elif suite == "heisenberg":
        r = vf.verify_heisenberg_identity(rs, a.samples or 1000, seed, timed)
    elif suite == "ffduality-cc":
        r = vf.verify_ffduality_cc(rs, a.samples or 20, seed, timed)
    elif suite == "coset-cc":
        r = vf.verify_coset_cc_identity(rs, a.samples or 20, seed, timed=timed)
    elif suite == "frenkel-kac":
        r = vf.verify_frenkel_kac(rs, order or 8, budget, timed)
    else:
        r = vf.verify_generic(rs, order or 6, seed, a.samples or 3, budget=budget, timed=timed)
    if cfg.fmt == "text":
        _emit(cfg, _report_text(r))
    else:
        _emit(cfg, r.to_json() + "\n")
    return 0 if r.passed else 1


# -- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cosetchar", description="Exact affine, W-algebra and coset characters.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmts=("json", "csv", "text")):
        sp.add_argument("--algebra", help="root system such as A1, D4, E8")
        sp.add_argument("--order", type=int, help="truncation order (grades above the offset)")
        sp.add_argument("--format", choices=fmts, default=fmts[0])
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", help="write the payload to this file instead of stdout")

    c = sub.add_parser("char", help="print a character")
    common(c)
    c.add_argument("--kind", choices=KINDS, required=True)
    c.add_argument("--level", help="level (integer or p/q); the norm for fock")
    c.add_argument("--weight", help="comma-separated Dynkin labels")
    c.add_argument("--rule", choices=("heisenberg", "sugawara", "w-shifted"), default="heisenberg")
    c.add_argument("--rule-level", help="level used by the sugawara and w-shifted offset rules")

    b = sub.add_parser("branch", help="print a branching table")
    b.add_argument("decomposition", choices=("gko",))
    common(b)
    b.add_argument("--k", required=True)
    b.add_argument("--mu", required=True)
    b.add_argument("--nu", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    common(v, ("json", "text"))
    v.add_argument("--k")
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--pmax", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--timed", action="store_true", help="record wall-clock milliseconds in the report")
    v.add_argument("--max-rank", type=int)
    v.add_argument("--max-level", type=int)
    v.add_argument("--max-order", type=int)
    return p


_NEGATIVE = re.compile(r"^-\d[\d/,\-]*$")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-5/4" or "-1,2" as an option; glue it to its flag instead
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
        rs = parse_algebra(args.algebra) if args.algebra is not None else None
        if args.command in ("char", "branch"):
            if rs is None:
                raise UsageError("--algebra is required")
            if args.order is None:
                raise UsageError("--order is required")
        if args.order is not None and args.order < 0:
            raise UsageError("--order must be nonnegative")
        cfg = CliConfig(args.command, rs, args, args.format, args.seed, args.output)
        handler = {"char": cmd_char, "branch": cmd_branch, "verify": cmd_verify}[args.command]
        return handler(cfg)
    except UsageError as e:
        print(f"cosetchar: error: {e}", file=sys.stderr)
        return 2
    except NegativeMultiplicity as e:
        print(f"cosetchar: negative multiplicity: {e}", file=sys.stderr)
        return 1
    except ArithmeticError as e:
        print(f"cosetchar: inconsistency: {e}", file=sys.stderr)
        return 1
    except (CosetCharError, ValueError, TypeError) as e:
        print(f"cosetchar: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
