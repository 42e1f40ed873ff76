"""Command-line front end.

    znshift kgroups --n 3 --max-level 8 --json
    znshift entropy --n-range 1..8 --format csv
    znshift matrices --n 1 --level 2 --format csv

Every flag can also be set through an environment variable named ``ZN_`` plus
the upper-cased flag (``ZN_MAX_LEVEL=8``); explicit flags win.  Exit status is
0 on success, 1 on bad input and 2 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import entropy, ktheory
from .errors import BudgetExceeded, ConsistencyError, InputError
from .intlin import to_csv
from .lambda_graph import build_level_pair, format_symbolic
from .words import Alphabet, check_code, count_series, count_words

COMMANDS = ("kgroups", "entropy", "kms", "matrices", "count-words", "code-check", "report")
MAX_SAFE_INT = 2**53


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(name, default=None):
    return os.environ.get("ZN_" + name.upper().replace("-", "_"), default)


def parse_range(text: str) -> list[int]:
    """``"3"`` or ``"A..B"`` (inclusive) into a nonempty list of N values."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"malformed range {text!r}, expected A..B") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"range {text!r} is empty or contains N < 1")
    return list(range(lo, hi + 1))


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, default=_env("n"), help="alphabet parameter N")
    common.add_argument("--n-range", default=_env("n_range"), help="inclusive range A..B of N")
    common.add_argument("--level", type=int, default=int(_env("level", 2)))
    common.add_argument("--max-level", type=int, default=int(_env("max_level", 6)))
    common.add_argument("--depth", type=int, default=int(_env("depth", 30)))
    common.add_argument("--kmax", type=int, default=int(_env("kmax", 12)))
    common.add_argument("--max-len", type=int, default=int(_env("max_len", 8)), help="code-check truncation")
    common.add_argument("--tol", type=_positive_float, default=_positive_float(_env("tol", "1e-12")))
    common.add_argument("--format", choices=("json", "csv", "text"), default=_env("format", "text"))
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--brute-budget", type=int, default=_env("brute_budget"))
    common.add_argument("--mode", choices=("dp", "brute"), default=_env("mode", "dp"), help="count-words method")
    common.add_argument(
        "--at",
        choices=("beta", "growth"),
        default=_env("at", "beta"),
        help="kms: evaluate at the root of F_N (beta) or of the growth polynomial",
    )

    p = _Parser(prog="znshift", description="Invariants of the shifts Z_N.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    helps = {
        "kgroups": "K-groups, Bowen-Franks groups and unit class",
        "entropy": "entropy root beta_N and word-count growth",
        "kms": "closed-form KMS vector and its residuals",
        "matrices": "symbolic matrix system (M, I) at one level",
        "count-words": "theta_k, the number of admissible words of length k",
        "code-check": "bounded unique-decipherability check of the code",
        "report": "combined per-N report",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def _ns(args) -> list[int]:
    # --n-range wins over --n
    if args.n_range is not None:
        return parse_range(args.n_range)
    if args.n is None:
        raise UsageError("--n or --n-range is required")
    return parse_range(str(args.n))


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= MAX_SAFE_INT else x
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return float(x)  # mpmath values


def _group_str(d: dict) -> str:
    parts = [f"Z/{t}" for t in d["torsion"]]
    if d["free_rank"]:
        parts.append("Z" if d["free_rank"] == 1 else f"Z^{d['free_rank']}")
    return " + ".join(parts) or "0"


# record builders -----------------------------------------------------------


def kgroups_record(n: int, max_level: int) -> dict:
    rec = ktheory.invariants(n, max_level)
    kg = ktheory.k_groups(n, max_level)
    rec["status"] = kg.status
    rec["connecting_map"] = kg.connecting_maps[0]
    return rec


def entropy_record(n: int, tol: float, kmax: int | None = None) -> dict:
    root = entropy.beta_root(n, tol)
    growth = entropy.growth_root(n, tol)
    rec = root.to_dict()
    rec["growth_rate"] = float(growth.beta)
    rec["growth_rate_str"] = entropy.mpmath.nstr(growth.beta, 30)
    if kmax:
        s = entropy.entropy_series(n, kmax)
        rec["theta"] = s.theta
        rec["theta_roots"] = s.roots
    return rec


def kms_record(n: int, depth: int, at: str, tol: float) -> dict:
    b = entropy.beta_root(n, tol) if at == "beta" else entropy.growth_root(n, tol)
    v = entropy.kms_vector(n, depth, beta=b.beta)
    res = entropy.kms_residuals(v)
    return {"N": n, "at": at, "beta": float(b.beta), "depth": depth, "vector": v.to_dict(), "residuals": res}


def matrices_record(n: int, level: int) -> dict:
    a = Alphabet(n)
    pair = build_level_pair(level, a)
    return {
        "N": n,
        "level": level,
        "rows": [str(c) for c in pair.rows],
        "cols": [str(c) for c in pair.cols],
        "M": pair.m_nonneg,
        "I": pair.i_matrix,
        "M_symbolic": [[format_symbolic(e, a) for e in row] for row in pair.m_symbolic],
    }


def count_record(n: int, kmax: int, mode: str, budget) -> dict:
    a = Alphabet(n)
    if mode == "dp":
        theta = count_series(kmax, a)
    else:
        theta = [count_words(k, a, "brute", budget) for k in range(1, kmax + 1)]
    return {"N": n, "mode": mode, "theta": theta}


def code_record(n: int, max_len: int) -> dict:
    return {"N": n, "max_len": max_len, "uniquely_decipherable": check_code(max_len, Alphabet(n))}


def report_record(n: int, args) -> dict:
    inv = ktheory.invariants(n, args.max_level)
    ent = entropy_record(n, args.tol, args.kmax)
    kms = kms_record(n, args.depth, "growth", args.tol)
    beta_kms = kms_record(n, args.depth, "beta", args.tol)
    other = n + 1
    flow = ktheory.flow_report(n, other, args.max_level)
    res = kms["residuals"]
    return {
        "N": n,
        "kgroups": {k: inv[k] for k in ("K0", "K1", "unit_class", "stabilization_level")},
        "bowen_franks": {"BF0": inv["BF0"], "BF1": inv["BF1"]},
        "entropy": ent,
        "kms": {
            "at": "growth",
            "beta": kms["beta"],
            "p0": kms["vector"]["p0"],
            "e0": kms["vector"]["e"][0],
            "positive": True,
            "eigen_max": res["eigen_max"],
            "recursion_max": res["recursion_max"],
            "normalization": res["normalization"],
            "eigen_max_at_beta": beta_kms["residuals"]["eigen_max"],
        },
        "counts": {"kmax": args.kmax, "theta_last": ent["theta"][-1], "root_last": ent["theta_roots"][-1]},
        "flow": flow["conclusion"],
    }


# emitters ------------------------------------------------------------------


def _emit_json(records, single: bool) -> str:
    data = records[0] if single else records
    return json.dumps(_jsonable(data), indent=2) + "\n"


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _text_kgroups(r):
    return (
        f"N={r['N']}: K0 = {_group_str(r['K0'])}, K1 = {_group_str(r['K1'])}, "
        f"unit class {tuple(r['unit_class'])}, BF0 = {_group_str(r['BF0'])}, BF1 = {_group_str(r['BF1'])}, "
        f"stable from level {r['stabilization_level']}"
    )


def render(command: str, records: list[dict], fmt: str, single: bool) -> str:
    if fmt == "json":
        return _emit_json(records, single)
    if command == "matrices":
        if fmt == "csv":
            return "\n".join(to_csv(r["M"], len(r["cols"])) + "\n" + to_csv(r["I"], len(r["cols"])) for r in records)
        out = []
        for r in records:
            width = max(len(s) for row in r["M_symbolic"] for s in row + r["cols"])
            out.append(f"N={r['N']} level {r['level']}: M (rows {' '.join(r['rows'])})")
            out.append("      " + " ".join(c.rjust(width) for c in r["cols"]))
            for lab, row in zip(r["rows"], r["M_symbolic"]):
                out.append(lab.ljust(6) + " ".join(s.rjust(width) for s in row))
        return "\n".join(out) + "\n"
    if command == "kgroups":
        if fmt == "csv":
            return _emit_csv(
                ["N", "K0", "K1", "unit_class", "BF0", "BF1", "stabilization_level"],
                [
                    [r["N"], _group_str(r["K0"]), _group_str(r["K1"]), " ".join(map(str, r["unit_class"])),
                     _group_str(r["BF0"]), _group_str(r["BF1"]), r["stabilization_level"]]
                    for r in records
                ],
            )
        return "\n".join(_text_kgroups(r) for r in records) + "\n"
    if command == "entropy":
        if fmt == "csv":
            return _emit_csv(
                ["N", "beta", "residual", "entropy_log", "growth_rate"],
                [[r["N"], r["beta_str"], repr(r["residual"]), repr(r["entropy_log"]), r["growth_rate_str"]] for r in records],
            )
        return "\n".join(
            f"N={r['N']}: beta_N = {r['beta_str'][:14]}  log beta_N = {r['entropy_log']:.12f}  "
            f"growth rate = {r['growth_rate_str'][:14]}"
            for r in records
        ) + "\n"
    if command == "kms":
        if fmt == "csv":
            rows = []
            for r in records:
                v = r["vector"]
                for i in range(len(v["e"])):
                    rows.append([r["N"], i, repr(v["p0"]), repr(v["e"][i]), repr(v["f"][i]), repr(v["q"][i]), repr(v["r"][i])])
            return _emit_csv(["N", "n", "p0", "e", "f", "q", "r"], rows)
        out = []
        for r in records:
            res = r["residuals"]
            out.append(
                f"N={r['N']} at {r['at']} = {r['beta']:.12f}: p0 = {r['vector']['p0']:.12f}, "
                f"max eigen residual {res['eigen_max']:.3e}, recursions {res['recursion_max']:.3e}, "
                f"normalization {res['normalization']:.3e}, series tail bound {res['p0_row_tail_bound']:.3e}"
            )
        return "\n".join(out) + "\n"
    if command == "count-words":
        if fmt == "csv":
            return _emit_csv(["N", "k", "theta"], [[r["N"], k, t] for r in records for k, t in enumerate(r["theta"], 1)])
        return "\n".join(f"N={r['N']}: " + " ".join(str(t) for t in r["theta"]) for r in records) + "\n"
    if command == "code-check":
        if fmt == "csv":
            return _emit_csv(["N", "max_len", "uniquely_decipherable"], [[r["N"], r["max_len"], r["uniquely_decipherable"]] for r in records])
        return "\n".join(
            f"N={r['N']}: code truncated at length {r['max_len']} is "
            + ("uniquely decipherable" if r["uniquely_decipherable"] else "NOT uniquely decipherable")
            for r in records
        ) + "\n"
    # report
    if fmt == "csv":
        return _emit_csv(
            ["N", "K0", "K1", "BF0", "BF1", "beta", "growth_rate", "kms_eigen_max", "flow"],
            [
                [r["N"], _group_str(r["kgroups"]["K0"]), _group_str(r["kgroups"]["K1"]), _group_str(r["bowen_franks"]["BF0"]),
                 _group_str(r["bowen_franks"]["BF1"]), r["entropy"]["beta_str"], r["entropy"]["growth_rate_str"],
                 repr(r["kms"]["eigen_max"]), r["flow"]]
                for r in records
            ],
        )
    out = []
    for r in records:
        kg, bf, en = r["kgroups"], r["bowen_franks"], r["entropy"]
        out += [
            f"N={r['N']}",
            f"  K0 = {_group_str(kg['K0'])}, K1 = {_group_str(kg['K1'])}, unit class {tuple(kg['unit_class'])}",
            f"  BF0 = {_group_str(bf['BF0'])}, BF1 = {_group_str(bf['BF1'])}",
            f"  beta_N = {en['beta_str'][:14]} (root of F_N), growth rate = {en['growth_rate_str'][:14]}",
            f"  KMS at growth rate: p0 = {r['kms']['p0']:.10f}, eigen residual {r['kms']['eigen_max']:.2e}",
            f"  theta_{r['counts']['kmax']} = {r['counts']['theta_last']}",
            f"  {r['flow']}",
        ]
    return "\n".join(out) + "\n"


def execute(args) -> str:
    cmd = args.command
    if cmd is None:
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    ns = _ns(args)
    single = args.n_range is None
    budget = None if args.brute_budget is None else int(args.brute_budget)
    if cmd == "kgroups":
        recs = [kgroups_record(n, args.max_level) for n in ns]
    elif cmd == "entropy":
        recs = [entropy_record(n, args.tol) for n in ns]
    elif cmd == "kms":
        recs = [kms_record(n, args.depth, args.at, args.tol) for n in ns]
    elif cmd == "matrices":
        recs = [matrices_record(n, args.level) for n in ns]
    elif cmd == "count-words":
        if args.kmax < 1:
            raise UsageError("--kmax must be >= 1")
        recs = [count_record(n, args.kmax, args.mode, budget) for n in ns]
    elif cmd == "code-check":
        recs = [code_record(n, args.max_len) for n in ns]
    else:
        recs = [report_record(n, args) for n in ns]
    return render(cmd, recs, args.format, single)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = execute(args)
    except (InputError, BudgetExceeded, ValueError) as exc:
        print(f"znshift: error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"znshift: consistency failure: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
