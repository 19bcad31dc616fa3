"""Command-line front end.

One experiment per invocation; every subcommand emits a JSON report (or CSV
for tabular outputs) that echoes its inputs, so reports can be independently
re-verified with the `verify` subcommand.  Large integers are printed as
decimal strings to survive 64-bit downstream tooling.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .cf import (cf_of_rational, cf_of_surd, continuant, convergents,
                 q_norm_product)
from .config import set_digit_cap
from .conjecture import (convergent_multiple_scan, denominator_recurrence,
                         glp_point, glp_product, glp_scan, infimum_scan,
                         lagrange_constant, lagrange_upper_bound,
                         littlewood_product, multiples_profile,
                         quadratic_witness, recurrence_period_mod,
                         recurrent_word_witness, small_vector_probe)
from .dvalue import (Constant, ESequence, Explicit, Periodic,
                     valuation_from_json)
from .errors import LittlewoodError
from .numbers import QuadraticSurd, frac_to_str
from .words import (ExplicitStream, PeriodicStream, SturmianStream,
                    ThueMorseStream, complexity_profile,
                    linear_recurrence_constant, morse_hedlund_classify,
                    palindrome_prefixes, prefix_return_times,
                    stream_from_json)

BIG = 1 << 53  # ints beyond exact float range are emitted as strings


class ConfigError(Exception):
    """Bad experiment specification on the command line."""


def _parse_fraction(text: str) -> Fraction:
    try:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}") from exc


def parse_surd(text: str) -> QuadraticSurd:
    """surd:P,D,Q[:shift] -- value (P + sqrt(D))/Q + shift."""
    body = text.split(":", 1)[1] if text.startswith("surd:") else text
    parts = body.split(":")
    try:
        p, d, q = (int(v) for v in parts[0].split(","))
        shift = int(parts[1]) if len(parts) > 1 else 0
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad surd spec {text!r}") from exc
    x = QuadraticSurd(p, d, q)
    return x + shift if shift else x


def parse_stream(text: str):
    """Stream shorthand or inline JSON (see README for the grammar)."""
    if text.startswith("{"):
        try:
            return stream_from_json(json.loads(text))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad stream JSON: {exc}") from exc
    kind, _, body = text.partition(":")
    try:
        if kind == "periodic":
            pre, _, per = body.partition("|")
            pre_list = [int(v) for v in pre.split(",") if v]
            per_list = [int(v) for v in per.split(",") if v]
            return PeriodicStream(pre_list, per_list)
        if kind == "sturmian":
            fields = body.split(";")
            slope_text = fields[0]
            slope = (parse_surd(slope_text) if slope_text.startswith("surd:")
                     else _parse_fraction(slope_text))
            rho = _parse_fraction(fields[1]) if len(fields) > 1 and fields[1] else Fraction(0)
            letters = (tuple(int(v) for v in fields[2].split(","))
                       if len(fields) > 2 and fields[2] else (1, 2))
            return SturmianStream(slope, rho, letters)
        if kind == "thuemorse":
            letters = tuple(int(v) for v in body.split(",")) if body else (1, 2)
            return ThueMorseStream(letters)
        if kind == "explicit":
            return ExplicitStream([int(v) for v in body.split(",") if v])
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError(f"bad stream spec {text!r}") from exc
    raise ConfigError(f"unknown stream rule {text!r}")


def parse_alpha(text: str):
    """surd:..., rational:p/q, or a stream spec meaning [0; a1 a2 ...]."""
    if text.startswith("surd:"):
        return parse_surd(text)
    if text.startswith(("rational:", "rat:")):
        return _parse_fraction(text.split(":", 1)[1])
    return parse_stream(text)


def parse_valuation(text: str):
    if text.startswith("{"):
        try:
            return valuation_from_json(json.loads(text))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad valuation JSON: {exc}") from exc
    kind, _, body = text.partition(":")
    try:
        if kind == "constant":
            return Constant(int(body))
        if kind == "periodic":
            return Periodic([int(v) for v in body.split(",")])
        if kind == "explicit":
            pattern, _, ext = body.partition(";extend=")
            return Explicit([int(v) for v in pattern.split(",")],
                            int(ext) if ext else None)
        if kind == "esequence":
            return ESequence([int(v) for v in body.split(",")])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad valuation spec {text!r}") from exc
    raise ConfigError(f"unknown valuation rule {text!r}")


def _alpha_as_quotients(alpha, m_hint: int = 0):
    """Quotient word stream of alpha = [a0; a1 a2 ...] (a0 dropped: products
    q*||q*alpha|| only depend on the fractional part)."""
    if isinstance(alpha, QuadraticSurd):
        return cf_of_surd(alpha).quotient_stream()
    if isinstance(alpha, Fraction):
        return cf_of_rational(alpha).quotient_stream()
    return alpha


# -- JSON encoding --------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= BIG else x
    if isinstance(x, Fraction):
        return frac_to_str(x)
    if isinstance(x, QuadraticSurd):
        return x.to_json()
    if isinstance(x, float):
        return x
    return x


def _enclosure_json(pv):
    out = {"lower": pv.lower, "upper": pv.upper, "float": float(pv)}
    if getattr(pv, "exact", None) is not None:
        out["exact"] = (pv.exact.to_json() if isinstance(pv.exact, QuadraticSurd)
                        else frac_to_str(pv.exact))
    return out


# -- subcommand handlers -----------------------------------------------------------

def _cmd_cf(args):
    alpha = parse_alpha(args.alpha)
    if isinstance(alpha, QuadraticSurd):
        exp = cf_of_surd(alpha)
    elif isinstance(alpha, Fraction):
        exp = cf_of_rational(alpha)
    else:
        raise ConfigError("cf needs a surd or rational alpha")
    out = exp.to_json()
    if args.depth is not None:
        convs = convergents(exp.a0, exp.quotient_stream(), args.depth)
        out["convergents"] = [{"n": c.n, "p": c.p, "q": c.q} for c in convs]
    return out


def _cmd_continuant(args):
    word = [int(v) for v in args.word.split(",") if v]
    return {"word": word, "value": continuant(word)}


def _cmd_complexity(args):
    s = parse_stream(args.stream)
    profile = complexity_profile(s, args.n, args.horizon)
    return {"n_max": profile.n_max, "counts": list(profile.counts),
            "certified": profile.certified,
            "classification": morse_hedlund_classify(profile).value}


def _cmd_returns(args):
    s = parse_stream(args.stream)
    return {"m": args.m, "horizon": args.horizon,
            "returns": prefix_return_times(s, args.m, args.horizon)}


def _cmd_palindromes(args):
    s = parse_stream(args.stream)
    return {"horizon": args.horizon,
            "palindrome_prefixes": palindrome_prefixes(s, args.horizon)}


def _cmd_linrec(args):
    s = parse_stream(args.stream)
    c = linear_recurrence_constant(s, args.block_max, args.horizon)
    return {"block_max": args.block_max, "horizon": args.horizon, "constant": c}


def _cmd_dvalue(args):
    v = parse_valuation(args.valuation)
    out = {"q": args.q, "order": v.order(args.q), "abs": v.absval(args.q)}
    if args.n is not None:
        out["e_n"] = v.e(args.n)
    return out


def _cmd_product(args):
    alpha = parse_alpha(args.alpha)
    v = parse_valuation(args.valuation)
    pv = littlewood_product(args.q, alpha, v)
    return {"q": args.q, "product": _enclosure_json(pv)}


def _cmd_scan(args):
    alpha = parse_alpha(args.alpha)
    v = parse_valuation(args.valuation)
    res = infimum_scan(alpha, v, args.qmax, threads=args.threads)
    return {"q_max": args.qmax, "best_q": res.best_q,
            "best": _enclosure_json(res.best),
            "trace": [{"q": r.q, "lower": r.lower, "upper": r.upper,
                       "float": float(r)} for r in res.trace]}


def _cmd_scan_convergents(args):
    alpha = parse_alpha(args.alpha)
    v = parse_valuation(args.valuation)
    res = convergent_multiple_scan(alpha, v, args.depth, args.kmax,
                                   q_cap=args.qcap)
    return {"depth": args.depth, "k_max": args.kmax, "best_q": res.best_q,
            "best": _enclosure_json(res.best)}


def _cmd_witness(args):
    alpha = parse_alpha(args.alpha)
    stream = _alpha_as_quotients(alpha)
    v = parse_valuation(args.valuation) if args.valuation else None
    horizon = args.horizon or (args.ell * args.ell + args.m + 10)
    rec = recurrent_word_witness(args.m, stream, args.ell, horizon, v)
    return {"witness": rec.to_json(), "selfcheck": rec.selfcheck()}


def _cmd_witness_quadratic(args):
    alpha = parse_alpha(args.alpha)
    if not isinstance(alpha, QuadraticSurd):
        raise ConfigError("witness-quadratic needs a surd alpha")
    v = parse_valuation(args.valuation)
    rec = quadratic_witness(alpha, v, args.n)
    return {"witness": rec.to_json(), "selfcheck": rec.selfcheck()}


def _cmd_lagrange(args):
    alpha = parse_alpha(args.alpha)
    if isinstance(alpha, QuadraticSurd):
        est = lagrange_constant(alpha)
    else:
        if isinstance(alpha, Fraction):
            raise ConfigError("Lagrange constant of a rational is zero; use a surd or stream")
        est = lagrange_upper_bound(alpha, args.depth)
    out = {"certified": est.certified, "depth": est.depth, "upper": est.upper,
           "lower": est.lower if est.lower is not None else "unknown",
           "float": float(est)}
    if est.exact is not None:
        out["exact"] = est.exact.to_json()
    return out


def _cmd_multiples(args):
    alpha = parse_alpha(args.alpha)
    if not isinstance(alpha, QuadraticSurd):
        raise ConfigError("multiples needs a surd alpha")
    rows = multiples_profile(alpha, args.n, m=args.m)
    return {"rows": [{"n": r.n, "c": float(r.estimate), "upper": r.estimate.upper,
                      "bound": r.bound, "two_sided_ok": r.two_sided_ok,
                      "bound_ok": r.bound_ok} for r in rows]}


def _cmd_period_mod(args):
    coeffs = [int(v) for v in args.coeffs.split(",")]
    init = [int(v) for v in args.init.split(",")]
    pre, per = recurrence_period_mod(coeffs, init, args.mod)
    return {"coeffs": coeffs, "init": init, "mod": args.mod,
            "preperiod": pre, "period": per}


def _cmd_surd_recurrence(args):
    alpha = parse_alpha(args.alpha)
    if not isinstance(alpha, QuadraticSurd):
        raise ConfigError("surd-recurrence needs a surd alpha")
    r, s, t = denominator_recurrence(alpha)
    return {"preperiod": r, "period": s, "t": t}


def _cmd_glp(args):
    alpha = parse_alpha(args.alpha)
    point = glp_point(alpha, args.n, args.p)
    pv = glp_product(point, args.a, args.b)
    return {"n": args.n, "p": args.p, "a": args.a, "b": args.b,
            "v": point.v, "product": _enclosure_json(pv)}


def _cmd_glp_scan(args):
    alpha = parse_alpha(args.alpha)
    eps = _parse_fraction(args.eps) if args.eps else None
    res = glp_scan(alpha, args.n, args.p, args.amax, args.bmax, eps=eps)
    out = {"n": args.n, "p": args.p, "a": res.a, "b": res.b,
           "min": _enclosure_json(res.value)}
    if res.eps_check is not None:
        out["exceeds_eps2_over_4"] = res.eps_check
    return out


def _cmd_mahler_probe(args):
    u = parse_alpha(args.u)
    if not isinstance(u, (QuadraticSurd, Fraction)):
        raise ConfigError("u must be a surd or rational")
    pair = small_vector_probe(u, _parse_fraction(args.v), args.p,
                              _parse_fraction(args.t), args.n,
                              _parse_fraction(args.delta), args.bound)
    return {"found": pair is not None,
            "pair": list(pair) if pair is not None else None}


def _cmd_verify(args):
    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    cmd = report.get("command")
    if cmd not in ("witness", "witness-quadratic"):
        raise ConfigError(f"can only verify witness reports, got {cmd!r}")
    inputs = report["inputs"]
    ns = argparse.Namespace(**inputs)
    fresh = _cmd_witness(ns) if cmd == "witness" else _cmd_witness_quadratic(ns)
    match = fresh["witness"] == report["result"]["witness"]
    ok = match and fresh["selfcheck"]
    return {"verified": bool(ok), "recomputed_match": bool(match)}


# -- harness -------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--output", default=None, help="write the report to a file")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp for byte-identical reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="littlewood",
        description="Exact experiments around Littlewood-type products")
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="command", required=True)

    def sub(name, fn, **kw):
        s = sp.add_parser(name, **kw)
        s.set_defaults(handler=fn)
        _add_common(s)
        return s

    s = sub("cf", _cmd_cf, help="continued fraction expansion")
    s.add_argument("--alpha", required=True)
    s.add_argument("--depth", type=int, default=None,
                   help="also tabulate convergents 0..depth")

    s = sub("continuant", _cmd_continuant, help="continuant of a word")
    s.add_argument("--word", required=True, help="comma-separated quotients")

    s = sub("complexity", _cmd_complexity, help="factor counts p(1..n)")
    s.add_argument("--stream", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--horizon", type=int, required=True)

    s = sub("returns", _cmd_returns, help="prefix return times")
    s.add_argument("--stream", required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--horizon", type=int, required=True)

    s = sub("palindromes", _cmd_palindromes, help="palindromic prefixes")
    s.add_argument("--stream", required=True)
    s.add_argument("--horizon", type=int, required=True)

    s = sub("linear-recurrence", _cmd_linrec, help="occurrence-gap constant")
    s.add_argument("--stream", required=True)
    s.add_argument("--block-max", type=int, required=True)
    s.add_argument("--horizon", type=int, required=True)

    s = sub("dvalue", _cmd_dvalue, help="pseudo-absolute value of q")
    s.add_argument("--valuation", required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, default=None, help="also report e_n")

    s = sub("product", _cmd_product, help="q * ||q*alpha|| * |q|")
    s.add_argument("--alpha", required=True)
    s.add_argument("--valuation", required=True)
    s.add_argument("--q", type=int, required=True)

    s = sub("scan", _cmd_scan, help="exhaustive infimum scan")
    s.add_argument("--alpha", required=True)
    s.add_argument("--valuation", required=True)
    s.add_argument("--qmax", type=int, required=True)
    s.add_argument("--threads", type=int, default=1)

    s = sub("scan-convergents", _cmd_scan_convergents,
            help="scan over q = e_k * q_n candidates")
    s.add_argument("--alpha", required=True)
    s.add_argument("--valuation", required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--qcap", type=int, default=None)

    s = sub("witness", _cmd_witness, help="recurrent-word congruence witness")
    s.add_argument("--alpha", required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--horizon", type=int, default=None)
    s.add_argument("--valuation", default=None)

    s = sub("witness-quadratic", _cmd_witness_quadratic,
            help="witness for quadratic alpha at modulus e_n")
    s.add_argument("--alpha", required=True)
    s.add_argument("--valuation", required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub("lagrange", _cmd_lagrange, help="Lagrange constant (exact for surds)")
    s.add_argument("--alpha", required=True)
    s.add_argument("--depth", type=int, default=100)

    s = sub("multiples", _cmd_multiples, help="c(n*alpha) profile")
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=0)

    s = sub("period-mod", _cmd_period_mod, help="linear recurrence period mod ell")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--init", required=True)
    s.add_argument("--mod", type=int, required=True)

    s = sub("surd-recurrence", _cmd_surd_recurrence,
            help="three-term recurrence of convergent denominators")
    s.add_argument("--alpha", required=True)

    s = sub("glp", _cmd_glp, help="generalized real x p-adic product")
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)

    s = sub("glp-scan", _cmd_glp_scan, help="grid minimum of the generalized product")
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--amax", type=int, required=True)
    s.add_argument("--bmax", type=int, required=True)
    s.add_argument("--eps", default=None)

    s = sub("mahler-probe", _cmd_mahler_probe, help="small-vector inequality probe")
    s.add_argument("--u", required=True)
    s.add_argument("--v", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--bound", type=int, required=True)

    s = sub("verify", _cmd_verify, help="re-verify a witness report file")
    s.add_argument("--report", required=True)

    return ap


def _input_echo(args) -> dict:
    skip = {"handler", "command", "format", "output", "no_timestamp"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _csv_rows(command: str, result: dict):
    """Tabular view for the subcommands that have one."""
    if command == "scan":
        header = ["q", "product", "lower", "upper"]
        rows = [[r["q"], r["float"], frac_to_str(r["lower"]), frac_to_str(r["upper"])]
                for r in result["trace"]]
        return header, rows
    if command == "multiples":
        header = ["n", "c", "upper", "bound", "two_sided_ok", "bound_ok"]
        rows = [[r["n"], r["c"], frac_to_str(r["upper"]), frac_to_str(r["bound"]),
                 r["two_sided_ok"], r["bound_ok"]] for r in result["rows"]]
        return header, rows
    if command == "complexity":
        header = ["n", "p_n"]
        rows = [[i + 1, c] for i, c in enumerate(result["counts"])]
        return header, rows
    if command == "cf" and "convergents" in result:
        header = ["n", "p", "q"]
        rows = [[c["n"], c["p"], c["q"]] for c in result["convergents"]]
        return header, rows
    raise ConfigError(f"{command} has no CSV form; use --format json")


def main(argv=None) -> int:
    cap = os.environ.get("LITTLEWOOD_DIGIT_CAP")
    if cap:
        try:
            set_digit_cap(int(cap))
        except ValueError:
            print("error: bad LITTLEWOOD_DIGIT_CAP", file=sys.stderr)
            return 2
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        result = args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LittlewoodError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    report = {
        "command": args.command,
        "version": __version__,
        "inputs": _input_echo(args),
        "result": result,
    }
    if not args.no_timestamp:
        report["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    if args.format == "csv":
        header, rows = _csv_rows(args.command, result)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
