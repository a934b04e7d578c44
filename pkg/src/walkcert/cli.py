"""Command-line interface. Payloads are JSON on stdout; exit 0 ok, 1 violation/refutation, 2 usage error."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import certificates as cert_mod
from .graph import Graph, GraphFormatError, decode_graph6, max_corpus_n, parse_edge_list, walk_counts
from .inequalities import (
    Exhaustive,
    FamilyScan,
    GraphList,
    WalkInequality,
    evaluate_inequality,
    parse_family,
    parse_range,
    search_counterexamples,
    to_polynomial,
)
from .newton import newton_vertex_check
from .polynomials import Polynomial, format_fraction, symmetrize
from .spectral import SpectralError, spectral_decompose, symmetrization_identity_residual


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument helpers

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _frac_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _load_json(arg: str) -> dict:
    text = arg if arg.lstrip().startswith("{") else _read(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {arg!r}: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None


def _load_graph(arg: str | None, family: str | None) -> Graph:
    if family:
        return parse_family(family)({})
    if arg is None:
        raise UsageError("a graph (graph6 string, file path, or --family name:size) is required")
    if os.path.exists(arg):
        text = _read(arg)
        if text.lstrip().startswith("n "):
            return parse_edge_list(text)
        first = text.strip().splitlines()[0] if text.strip() else ""
        return decode_graph6(first)
    return decode_graph6(arg)


def _load_inequality(arg: str) -> WalkInequality:
    return WalkInequality.from_json(_load_json(arg))


def _load_polynomial(arg: str) -> Polynomial:
    return Polynomial.from_json(_load_json(arg))


def _sigma(text: str, k: int) -> list[int]:
    # 1-based images on the command line
    images = _int_list(text)
    if sorted(images) != list(range(1, k + 1)):
        raise UsageError(f"--sigma must list the images of 1..{k}, got {text!r}")
    return [s - 1 for s in images]


# --------------------------------------------------------------------------
# subcommands

def cmd_walks(args) -> tuple[dict, int]:
    if args.max < 0:
        raise UsageError("--max must be nonnegative")
    g = _load_graph(args.graph, args.family)
    wt = walk_counts(g, args.max)
    return {"n": g.n, "m": g.m, "w": [str(x) for x in wt.counts]}, 0


def cmd_check(args) -> tuple[dict, int]:
    ineq = _load_inequality(args.inequality)
    g = _load_graph(args.graph, args.family)
    val = evaluate_inequality(ineq, walk_counts(g, ineq.max_index))
    payload = {"inequality": str(ineq), "value": format_fraction(val), "holds": val >= 0,
               "violations": [] if val >= 0 else [{"value": format_fraction(val)}]}
    return payload, 0 if val >= 0 else 1


def cmd_search(args) -> tuple[dict, int]:
    ineq = _load_inequality(args.inequality)
    if args.exhaustive is not None:
        limit = max_corpus_n(args.allow_n8)
        if args.exhaustive > limit:
            raise UsageError(f"exhaustive search limited to n <= {limit} (use --allow-n8 or WALKCERT_MAX_N)")
        sizes = range(1, args.exhaustive + 1) if args.all_sizes else [args.exhaustive]
        corpora = [Exhaustive(n, override=args.allow_n8) for n in sizes]
    elif args.family:
        if not args.range:
            raise UsageError("--family scans need --range var=lo..hi")
        var, values = parse_range(args.range)
        corpora = [FamilyScan(args.family, var, tuple(values))]
    elif args.graphs:
        corpora = [GraphList(tuple((p, _load_graph(p, None)) for p in args.graphs))]
    else:
        raise UsageError("choose a corpus: --exhaustive n, --family expr --range v=a..b, or --graphs ...")
    report = None
    for corpus in corpora:
        rep = search_counterexamples(ineq, corpus, stop_at_first=args.stop_at_first,
                                     regular_only=args.regular_only, jobs=args.jobs)
        report = rep if report is None else report.merge(rep)
        if args.stop_at_first and report.violations:
            break
    if len(corpora) > 1:
        report.corpus = f"exhaustive(n=1..{args.exhaustive})"
    payload = report.to_json()
    payload["regular_only"] = args.regular_only
    if not args.timing:
        payload.pop("elapsed")
    return payload, 1 if report.violations else 0


def _maybe_shift(cert, shift):
    return cert_mod.shift_certificate(cert, shift) if shift else cert


def cmd_certify(args) -> tuple[dict, int]:
    kind = args.kind
    if kind == "square":
        alpha = _int_list(args.alpha)
        sigma = _sigma(args.sigma, len(alpha))
        cert = cert_mod.square_certificate(alpha, sigma)
    elif kind == "sandwich":
        a, b, c = _triple(args.abc)
        cert = cert_mod.sandwich_certificate(a, b, c)
    elif kind == "agm":
        cert = cert_mod.agm_sos(_int_list(args.alpha))
    elif kind == "two-factor":
        res = cert_mod.two_factor_characterize(_int_list(args.alpha), _int_list(args.beta))
        out = res.to_json()
        if not res.ok:
            out["refutation"] = [out["refuted"]]
            return out, 1
        if args.shift:
            out["certificate"] = _maybe_shift(res.certificate, args.shift).to_json()
        return out, 0
    elif kind == "univariate":
        if args.k is None or args.a is None:
            raise UsageError("univariate needs --k and --a")
        cert = cert_mod.univariate_certificate(args.k, _frac_list(args.a), Fraction(args.tol))
    elif kind == "binary":
        res = cert_mod.binary_psd_decide(_load_polynomial(args.poly))
        if not res.psd:
            out = res.to_json()
            out["refutation"] = [out["refutation"]]
            return out, 1
        cert = res.certificate
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown certificate kind {kind!r}")
    cert = _maybe_shift(cert, args.shift)
    out = cert.to_json()
    out["claim"] = str(cert.claim())
    return out, 0


def _triple(text: str | None) -> tuple[int, int, int]:
    if text is None:
        raise UsageError("sandwich needs --abc a,b,c")
    vals = _int_list(text)
    if len(vals) != 3 or min(vals) < 0:
        raise UsageError("--abc needs three nonnegative integers")
    return vals[0], vals[1], vals[2]


def cmd_obstruct(args) -> tuple[dict, int]:
    data = _load_json(args.inequality)
    f = Polynomial.from_json(data) if "k" in data else to_polynomial(WalkInequality.from_json(data))
    obs = cert_mod.psd_obstructions(f, samples=args.samples, seed=args.seed)
    return {"base_poly": f.to_json(), "refutation": [o.to_json() for o in obs]}, 1 if obs else 0


def cmd_spectral(args) -> tuple[dict, int]:
    g = _load_graph(args.graph, args.family)
    sd = spectral_decompose(g)
    out = sd.to_json()
    out["aggregated"] = [{"eigenvalue": lam, "weight": w} for lam, w in sd.aggregated()]
    if args.verify_prop31:
        out["identity_residual"] = symmetrization_identity_residual(_load_polynomial(args.verify_prop31), g)
    return out, 0


def cmd_symmetrize(args) -> tuple[dict, int]:
    return symmetrize(_load_polynomial(args.poly)).to_json(), 0


def cmd_newton(args) -> tuple[dict, int]:
    chk = newton_vertex_check(_load_polynomial(args.poly))
    out = chk.to_json()
    if chk.refuted:
        out["refutation"] = out["violations"]
    return out, 1 if chk.refuted else 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="walkcert", description=__doc__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def graph_args(sp):
        sp.add_argument("graph", nargs="?", help="graph6 string or path to a graph6 / edge-list file")
        sp.add_argument("--family", help="named graph, e.g. path:3 or union(complete:3,star:5)")

    sp = sub.add_parser("walks", help="exact walk counts w_0..w_K")
    graph_args(sp)
    sp.add_argument("--max", type=int, required=True, metavar="K")
    sp.set_defaults(func=cmd_walks)

    sp = sub.add_parser("check", help="evaluate an inequality on one graph")
    sp.add_argument("inequality")
    graph_args(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("search", help="search a corpus for counterexamples")
    sp.add_argument("inequality")
    sp.add_argument("--exhaustive", type=int, metavar="N")
    sp.add_argument("--all-sizes", action="store_true", help="with --exhaustive, scan every n from 1 to N")
    sp.add_argument("--family")
    sp.add_argument("--range", metavar="VAR=LO..HI")
    sp.add_argument("--graphs", nargs="+", metavar="FILE")
    sp.add_argument("--regular-only", action="store_true")
    sp.add_argument("--stop-at-first", action="store_true")
    sp.add_argument("--allow-n8", action="store_true", help="permit exhaustive n = 8")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="include elapsed seconds in the payload")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("certify", help="build and verify a certificate")
    sp.add_argument("kind", choices=["square", "sandwich", "agm", "two-factor", "univariate", "binary"])
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--sigma", help="1-based images sigma(1),...,sigma(k)")
    sp.add_argument("--abc", help="sandwich parameters a,b,c")
    sp.add_argument("--k", type=int)
    sp.add_argument("--a", help="univariate coefficients a_1,...,a_{2k-1}")
    sp.add_argument("--tol", default="1/1000000")
    sp.add_argument("--poly", help="binary form as polynomial JSON")
    sp.add_argument("--shift", type=int, default=0)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("obstruct", help="obstructions to psd certification")
    sp.add_argument("inequality", help="inequality JSON or polynomial JSON")
    sp.add_argument("--samples", type=int, default=0, help="random sampling diagnostic (off by default)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_obstruct)

    sp = sub.add_parser("spectral", help="eigenvalues and all-ones weights")
    graph_args(sp)
    sp.add_argument("--verify-prop31", metavar="POLY_JSON", help="residual of the symmetrization identity")
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("symmetrize", help="symmetrize a polynomial")
    sp.add_argument("poly")
    sp.set_defaults(func=cmd_symmetrize)

    sp = sub.add_parser("newton", help="Newton polytope vertex-coefficient test")
    sp.add_argument("poly")
    sp.set_defaults(func=cmd_newton)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    """Run one command; returns ``(exit_code, payload)`` without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        payload, code = args.func(args)
    except (UsageError, GraphFormatError, ValueError, KeyError, SpectralError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        return 2, {"error": msg, "type": type(exc).__name__}
    return code, payload


def main(argv: Sequence[str] | None = None) -> int:
    code, payload = run(argv)
    if code == 2:
        print(json.dumps(payload, separators=(",", ":")))
        print(f"walkcert: {payload['error']}", file=sys.stderr)
    else:
        print(json.dumps(payload, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
