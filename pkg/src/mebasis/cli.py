"""Command-line interface.

Subcommands: catalog, reduce, verify, union.  Output is deterministic for
a given command line: repeated runs produce byte-identical bytes, so JSON
reports are diffable and safe to pin in CI.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from . import __version__
from .catalog import CATALOG
from .reduction import (DEFAULT_BOUNDS, POLICIES, Relation, ReductionResult,
                        check_union_property, reduce_basis)
from .restriction import (FIBERS, RestrictedBasis, SubstitutionError,
                          custom_substitution, fiber_substitution,
                          generic_substitution, restrict_basis)
from .verify import (load_published, numeric_spotcheck, spotcheck_relations,
                     verify_published)

_FIBER_HELP = "theta | alpha_prime | gamma | custom:PATH"


class UsageError(Exception):
    pass


def _load_basis(fiber: str) -> RestrictedBasis:
    if fiber in FIBERS:
        sub = fiber_substitution(fiber)
    elif fiber.startswith("custom:"):
        try:
            sub = custom_substitution(fiber[len("custom:"):])
        except SubstitutionError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError(f"unknown fiber {fiber!r}; expected {_FIBER_HELP}")
    return restrict_basis(CATALOG, sub)


def latex_name(name: str) -> str:
    if name == "I010":
        return r"\operatorname{tr}\boldsymbol{\sigma}"
    m = re.fullmatch(r"I(\d{3})([ab]?)", name)
    if m is None:
        return name
    out = "I_{%s}" % m.group(1)
    if m.group(2):
        out += "^{%s}" % m.group(2)
    return out


def latex_product(factors: Sequence[str]) -> str:
    out = []
    i = 0
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        base = latex_name(factors[i])
        if factors[i] == "I010" and j - i > 1:
            base = r"(\operatorname{tr}\boldsymbol{\sigma})"
        out.append(base if j - i == 1 else "%s^{%d}" % (base, j - i))
        i = j
    return r"\,".join(out)


def latex_relation(rel: Relation) -> str:
    """Solved relations render solved; syzygies render homogeneous."""
    terms = list(rel.terms)
    if rel.solved_for is not None:
        i = next(k for k, (f, _) in enumerate(terms) if f == (rel.solved_for,))
        lead = terms[i][1]
        sign = 1 if lead > 0 else -1
        rhs = [(f, -sign * c) for k, (f, c) in enumerate(terms) if k != i]
        body = _latex_sum(rhs)
        lhs = latex_name(rel.solved_for)
        if abs(lead) == 1:
            return f"{lhs} &= {body}"
        return r"%s &= \frac{1}{%d}\left( %s \right)" % (lhs, abs(lead), body)
    return _latex_sum(terms) + " &= 0"


def _latex_sum(terms) -> str:
    parts = []
    for factors, coeff in terms:
        mag = abs(coeff)
        body = latex_product(factors) if mag == 1 else "%d\\," % mag + latex_product(factors)
        if not parts:
            parts.append(body if coeff > 0 else "-" + body)
        else:
            parts.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def _relation_payload(rel: Relation) -> dict:
    entry = {
        "bidegree": list(rel.bidegree),
        "terms": [{"factors": list(f), "coefficient": str(c)} for f, c in rel.terms],
        "equation": rel.equation_str(),
    }
    if rel.solved_for is not None:
        entry["solved_for"] = rel.solved_for
        entry["solved"] = rel.solved_str()
    return entry


def _tool_payload() -> dict:
    return {"name": "mebasis", "version": __version__}


# -- catalog -------------------------------------------------------------

def _run_catalog(args) -> int:
    sub = generic_substitution()
    rb = restrict_basis(CATALOG, sub)
    polys = rb.as_dict()
    if args.format == "json":
        payload = {
            "tool": _tool_payload(),
            "legend": ("sb = offdiagonal part of s; sd = diagonal deviator of s; "
                       "mb, md = the same projectors applied to the dyadic m o m"),
            "invariants": [
                {"name": d.name, "label": d.label, "formula": d.formula,
                 "bidegree": list(d.bidegree), "generic": str(polys[d.name])}
                for d in CATALOG
            ],
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "latex":
        lines = [r"\begin{tabular}{llll}",
                 r"name & label & bi-degree & formula \\ \hline"]
        for d in CATALOG:
            lines.append(r"%s & $%s$ & $(%d,%d)$ & \verb|%s| \\"
                         % (d.name, d.label, d.bidegree[0], d.bidegree[1], d.formula))
        lines.append(r"\end{tabular}")
        print("\n".join(lines))
    else:
        print(f"catalog: {len(CATALOG)} invariants")
        for d in CATALOG:
            print(f"  {d.name:<6} ({d.bidegree[0]},{d.bidegree[1]})  {d.formula}")
            print(f"         = {polys[d.name]}")
    return 0


# -- reduce --------------------------------------------------------------

def reduce_payload(result: ReductionResult) -> dict:
    return {
        "tool": _tool_payload(),
        "config": {
            "substitution": result.basis.substitution.name,
            "policy": result.policy,
            "effective_policy": result.effective_policy,
            "max_total_degree": result.bounds[0],
            "max_mag_degree": result.bounds[1],
        },
        "result": {
            "vanished": list(result.vanished),
            "generators": list(result.generators),
            "relations": [_relation_payload(r) for r in result.relations],
            "syzygies": [_relation_payload(r) for r in result.syzygies],
            "per_bidegree": [
                {"bidegree": list(rep.bidegree), "products": rep.n_products,
                 "invariants": rep.n_invariants, "columns": rep.n_columns,
                 "rank": rep.rank, "kernel_dim": rep.kernel_dim,
                 "kept": list(rep.kept), "eliminated": list(rep.eliminated),
                 "syzygies": rep.n_syzygies}
                for rep in result.reports
            ],
            "counts": {
                "generators": len(result.generators),
                "relations": len(result.relations),
                "vanished": len(result.vanished),
            },
        },
    }


def render_reduce_text(result: ReductionResult) -> str:
    lines = []
    lines.append(f"substitution: {result.basis.substitution.name}")
    lines.append(f"policy: {result.policy} (effective: {result.effective_policy})")
    lines.append(f"bounds: total degree <= {result.bounds[0]}, "
                 f"mag degree <= {result.bounds[1]}")
    lines.append("")
    lines.append(f"vanished ({len(result.vanished)}): "
                 + (", ".join(result.vanished) if result.vanished else "none"))
    lines.append(f"generators ({len(result.generators)}): "
                 + ", ".join(result.generators))
    lines.append(f"relations ({len(result.relations)}):")
    for rel in result.relations:
        lines.append(f"  {rel.solved_str()}")
    if result.syzygies:
        lines.append(f"product syzygies ({len(result.syzygies)}):")
        for rel in result.syzygies:
            lines.append(f"  {rel.equation_str()}")
    lines.append("")
    lines.append("per bi-degree (products + invariants = columns; rank; kernel):")
    for rep in result.reports:
        kept = ", ".join(rep.kept) if rep.kept else "-"
        elim = ", ".join(rep.eliminated) if rep.eliminated else "-"
        lines.append(f"  ({rep.bidegree[0]},{rep.bidegree[1]}): "
                     f"{rep.n_products}+{rep.n_invariants}={rep.n_columns} "
                     f"rank {rep.rank} kernel {rep.kernel_dim} "
                     f"syzygies {rep.n_syzygies} | kept: {kept} | eliminated: {elim}")
    return "\n".join(lines)


def render_reduce_latex(result: ReductionResult) -> str:
    lines = [r"% generators"]
    gens = ",\\quad ".join("$%s$" % latex_name(n) for n in result.generators)
    lines.append(gens)
    lines.append(r"% relations")
    lines.append(r"\begin{align*}")
    body = [latex_relation(rel) for rel in result.relations]
    lines.append(" \\\\\n".join(body))
    lines.append(r"\end{align*}")
    return "\n".join(lines)


def _run_reduce(args) -> int:
    rb = _load_basis(args.fiber)
    result = reduce_basis(rb, bounds=(args.dmax, args.alpha_max), policy=args.policy)
    if args.format == "json":
        print(json.dumps(reduce_payload(result), indent=2))
    elif args.format == "latex":
        print(render_reduce_latex(result))
    else:
        print(render_reduce_text(result))
    return 0


# -- verify --------------------------------------------------------------

def verify_payload(fiber: str, rb: RestrictedBasis, trials: int, seed: int) -> dict:
    rels = load_published(fiber)
    entries = []
    n_fail = 0
    engine_result = None
    spots = spotcheck_relations(rels, rb, trials=trials, seed=seed)
    for rel, spot in zip(rels, spots):
        outcome = verify_published(rel, rb)
        entry = {
            "source": rel.source,
            "lhs": rel.lhs,
            "symbolic": "pass" if outcome.ok else "fail",
            "numeric": "pass" if spot.ok else "fail",
        }
        if not outcome.ok:
            n_fail += 1
            entry["residual"] = outcome.residual_str()
            # The engine's own solved relation for the same invariant, plus
            # its numeric spot-check, so a transcription defect in the data
            # file comes with a corrected candidate.
            if engine_result is None:
                engine_result = reduce_basis(rb)
            fixed = next((r for r in engine_result.relations
                          if r.solved_for == rel.lhs), None)
            if fixed is not None:
                entry["engine_relation"] = fixed.solved_str()
                fspot = numeric_spotcheck(fixed, rb, trials=trials, seed=seed)
                entry["engine_relation_numeric"] = "pass" if fspot.ok else "fail"
        elif not spot.ok:
            n_fail += 1
        entries.append(entry)
    return {
        "tool": _tool_payload(),
        "config": {"substitution": rb.substitution.name, "trials": trials,
                   "seed": seed},
        "result": {
            "relations": entries,
            "counts": {"total": len(entries),
                       "passed": len(entries) - n_fail,
                       "failed": n_fail},
        },
    }


def _run_verify(args) -> int:
    if args.fiber not in FIBERS:
        raise UsageError(f"verify needs a built-in fiber ({', '.join(FIBERS)}); "
                         f"no published relation list exists for {args.fiber!r}")
    rb = _load_basis(args.fiber)
    payload = verify_payload(args.fiber, rb, args.trials, args.seed)
    failed = payload["result"]["counts"]["failed"]
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "latex":
        lines = [r"\begin{tabular}{llll}",
                 r"source & invariant & symbolic & numeric \\ \hline"]
        for e in payload["result"]["relations"]:
            lines.append(r"%s & $%s$ & %s & %s \\"
                         % (e["source"], latex_name(e["lhs"]), e["symbolic"],
                            e["numeric"]))
        lines.append(r"\end{tabular}")
        print("\n".join(lines))
    else:
        for e in payload["result"]["relations"]:
            status = "PASS" if e["symbolic"] == "pass" and e["numeric"] == "pass" else "FAIL"
            print(f"{status}  {e['source']}  {e['lhs']}  "
                  f"(symbolic {e['symbolic']}, numeric {e['numeric']})")
            if "residual" in e:
                print(f"      residual: {e['residual']}")
            if "engine_relation" in e:
                print(f"      engine relation: {e['engine_relation']} "
                      f"(numeric {e['engine_relation_numeric']})")
        c = payload["result"]["counts"]
        print(f"{c['passed']}/{c['total']} relations verified")
    return 0 if failed == 0 else 1


# -- union ---------------------------------------------------------------

def union_payload(policy: str, bounds: tuple[int, int]) -> dict:
    results = {}
    for fiber in FIBERS:
        rb = restrict_basis(CATALOG, fiber_substitution(fiber))
        results[fiber] = reduce_basis(rb, bounds=bounds, policy=policy)
    report = check_union_property(results)
    return {
        "tool": _tool_payload(),
        "config": {"policy": policy, "max_total_degree": bounds[0],
                   "max_mag_degree": bounds[1]},
        "result": {
            "generators": {fiber: list(results[fiber].generators)
                           for fiber in FIBERS},
            "theta_included_in_alpha_prime": report.theta_included,
            "gamma_included_in_alpha_prime": report.gamma_included,
            "union": list(report.union),
            "cardinal": report.cardinal,
        },
    }


def _run_union(args) -> int:
    payload = union_payload(args.policy, (args.dmax, args.alpha_max))
    r = payload["result"]
    ok = r["theta_included_in_alpha_prime"] and r["gamma_included_in_alpha_prime"]
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "latex":
        print(",\\quad ".join("$%s$" % latex_name(n) for n in r["union"]))
    else:
        for fiber in FIBERS:
            gens = r["generators"][fiber]
            print(f"{fiber}: {len(gens)} generators: {', '.join(gens)}")
        print(f"theta subset of alpha_prime: {r['theta_included_in_alpha_prime']}")
        print(f"gamma subset of alpha_prime: {r['gamma_included_in_alpha_prime']}")
        print(f"union ({r['cardinal']}): {', '.join(r['union'])}")
    return 0 if ok else 1


# -- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mebasis",
        description="Exact cubic magneto-elastic invariants on in-plane "
                    "load subspaces.")
    parser.add_argument("--version", action="version",
                        version=f"mebasis {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json", "latex"),
                       default="text")

    def add_bounds(p):
        p.add_argument("--dmax", type=int, default=DEFAULT_BOUNDS[0],
                       help="max total degree of explored bi-degrees")
        p.add_argument("--alpha-max", type=int, default=DEFAULT_BOUNDS[1],
                       help="max magnetization degree of explored bi-degrees")

    p_cat = sub.add_parser("catalog", help="dump the 30-invariant catalog")
    add_format(p_cat)
    p_cat.set_defaults(func=_run_catalog)

    p_red = sub.add_parser("reduce", help="reduce a restricted basis")
    p_red.add_argument("--fiber", required=True, help=_FIBER_HELP)
    p_red.add_argument("--policy", choices=POLICIES, default="paper")
    add_bounds(p_red)
    add_format(p_red)
    p_red.set_defaults(func=_run_reduce)

    p_ver = sub.add_parser("verify",
                           help="check the shipped relation lists against "
                                "exact restriction")
    p_ver.add_argument("--fiber", required=True, help=_FIBER_HELP)
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=0)
    add_format(p_ver)
    p_ver.set_defaults(func=_run_verify)

    p_uni = sub.add_parser("union",
                           help="survivor sets of all three fibers and their "
                                "union")
    p_uni.add_argument("--policy", choices=POLICIES, default="paper")
    add_bounds(p_uni)
    add_format(p_uni)
    p_uni.set_defaults(func=_run_union)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
