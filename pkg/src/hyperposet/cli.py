"""Command-line front end: ``hyperposet <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors or when a safety bound would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import characters, genseries, posetlab
from .algebra import MultiPoly
from .report import Check
from .symfunc import verify_identities

SUITES = ("series", "identities", "posets", "annexe", "conjecture", "all")
CHARS = ("HA", "HAC", "HAL", "WHPP", "CE", "M")
HARD_ORDER_LIMIT = 12
HARD_N_LIMIT = 7


@dataclass
class RunConfig:
    order: int = genseries.DEFAULT_ORDER
    hypertree_bound: int = 6
    oracle_bound: int = 5
    fmt: str = "text"
    cache_dir: Path | None = None

    def validate(self) -> None:
        if not 2 <= self.order <= HARD_ORDER_LIMIT:
            raise posetlab.EnumerationBoundError(f"truncation order must lie in 2..{HARD_ORDER_LIMIT}")
        if self.hypertree_bound > HARD_N_LIMIT or self.oracle_bound > HARD_N_LIMIT:
            raise posetlab.EnumerationBoundError(f"enumeration bounds are limited to n <= {HARD_N_LIMIT}")


# verification suites

def series_checks(cfg: RunConfig) -> list[Check]:
    order = cfg.order
    checks = []
    counts = genseries.hypertree_counts(order)
    expected = [1, 4, 29, 311, 4447, 79745, 1722681]
    top = min(cfg.hypertree_bound, order)
    checks.append(Check("hypertree_counts_series", counts[2:top + 1] == expected[:top - 1]))
    bad = next((n for n in range(2, top + 1)
                if len(posetlab.enumerate_family("hypertree", n, cfg.hypertree_bound)) != counts[n]), None)
    checks.append(Check("hypertree_counts_enumeration", bad is None, bad))

    s = MultiPoly.s()
    checks.append(Check("chi_3", genseries.chi(3, order=order).as_poly() == s - 3))
    checks.append(Check("chi_4", genseries.chi(4, order=order).as_poly() == s ** 2 - 12 * s + 20))
    bad = None
    for n in range(2, order + 1):
        try:
            cp = genseries.chi(n, order=order)
        except genseries.ConsistencyError:
            bad = n
            break
        if n >= 3 and not genseries.chi_alternates(cp):
            bad = n
            break
    checks.append(Check("chi_methods_agree_and_alternate", bad is None, bad))

    bad = next((n for n in range(3, order + 1)
                if genseries.mobius_hat(n, order) != (-1) ** (n - 1) * (n - 1) ** (n - 2)), None)
    checks.append(Check("mobius_hat", bad is None, bad))

    t = MultiPoly.t()
    checks.append(Check("tau_4", genseries.tau(4, order) == 1 + 12 * t + 20 * t ** 2))
    bad = None
    for n in range(2, top + 1):
        counts_by_rank: dict[int, int] = {}
        for c in posetlab.enumerate_family("cyclic_hypertree", n, cfg.hypertree_bound):
            counts_by_rank[c.rank] = counts_by_rank.get(c.rank, 0) + 1
        if MultiPoly.from_t_coeffs(counts_by_rank) != genseries.tau(n, order):
            bad = n
            break
    checks.append(Check("tau_matches_cyclic_enumeration", bad is None, bad))
    checks.extend(genseries.verify_closed_form(order))
    return checks


def identity_checks(cfg: RunConfig) -> list[Check]:
    low = min(cfg.order, 7)
    checks = list(verify_identities(cfg.order))
    checks.extend(characters.verify_hal(low, dim_upto=min(6, low)))
    checks.extend(characters.verify_hal_bar(low))
    checks.append(characters.ce_check(low))
    checks.append(characters.wh_pp_dimension_check(low))
    checks.append(characters.lie_generators_check(cfg.order))
    return checks


def poset_checks(cfg: RunConfig) -> list[Check]:
    top = cfg.oracle_bound
    checks = []
    s = MultiPoly.s()
    bad = None
    for n in range(1, top + 1):
        want = (s - n) ** (n - 1)
        pp = posetlab.family_poset("pointed_partition", n, top).char_poly()
        forest = posetlab.family_poset("forest", n, top).char_poly()
        if pp != want or forest != want:
            bad = n
            break
    checks.append(Check("pp_forest_char_poly", bad is None, bad))
    for n in range(2, top + 1):
        checks.append(posetlab.boolean_intervals(n, top))
        checks.extend(posetlab.verify_phi(n, top))
    bad = next((n for n in range(3, min(top, cfg.order) + 1)
                if posetlab.family_poset("hypertree", n, top).char_poly()
                != genseries.chi(n, order=cfg.order).as_poly()), None)
    checks.append(Check("hypertree_char_poly_bruteforce", bad is None, bad))
    bad = next((n for n in range(2, 5)
                if posetlab.enumerate_hypertrees_bruteforce(n) != posetlab.enumerate_family("hypertree", n)), None)
    checks.append(Check("hypertree_enumeration_fallback", bad is None, bad))
    wh = characters.wh_pp(top)
    bad = next((n for n in range(1, top + 1)
                if wh.homogeneous(n) != posetlab.whitney_character("pointed_partition", n, top)), None)
    checks.append(Check("wh_pp_lefschetz_oracle", bad is None, bad))
    return checks


def annexe_checks(cfg: RunConfig) -> list[Check]:
    return characters.annexe_check(cfg.oracle_bound, cfg.order)


def conjecture_checks(cfg: RunConfig) -> tuple[list[Check], list[str]]:
    checks, findings = [], []
    for n in range(2, cfg.oracle_bound + 1):
        rep = characters.conjecture_report(n, cfg.oracle_bound)
        checks.append(Check(f"conjecture_dimensions_n{n}", rep.dimension_check))
        findings.append(f"conjecture_characters_n{n}\tINFO\tequal={str(rep.equal).lower()}")
    return checks, findings


def run_suite(name: str, cfg: RunConfig) -> tuple[list[Check], list[str]]:
    if name == "conjecture":
        return conjecture_checks(cfg)
    if name == "all":
        checks, notes = [], []
        for sub in SUITES[:-1]:
            c, f = run_suite(sub, cfg)
            checks += c
            notes += f
        return checks, notes
    table = {"series": series_checks, "identities": identity_checks,
             "posets": poset_checks, "annexe": annexe_checks}
    return table[name](cfg), []


# character lookup

def character(which: str, order: int):
    if which == "HA":
        return characters.annexe_characters(order).ha
    if which == "HAC":
        return characters.annexe_characters(order).hac
    if which == "HAL":
        return characters.hal(order).hal
    if which == "WHPP":
        return characters.wh_pp(order)
    if which == "CE":
        return characters.ce_formula(order)
    if which == "M":
        return characters.anticyclic_m(order)
    raise ValueError(f"unknown character {which!r}")


# commands

def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_chi(args, cfg: RunConfig) -> int:
    cp = genseries.chi(args.n, method=args.method, order=max(cfg.order, args.n))
    if cfg.fmt == "json":
        _emit(json.dumps({"n": cp.n, "coeffs": [str(c) for c in cp.coeffs]}))
    elif cfg.fmt == "tsv":
        _emit(cp.tsv())
    else:
        _emit(str(cp))
    return 0


def cmd_tau(args, cfg: RunConfig) -> int:
    poly = genseries.tau(args.n, max(cfg.order, args.n))
    if cfg.fmt == "json":
        _emit(json.dumps({"n": args.n, "tau": poly.to_json(0)}))
    elif cfg.fmt == "tsv":
        coeffs = poly.t_coeffs()
        _emit(f"{args.n}\t" + ",".join(str(coeffs.get(k, 0)) for k in range(max(coeffs) + 1)))
    else:
        _emit(str(poly))
    return 0


def cmd_mobius_hat(args, cfg: RunConfig) -> int:
    value = genseries.mobius_hat(args.n, max(cfg.order, args.n))
    _emit(json.dumps({"n": args.n, "mobius_hat": str(value)}) if cfg.fmt == "json" else str(value))
    return 0


def cmd_enumerate(args, cfg: RunConfig) -> int:
    bound = max(posetlab.DEFAULT_BOUNDS[args.family], cfg.hypertree_bound) if args.bound is None else args.bound
    bound = min(bound, HARD_N_LIMIT + 1 if args.family == "pointed_partition" else HARD_N_LIMIT)
    if args.dump:
        target = Path(args.dump)
        path = posetlab.dump_cache(args.family, args.n, target, bound)
        _emit(f"{path}\t{len(posetlab.enumerate_family(args.family, args.n, bound))}")
        return 0
    if args.load:
        family, n, elements = posetlab.load_cache(args.load)
    else:
        family, n, elements = args.family, args.n, posetlab.enumerate_family(args.family, args.n, bound)
    if args.count:
        _emit(f"{family}\t{n}\t{len(elements)}")
    elif cfg.fmt == "json":
        _emit(json.dumps({"family": family, "n": n, "elements": [str(x) for x in elements]}))
    else:
        _emit("\n".join(str(x) for x in elements))
    return 0


def cmd_char(args, cfg: RunConfig) -> int:
    order = max(cfg.order, args.degree)
    if order > HARD_ORDER_LIMIT:
        raise posetlab.EnumerationBoundError(f"degree limited to {HARD_ORDER_LIMIT}")
    f = character(args.which, order).homogeneous(args.degree)
    if cfg.fmt == "text":
        _emit(str(f))
    else:
        _emit(json.dumps({"which": args.which, "degree": args.degree, "character": f.to_json()}))
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.max_n is not None:
        cfg.oracle_bound = args.max_n
        cfg.hypertree_bound = max(args.max_n, 2)
        cfg.validate()
    checks, notes = run_suite(args.suite, cfg)
    for c in checks:
        _emit(c.line())
    for line in notes:
        _emit(line)
    return 0 if all(c.passed for c in checks) else 1


def cmd_report(args, cfg: RunConfig) -> int:
    if not args.conjecture:
        raise posetlab.EnumerationBoundError("report needs --conjecture")
    rep = characters.conjecture_report(args.n, cfg.oracle_bound)
    _emit(json.dumps(rep.to_json(), sort_keys=True))
    return 0 if rep.dimension_check else 1


def _add_common(parser: argparse.ArgumentParser, defaults: dict | None) -> None:
    def default(key):
        return argparse.SUPPRESS if defaults is None else defaults[key]

    parser.add_argument("--order", type=int, default=default("order"), help="series truncation N")
    parser.add_argument("--format", dest="fmt", choices=("text", "tsv", "json"), default=default("fmt"))
    parser.add_argument("--cache-dir", type=Path, default=default("cache_dir"),
                        help=f"enumeration cache directory (default ${posetlab.CACHE_ENV})")
    parser.add_argument("--oracle-bound", type=int, default=default("oracle_bound"),
                        help="largest n for equivariant oracles")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperposet", description=__doc__.splitlines()[0])
    _add_common(parser, {"order": genseries.DEFAULT_ORDER, "fmt": "text", "cache_dir": None, "oracle_bound": 5})
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    _add_common(common, None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi", parents=[common], help="characteristic polynomial of the hypertree poset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("via_tau", "triangular"), default="via_tau")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("tau", parents=[common], help="rank-graded cyclic hypertree count")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("mobius-hat", parents=[common], help="Mobius number of the hypertree poset with a top added")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_mobius_hat)

    p = sub.add_parser("enumerate", parents=[common], help="list structures of a family")
    p.add_argument("--family", choices=posetlab.FAMILIES, default="hypertree")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--count", action="store_true", help="print only the count")
    p.add_argument("--dump", metavar="PATH", help="write a cache file (a directory uses the cache name)")
    p.add_argument("--load", metavar="PATH", help="read and validate a cache file instead of enumerating")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("char", parents=[common], help="homogeneous component of a character")
    p.add_argument("--which", choices=CHARS, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--max-n", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="HAL versus Whitney character report")
    p.add_argument("--conjecture", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(order=args.order, oracle_bound=args.oracle_bound, fmt=args.fmt,
                    cache_dir=posetlab.cache_dir(args.cache_dir))
    try:
        cfg.validate()
        return args.func(args, cfg)
    except posetlab.EnumerationBoundError as exc:
        print(f"hyperposet: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"hyperposet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
