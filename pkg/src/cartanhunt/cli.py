"""Command-line driver.

Exit codes: 0 success / counterexample found, 2 bad input, 3 search
exhausted, 4 verification failed, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import _accel
from .builtins import CONFIGURATIONS
from .cartan import (CartanMatrix, delta_matrix, complex_cartan, det_mod, modular_cartan,
                     render_matrix, uncontracted)
from .chartab import CharacterTable, IntegralityError, character_table, load_character_table
from .chartab import table_to_dict
from .hunt import (InternalInconsistency, enumerate_pair_subgroups, make_pool,
                   search_bruteforce, search_kernel_guided, verify_counterexample)
from .monoid import build_biset, build_monoid, green_j_report, orbits
from .perm import GroupError
from .specio import SpecError, resolve_decomposition, resolve_group, resolve_subgroup

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_FAILED, EXIT_INCONSISTENT = 0, 2, 3, 4, 5

log = logging.getLogger("cartanhunt")

GLOBAL_DEFAULTS = {"format": "text", "threads": 1, "seed": 0, "verbose": False}


def _csv(text: str | None) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()] if text else []


def _labels(text: str | None) -> list[str]:
    """Split on commas outside parentheses, so chi_(2,1) stays whole."""
    out, depth, cur = [], 0, ""
    for ch in text or "":
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    out.append(cur.strip())
    return [s for s in out if s]


def _ints(text: str | None) -> list[int]:
    try:
        return [int(t) for t in _csv(text)]
    except ValueError:
        raise SpecError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _table(args, G) -> CharacterTable:
    if getattr(args, "table", None):
        return load_character_table(args.table, G)
    return character_table(G)


def _reorder(args, M):
    order = _labels(getattr(args, "label_order", None))
    return M.reindexed(order) if order else M


def _setup(args):
    """Group, table, subgroups and multiplicities from --builtin or explicit flags."""
    if getattr(args, "builtin", None):
        if args.builtin not in CONFIGURATIONS:
            raise SpecError(f"unknown configuration {args.builtin!r}; "
                            f"known: {sorted(CONFIGURATIONS)}")
        cfg = CONFIGURATIONS[args.builtin]
        args.group = args.group or cfg.group
        args.subgroups = args.subgroups or ",".join(cfg.subgroups)
        args.z = args.z or ",".join(str(x) for x in cfg.z)
        if hasattr(args, "decomp"):
            args.decomp = args.decomp or cfg.decomposition
    if not args.group:
        raise SpecError("--group (or --builtin) is required")
    G = resolve_group(args.group)
    table = _table(args, G)
    subs = [resolve_subgroup(G, s) for s in _csv(args.subgroups)]
    z = _ints(args.z) if args.z else [1] * len(subs)
    if len(z) != len(subs):
        raise SpecError(f"{len(z)} multiplicities for {len(subs)} subgroups")
    return G, table, subs, z


# ---------------------------------------------------------------- commands

def cmd_chartab(args) -> int:
    G = resolve_group(args.group)
    t0 = time.perf_counter()
    table = _table(args, G)
    rows = [[str(v) for v in row] for row in table.rows]
    cols = [c.representative.cycle_string() for c in table.classes]
    lines = [f"group order {G.order}, {len(table.classes)} classes, conductor {table.conductor}",
             "classes: " + ", ".join(f"{r} [size {c.size}]" for r, c in zip(cols, table.classes)),
             "labels (canonical order): " + ", ".join(table.labels),
             render_matrix(table.labels, cols, rows)]
    log.info("character table in %.3fs", time.perf_counter() - t0)
    _emit(args, "\n".join(lines), table_to_dict(table))
    return EXIT_OK


def cmd_delta(args) -> int:
    G = resolve_group(args.group)
    table = _table(args, G)
    L = resolve_subgroup(G, args.subgroup)
    d = _reorder(args, delta_matrix(table, L))
    text = f"Delta({L.name or args.subgroup}), |L| = {L.order}\n" + \
        render_matrix(d.labels, d.labels, d.entries)
    _emit(args, text, {"subgroup": L.name, "order": L.order, "labels": list(d.labels),
                       "rows": d.tolist()})
    return EXIT_OK


def _matrix_block(title: str, M: CartanMatrix, verdict: bool = True) -> str:
    det = M.det()
    out = f"{title}\n{render_matrix(M.labels, M.labels, M.entries)}\ndet = {det}"
    if M.prime is not None:
        out += f" (mod {M.prime}: {det % M.prime})"
    if verdict:
        out += "  -> " + ("singular" if det == 0 else "non-singular")
    return out


def cmd_cartan(args) -> int:
    G, table, subs, z = _setup(args)
    if subs:
        C = complex_cartan([delta_matrix(table, L) for L in subs], z)
    else:
        C = complex_cartan([delta_matrix(table, resolve_subgroup(G, "diag"))], [0])
    C = _reorder(args, C)
    mats = [("complex Cartan matrix", C)]
    if args.decomp:
        D = resolve_decomposition(args.decomp, table.labels, G.order)
        mats.append((f"modular Cartan matrix (p = {D.prime})", modular_cartan(C, D)))
    if args.uncontracted:
        mats = [(t + ", uncontracted", uncontracted(M)) for t, M in mats]
    text = "\n\n".join(_matrix_block(t, M) for t, M in mats)
    data = {"subgroups": [L.name for L in subs], "z": z, "matrices": [
        dict(M.to_dict(), det=M.det(), singular=M.det() == 0,
             **({"det_mod_p": det_mod(M.entries, M.prime)} if M.prime else {}))
        for _, M in mats]}
    _emit(args, text, data)
    return EXIT_OK


def _write_report(args, data) -> None:
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            json.dump(data, fh, indent=2)


def cmd_verify(args) -> int:
    G, table, subs, z = _setup(args)
    if not args.decomp:
        raise SpecError("--decomp (or --builtin) is required")
    D = resolve_decomposition(args.decomp, table.labels, G.order)
    report = verify_counterexample(G, subs, z, D, table, oracle=True,
                                   full_oracle=args.oracle, threads=args.threads)
    data = dict(report.to_dict(), group=args.group, z=z, subgroups=[L.name for L in subs])
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in report.claims]
    for name, d in report.deltas.items():
        lines.append(f"\nDelta({name})\n" + render_matrix(d.labels, d.labels, d.entries))
    lines.append("\n" + _matrix_block("complex Cartan matrix", report.complex))
    lines.append("\n" + _matrix_block(f"modular Cartan matrix (p = {D.prime})", report.modular))
    if report.kernel:
        lines.append(f"kernel vector of the modular Cartan matrix: {report.kernel}")
    lines.append(f"\nverdict: {'PASS' if report.passed else 'FAIL'}")
    _emit(args, "\n".join(lines), data)
    _write_report(args, data)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_search(args) -> int:
    G = resolve_group(args.group)
    table = _table(args, G)
    D = resolve_decomposition(args.decomp, table.labels, G.order)
    if args.subgroups:
        subs = [resolve_subgroup(G, s) for s in _csv(args.subgroups)]
        pool = make_pool(table, subs)
    elif args.pool == "builtin" or (args.pool == "auto" and G.order == 6 and G.degree == 3):
        pool = make_pool(table, [resolve_subgroup(G, s) for s in CONFIGURATIONS["paper-s3"].subgroups])
    else:
        pool = enumerate_pair_subgroups(G, order_cap=args.order_cap, table=table,
                                        max_generators=args.max_generators)
        if pool.truncated:
            log.warning("candidate pool truncated")
    active = None
    if args.active:
        names = _csv(args.active)
        missing = [n for n in names if n not in pool.names]
        if missing:
            raise SpecError(f"unknown candidates {missing}; pool has {pool.names}")
        active = [pool.names.index(n) for n in names]
    if args.strategy == "box":
        result = search_bruteforce(pool, D, args.bound, active, args.all, args.threads)
    else:
        result = search_kernel_guided(pool, D, args.kernel_bound, args.z_bound, active, args.all)
    data = dict(result.to_dict(), group=args.group, decomposition=args.decomp,
                pool=pool.names, truncated=pool.truncated)
    if result.exhausted:
        text = f"exhausted after {result.scanned} candidates ({result.seconds:.2f}s)"
    else:
        hit = result.found
        text = "\n".join([
            f"found z = {list(hit.z)} over {list(hit.names)} ({result.seconds:.2f}s, "
            f"{len(result.hits)} hit(s))",
            _matrix_block("complex Cartan matrix", hit.complex),
            _matrix_block(f"modular Cartan matrix (p = {D.prime})", hit.modular),
            f"kernel vector: {hit.kernel}"])
        if args.all:
            text += "\nall hits: " + "; ".join(str(list(h.z)) for h in result.hits)
    _emit(args, text, data)
    _write_report(args, data)
    return EXIT_EXHAUSTED if result.exhausted else EXIT_OK


def cmd_monoid_check(args) -> int:
    G, table, subs, z = _setup(args)
    X = build_biset(G, subs, z)
    M = build_monoid(G, X)
    assoc = M.check_associativity(seed=args.seed)
    report = green_j_report(M)
    non_regular = report.non_regular()
    orbit_sets = sorted(tuple(M.group.order + x for x in o) for o in orbits(X))
    checks = {
        "size": M.size == G.order + X.size + 1,
        "associative": assoc.passed,
        "zero_absorbing": M.zero_is_absorbing(),
        "x_squares_to_zero": M.x_squares_to_zero(),
        "group_block": M.group_block_is_group(),
        "non_regular_classes_are_orbits": sorted(non_regular) == orbit_sets,
    }
    data = {"size": M.size, "points": X.size, "associativity": assoc.mode,
            "triples_checked": assoc.checked, "j_classes": len(report.classes),
            "non_regular_j_classes": len(non_regular), "checks": checks}
    lines = [f"|M| = {M.size} (|G| = {G.order}, |X| = {X.size})",
             f"associativity: {assoc.mode}, {assoc.checked} triples, "
             f"{'pass' if assoc.passed else f'FAIL at {assoc.failure}'}",
             f"J-classes: {len(report.classes)}, non-regular: {len(non_regular)}"]
    lines += [f"{'pass' if ok else 'FAIL'}  {name}" for name, ok in checks.items()]
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(M.to_json() if args.export.endswith(".json") else M.to_text() + "\n")
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if all(checks.values()) else EXIT_FAILED


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    # shared options may go before or after the subcommand; SUPPRESS keeps the
    # subparser from overwriting a value given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int, help="seed for sampled associativity checks")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cartanhunt", parents=[common], description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def group_args(p, table=True):
        p.add_argument("--group", help="built-in name (S3, S4, C6, D4, Q8, ...) or spec file")
        if table:
            p.add_argument("--table", help="character table JSON to load instead of computing")

    p = sub.add_parser("chartab", parents=[common], help="print the character table")
    group_args(p)
    p.set_defaults(func=cmd_chartab)

    p = sub.add_parser("delta", parents=[common], help="print Delta(L)")
    group_args(p)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--label-order", help="comma-separated labels for rows and columns")
    p.set_defaults(func=cmd_delta)

    def config_args(p):
        group_args(p)
        p.add_argument("--builtin", help="named configuration, e.g. paper-s3")
        p.add_argument("--subgroups", help="comma-separated built-in names or spec files")
        p.add_argument("--z", help="comma-separated multiplicities")

    p = sub.add_parser("cartan", parents=[common], help="complex and modular Cartan matrices")
    config_args(p)
    p.add_argument("--decomp", help="S3-p3, identity:p, or a JSON file")
    p.add_argument("--uncontracted", action="store_true",
                   help="append the 1x1 block of the simple module with apex z")
    p.add_argument("--label-order", help="comma-separated labels for the complex matrix")
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("verify", parents=[common], help="recompute and check a configuration")
    config_args(p)
    p.add_argument("--decomp")
    p.add_argument("--oracle", action="store_true",
                   help="also compare C - I with the fixed points of the whole biset")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for counterexamples")
    group_args(p)
    p.add_argument("--decomp", required=True)
    p.add_argument("--strategy", choices=("box", "kernel"), default="box")
    p.add_argument("--bound", type=int, default=10, help="box bound")
    p.add_argument("--kernel-bound", type=int, default=32)
    p.add_argument("--z-bound", type=int, default=500)
    p.add_argument("--pool", choices=("auto", "builtin", "enumerate"), default="auto")
    p.add_argument("--subgroups", help="explicit pool (overrides --pool)")
    p.add_argument("--active", help="comma-separated pool names to vary")
    p.add_argument("--order-cap", type=int)
    p.add_argument("--max-generators", type=int, default=2)
    p.add_argument("--all", action="store_true", help="report every hit within the bounds")
    p.add_argument("--report")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("monoid-check", parents=[common], help="build M(G, X) and check it")
    config_args(p)
    p.add_argument("--export", help="write the table (.json with metadata, else plain text)")
    p.set_defaults(func=cmd_monoid_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    log.info("kernel backend: %s", _accel.BACKEND)
    try:
        return args.func(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (SpecError, GroupError, IntegralityError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
