"""Command-line front end.

Exit codes: 0 success, 2 spec parse error, 3 guard exceeded,
4 cross-check or identity failure.

Output formats: plain (aligned text), json (schema: {"group", "order",
"classes", "result"}), csv.  The `table` command emits one row per group
with columns group,order,classes,rank,dim_L,methods_agree.  Sweeps may run
groups concurrently; BURNSIDE_LAB_THREADS caps the worker count (default 1)
and output is always emitted in input order.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import functor_lab, units
from .bisets import ProductContext, factorize, transitive_biset
from .burnside import BurnsideRing, ring_of
from .groups import Group, GuardExceeded, SpecParseError, build_preset, classify
from .units import DEFAULT_ORACLE_BITS

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_MISMATCH = 4

FAMILIES = {
    "cyclic": lambda n: [f"C{k}" for k in range(1, n + 1)],
    "dihedral": lambda n: [f"D{1 << k}" for k in range(3, n.bit_length()) if 1 << k <= n],
    "semidihedral": lambda n: [f"SD{1 << k}" for k in range(4, n.bit_length()) if 1 << k <= n],
    "quaternion": lambda n: [f"Q{1 << k}" for k in range(3, n.bit_length()) if 1 << k <= n],
    "elemabelian": lambda n: [f"C2^{k}" for k in range(1, n.bit_length()) if 1 << k <= n],
}


@dataclass
class RunConfig:
    fmt: str
    max_elements: int
    oracle_bits: int
    skip_oracle: bool
    witnesses: bool
    seed: int
    threads: int


def _config(args: argparse.Namespace) -> RunConfig:
    threads = int(os.environ.get("BURNSIDE_LAB_THREADS", "1") or "1")
    return RunConfig(
        fmt=args.format,
        max_elements=args.max_elements,
        oracle_bits=args.oracle_bits,
        skip_oracle=args.skip_oracle,
        witnesses=args.witnesses,
        seed=args.seed,
        threads=max(1, threads),
    )


def _emit_json(group: Group, ring: BurnsideRing, result: dict) -> None:
    doc = {
        "group": group.name,
        "order": group.order,
        "classes": ring.table.class_names(),
        "result": result,
    }
    print(json.dumps(doc, indent=2))


def _form_names(ring: BurnsideRing, bits: int) -> str:
    names = ring.table.class_names()
    parts = [names[i] for i in range(ring.n_classes) if (bits >> i) & 1]
    return "+".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Commands.


def cmd_marks(args: argparse.Namespace, cfg: RunConfig) -> int:
    G = build_preset(args.spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    m = ring.mark_matrix
    names = ring.table.class_names()
    if cfg.fmt == "json":
        _emit_json(G, ring, {"marks": m})
    elif cfg.fmt == "csv":
        print("row," + ",".join(names))
        for name, row in zip(names, m):
            print(name + "," + ",".join(str(v) for v in row))
    else:
        width = max(len(n) for n in names) + 1
        print(" " * width + " ".join(f"{n:>{width}}" for n in names))
        for name, row in zip(names, m):
            print(f"{name:>{width}}" + " ".join(f"{v:>{width}}" for v in row))
    return EXIT_OK


def cmd_subgroups(args: argparse.Namespace, cfg: RunConfig) -> int:
    G = build_preset(args.spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    table = ring.table
    rows = []
    for c in range(table.n_classes):
        rep = table.rep_subgroup(c)
        rows.append(
            {
                "class": table.class_names()[c],
                "order": rep.order,
                "size": table.class_sizes[c],
                "normalizer": table.subgroups[table.normalizer_of_rep[c]].order,
                "normal": table.class_sizes[c] == 1,
            }
        )
    if cfg.fmt == "json":
        _emit_json(G, ring, {"subgroup_classes": rows})
    elif cfg.fmt == "csv":
        print("class,order,size,normalizer,normal")
        for r in rows:
            print(f"{r['class']},{r['order']},{r['size']},{r['normalizer']},{r['normal']}")
    else:
        print(f"{G.name}: {len(table.subgroups)} subgroups in {table.n_classes} classes")
        for r in rows:
            flag = "normal" if r["normal"] else f"{r['size']} conjugates"
            print(f"  {r['class']:>8}  order {r['order']:>4}  N of order {r['normalizer']:>4}  {flag}")
    return EXIT_OK


def _run_methods(ring: BurnsideRing, method: str, cfg: RunConfig):
    methods = ["oracle", "yoshida", "sections", "limit"] if method == "all" else [method]
    if "oracle" in methods and ring.n_classes > cfg.oracle_bits and not cfg.skip_oracle:
        raise GuardExceeded(
            f"{ring.group.name}: {ring.n_classes} classes exceed the oracle limit "
            f"{cfg.oracle_bits}; pass --skip-oracle or raise --oracle-bits"
        )
    return units.compute_ranks(
        ring, methods, oracle_bits=cfg.oracle_bits, skip_oracle_on_guard=cfg.skip_oracle
    )


def cmd_units(args: argparse.Namespace, cfg: RunConfig) -> int:
    G = build_preset(args.spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    results = _run_methods(ring, args.method, cfg)
    computed = {k: v for k, v in results.items() if v is not None}
    ranks = {k: v.rank for k, v in computed.items()}
    match = len(set(ranks.values())) == 1
    result: dict = {"ranks": ranks, "match": match}
    if match:
        rank = next(iter(ranks.values()))
        result["rank"] = rank
        result["size"] = 1 << rank
    skipped = sorted(set(results) - set(computed))
    if skipped:
        result["skipped"] = skipped
    if cfg.witnesses:
        wit: dict = {}
        for k, desc in computed.items():
            if desc.unit_list is not None:
                wit[k] = [u.as_dict() for u in desc.unit_list]
            elif desc.form_basis is not None:
                wit[k] = [_form_names(ring, b) for b in desc.form_basis]
        result["witnesses"] = wit
    if cfg.fmt == "json":
        _emit_json(G, ring, result)
    else:
        for k in sorted(ranks):
            print(f"{G.name} {k:>9}: rank {ranks[k]}  |units| = {1 << ranks[k]}")
        for k in skipped:
            print(f"{G.name} {k:>9}: skipped (guard)")
        if len(ranks) > 1:
            print(f"{G.name} match: {match}")
        if cfg.witnesses:
            for k, desc in computed.items():
                if desc.unit_list is not None:
                    print(f"witnesses ({k}):")
                    for u in desc.unit_list:
                        print(f"  {u.as_dict()}")
                elif desc.form_basis is not None:
                    print(f"form basis ({k}):")
                    for b in desc.form_basis:
                        print(f"  {_form_names(ring, b)}")
    return EXIT_OK if match else EXIT_MISMATCH


def cmd_kernel(args: argparse.Namespace, cfg: RunConfig) -> int:
    G = build_preset(args.spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    basis, report = functor_lab.kernel_L(ring, oracle_bits=cfg.oracle_bits)
    result = report.to_dict()
    if cfg.witnesses:
        result["basis"] = [_form_names(ring, b) for b in basis]
    if cfg.fmt == "json":
        _emit_json(G, ring, result)
    else:
        print(
            f"{G.name}: classes {report.dim_f2b} = dim_L {report.dim_l} "
            f"+ rank {report.rank_units} ({report.rank_method}) -> "
            f"{'ok' if report.exactness_ok else 'MISMATCH'}"
        )
        if cfg.witnesses:
            for b in basis:
                print(f"  {_form_names(ring, b)}")
    return EXIT_OK if report.exactness_ok else EXIT_MISMATCH


def _verify_ring_axioms(ring: BurnsideRing, rng: random.Random) -> bool:
    nc = ring.n_classes
    one = ring.one()
    for _ in range(20):
        x = ring.elem([rng.randrange(-2, 3) for _ in range(nc)])
        y = ring.elem([rng.randrange(-2, 3) for _ in range(nc)])
        z = ring.elem([rng.randrange(-2, 3) for _ in range(nc)])
        if (x * y).coeffs != (y * x).coeffs:
            return False
        if ((x * y) * z).coeffs != (x * (y * z)).coeffs:
            return False
        if (x * (y + z)).coeffs != ((x * y) + (x * z)).coeffs:
            return False
        if (x * one).coeffs != x.coeffs:
            return False
    return True


def _verify_idempotents(ring: BurnsideRing) -> bool:
    nc = ring.n_classes
    es = [ring.idempotent(c) for c in range(nc)]
    for c, e in enumerate(es):
        marks = ring.marks(e)
        if any(m != (1 if k == c else 0) for k, m in enumerate(marks)):
            return False
    total = es[0]
    for e in es[1:]:
        total = total + e
    if total.coeffs != ring.one().coeffs:
        return False
    for i in range(nc):
        for j in range(i + 1, nc):
            if any(c != 0 for c in (es[i] * es[j]).coeffs):
                return False
        if (es[i] * es[i]).coeffs != es[i].coeffs:
            return False
    return True


def _verify_triangular(ring: BurnsideRing) -> bool:
    m = ring.mark_matrix
    nc = ring.n_classes
    for h in range(nc):
        if m[h][h] <= 0:
            return False
        for k in range(h + 1, nc):
            if m[h][k] != 0:
                return False
    return True


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    G = build_preset(args.spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    rng = random.Random(cfg.seed)
    checks: list[tuple[str, bool]] = []
    checks.append(("mark matrix triangular", _verify_triangular(ring)))
    checks.append(("ring axioms (sampled)", _verify_ring_axioms(ring, rng)))
    if G.order <= 24:
        checks.append(("idempotent suite", _verify_idempotents(ring)))
    results = units.compute_ranks(
        ring,
        ["oracle", "yoshida", "sections", "limit"],
        oracle_bits=cfg.oracle_bits,
        skip_oracle_on_guard=True,
    )
    ranks = {k: v.rank for k, v in results.items() if v is not None}
    checks.append((f"rank agreement {ranks}", len(set(ranks.values())) == 1))
    _, report = functor_lab.kernel_L(ring, oracle_bits=cfg.oracle_bits)
    checks.append(
        (
            f"exactness {report.dim_f2b} = {report.dim_l} + {report.rank_units}",
            report.exactness_ok,
        )
    )
    identities = functor_lab.group_identities(ring)
    checks.extend(identities.checks)
    ok = all(flag for _, flag in checks)
    if cfg.fmt == "json":
        _emit_json(
            G,
            ring,
            {"ok": ok, "checks": [{"name": n, "ok": o} for n, o in checks]},
        )
    else:
        for name, flag in checks:
            print(f"{G.name}: {'PASS' if flag else 'FAIL'}  {name}")
        print(f"{G.name}: {'all checks passed' if ok else 'FAILURES PRESENT'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def _table_row(spec: str, cfg: RunConfig) -> dict:
    G = build_preset(spec, element_guard=cfg.max_elements)
    ring = ring_of(G)
    results = units.compute_ranks(
        ring,
        ["oracle", "yoshida", "sections", "limit"],
        oracle_bits=cfg.oracle_bits,
        skip_oracle_on_guard=True,
    )
    ranks = {k: v.rank for k, v in results.items() if v is not None}
    agree = len(set(ranks.values())) == 1
    _, report = functor_lab.kernel_L(ring, oracle_bits=cfg.oracle_bits)
    return {
        "group": G.name,
        "order": G.order,
        "classes": ring.n_classes,
        "rank": next(iter(ranks.values())) if agree else -1,
        "dim_L": report.dim_l,
        "methods_agree": agree and report.exactness_ok,
    }


def cmd_table(args: argparse.Namespace, cfg: RunConfig) -> int:
    maker = FAMILIES.get(args.family)
    if maker is None:
        raise SpecParseError(
            f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}"
        )
    specs = maker(args.max_order)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda s: _table_row(s, cfg), specs))
    else:
        rows = [_table_row(s, cfg) for s in specs]
    if cfg.fmt == "json":
        print(json.dumps({"family": args.family, "rows": rows}, indent=2))
    else:
        print("group,order,classes,rank,dim_L,methods_agree")
        for r in rows:
            print(
                f"{r['group']},{r['order']},{r['classes']},{r['rank']},"
                f"{r['dim_L']},{str(r['methods_agree']).lower()}"
            )
    return EXIT_OK if all(r["methods_agree"] for r in rows) else EXIT_MISMATCH


def cmd_factorize(args: argparse.Namespace, cfg: RunConfig) -> int:
    H = build_preset(args.left, element_guard=cfg.max_elements)
    G = build_preset(args.right, element_guard=cfg.max_elements)
    if H.order * G.order > 128:
        raise GuardExceeded("factorization demo limited to |HxG| <= 128")
    ctx = ProductContext(ring_of(H), ring_of(G))
    mismatches = []
    rows = []
    for sub in ctx.table.subgroups:
        direct = transitive_biset(ctx, sub.mask)
        pieces = factorize(ctx, sub.mask)
        ok = direct.rows == pieces.matrix().rows
        if not ok:
            mismatches.append(sub)
        rows.append(
            {
                "subgroup_order": sub.order,
                "through": f"order {pieces.p1_mask.bit_count() // pieces.k1_mask.bit_count()}",
                "ok": ok,
            }
        )
    result = {
        "pairs": f"{H.name} x {G.name}",
        "subgroups": len(ctx.table.subgroups),
        "all_match": not mismatches,
    }
    if cfg.witnesses:
        result["details"] = rows
    if cfg.fmt == "json":
        print(json.dumps(result, indent=2))
    else:
        print(
            f"{H.name} x {G.name}: {len(ctx.table.subgroups)} transitive bisets, "
            f"factorization {'verified' if not mismatches else 'FAILED'}"
        )
        if cfg.witnesses:
            for r in rows:
                print(f"  X of order {r['subgroup_order']}: factors {r['through']}: {r['ok']}")
    return EXIT_OK if not mismatches else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# Parser.


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=["plain", "json", "csv"], default="plain", help="output format"
    )
    common.add_argument(
        "--max-elements", type=int, default=10000, help="element guard for group building"
    )
    common.add_argument(
        "--oracle-bits",
        type=int,
        default=DEFAULT_ORACLE_BITS,
        help="max subgroup classes for the brute-force unit oracle",
    )
    common.add_argument(
        "--skip-oracle",
        action="store_true",
        help="silently skip the oracle when over the class limit",
    )
    common.add_argument(
        "--witnesses", action="store_true", help="list units / form bases / details"
    )
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = argparse.ArgumentParser(
        prog="burnside-lab",
        description="Units of Burnside rings of small finite groups.",
        epilog=(
            "Group specs: C<n>, D<n> (2-power order), SD<n>, Q<n>, C2^<k>, "
            "S<n>, A<n> (n<=6), products with x (e.g. D8xC3), or "
            "perm:<degree>:<cycles;...> such as perm:3:(1 2);(1 2 3). "
            "CSV table columns: group,order,classes,rank,dim_L,methods_agree."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("marks", parents=[common], help="print the table of marks")
    p.add_argument("spec")
    p.set_defaults(func=cmd_marks)

    p = sub.add_parser("subgroups", parents=[common], help="list subgroup classes")
    p.add_argument("spec")
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("units", parents=[common], help="unit group rank")
    p.add_argument("spec")
    p.add_argument(
        "--method",
        choices=["oracle", "yoshida", "sections", "limit", "all"],
        default="all",
    )
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("kernel", parents=[common], help="presentation kernel at one group")
    p.add_argument("spec")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", parents=[common], help="run the full per-group check suite")
    p.add_argument("spec")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="family sweep")
    p.add_argument("--family", required=True, help=f"one of {sorted(FAMILIES)}")
    p.add_argument("--max-order", type=int, required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser(
        "factorize", parents=[common], help="verify transitive-biset factorization"
    )
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_factorize)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        return args.func(args, cfg)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardExceeded as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    raise SystemExit(main())
