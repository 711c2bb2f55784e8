"""Command-line entry point: solve, gen, validate, bench, polygons.

Answer lines go to standard output (one per query, ``qx qy : id id ...``,
``-`` when empty); statistics and progress notes go to standard error so
the answer stream stays pipeline-clean. Exit codes: 0 ok, 1 input error,
2 validation mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .bench import BENCH_MODES, render_figures, rows_to_tsv, run_bench
from .formats import (ParseError, load_polygon_file, load_query_file,
                      load_triangle_file, query_text, triangle_text,
                      write_query_file, write_triangle_file)
from .geometry import GeometryError, Point, canonicalize_family
from .index import MODE_BINARY, MODE_CASCADED, MODES, QueryStats, build_index
from .intervals import IntervalStab
from .oracle import PROFILES, gen_instance, oracle_query_many
from .polygons import PolygonError, build_polygon_index

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MISMATCH = 2


class _CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; keep 2 for mismatches only
    def error(self, message):
        raise _CLIError(message)


def _answer_line(q: Point, ids: List[int]) -> str:
    return f"{q.x} {q.y} : " + (" ".join(str(i) for i in ids) if ids else "-")


def _print_query_stats(label: str, totals: QueryStats, count: int) -> None:
    if count == 0:
        print(f"# {label}: no queries", file=sys.stderr)
        return
    print(
        f"# {label}: queries={count} reported={totals.reported} "
        f"nodes={totals.nodes_visited / count:.1f}/q "
        f"key_cmp={totals.key_comparisons / count:.1f}/q "
        f"rect_cmp={totals.rect_comparisons / count:.1f}/q",
        file=sys.stderr,
    )


def _cmd_solve(args) -> int:
    reference, entries = load_triangle_file(args.triangles)
    queries = load_query_file(args.queries)
    to_canonical, triangles = canonicalize_family(reference, entries)
    index = build_index(triangles)
    totals = QueryStats()
    out = sys.stdout
    for q in queries:
        ids, _ = index.query(to_canonical(q), args.mode, stats=totals)
        out.write(_answer_line(q, ids) + "\n")
    _print_query_stats(f"solve mode={args.mode} n={len(triangles)}", totals, len(queries))
    return EXIT_OK


def _cmd_polygons(args) -> int:
    reference, entries = load_polygon_file(args.polygons)
    queries = load_query_file(args.queries)
    pindex = build_polygon_index(reference, entries)
    out = sys.stdout
    for q in queries:
        out.write(_answer_line(q, pindex.query(q, args.mode)) + "\n")
    print(f"# polygons: pieces={len(pindex.pieces)} instances={len(entries)} "
          f"queries={len(queries)} mode={args.mode}", file=sys.stderr)
    return EXIT_OK


def _cmd_gen(args) -> int:
    instance = gen_instance(args.n, args.seed, args.profile)
    note = f"generated: n={args.n} seed={args.seed} profile={args.profile}"
    entries = [(t.id, Point(t.a, t.b), t.s) for t in instance.triangles]
    triangle_path = f"{args.out}.triangles"
    query_path = f"{args.out}.queries"
    write_triangle_file(triangle_path, instance.reference, entries, comments=[note])
    write_query_file(query_path, instance.queries, comments=[note])
    print(f"# wrote {triangle_path} and {query_path}", file=sys.stderr)
    return EXIT_OK


def _corrupt_index(index) -> None:
    """Self-test hook: silently drop one triangle from every node structure."""
    if not index.triangles:
        return
    victim = index.triangles[0].id
    for node in index.all_nodes:
        if victim in node.ids:
            pairs = [(k, i) for k, i in zip(node.keys, node.ids) if i != victim]
            node.keys = [k for k, _ in pairs]
            node.ids = [i for _, i in pairs]
        if node.stab is not None:
            kept = [iv for iv in node.stab.items() if iv[2] != victim]
            node.stab = IntervalStab(kept) if kept else None
    index._cascade = None


def _cmd_validate(args) -> int:
    for trial in range(args.trials):
        seed = args.seed + trial
        instance = gen_instance(args.n, seed, args.profile)
        index = build_index(instance.triangles)
        if args.corrupt:
            _corrupt_index(index)
        expected = oracle_query_many(instance.triangles, instance.queries)
        for mode in MODES:
            for q, want in zip(instance.queries, expected):
                got, _ = index.query(q, mode)
                if got != want:
                    print(f"MISMATCH n={args.n} seed={seed} profile={args.profile} mode={mode}")
                    print(f"query: {q.x} {q.y}")
                    print(f"expected: {' '.join(map(str, want)) or '-'}")
                    print(f"got:      {' '.join(map(str, got)) or '-'}")
                    entries = [(t.id, Point(t.a, t.b), t.s) for t in instance.triangles]
                    print("--- triangle file for replay ---")
                    sys.stdout.write(triangle_text(
                        instance.reference, entries,
                        comments=[f"counterexample n={args.n} seed={seed} profile={args.profile}"]))
                    print("--- query file for replay ---")
                    sys.stdout.write(query_text([q]))
                    return EXIT_MISMATCH
        print(f"ok n={args.n} seed={seed} profile={args.profile} "
              f"queries={len(instance.queries)} modes={','.join(MODES)}")
    print(f"PASS {args.trials} trial(s), profile={args.profile}, n={args.n}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        n_list = [int(tok) for tok in args.n.split(",") if tok]
    except ValueError:
        raise _CLIError(f"--n must be a comma-separated list of integers, got {args.n!r}")
    if not n_list or any(n < 0 for n in n_list):
        raise _CLIError("--n needs at least one nonnegative size")
    modes = BENCH_MODES if args.mode == "both" else (args.mode,)

    def progress(row):
        print(f"# bench n={row.n} mode={row.mode} build={row.build_s:.2f}s "
              f"max_key_cmp-2k={row.max_key_cmp_minus_2k}", file=sys.stderr)

    rows = run_bench(n_list, seed=args.seed, modes=modes,
                     queries=args.queries, profile=args.profile, progress=progress)
    tsv = rows_to_tsv(rows)
    sys.stdout.write(tsv)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        tsv_path = os.path.join(args.out, "bench.tsv")
        with open(tsv_path, "w", encoding="utf-8") as fh:
            fh.write(tsv)
        written = render_figures(rows, args.out)
        for path in [tsv_path, *written]:
            print(f"# wrote {path}", file=sys.stderr)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="tristab",
                     description="Report all homothetic triangles (or polygons) "
                                 "containing query points, output-sensitively.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p, choices=MODES):
        p.add_argument("--mode", choices=choices, default=MODE_CASCADED,
                       help="position-search strategy (default: cascaded)")

    p = sub.add_parser("solve", help="answer queries from a triangle file")
    p.add_argument("triangles", help="triangle file (see README for the format)")
    p.add_argument("queries", help="query file, one 'qx qy' per line")
    add_mode(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("polygons", help="answer queries from a polygon file")
    p.add_argument("polygons", help="polygon file with a 'poly' header")
    p.add_argument("queries", help="query file, one 'qx qy' per line")
    add_mode(p)
    p.set_defaults(func=_cmd_polygons)

    p = sub.add_parser("gen", help="generate a reproducible instance")
    p.add_argument("--n", type=int, required=True, help="number of triangles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=PROFILES, default="uniform")
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="writes PREFIX.triangles and PREFIX.queries")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="compare index answers against brute force")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--profile", choices=PROFILES, default="uniform")
    p.add_argument("--trials", type=int, default=1,
                   help="number of consecutive seeds to check")
    p.add_argument("--corrupt", action="store_true",
                   help="deliberately corrupt the index first (harness self-test)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="operation-count table over growing n")
    p.add_argument("--n", required=True, metavar="N1,N2,...",
                   help="comma-separated instance sizes")
    p.add_argument("--seed", type=int, default=0)
    add_mode(p, choices=[*MODES, "both"])
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--profile", choices=PROFILES, default="uniform")
    p.add_argument("--out", metavar="DIR",
                   help="also write bench.tsv and PNG figures into DIR")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ParseError, GeometryError, PolygonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
