"""Command-line interface: ``wildcat parse|build|check|yoneda``.

Exit codes: 0 success, 1 law violation, 2 parse or validation error,
3 resource limit, 4 unsupported input.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BaseMismatch,
    CapExceededWarning,
    QuotientNotAntisymmetric,
    ResourceLimit,
    UnsupportedBound,
    UnsupportedTable,
    WildcatError,
)

EXIT_OK, EXIT_LAW, EXIT_INPUT, EXIT_RESOURCE, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4
LAW_SUITES = ("galois", "monad", "operad", "oracle")


@dataclass
class RunConfig:
    input: Path
    command: str
    depth: int = 1
    format: str = "json"
    output: Path | None = None
    no_null: bool = False
    node_cap: int = 20_000
    hom_cap: int = 8
    laws: tuple[str, ...] = LAW_SUITES
    class_name: str | None = None
    hasse: bool = False

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.node_cap < 1 or self.hom_cap < 1:
            raise ValueError("caps must be >= 1")
        bad = set(self.laws) - set(LAW_SUITES)
        if bad:
            raise ValueError(f"unknown law suite(s): {', '.join(sorted(bad))}")


def _load(cfg: RunConfig):
    from .parser import load_table

    return load_table(cfg.input)


def cmd_parse(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    table = _load(cfg)
    print(f"{len(table.names)} classes in {table.origin}", file=out)
    for n in table.names:
        decl = table.decls[n]
        parts = [f"{n}/{table.arity[n]}"]
        if decl.params:
            bounds = ", ".join(f"{p.name} extends {_ref(p.bound)}" for p in decl.params)
            parts.append(f"bounds: {bounds}")
        sup = table.superclass_ref(n)
        if sup is not None:
            parts.append(f"extends {_ref(sup)}")
        if table.f_bounded[n]:
            parts.append("f-bounded")
        print("  " + "; ".join(parts), file=out)
    return EXIT_OK


def _ref(ref) -> str:
    from .category import render_ref

    return render_ref(ref, {})


def cmd_build(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    from .construct import construct
    from .export import to_dot, to_json

    table = _load(cfg)
    graph = construct(table, cfg.depth, include_null=not cfg.no_null, node_cap=cfg.node_cap)
    name = Path(cfg.input).stem
    text = (to_dot if cfg.format == "dot" else to_json)(graph, name, cfg.hasse)
    log = out
    if cfg.output is None:
        out.write(text)
        log = sys.stderr
    else:
        Path(cfg.output).write_text(text, encoding="utf-8")
    for i, level in enumerate(graph.levels):
        print(f"level {i}: {len(level)} nodes, {len(level.strict_pairs())} edges", file=log)
    return EXIT_OK


def _line(out, name: str, ok: bool, violations: int, checked: int, secs: float, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"{verdict} {name}: {violations} violation(s) over {checked} check(s) in {secs:.2f}s{extra}", file=out)


def cmd_check(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    from .construct import construct

    table = _load(cfg)
    record = "operad" in cfg.laws
    graph = construct(table, cfg.depth, include_null=not cfg.no_null, node_cap=cfg.node_cap, record=record)
    failed = False
    for law in LAW_SUITES:
        if law not in cfg.laws:
            continue
        t0 = time.perf_counter()
        if law == "galois":
            from .erasure import galois_check, monotonicity_check

            rep = galois_check(table, cfg.depth, graph)
            mono = monotonicity_check(table, cfg.depth, graph)
            bad = rep.violations + mono.violations
            ok = not bad
            _line(out, "galois", ok, len(bad), rep.checked_pairs + mono.checked_pairs, time.perf_counter() - t0,
                  f"{len(rep.witnesses)} proper-subclass witness(es)")
            for v in bad:
                print(f"  {v.side}: {v.a} / {v.b}", file=out)
        elif law == "monad":
            from .erasure import monad_laws_check

            rep = monad_laws_check(table, cfg.depth, graph)
            ok = rep.ok
            _line(out, "monad", ok, len(rep.violations), rep.checked_pairs, time.perf_counter() - t0)
            for v in rep.violations:
                print(f"  {v.side}: {v.a or ''} {v.b or ''}".rstrip(), file=out)
        elif law == "operad":
            from .laws import check_all

            rep = check_all(table, cfg.depth, graph=graph)
            ok = rep.ok
            counts = ", ".join(f"{k} x{v}" for k, v in rep.checked.items())
            _line(out, "operad", ok, len(rep.failures), sum(rep.checked.values()), time.perf_counter() - t0, counts)
            for law_name, where in rep.failures:
                print(f"  {law_name}: {where}", file=out)
        else:
            from .universe import compare_with_oracle

            ok, total, checked = True, 0, 0
            lines = []
            for d, level in enumerate(graph.levels):
                cmp = compare_with_oracle(table, level, d, include_null=not cfg.no_null)
                checked += len(level) ** 2
                total += cmp.violations
                ok = ok and cmp.ok
                for kind in ("missing_nodes", "extra_nodes", "missing_edges", "extra_edges"):
                    for item in getattr(cmp, kind):
                        lines.append(f"  depth {d} {kind}: {item}")
            _line(out, "oracle", ok, total, checked, time.perf_counter() - t0)
            for s in lines:
                print(s, file=out)
        failed = failed or not ok
    return EXIT_LAW if failed else EXIT_OK


def cmd_yoneda(cfg: RunConfig, class_name: str, out=None) -> int:
    out = out or sys.stdout
    from .category import build_class_category, instantiation_functor, skolem_template, yoneda_check

    table = _load(cfg)
    template = skolem_template(table, class_name)
    cat = build_class_category(table, hom_cap=cfg.hom_cap)
    f = instantiation_functor(table, cfg.depth)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CapExceededWarning)
        rep = yoneda_check(cat, f, class_name)
    print(f"template: {template.render()}", file=out)
    print(f"placeholders: {len(template.placeholders)}", file=out)
    print(f"|f({class_name})| = {rep.element_count}", file=out)
    print(f"|Nat(hom({class_name},-), f)| = {rep.nat_count}", file=out)
    if rep.cap_exceeded:
        print(f"INVALID: hom-sets are cut at length {cfg.hom_cap}", file=out)
        return EXIT_RESOURCE
    print("bijective" if rep.bijective else "NOT bijective", file=out)
    return EXIT_OK if rep.bijective else EXIT_LAW


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wildcat", description="Wildcard subtyping workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="validate a class table and summarise it")
    sp.add_argument("file", type=Path)

    sb = sub.add_parser("build", help="construct the subtyping order and export it")
    sb.add_argument("file", type=Path)
    sb.add_argument("--depth", type=int, default=1)
    sb.add_argument("--no-null", action="store_true", help="leave out the Null type")
    sb.add_argument("--format", choices=("dot", "json"), default="json")
    sb.add_argument("-o", "--output", type=Path)
    sb.add_argument("--node-cap", type=int, default=20_000)
    sb.add_argument("--hasse", action="store_true", help="export covering edges only")

    sc = sub.add_parser("check", help="run law suites")
    sc.add_argument("file", type=Path)
    sc.add_argument("--depth", type=int, default=1)
    sc.add_argument("--laws", default=",".join(LAW_SUITES),
                    help="comma-separated subset of " + ",".join(LAW_SUITES))
    sc.add_argument("--no-null", action="store_true")
    sc.add_argument("--node-cap", type=int, default=20_000)

    sy = sub.add_parser("yoneda", help="check the Yoneda correspondence for a class")
    sy.add_argument("file", type=Path)
    sy.add_argument("--class", dest="class_name", required=True)
    sy.add_argument("--depth", type=int, default=1)
    sy.add_argument("--hom-cap", type=int, default=8)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            input=args.file,
            command=args.command,
            depth=getattr(args, "depth", 1),
            format=getattr(args, "format", "json"),
            output=getattr(args, "output", None),
            no_null=getattr(args, "no_null", False),
            node_cap=getattr(args, "node_cap", 20_000),
            hom_cap=getattr(args, "hom_cap", 8),
            laws=tuple(s.strip() for s in getattr(args, "laws", ",".join(LAW_SUITES)).split(",") if s.strip()),
            class_name=getattr(args, "class_name", None),
            hasse=getattr(args, "hasse", False),
        )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if cfg.command == "parse":
            return cmd_parse(cfg)
        if cfg.command == "build":
            return cmd_build(cfg)
        if cfg.command == "check":
            return cmd_check(cfg)
        return cmd_yoneda(cfg, cfg.class_name)
    except (UnsupportedBound, UnsupportedTable) as e:
        print(str(e), file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (QuotientNotAntisymmetric, BaseMismatch) as e:
        # the construction broke its own invariants: a law failure, not bad input
        print(f"FAIL construction: {e}", file=sys.stdout)
        return EXIT_LAW
    except ResourceLimit as e:
        print(str(e), file=sys.stderr)
        return EXIT_RESOURCE
    except WildcatError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
