"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a property check
fails, 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import iojson
from .bitset import bits, mask_of
from .coverages import restrict_to_idempotents, tight_coverage
from .errors import IsgError, ParseError, SizeLimit
from .filters import enumerate_filters, ultrafilters
from .fixtures import make_fixture
from .groupoids import (
    filter_groupoid,
    nucleus_embedding,
    reduce_groupoid,
)
from .ideals import (
    as_pseudogroup,
    nucleus_from_coverage,
    universal_pseudogroup,
)
from .properties import (
    CheckResult,
    coverage_suite,
    germ_lemma_suite,
    idempotent_laws,
    join_implies_compatible,
    filter_enumeration_oracle,
    nucleus_oracle,
    order_axioms,
    tight_filter_avoids_ideal,
    tight_support_union_law,
    unit_frame_comparison,
)
from .tight import tight_filters, tight_groupoid


def _load_semigroup(spec: str, size_cap: int):
    if spec.startswith("fixture:"):
        return make_fixture(spec[len("fixture:"):], size_cap=size_cap)
    return iojson.load_semigroup(spec)


def _checks_for(sem, cov, level: str) -> list[CheckResult]:
    if level != "full":
        return []
    out = []

    def run(fn, *args):
        try:
            out.extend(fn(*args))
        except SizeLimit as exc:
            out.append(CheckResult(fn.__name__.replace("_", "-") + "-skipped",
                                   True, {"reason": str(exc)}))

    run(order_axioms, sem)
    run(idempotent_laws, sem)
    run(join_implies_compatible, sem)
    if len(sem) <= 16:
        run(filter_enumeration_oracle, sem)
    run(germ_lemma_suite, sem)
    if cov is not None and len(sem) <= 16:
        run(coverage_suite, cov)
        run(nucleus_oracle, sem, cov)
        run(unit_frame_comparison, sem, cov)
    if sem.is_semilattice() and sem.zero is not None and len(sem) <= 16:
        run(tight_support_union_law, sem)
        run(tight_filter_avoids_ideal, sem)
    return out


def _render(report: dict, fmt: str, dot: str | None) -> str:
    if fmt == "json":
        return iojson.canonical_dumps(report)
    if fmt == "dot":
        if dot is None:
            raise ParseError("dot output is only available for groupoid commands")
        return dot
    lines = [f"command: {report['command']}"]
    for key, value in sorted(report.get("results", {}).items()):
        lines.append(f"{key}: {value}")
    for check in report.get("checks", []):
        mark = "pass" if check["passed"] else "FAIL"
        extra = f"  witness: {check['witness']}" if not check["passed"] else ""
        lines.append(f"[{mark}] {check['name']}{extra}")
    lines.append(f"elapsed_ms: {report['elapsed_ms']}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="isg",
        description="Finite inverse semigroups, coverages, filters, and "
                    "their groupoids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, coverage=True):
        p.add_argument("--semigroup", required=True,
                       help="semigroup JSON file, or fixture:<name(n)>")
        if coverage:
            p.add_argument("--coverage", default=None,
                           help="coverage JSON file, or a builtin name "
                                "(tight, empty)")
        p.add_argument("--format", choices=("json", "dot", "text"),
                       default="text")
        p.add_argument("--check-level", choices=("fast", "full"),
                       default="fast")
        p.add_argument("--size-cap", type=int, default=4096)
        p.add_argument("--adjoin-improper", action="store_true")
        p.add_argument("--output", default=None)

    common(sub.add_parser("validate", help="validate inputs and report"))
    p = sub.add_parser("filters", help="enumerate filters")
    common(p)
    p.add_argument("--kind", choices=("all", "ultra"), default="all")
    common(sub.add_parser("tight-filters", help="tight filters of E(S)"))
    common(sub.add_parser("pseudogroup",
                          help="universal pseudogroup of a coverage"))
    p = sub.add_parser("universal-groupoid", help="groupoid of filters")
    common(p)
    p.add_argument("--topology", choices=("patch", "tau"), default="patch")
    common(sub.add_parser("tight-groupoid",
                          help="reduction to the tight filters"))
    common(sub.add_parser("spectrum",
                          help="spectrum of the coverage frame on E(S)"))
    p = sub.add_parser("reduce", help="reduce the filter groupoid to units")
    common(p)
    p.add_argument("--units", required=True,
                   help="comma-separated unit labels (filter minima)")
    p.add_argument("--topology", choices=("patch", "tau"), default="patch")
    common(sub.add_parser("embed",
                          help="groupoid embedding from the coverage nucleus"))
    p = sub.add_parser("fixture", help="emit a builtin semigroup as JSON")
    p.add_argument("--name", required=True)
    p.add_argument("--size-cap", type=int, default=4096)
    p.add_argument("--output", default=None)

    args = parser.parse_args(argv)
    try:
        text, failed = _dispatch(args)
    except IsgError as exc:
        detail = f" {exc.witness}" if getattr(exc, "witness", None) else ""
        print(f"error: {exc}{detail}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if failed else 0


def _dispatch(args) -> tuple[str, bool]:
    started = time.monotonic()
    if args.command == "fixture":
        sem = make_fixture(args.name, size_cap=args.size_cap)
        return iojson.canonical_dumps(iojson.dump_semigroup(sem)), False

    sem = _load_semigroup(args.semigroup, args.size_cap)
    cov = None
    if getattr(args, "coverage", None):
        cov = iojson.load_coverage(sem, args.coverage)

    results: dict = {}
    dot = None
    payload: dict = {}

    if args.command == "validate":
        results = {"elements": len(sem),
                   "idempotents": len(list(bits(sem.idem_mask))),
                   "zero": sem.zero is not None and sem.names[sem.zero],
                   "identity": sem.identity is not None and sem.names[sem.identity]}
        payload = {"semigroup": iojson.dump_semigroup(sem)}
        if cov is not None:
            payload["coverage"] = iojson.dump_coverage(cov)
    elif args.command == "filters":
        family = ultrafilters(sem) if args.kind == "ultra" else enumerate_filters(sem)
        results = {"count": len(family)}
        payload = {"filters": iojson.dump_filter_family(family)}
    elif args.command == "tight-filters":
        esem, _ = sem.idempotent_semilattice()
        family = tight_filters(esem)
        results = {"count": len(family)}
        payload = {"filters": iojson.dump_filter_family(family)}
    elif args.command == "pseudogroup":
        up = universal_pseudogroup(sem, cov if cov is not None
                                   else tight_coverage(sem))
        results = {"elements": len(up.quotient.sem)}
        payload = {"pseudogroup": iojson.dump_universal_pseudogroup(up)}
    elif args.command == "universal-groupoid":
        G, _ = filter_groupoid(sem, args.topology,
                               adjoin_improper=args.adjoin_improper)
        results = {"arrows": len(G), "units": len(G.unit_indices()),
                   "opens": len(G.topology.opens)}
        payload = {"groupoid": iojson.dump_groupoid(G)}
        dot = iojson.groupoid_dot(G)
    elif args.command == "tight-groupoid":
        G, _ = tight_groupoid(sem)
        results = {"arrows": len(G), "units": len(G.unit_indices())}
        payload = {"groupoid": iojson.dump_groupoid(G)}
        dot = iojson.groupoid_dot(G)
    elif args.command == "spectrum":
        esem, _ = sem.idempotent_semilattice()
        ecov = restrict_to_idempotents(cov) if cov is not None \
            else tight_coverage(esem)
        up = universal_pseudogroup(esem, ecov)
        from .groupoids import prime_filter_groupoid

        G, points = prime_filter_groupoid(up.pseudo)
        top = G.topology
        results = {"points": len(points), "opens": len(top.opens)}
        payload = {"points": sorted(p.name() for p in points),
                   "opens": sorted(sorted(top.labels[i] for i in bits(o))
                                   for o in top.opens)}
    elif args.command == "reduce":
        G, filters = filter_groupoid(sem, args.topology,
                                     adjoin_improper=args.adjoin_improper)
        wanted = args.units.split(",")
        label_to_arrow = {G.labels[i]: i for i in range(len(G))}
        missing = [w for w in wanted if w not in label_to_arrow]
        if missing:
            raise ParseError(f"unknown unit label {missing[0]!r}")
        keep = mask_of(label_to_arrow[w] for w in wanted)
        if keep & ~G.units_mask:
            bad = next(bits(keep & ~G.units_mask))
            raise ParseError(f"{G.labels[bad]!r} is not a unit")
        H, _ = reduce_groupoid(G, keep)
        results = {"arrows": len(H), "units": len(H.unit_indices())}
        payload = {"groupoid": iojson.dump_groupoid(H)}
        dot = iojson.groupoid_dot(H)
    elif args.command == "embed":
        ideals, nucleus = nucleus_from_coverage(
            sem, cov if cov is not None else tight_coverage(sem))
        pseudo = as_pseudogroup(ideals.sem)
        emb = nucleus_embedding(pseudo, nucleus)
        results = {"source_arrows": len(emb.source),
                   "target_arrows": len(emb.target),
                   "embedding_ok": emb.ok}
        payload = {"arrow_map": {emb.source.labels[i]:
                                 emb.target.labels[int(emb.arrow_map[i])]
                                 for i in range(len(emb.source))},
                   "failures": emb.failures}
    else:  # pragma: no cover
        raise ParseError(f"unknown command {args.command}")

    checks = _checks_for(sem, cov, args.check_level)
    if args.command == "embed":
        checks.append(CheckResult("embedding-theorem", results["embedding_ok"],
                                  None if results["embedding_ok"]
                                  else {"failures": payload["failures"]}))
    failed = any(not c.passed for c in checks)
    report = {
        "command": args.command,
        "results": results,
        "checks": [{"name": c.name, "passed": c.passed,
                    **({"witness": c.witness} if c.witness else {})}
                   for c in checks],
        "elapsed_ms": int((time.monotonic() - started) * 1000),
        **payload,
    }
    return _render(report, args.format, dot), failed


if __name__ == "__main__":
    sys.exit(main())
