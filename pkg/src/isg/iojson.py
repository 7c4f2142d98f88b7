"""JSON and DOT serialization.

Exports are canonical: keys sorted, set-valued fields sorted by element name,
one trailing newline.  Exporting, parsing, and exporting again is
byte-identical.
"""

from __future__ import annotations

import json

from .bitset import bits
from .coverages import Coverage, close_coverage, empty_coverage, tight_coverage
from .errors import ParseError
from .filters import FilterFamily
from .groupoids import FiniteGroupoid
from .ideals import UniversalPseudogroup
from .semigroups import FiniteInverseSemigroup, validate_table


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _read(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        with open(source, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON at line {exc.lineno}, "
                         f"column {exc.colno}") from exc


def load_semigroup(source) -> FiniteInverseSemigroup:
    """Parse {"elements": [...], "mul": [[names]], "zero"?, "identity"?}.

    The table holds element names; unknown names are reported with their
    cell position.
    """
    data = _read(source)
    try:
        names = list(data["elements"])
        rows = data["mul"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"semigroup JSON needs 'elements' and 'mul': {exc}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate element names")
    index = {n: i for i, n in enumerate(names)}
    if len(rows) != len(names):
        raise ParseError(f"mul table has {len(rows)} rows for {len(names)} elements")
    table = []
    for i, row in enumerate(rows):
        if len(row) != len(names):
            raise ParseError(f"mul row for {names[i]!r} has {len(row)} entries")
        out = []
        for j, cell in enumerate(row):
            if cell not in index:
                raise ParseError(
                    f"mul[{names[i]!r}][{names[j]!r}] references unknown "
                    f"element {cell!r}")
            out.append(index[cell])
        table.append(out)

    def resolve(key):
        if key not in data or data[key] is None:
            return None
        if data[key] not in index:
            raise ParseError(f"{key} names unknown element {data[key]!r}")
        return index[data[key]]

    return validate_table(names, table, resolve("zero"), resolve("identity"))


def dump_semigroup(sem: FiniteInverseSemigroup) -> dict:
    out = {
        "elements": list(sem.names),
        "mul": [[sem.names[sem.m(i, j)] for j in range(len(sem))]
                for i in range(len(sem))],
    }
    if sem.zero is not None:
        out["zero"] = sem.names[sem.zero]
    if sem.identity is not None:
        out["identity"] = sem.names[sem.identity]
    return out


BUILTIN_COVERAGES = ("tight", "empty")


def load_coverage(sem: FiniteInverseSemigroup, source) -> Coverage:
    """Parse {"covers": [{"of": name, "cover": [names]}], "close": bool} or a
    builtin name ("tight", "empty")."""
    if isinstance(source, str) and source in BUILTIN_COVERAGES:
        return tight_coverage(sem) if source == "tight" else empty_coverage(sem)
    data = _read(source)
    seeds = []
    for k, entry in enumerate(data.get("covers", [])):
        try:
            of = entry["of"]
            members = entry["cover"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"covers[{k}] needs 'of' and 'cover': {exc}")
        if of not in sem._index:
            raise ParseError(f"covers[{k}].of names unknown element {of!r}")
        bad = [m for m in members if m not in sem._index]
        if bad:
            raise ParseError(f"covers[{k}].cover names unknown element {bad[0]!r}")
        seeds.append((sem.index(of), sem.mask_of_names(members)))
    if data.get("close"):
        return close_coverage(sem, seeds)
    covers: dict[int, set[int]] = {}
    for a, m in seeds:
        covers.setdefault(a, set()).add(m)
    return Coverage(sem, {a: frozenset(f) for a, f in covers.items()})


def dump_coverage(cov: Coverage) -> dict:
    sem = cov.base
    entries = [{"of": sem.names[a], "cover": sorted(sem.names_of(m))}
               for a, m in cov.pairs()]
    entries.sort(key=lambda e: (e["of"], e["cover"]))
    return {"close": False, "covers": entries}


def dump_filter_family(family: FilterFamily) -> dict:
    return {"kind": family.kind,
            "filters": sorted(({"min": f.name()} for f in family),
                              key=lambda d: d["min"])}


def dump_universal_pseudogroup(up: UniversalPseudogroup) -> dict:
    base = up.base
    qsem = up.quotient.sem
    ideals = [sorted(base.names_of(up.element_mask(i)))
              for i in range(len(qsem))]
    key = [",".join(i) for i in ideals]
    return {
        "ideals": ideals,
        "mul": [[key[qsem.m(i, j)] for j in range(len(qsem))]
                for i in range(len(qsem))],
        "canonical_map": {base.names[a]: key[int(up.pi[a])]
                          for a in range(len(base))},
    }


def dump_groupoid(G: FiniteGroupoid) -> dict:
    units = sorted(G.labels[u] for u in G.unit_indices())
    return {
        "arrows": sorted(G.labels),
        "units": units,
        "d": {G.labels[g]: G.labels[int(G.d[g])] for g in range(len(G))},
        "r": {G.labels[g]: G.labels[int(G.r[g])] for g in range(len(G))},
        "mul": sorted([G.labels[f], G.labels[g], G.labels[G.m(f, g)]]
                      for f in range(len(G)) for g in range(len(G))
                      if G.composable(f, g)),
        "opens": sorted(sorted(G.labels[i] for i in bits(o))
                        for o in G.topology.opens),
    }


def groupoid_dot(G: FiniteGroupoid) -> str:
    """DOT rendering: units as boxes, each non-unit arrow as an edge from its
    source unit to its target unit labeled by the arrow."""
    lines = ["digraph groupoid {"]
    for u in sorted(G.unit_indices(), key=lambda i: G.labels[i]):
        lines.append(f'  "{G.labels[u]}" [shape=box];')
    edges = []
    for g in range(len(G)):
        if G.units_mask >> g & 1:
            continue
        edges.append(f'  "{G.labels[int(G.d[g])]}" -> '
                     f'"{G.labels[int(G.r[g])]}" [label="{G.labels[g]}"];')
    lines.extend(sorted(edges))
    lines.append("}")
    return "\n".join(lines) + "\n"
