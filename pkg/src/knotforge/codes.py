"""Interchange formats: Gauss codes, DT codes, PD text, structured JSON.

Formats are byte-exact so exported files diff cleanly between runs:

* PD text, one diagram per line::

      PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]

  Crossing-free circles append bare ``unknot`` tokens inside the bracket.

* Gauss code text: per component a comma-separated list of ``O±n`` / ``U±n``
  entries (over/under, crossing sign, 1-based crossing id); components are
  joined with `` ; ``.

* DT code (knots only): ``DT[4, 6, 2]``, even entry negated when the
  even-numbered visit is the over-pass.

* Structured JSON: ``{"crossings": [[a,b,c,d], ...], "component_count": k,
  "labels": [...]}`` with free circles implied by the component count.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .diagram import DiagramError, PlanarDiagram


@dataclass(frozen=True)
class GaussCode:
    """Signed Gauss code; entries are (crossing id, is_over, sign)."""

    components: tuple[tuple[tuple[int, bool, int], ...], ...]
    free_loops: int = 0

    def __str__(self) -> str:
        def entry(e):
            cid, over, sign = e
            return f"{'O' if over else 'U'}{'+' if sign > 0 else '-'}{cid}"

        parts = [", ".join(entry(e) for e in comp) for comp in self.components]
        parts.extend("unknot" for _ in range(self.free_loops))
        return " ; ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "GaussCode":
        comps = []
        loops = 0
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if chunk == "unknot":
                loops += 1
                continue
            entries = []
            for tok in chunk.split(","):
                tok = tok.strip()
                m = re.fullmatch(r"([OU])([+-])(\d+)", tok)
                if not m:
                    raise DiagramError(f"bad Gauss entry {tok!r}")
                entries.append((int(m.group(3)), m.group(1) == "O",
                                +1 if m.group(2) == "+" else -1))
            comps.append(tuple(entries))
        return cls(tuple(comps), loops)


def to_gauss(diagram: PlanarDiagram) -> GaussCode:
    diagram.require_valid()
    comps = []
    for comp in diagram.components:
        entries = []
        for arc in comp:
            ci, slot, over = _terminal_crossing(diagram, arc)
            entries.append((ci + 1, over, diagram.signs[ci]))
        comps.append(tuple(entries))
    return GaussCode(tuple(c for c in comps if c), diagram.free_loops)


def _terminal_crossing(diagram: PlanarDiagram, arc: int):
    """Crossing where this arc ends (points into), and whether it enters over."""
    ori = diagram._orientation
    for (ci, slot) in diagram._occurrences[arc]:
        if ori[(ci, slot)] == +1:
            return ci, slot, slot in (1, 3)
    raise DiagramError(f"arc {arc} has no terminal crossing")


def from_gauss(code: GaussCode) -> PlanarDiagram:
    """Rebuild a diagram from a signed Gauss code.

    The signed code pins each PD tuple exactly; realizability then means the
    rebuilt map is planar, and anything else is rejected.
    """
    visits: dict[int, dict[str, int]] = {}
    arc = 0
    comp_arc_ranges = []
    for comp in code.components:
        start = arc + 1
        for (cid, over, sign) in comp:
            arc += 1
            rec = visits.setdefault(cid, {})
            key = "over" if over else "under"
            if key in rec:
                raise DiagramError(f"crossing {cid} visited {key} twice")
            rec[key] = arc
            if "sign" in rec and rec["sign"] != sign:
                raise DiagramError(f"crossing {cid} has inconsistent signs")
            rec["sign"] = sign
        comp_arc_ranges.append((start, arc))

    def succ(a):
        for (s, e) in comp_arc_ranges:
            if s <= a <= e:
                return s if a == e else a + 1
        raise DiagramError("arc bookkeeping failed")

    crossings = []
    for cid in sorted(visits):
        rec = visits[cid]
        if "over" not in rec or "under" not in rec:
            raise DiagramError(f"crossing {cid} missing an over or under visit")
        ui, oi = rec["under"], rec["over"]
        uo, oo = succ(ui), succ(oi)
        if rec["sign"] > 0:
            crossings.append((ui, oo, uo, oi))
        else:
            crossings.append((ui, oi, uo, oo))
    diagram = PlanarDiagram(crossings, code.free_loops)
    report = diagram.validate()
    if not report.ok:
        raise DiagramError("Gauss code does not define a diagram: "
                           + "; ".join(report.violations))
    if not diagram.is_planar():
        raise DiagramError("Gauss code is not realizable in the plane "
                           f"(map genus {diagram.genus_of_map()})")
    return diagram


# -- DT codes ----------------------------------------------------------------


def to_dt(diagram: PlanarDiagram) -> tuple[int, ...]:
    """Dowker-Thistlethwaite code; knots only."""
    diagram.require_valid()
    if diagram.component_count() != 1:
        raise DiagramError("DT codes are for knots only")
    comp = diagram.components[0]
    if not comp:
        return ()
    n = len(comp)
    # choose the rotation whose first visit is an over-pass, for the
    # conventional all-positive code on alternating diagrams
    start = 0
    for k in range(n):
        _ci, _slot, over = _terminal_crossing(diagram, comp[k])
        if over:
            start = k
            break
    label_of: dict[int, list] = {}
    for pos in range(n):
        arc = comp[(start + pos) % n]
        ci, _slot, over = _terminal_crossing(diagram, arc)
        label_of.setdefault(ci, []).append((pos + 1, over))
    pairs = []
    for ci, lab in label_of.items():
        (p1, o1), (p2, o2) = lab
        odd, even = (p1, p2) if p1 % 2 else (p2, p1)
        even_over = o1 if even == p1 else o2
        pairs.append((odd, -even if even_over else even))
    pairs.sort()
    return tuple(e for (_o, e) in pairs)


def format_dt(code: tuple[int, ...]) -> str:
    return "DT[" + ", ".join(str(e) for e in code) + "]"


# -- PD text -----------------------------------------------------------------


def format_pd(diagram: PlanarDiagram) -> str:
    toks = [f"X[{a},{b},{c},{d}]" for (a, b, c, d) in diagram.crossings]
    toks.extend("unknot" for _ in range(diagram.free_loops))
    return "PD[" + ", ".join(toks) + "]"


def parse_pd(text: str) -> PlanarDiagram:
    text = text.strip()
    m = re.fullmatch(r"PD\[(.*)\]", text, re.S)
    if not m:
        raise DiagramError("PD text must look like PD[X[a,b,c,d], ...]")
    body = m.group(1).strip()
    crossings = []
    loops = 0
    if body:
        for tok in re.split(r",\s*(?![^\[]*\])", body):
            tok = tok.strip()
            if tok == "unknot":
                loops += 1
                continue
            xm = re.fullmatch(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]", tok)
            if not xm:
                raise DiagramError(f"bad PD token {tok!r}")
            crossings.append(tuple(int(g) for g in xm.groups()))
    return PlanarDiagram(crossings, loops)


# -- structured JSON ----------------------------------------------------------


def to_json_dict(diagram: PlanarDiagram) -> dict:
    doc = {
        "crossings": [list(x) for x in diagram.crossings],
        "component_count": diagram.component_count(),
    }
    if diagram.labels:
        doc["labels"] = list(diagram.labels)
    return doc


def from_json_dict(doc: dict) -> PlanarDiagram:
    crossings = [tuple(x) for x in doc["crossings"]]
    base = PlanarDiagram(crossings)
    base.require_valid()
    derived = base.component_count()
    total = int(doc["component_count"])
    if total < derived:
        raise DiagramError(
            f"component_count {total} below the {derived} components the crossings define")
    return PlanarDiagram(crossings, free_loops=total - derived,
                         labels=tuple(doc.get("labels", ())))


def dump_json(diagram: PlanarDiagram) -> str:
    return json.dumps(to_json_dict(diagram), sort_keys=True, indent=2) + "\n"


def load_json(text: str) -> PlanarDiagram:
    return from_json_dict(json.loads(text))
