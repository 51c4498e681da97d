"""Exact planar polyline machinery: compile drawn strands into a PD code.

The family generator and the local Reidemeister models describe curves as
polylines with rational coordinates.  This module finds every transversal
crossing exactly (Fraction arithmetic, no epsilons), rejects degenerate
layouts loudly, and assembles the PD tuples from the local geometry, so a
drawing compiles to a diagram with no hand bookkeeping of arc labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .diagram import DiagramError, PlanarDiagram

Point = tuple[Fraction, Fraction]


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


class LayoutError(DiagramError):
    """A drawn layout is degenerate (touching endpoints, collinear overlap)."""


def segment_crossing(p1: Point, p2: Point, q1: Point, q2: Point):
    """Proper interior crossing of two segments, or None.

    Any non-transversal contact (shared endpoint between non-adjacent
    segments, collinear overlap, endpoint on interior) raises LayoutError:
    layouts are expected to be generic by construction.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    denom = _cross(d1, d2)
    if denom == 0:
        # parallel: only dangerous when collinear and overlapping
        if _cross(_sub(q1, p1), d1) == 0:
            t0 = _param_on(p1, d1, q1)
            t1 = _param_on(p1, d1, q2)
            lo, hi = min(t0, t1), max(t0, t1)
            if hi > 0 and lo < 1:
                raise LayoutError("collinear overlapping segments in layout")
        return None
    t = _cross(_sub(q1, p1), d2) / denom
    s = _cross(_sub(q1, p1), d1) / denom
    if t < 0 or t > 1 or s < 0 or s > 1:
        return None
    if t in (0, 1) or s in (0, 1):
        raise LayoutError(
            f"segment contact at an endpoint near {p1}->{p2} vs {q1}->{q2}; layout not generic")
    return (p1[0] + t * d1[0], p1[1] + t * d1[1]), t, s


def _param_on(origin: Point, d: Point, p: Point) -> Fraction:
    if d[0]:
        return (p[0] - origin[0]) / d[0]
    return (p[1] - origin[1]) / d[1]


def _angle_cmp(a: Point, b: Point) -> int:
    """Compare direction vectors by angle in [0, 2pi)."""
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = _cross(a, b)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def assemble_crossing(under_in, under_out, over_in, over_out,
                      d_under: Point, d_over: Point) -> tuple:
    """PD tuple from arc labels and the two strand directions at a crossing.

    Directions are of travel; the four ends are sorted counterclockwise
    starting from the incoming under-strand, which is the PD convention.
    """
    rays = [
        ((-d_under[0], -d_under[1]), under_in),
        (d_under, under_out),
        ((-d_over[0], -d_over[1]), over_in),
        (d_over, over_out),
    ]
    rays.sort(key=cmp_to_key(lambda x, y: _angle_cmp(x[0], y[0])))
    k = next(i for i, (_ray, lab) in enumerate(rays)
             if lab == under_in and rays[i][0] == (-d_under[0], -d_under[1]))
    ordered = [rays[(k + i) % 4][1] for i in range(4)]
    return tuple(ordered)


@dataclass
class Strand:
    """A drawn curve: closed polyline (or open arc for local models).

    ``tags`` labels each segment for the over/under resolver; when shorter
    than the segment list the last tag is reused.
    """

    label: str
    points: list
    closed: bool = True
    tags: list = field(default_factory=list)

    def __post_init__(self):
        self.points = [_pt(p) for p in self.points]
        if len(self.points) < 2:
            raise LayoutError(f"strand {self.label} needs at least 2 points")

    def segments(self):
        n = len(self.points)
        last = n if self.closed else n - 1
        for i in range(last):
            yield i, self.points[i], self.points[(i + 1) % n]

    def seg_dir(self, i) -> Point:
        n = len(self.points)
        return _sub(self.points[(i + 1) % n], self.points[i])

    def tag(self, i):
        if not self.tags:
            return None
        return self.tags[i] if i < len(self.tags) else self.tags[-1]


@dataclass
class _Pass:
    point: Point
    other_strand: int
    over: bool
    crossing: int


def compile_layout(strands: list[Strand], over_resolver, free_loops: int = 0,
                   labels=()) -> tuple[PlanarDiagram, dict]:
    """Compile closed drawn strands into a PlanarDiagram.

    ``over_resolver(strand_a, tag_a, strand_b, tag_b) -> bool`` says whether
    strand_a runs over strand_b where those segments cross; it must be
    antisymmetric and is checked.  Returns the diagram plus a crossing map
    ``{(strand label pair, index): crossing id}`` style metadata dict with
    per-component pass lists, used by the generator for surgery metadata.
    """
    crossings_geom = []
    passes: dict[int, list] = {i: [] for i in range(len(strands))}
    for ia, sa in enumerate(strands):
        for ib in range(ia, len(strands)):
            sb = strands[ib]
            for (i, p1, p2) in sa.segments():
                for (j, q1, q2) in sb.segments():
                    if ib == ia:
                        if j <= i:
                            continue
                        n = len(sa.points)
                        if j == i + 1 or (i == 0 and j == n - 1 and sa.closed):
                            continue  # adjacent segments share a vertex
                    hit = segment_crossing(p1, p2, q1, q2)
                    if hit is None:
                        continue
                    pt, t, s = hit
                    a_over = over_resolver(sa.label, sa.tag(i), sb.label, sb.tag(j))
                    b_over = over_resolver(sb.label, sb.tag(j), sa.label, sa.tag(i))
                    if a_over == b_over:
                        raise LayoutError(
                            f"resolver not antisymmetric for {sa.label}/{sb.label}")
                    cid = len(crossings_geom)
                    crossings_geom.append({
                        "strands": (ia, ib), "segs": (i, j),
                        "dirs": (sa.seg_dir(i), sb.seg_dir(j)),
                        "a_over": a_over, "point": pt,
                    })
                    passes[ia].append(((i, t), cid, True))
                    passes[ib].append(((j, s), cid, False))

    # order passes along each strand and hand out arc labels
    arc = 0
    arcs_of_pass: dict[tuple[int, int, bool], tuple[int, int]] = {}
    component_passes = {}
    extra_loops = free_loops
    for ia, plist in passes.items():
        plist.sort(key=lambda e: e[0])
        if not plist:
            extra_loops += 1
            component_passes[strands[ia].label] = []
            continue
        m = len(plist)
        start = arc + 1
        for k, (_key, cid, is_a) in enumerate(plist):
            arc_in = start + k - 1 if k else start + m - 1
            arc_out = start + k
            arcs_of_pass[(ia, cid, is_a)] = (arc_in, arc_out)
        arc += m
        # last arc label wraps to close the component
        last = arcs_of_pass[(ia, plist[-1][1], plist[-1][2])]
        arcs_of_pass[(ia, plist[-1][1], plist[-1][2])] = (last[0], start + m - 1)
        # fix: k-th pass has in-arc start+k-1 (k>0) else the wrap arc start+m-1
        component_passes[strands[ia].label] = [cid for (_k, cid, _f) in plist]

    tuples = []
    for cid, geom in enumerate(crossings_geom):
        ia, ib = geom["strands"]
        da, db = geom["dirs"]
        a_in, a_out = arcs_of_pass[(ia, cid, True)]
        b_in, b_out = arcs_of_pass[(ib, cid, False)]
        if geom["a_over"]:
            tup = assemble_crossing(b_in, b_out, a_in, a_out, db, da)
        else:
            tup = assemble_crossing(a_in, a_out, b_in, b_out, da, db)
        tuples.append(tup)

    diagram = PlanarDiagram(tuples, free_loops=extra_loops, labels=tuple(labels))
    meta = {"passes": component_passes}
    return diagram, meta
