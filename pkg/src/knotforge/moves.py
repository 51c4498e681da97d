"""Reidemeister moves on PD diagrams, with legal-site enumeration.

These are the invariance test harness: linking numbers and Alexander
polynomials must survive any legal sequence.  Moves return plain diagrams
(labels and surgery metadata do not survive relabelling and are dropped).

Site conventions:

* R1 add: (arc, kind 0..3) — two chiralities times two sides of the strand.
* R1 remove: a crossing whose tuple carries a cyclically-adjacent repeated
  arc (a kink).
* R2 add: two distinct arcs on a common face, plus which strand goes over.
* R2 remove: a bigon face whose two crossings have one strand over at both
  (a poke; clasps are not removable).
* R3: a triangular face whose three strand heights are linearly ordered,
  sliding an extreme (over-over or under-under) arc.  Combinatorially the
  slide swaps the order of the two relevant crossings along each strand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import DiagramError, PlanarDiagram

_OVER_SLOTS = (1, 3)


def _renumber(crossings, free_loops=0) -> PlanarDiagram:
    labels = sorted({a for x in crossings for a in x})
    mapping = {a: i + 1 for i, a in enumerate(labels)}
    return PlanarDiagram(tuple(tuple(mapping[a] for a in x) for x in crossings),
                         free_loops=free_loops)


def passthrough_delete(diagram: PlanarDiagram, cids) -> PlanarDiagram:
    """Delete crossings, letting both strands run straight through.

    This is the common kernel of R1/R2 removal and of deleting a surgery
    loop: at each removed crossing the under-in arc is glued to under-out
    and over-in to over-out.  Components losing all their crossings become
    crossing-free circles.
    """
    diagram.require_valid()
    cids = set(cids)
    ori = diagram._orientation
    parent = {a: a for a in diagram.arcs()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for ci in cids:
        x = diagram.crossings[ci]
        union(x[0], x[2])
        over_in = x[1] if ori[(ci, 1)] == +1 else x[3]
        over_out = x[3] if over_in == x[1] else x[1]
        union(over_in, over_out)

    kept = [tuple(find(a) for a in x)
            for ci, x in enumerate(diagram.crossings) if ci not in cids]
    kept_arcs = {a for x in kept for a in x}
    vanished = 0
    for comp in diagram.components:
        if comp and not any(find(a) in kept_arcs for a in comp):
            vanished += 1
    return _renumber(kept, diagram.free_loops + vanished)


# -- R1 -----------------------------------------------------------------------


def r1_add_sites(diagram: PlanarDiagram):
    return [(a, kind) for a in diagram.arcs() for kind in range(4)]


def r1_add(diagram: PlanarDiagram, arc, kind: int) -> PlanarDiagram:
    diagram.require_valid()
    if arc is None:
        # kink a crossing-free circle instead
        if diagram.free_loops < 1:
            raise DiagramError("no crossing-free circle to kink")
        n = diagram.arc_count
        shape = (n + 1, n + 1, n + 2, n + 2) if kind % 2 == 0 else \
                (n + 1, n + 2, n + 2, n + 1)
        return _renumber(list(diagram.crossings) + [shape], diagram.free_loops - 1)
    if arc not in set(diagram.arcs()):
        raise DiagramError(f"no arc {arc}")
    ori = diagram._orientation
    n = diagram.arc_count
    x2, loop = n + 1, n + 2
    crossings = list(diagram.crossings)
    # redirect the downstream half of the split arc
    for (ci, slot) in diagram._occurrences[arc]:
        if ori[(ci, slot)] == +1:
            t = list(crossings[ci])
            t[slot] = x2
            crossings[ci] = tuple(t)
            break
    shapes = {
        0: (arc, x2, loop, loop),
        1: (arc, loop, loop, x2),
        2: (loop, loop, x2, arc),
        3: (loop, arc, x2, loop),
    }
    if kind not in shapes:
        raise DiagramError("R1 kind must be 0..3")
    crossings.append(shapes[kind])
    return _renumber(crossings, diagram.free_loops)


def r1_remove_sites(diagram: PlanarDiagram):
    sites = []
    for ci, x in enumerate(diagram.crossings):
        if any(x[k] == x[(k + 1) % 4] for k in range(4)):
            sites.append(ci)
    return sites


def r1_remove(diagram: PlanarDiagram, ci: int) -> PlanarDiagram:
    x = diagram.crossings[ci]
    if not any(x[k] == x[(k + 1) % 4] for k in range(4)):
        raise DiagramError(f"crossing {ci} is not a kink "
                           "(no cyclically-adjacent repeated arc)")
    return passthrough_delete(diagram, [ci])


# -- R2 -----------------------------------------------------------------------


def _face_entries(diagram: PlanarDiagram, face):
    """(arc, along_orientation) for each half-edge step of a face orbit."""
    ori = diagram._orientation
    out = []
    for (ci, slot) in face:
        arc = diagram.crossings[ci][slot]
        out.append((arc, ori[(ci, slot)] == -1))
    return out


def r2_add_sites(diagram: PlanarDiagram):
    sites = []
    for fi, face in enumerate(diagram.faces):
        entries = _face_entries(diagram, face)
        for i in range(len(entries)):
            for j in range(len(entries)):
                if i != j and entries[i][0] != entries[j][0]:
                    sites.append((fi, i, j, True))
                    sites.append((fi, i, j, False))
    return sites


def r2_add(diagram: PlanarDiagram, face_index: int, i: int, j: int,
           over_first: bool = True) -> PlanarDiagram:
    """Push the i-th face edge across the face over (or under) the j-th."""
    from .geometry import assemble_crossing
    diagram.require_valid()
    face = diagram.faces[face_index]
    entries = _face_entries(diagram, face)
    (arc_a, along_a), (arc_b, along_b) = entries[i], entries[j]
    if arc_a == arc_b:
        raise DiagramError("R2 across a single arc is not supported")

    for chirality in (+1, -1):
        result = _r2_build(diagram, arc_a, along_a, arc_b, along_b,
                           over_first, chirality, assemble_crossing)
        if result.validate().ok and result.is_planar():
            return result
    raise DiagramError("R2 site produced no planar diagram; face data corrupt")


def _r2_build(diagram, arc_a, along_a, arc_b, along_b, over_first, chirality,
              assemble_crossing):
    # Chart: the face sits between two vertical walls; the face walk goes up
    # the a-wall and down the b-wall.  A tongue of strand a pokes across at
    # two heights.  chirality = -1 mirrors the chart (the face orbit may run
    # either way round); the caller keeps whichever gluing is planar.
    ori = diagram._orientation
    n = diagram.arc_count
    tip, a_post, b_mid, b_post = n + 1, n + 2, n + 3, n + 4
    s_a = 1 if along_a else -1
    d_b = (0, -1) if along_b else (0, 1)
    dir_of_leg = {"out": (chirality, 0), "back": (-chirality, 0)}
    pieces_a = {"out": (arc_a, tip), "back": (tip, a_post)}
    # strand a meets the lower height first when it travels upward
    leg_at_level = {"low": "out", "high": "back"} if s_a > 0 else \
                   {"low": "back", "high": "out"}
    order_b = ("low", "high") if d_b[1] > 0 else ("high", "low")
    b_arcs = {order_b[0]: (arc_b, b_mid), order_b[1]: (b_mid, b_post)}

    new = []
    for level in ("low", "high"):
        leg = leg_at_level[level]
        a_in, a_out = pieces_a[leg]
        b_in, b_out = b_arcs[level]
        d_leg = dir_of_leg[leg]
        if over_first:
            new.append(assemble_crossing(b_in, b_out, a_in, a_out, d_b, d_leg))
        else:
            new.append(assemble_crossing(a_in, a_out, b_in, b_out, d_leg, d_b))

    crossings = list(diagram.crossings)
    for arc, fresh in ((arc_a, a_post), (arc_b, b_post)):
        for (ci, slot) in diagram._occurrences[arc]:
            if ori[(ci, slot)] == +1:
                t = list(crossings[ci])
                t[slot] = fresh
                crossings[ci] = tuple(t)
                break
    crossings.extend(new)
    return _renumber(crossings, diagram.free_loops)


def r2_remove_sites(diagram: PlanarDiagram):
    sites = []
    for fi, face in enumerate(diagram.faces):
        if len(face) != 2:
            continue
        (c1, s1), (c2, s2) = face
        if c1 == c2:
            continue
        # the same strand must be over at both crossings (poke, not clasp)
        arcs = {diagram.crossings[c1][s1], diagram.crossings[c2][s2]}
        over1 = {diagram.crossings[c1][s] for s in _OVER_SLOTS}
        over2 = {diagram.crossings[c2][s] for s in _OVER_SLOTS}
        shared_over = arcs & over1 & over2
        shared_under = arcs - over1 - over2
        if len(arcs) == 2 and len(shared_over) == 1 and len(shared_under) == 1:
            sites.append((fi, c1, c2))
    return sites


def r2_remove(diagram: PlanarDiagram, c1: int, c2: int) -> PlanarDiagram:
    sites = {(a, b) for (_f, a, b) in r2_remove_sites(diagram)}
    if (c1, c2) not in sites and (c2, c1) not in sites:
        raise DiagramError(f"crossings {c1},{c2} do not bound a removable poke bigon")
    return passthrough_delete(diagram, [c1, c2])


# -- R3 -----------------------------------------------------------------------


@dataclass(frozen=True)
class R3Site:
    face_index: int
    mover_arc: int


def r3_sites(diagram: PlanarDiagram):
    sites = []
    for fi, face in enumerate(diagram.faces):
        if len(face) != 3:
            continue
        arcs = [diagram.crossings[ci][slot] for (ci, slot) in face]
        cids = {ci for (ci, _s) in face}
        occ = diagram._occurrences
        end_crossings = [tuple(sorted(c for (c, _s) in occ[a])) for a in arcs]
        if len(set(arcs)) != 3 or len(cids) != 3:
            continue
        if not all(set(e) <= cids and len(set(e)) == 2 for e in end_crossings):
            continue
        for a in arcs:
            overs = [slot in _OVER_SLOTS for (_c, slot) in occ[a]]
            if overs[0] == overs[1]:
                sites.append(R3Site(fi, a))
    return sites


def r3(diagram: PlanarDiagram, face_index: int, mover_arc: int) -> PlanarDiagram:
    """Slide the extreme strand of a triangle across the opposite crossing.

    Signs and over/under assignments are untouched; along each of the three
    strands the two relevant crossings swap order.
    """
    diagram.require_valid()
    face = diagram.faces[face_index]
    if len(face) != 3:
        raise DiagramError("R3 needs a triangular face")
    arcs = [diagram.crossings[ci][slot] for (ci, slot) in face]
    if mover_arc not in arcs:
        raise DiagramError("mover arc is not on the face")
    if not any(s.mover_arc == mover_arc and s.face_index == face_index
               for s in r3_sites(diagram)):
        raise DiagramError("illegal R3: triangle heights are cyclic or arc is the "
                           "middle strand")
    occ = diagram._occurrences
    ori = diagram._orientation
    _pair = {0: 2, 2: 0, 1: 3, 3: 1}
    crossings = [list(x) for x in diagram.crossings]

    # Each face arc: strand ran  outer_in -> [cb] -> a -> [ca] -> outer_out;
    # afterwards it runs         outer_in -> [ca] -> a -> [cb] -> outer_out.
    # Every crossing keeps its slots' in/out roles, so signs and over/under
    # are untouched; only the four slot contents per strand are rewritten.
    for a in arcs:
        (ca, sa), (cb, sb) = occ[a]
        if ori[(ca, sa)] != +1:
            (ca, sa), (cb, sb) = (cb, sb), (ca, sa)
        outer_out = diagram.crossings[ca][_pair[sa]]
        outer_in = diagram.crossings[cb][_pair[sb]]
        crossings[ca][sa] = outer_in
        crossings[ca][_pair[sa]] = a
        crossings[cb][_pair[sb]] = a
        crossings[cb][sb] = outer_out
    return _renumber([tuple(x) for x in crossings], diagram.free_loops)


# -- randomized sequences -------------------------------------------------------


def apply_random_moves(diagram: PlanarDiagram, rng, n_moves: int,
                       max_crossings: int = 12) -> PlanarDiagram:
    """Apply a random legal move sequence, keeping the diagram small."""
    d = diagram
    for _ in range(n_moves):
        options = []
        if d.crossing_count + 1 <= max_crossings:
            options.append("r1add")
        if d.crossing_count + 2 <= max_crossings:
            options.append("r2add")
        if r1_remove_sites(d):
            options.append("r1rem")
        if r2_remove_sites(d):
            options.append("r2rem")
        if r3_sites(d):
            options.append("r3")
        if not options:
            break
        kind = rng.choice(options)
        if kind == "r1add":
            sites = r1_add_sites(d)
            arc, k = sites[rng.randrange(len(sites))]
            d = r1_add(d, arc, k)
        elif kind == "r1rem":
            sites = r1_remove_sites(d)
            d = r1_remove(d, rng.choice(sites))
        elif kind == "r2add":
            sites = r2_add_sites(d)
            fi, i, j, over = sites[rng.randrange(len(sites))]
            d = r2_add(d, fi, i, j, over)
        elif kind == "r2rem":
            sites = r2_remove_sites(d)
            _fi, c1, c2 = sites[rng.randrange(len(sites))]
            d = r2_remove(d, c1, c2)
        else:
            sites = r3_sites(d)
            site = sites[rng.randrange(len(sites))]
            d = r3(d, site.face_index, site.mover_arc)
        d.require_valid()
    return d
