"""Oriented link diagrams as PD codes, and their diagram-level invariants.

A diagram is a list of crossings, each a 4-tuple of arc labels read
counterclockwise starting from the incoming under-strand (the common
interchange convention, so codes round-trip with other knot software).
Arc labels are dense integers 1..arc_count; every arc occurs exactly twice
among the tuples.  Crossing signs are never stored: they are recovered from
the strand orientations, which are themselves forced by the convention that
slot 0 is the incoming under-strand.

Crossing-free unknot components cannot be expressed in a PD tuple, so the
diagram carries an explicit ``free_loops`` count for them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property


class DiagramError(ValueError):
    """Raised for structurally invalid diagrams or illegal operations."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# slot roles: 0 = under-in, 2 = under-out, 1 and 3 carry the over-strand.
_UNDER_IN, _OVER_A, _UNDER_OUT, _OVER_B = 0, 1, 2, 3


@dataclass(frozen=True)
class PlanarDiagram:
    """PD-code diagram: crossing tuples plus a count of crossing-free circles.

    ``labels`` optionally names the components (in component order); it is
    metadata only and ignored by equality of the underlying diagram.
    ``surgery_sites`` marks components that were generated as unknotted
    loops with a recorded spanning disk, which is what makes diagrammatic
    1/m twist surgery on them well defined.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    free_loops: int = 0
    labels: tuple[str, ...] = ()
    surgery_sites: frozenset[str] = frozenset()

    def __init__(self, crossings, free_loops=0, labels=(), surgery_sites=()):
        object.__setattr__(self, "crossings",
                           tuple(tuple(int(a) for a in x) for x in crossings))
        object.__setattr__(self, "free_loops", int(free_loops))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "surgery_sites", frozenset(surgery_sites))
        for x in self.crossings:
            if len(x) != 4:
                raise DiagramError(f"crossing {x!r} is not a 4-tuple")
        if self.free_loops < 0:
            raise DiagramError("free_loops must be >= 0")

    # -- basic structure ---------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def arc_count(self) -> int:
        return 2 * len(self.crossings)

    def arcs(self):
        return range(1, self.arc_count + 1)

    @cached_property
    def _occurrences(self):
        """arc -> list of (crossing index, slot)."""
        occ: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for slot, a in enumerate(x):
                occ.setdefault(a, []).append((ci, slot))
        return occ

    def validate(self) -> ValidationReport:
        """Check the structural invariants; report-style, never raises."""
        problems = []
        occ = self._occurrences
        expected = set(self.arcs())
        seen = set(occ)
        if seen != expected:
            missing = sorted(expected - seen)
            extra = sorted(seen - expected)
            if missing:
                problems.append(f"arc labels not dense 1..{self.arc_count}: missing {missing}")
            if extra:
                problems.append(f"arc labels not dense 1..{self.arc_count}: unexpected {extra}")
        for a, places in sorted(occ.items()):
            if len(places) != 2:
                problems.append(f"arc multiplicity: arc {a} appears {len(places)} time(s)")
        if not problems:
            try:
                self._orientation
            except DiagramError as e:
                problems.append(f"orientation inconsistency: {e}")
        return ValidationReport(not problems, tuple(problems))

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise DiagramError("invalid diagram: " + "; ".join(report.violations))

    # -- orientations and signs -------------------------------------------

    @cached_property
    def _orientation(self):
        """Map (crossing, slot) -> +1 (arc points into the crossing) or -1.

        Under-slots are fixed by the PD convention; over-slots are forced by
        propagating 'each arc leaves one crossing end and enters another'.
        Components that never pass under admit both orientations; the first
        unresolved slot in (crossing, slot) order is declared outgoing.
        """
        status: dict[tuple[int, int], int] = {}
        occ = self._occurrences
        pending = []
        for ci in range(len(self.crossings)):
            status[(ci, _UNDER_IN)] = +1
            status[(ci, _UNDER_OUT)] = -1
            pending.append((ci, _UNDER_IN))
            pending.append((ci, _UNDER_OUT))

        def assign(place, value, pend):
            old = status.get(place)
            if old is None:
                status[place] = value
                pend.append(place)
            elif old != value:
                raise DiagramError(
                    f"arc orientations conflict at crossing {place[0]}, slot {place[1]}")

        while True:
            while pending:
                place = pending.pop()
                ci, slot = place
                value = status[place]
                # the same arc's other occurrence points the opposite way
                arc = self.crossings[ci][slot]
                for other in occ[arc]:
                    if other != place:
                        assign(other, -value, pending)
                if len(occ[arc]) == 2 and occ[arc][0] == occ[arc][1]:
                    pass  # arc with both ends at one slot-pair is impossible; caught by multiplicity
                # over-slot partners within a crossing are one-in one-out
                if slot in (_OVER_A, _OVER_B):
                    partner = (ci, _OVER_B if slot == _OVER_A else _OVER_A)
                    assign(partner, -value, pending)
            unresolved = [
                (ci, slot)
                for ci in range(len(self.crossings))
                for slot in (_OVER_A, _OVER_B)
                if (ci, slot) not in status
            ]
            if not unresolved:
                break
            assign(min(unresolved), -1, pending)
        return status

    @cached_property
    def signs(self) -> tuple[int, ...]:
        """Geometric crossing signs, derived from the resolved orientations.

        With slot 0 incoming under, the crossing is positive exactly when the
        over-strand enters at slot 3.
        """
        ori = self._orientation
        return tuple(
            +1 if ori[(ci, _OVER_B)] == +1 else -1
            for ci in range(len(self.crossings))
        )

    def writhe(self) -> int:
        self.require_valid()
        return sum(self.signs)

    # -- strand following / components -------------------------------------

    @cached_property
    def _successor(self):
        """arc -> next arc along the link orientation."""
        ori = self._orientation
        succ = {}
        for ci, x in enumerate(self.crossings):
            for slot_in, slot_out in ((_UNDER_IN, _UNDER_OUT), (_OVER_A, _OVER_B),
                                      (_OVER_B, _OVER_A)):
                if slot_in in (_OVER_A, _OVER_B) and ori[(ci, slot_in)] != +1:
                    continue
                if slot_in == _UNDER_IN:
                    succ[x[_UNDER_IN]] = x[_UNDER_OUT]
                else:
                    succ[x[slot_in]] = x[slot_out]
        return succ

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Arc cycles of the link components, ordered by smallest arc.

        Crossing-free circles contribute empty tuples at the end.
        """
        self.require_valid()
        succ = self._successor
        seen = set()
        comps = []
        for a in self.arcs():
            if a in seen:
                continue
            cycle = [a]
            seen.add(a)
            b = succ[a]
            while b != a:
                cycle.append(b)
                seen.add(b)
                b = succ[b]
            comps.append(tuple(cycle))
        comps.sort(key=lambda c: c[0])
        comps.extend(() for _ in range(self.free_loops))
        return tuple(comps)

    def component_count(self) -> int:
        return len(self.components)

    @cached_property
    def component_of_arc(self) -> dict[int, int]:
        out = {}
        for idx, comp in enumerate(self.components):
            for a in comp:
                out[a] = idx
        return out

    def component_index(self, label: str) -> int:
        if label not in self.labels:
            raise DiagramError(f"no component labelled {label!r}")
        return self.labels.index(label)

    # -- linking numbers ----------------------------------------------------

    def crossing_components(self, ci: int) -> tuple[int, int]:
        """(component of under-strand, component of over-strand) at crossing ci."""
        x = self.crossings[ci]
        comp = self.component_of_arc
        return comp[x[_UNDER_IN]], comp[x[_OVER_A]]

    def linking_number(self, i: int, j: int) -> int:
        """Half the signed count of crossings between components i and j."""
        self.require_valid()
        ncomp = self.component_count()
        for k in (i, j):
            if not (0 <= k < ncomp):
                raise DiagramError(f"component index {k} out of range (0..{ncomp - 1})")
        if i == j:
            raise DiagramError("self-linking undefined here: linking_number needs i != j")
        total = 0
        for ci, s in enumerate(self.signs):
            cu, co = self.crossing_components(ci)
            if {cu, co} == {i, j}:
                total += s
        if total % 2:
            raise DiagramError("odd inter-component crossing sum; diagram corrupt")
        return total // 2

    def linking_matrix(self) -> list[list[int]]:
        n = self.component_count()
        lk = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                lk[i][j] = lk[j][i] = self.linking_number(i, j)
        return lk

    def self_crossings(self, i: int) -> list[int]:
        """Crossings where component i crosses itself."""
        return [ci for ci in range(self.crossing_count)
                if self.crossing_components(ci) == (i, i)]

    # -- mirror -------------------------------------------------------------

    def mirror(self) -> "PlanarDiagram":
        """Switch every crossing; writhe and all linking numbers negate."""
        self.require_valid()
        new = []
        for ci, x in enumerate(self.crossings):
            a, b, c, d = x
            if self.signs[ci] == +1:
                new.append((d, a, b, c))
            else:
                new.append((b, c, d, a))
        return PlanarDiagram(new, self.free_loops, self.labels)

    # -- underlying 4-valent map: faces and genus ---------------------------

    @cached_property
    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Faces of the combinatorial map, as orbits of half-edges.

        A half-edge is (crossing, slot); the rotation is the counterclockwise
        slot order of the PD convention.  Face count feeds the Euler-
        characteristic planarity check.
        """
        self.require_valid()
        occ = self._occurrences

        def alpha(h):
            ci, slot = h
            arc = self.crossings[ci][slot]
            p, q = occ[arc]
            return q if h == p else p

        def step(h):
            ci, slot = alpha(h)
            return (ci, (slot + 1) % 4)

        todo = {(ci, s) for ci in range(len(self.crossings)) for s in range(4)}
        faces = []
        while todo:
            h0 = min(todo)
            orbit = []
            h = h0
            while True:
                orbit.append(h)
                todo.discard(h)
                h = step(h)
                if h == h0:
                    break
            faces.append(tuple(orbit))
        return tuple(faces)

    @cached_property
    def _crossing_components(self) -> tuple[frozenset[int], ...]:
        """Connected components of the crossing graph (split-ness test)."""
        if not self.crossings:
            return ()
        parent = list(range(len(self.crossings)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for places in self._occurrences.values():
            (c1, _), (c2, _) = places
            parent[find(c1)] = find(c2)
        groups: dict[int, set[int]] = {}
        for ci in range(len(self.crossings)):
            groups.setdefault(find(ci), set()).add(ci)
        return tuple(frozenset(g) for g in groups.values())

    def is_connected(self) -> bool:
        """Connected as a diagram: one crossing-graph piece and no stray loops."""
        self.require_valid()
        if self.crossings:
            return len(self._crossing_components) == 1 and self.free_loops == 0
        return self.free_loops == 1

    def genus_of_map(self) -> int:
        """Total genus of the surface the 4-valent map embeds in (0 = planar)."""
        self.require_valid()
        face_of_crossing = {}
        for fi, face in enumerate(self.faces):
            for (ci, _slot) in face:
                face_of_crossing.setdefault(ci, set()).add(fi)
        total = 0
        for group in self._crossing_components:
            v = len(group)
            e = 2 * v
            fset = set()
            for ci in group:
                fset |= face_of_crossing[ci]
            chi = v - e + len(fset)
            if chi % 2:
                raise DiagramError("odd Euler characteristic; map corrupt")
            total += (2 - chi) // 2
        return total

    def is_planar(self) -> bool:
        return self.genus_of_map() == 0

    # -- relabelling --------------------------------------------------------

    def canonical(self) -> "PlanarDiagram":
        """Relabel arcs to the minimum over all walk starting points.

        Equality of canonical forms is the 'same diagram up to relabelling'
        notion used by round-trip tests.  Exponential in nothing: linear per
        candidate start, and there are 2c candidate starts.
        """
        self.require_valid()
        if not self.crossings:
            return PlanarDiagram((), self.free_loops, self.labels)
        best = None
        comps = [c for c in self.components if c]
        # choose, per starting component and start arc, the full relabelling
        for perm in _component_orders(comps):
            starts_lists = [range(len(comps[i])) for i in perm]
            for starts in itertools.product(*starts_lists):
                relabel = {}
                nxt = 1
                for which, off in zip(perm, starts):
                    cyc = comps[which]
                    for k in range(len(cyc)):
                        relabel[cyc[(off + k) % len(cyc)]] = nxt
                        nxt += 1
                key = tuple(sorted(
                    tuple(relabel[a] for a in x) for x in self.crossings))
                if best is None or key < best:
                    best = key
        return PlanarDiagram(best, self.free_loops, self.labels)

    def same_diagram(self, other: "PlanarDiagram") -> bool:
        return (self.canonical().crossings == other.canonical().crossings
                and self.free_loops == other.free_loops)

    def relabelled(self, mapping: dict[int, int]) -> "PlanarDiagram":
        return PlanarDiagram(
            tuple(tuple(mapping[a] for a in x) for x in self.crossings),
            self.free_loops, self.labels, self.surgery_sites)


def _component_orders(comps):
    """All orders of components; small diagrams only (used by canonical)."""
    if len(comps) <= 4:
        return list(itertools.permutations(range(len(comps))))
    return [tuple(range(len(comps)))]


# -- stock diagrams ---------------------------------------------------------

def unknot(loops: int = 1) -> PlanarDiagram:
    return PlanarDiagram((), free_loops=loops)


def trefoil() -> PlanarDiagram:
    """Right-handed trefoil; writhe +3."""
    return PlanarDiagram(((1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)))


def left_trefoil() -> PlanarDiagram:
    """The Rolfsen-table 3_1 diagram; writhe -3."""
    return PlanarDiagram(((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)))


def figure_eight() -> PlanarDiagram:
    return PlanarDiagram(((6, 2, 7, 1), (2, 6, 3, 5), (4, 7, 5, 8), (8, 3, 1, 4)))


def hopf_link_positive() -> PlanarDiagram:
    """Two-component Hopf link with linking number +1."""
    return PlanarDiagram(((2, 4, 3, 1), (4, 2, 1, 3)))


def torus_link_2_2n(n: int) -> PlanarDiagram:
    """Closure of the 2-strand braid with 2n positive crossings; lk = n."""
    if n < 1:
        raise DiagramError("need n >= 1")
    c = 2 * n
    crossings = []
    for k in range(1, c + 1):
        ell_prev = 1 + 2 * ((k - 1) % c)
        rho_prev = 2 + 2 * ((k - 1) % c)
        ell_k = 1 + 2 * (k % c)
        rho_k = 2 + 2 * (k % c)
        crossings.append((rho_prev, rho_k, ell_k, ell_prev))
    return PlanarDiagram(crossings)
