"""Rank-2 free group machinery: normal forms, folded subgroup graphs, and
the exhaustive word-theoretic checks behind the no-annulus lemma.

Words live in F(a,b).  A letter is one of ``a A b B`` (capital = inverse);
internally letters are the integers +1/-1/+2/-2 so inversion is negation.
Subgroups are handled through folded core graphs: membership is a closed
path at the base vertex, and conjugacy-into is a closed path at *some*
vertex of the core, which decides the question exactly, with no bound on
conjugator length.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

A, B = 1, 2
_LETTERS = {"a": 1, "A": -1, "b": 2, "B": -2}
_NAMES = {1: "a", -1: "A", 2: "b", -2: "B"}

Word = tuple[int, ...]


def word(text: str) -> Word:
    """Parse ``a A b B`` strings, with optional ^exponents, into a word."""
    out = []
    for tok in re.findall(r"[aAbB](?:\^-?\d+)?", text.replace(" ", "")):
        letter = _LETTERS[tok[0]]
        exp = int(tok[2:]) if len(tok) > 1 else 1
        if exp < 0:
            letter, exp = -letter, -exp
        out.extend([letter] * exp)
    return tuple(out)


def word_str(w: Word) -> str:
    return "".join(_NAMES[x] for x in w) if w else "1"


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*ws: Word) -> Word:
    out = []
    for w in ws:
        out.extend(w)
    return tuple(out)


def power(w: Word, n: int) -> Word:
    return concat(*([w] * n)) if n >= 0 else power(inverse(w), -n)


def normalize(w) -> Word:
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_normal(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def exponent_sum(w, gen: int) -> int:
    """Signed count of a generator's occurrences; conjugation-invariant."""
    g = abs(gen)
    return sum(1 if x == g else -1 if x == -g else 0 for x in w)


def cyclic_reduce(w) -> Word:
    """Shortest word conjugate to w: normalize, then strip matching ends."""
    v = list(normalize(w))
    while len(v) >= 2 and v[0] == -v[-1]:
        v = v[1:-1]
    return tuple(v)


def conjugate(w: Word, x: Word) -> Word:
    return normalize(concat(x, w, inverse(x)))


# The eight length-4 strings that must appear in any normal form of
# x (ab^{+-1})^n x^{-1} with |n| >= 2, split by which center word and which
# sign of n produces them.
FORBIDDEN_STRINGS: dict[tuple[int, int], tuple[Word, Word]] = {
    (+1, +1): (word("abab"), word("baba")),
    (-1, +1): (word("aBaB"), word("BaBa")),
    (+1, -1): (word("BABA"), word("ABAB")),
    (-1, -1): (word("bAbA"), word("AbAb")),
}

ALL_FORBIDDEN: tuple[Word, ...] = tuple(
    s for pair in FORBIDDEN_STRINGS.values() for s in pair)


def contains_forbidden_string(w) -> bool:
    """Does any of the eight forbidden length-4 strings occur in w?"""
    v = normalize(w)
    return any(_contains(v, s) for s in ALL_FORBIDDEN)


def _contains(w: Word, sub: Word) -> bool:
    n, m = len(w), len(sub)
    return any(w[i:i + m] == sub for i in range(n - m + 1))


def normal_words(max_len: int, min_len: int = 0):
    """All normal-form words with min_len <= length <= max_len."""
    if min_len == 0:
        yield ()
    frontier = [(x,) for x in (1, -1, 2, -2)]
    length = 1
    while length <= max_len:
        for w in frontier:
            if length >= min_len:
                yield w
        frontier = [w + (x,) for w in frontier for x in (1, -1, 2, -2) if x != -w[-1]]
        length += 1


# -- Stallings folded graphs --------------------------------------------------


@dataclass
class SubgroupGraph:
    """Folded core graph of a finitely generated subgroup of F(a,b).

    Edges are stored as ``out[(v, g)] = w`` for positive generators g; the
    inverse direction is looked up on the fly.  After folding, no vertex has
    two out- or two in-edges with the same label, so path-tracing is
    deterministic and membership/conjugacy queries are exact.
    """

    generators: tuple[Word, ...]
    base: int = 0
    out: dict[tuple[int, int], int] = field(default_factory=dict)
    into: dict[tuple[int, int], int] = field(default_factory=dict)
    vertices: set[int] = field(default_factory=set)

    def step(self, v: int, letter: int):
        if letter > 0:
            return self.out.get((v, letter))
        return self.into.get((v, -letter))

    def trace(self, start: int, w: Word):
        v = start
        for x in w:
            v = self.step(v, x)
            if v is None:
                return None
        return v

    def is_member(self, w) -> bool:
        """Exact membership: w labels a closed path at the base vertex."""
        return self.trace(self.base, normalize(w)) == self.base

    def is_conjugate_into(self, w) -> bool:
        """Exact conjugacy-into: some conjugate of w lies in the subgroup.

        Criterion: the cyclic reduction of w labels a closed path based at
        some vertex of the core graph.  The empty word is rejected so the
        caller has to treat the degenerate case deliberately.
        """
        v = cyclic_reduce(w)
        if not v:
            raise ValueError("empty word: trivially conjugate into everything; "
                             "handle this case explicitly")
        return any(self.trace(u, v) == u for u in sorted(self.vertices))


def subgroup_graph(generators) -> SubgroupGraph:
    """Wedge of generator loops, folded, then trimmed to the core."""
    gens = tuple(normalize(word(g) if isinstance(g, str) else tuple(g))
                 for g in generators)
    if not gens:
        raise ValueError("need at least one generator")
    # build the wedge
    out: dict[tuple[int, int], set[int]] = {}
    into: dict[tuple[int, int], set[int]] = {}
    nxt = 1
    for g in gens:
        if not g:
            continue
        prev = 0
        for i, x in enumerate(g):
            tgt = 0 if i == len(g) - 1 else nxt
            if i < len(g) - 1:
                nxt += 1
            u, v = (prev, tgt) if x > 0 else (tgt, prev)
            out.setdefault((u, abs(x)), set()).add(v)
            into.setdefault((v, abs(x)), set()).add(u)
            prev = tgt
    vertices = {0} | {u for (u, _g) in out} | {v for (v, _g) in into}
    for ends in list(out.values()):
        vertices |= ends
    for ends in list(into.values()):
        vertices |= ends

    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    # fold until no vertex has two same-label edges in the same direction
    changed = True
    while changed:
        changed = False
        for table in (out, into):
            for key in list(table.keys()):
                v, g = key
                rv = find(v)
                ends = {find(w) for w in table.pop(key, set())}
                table.setdefault((rv, g), set()).update(ends)
        for table in (out, into):
            for (v, g), ends in list(table.items()):
                ends = {find(w) for w in ends}
                table[(v, g)] = ends
                if len(ends) > 1:
                    it = iter(sorted(ends))
                    first = next(it)
                    for other in it:
                        union(first, other)
                    changed = True

    edges = set()
    for (v, g), ends in out.items():
        for w in ends:
            edges.add((find(v), g, find(w)))
    for (v, g), ends in into.items():
        for w in ends:
            edges.add((find(w), g, find(v)))
    base = find(0)
    vs = {base}
    for (u, _g, v) in edges:
        vs.add(u)
        vs.add(v)

    # trim hairs: repeatedly drop degree-1 vertices other than the base
    degree: dict[int, int] = {v: 0 for v in vs}
    for (u, _g, v) in edges:
        degree[u] += 1
        degree[v] += 1
    pruned = True
    while pruned:
        pruned = False
        for v in sorted(vs):
            if v != base and degree.get(v, 0) <= 1:
                vs.discard(v)
                for e in [e for e in edges if v in (e[0], e[2])]:
                    edges.discard(e)
                    other = e[2] if e[0] == v else e[0]
                    degree[other] -= 1
                degree.pop(v, None)
                pruned = True

    graph = SubgroupGraph(generators=gens, base=base, vertices=vs)
    for (u, g, v) in edges:
        if (u, g) in graph.out and graph.out[(u, g)] != v:
            raise AssertionError("folding left a duplicate out-edge")
        if (v, g) in graph.into and graph.into[(v, g)] != u:
            raise AssertionError("folding left a duplicate in-edge")
        graph.out[(u, g)] = v
        graph.into[(v, g)] = u
    return graph


# -- the no-annulus verification ----------------------------------------------


@dataclass(frozen=True)
class AnnulusCheck:
    center: str          # "ab" or "aB"
    n: int
    subgroup: str        # "F+" or "F-"
    conjugate_into: bool
    divisibility_necessary: bool  # exponent-sum condition v|n resp. u|n


@dataclass(frozen=True)
class Lemma1Report:
    u: int
    v: int
    n_values: tuple[int, ...]
    checks: tuple[AnnulusCheck, ...]
    outside_hypothesis: bool
    passed: bool
    notes: tuple[str, ...]


def waist_subgroups(u: int, v: int) -> dict[str, SubgroupGraph]:
    """The two surface-side subgroups of F(a,b): <a^u, ab^v> and <ba^u, b^v>."""
    plus = subgroup_graph([power(word("a"), u), concat(word("a"), power(word("b"), v))])
    minus = subgroup_graph([concat(word("b"), power(word("a"), u)), power(word("b"), v)])
    return {"F+": plus, "F-": minus}


def verify_no_annulus_words(u: int, v: int, n_range=range(-8, 9),
                            allow_small: bool = False) -> Lemma1Report:
    """Check that no power of ab or ab^{-1} is conjugate into either
    surface subgroup, for every n != 0 in the given range.

    The u, v >= 2 hypothesis is where the argument actually lives; smaller
    parameters can be probed with ``allow_small=True`` and get flagged.
    n = 0 is excluded: that case is settled geometrically (capping with a
    meridian disk), not by word combinatorics.
    """
    outside = u < 2 or v < 2
    if outside and not allow_small:
        raise ValueError("outside hypothesis: need u, v >= 2 "
                         "(pass allow_small=True to probe anyway)")
    graphs = waist_subgroups(u, v)
    centers = {"ab": word("ab"), "aB": word("aB")}
    ns = tuple(n for n in n_range if n != 0)
    checks = []
    for n in ns:
        for cname, c in centers.items():
            w = power(c, n)
            for sname, graph in graphs.items():
                # conjugation preserves exponent sums, so membership of a
                # conjugate forces v | n (F+ case) or u | n (F- case)
                if sname == "F+":
                    divis = exponent_sum(w, B) % v == 0
                else:
                    divis = exponent_sum(w, A) % u == 0
                checks.append(AnnulusCheck(
                    center=cname, n=n, subgroup=sname,
                    conjugate_into=graph.is_conjugate_into(w),
                    divisibility_necessary=divis))
    notes = (
        "n = 0 excluded: handled geometrically by capping off a meridian disk",
    )
    if outside:
        notes += (f"warning: (u, v) = ({u}, {v}) is outside the u, v >= 2 hypothesis",)
    return Lemma1Report(
        u=u, v=v, n_values=ns, checks=tuple(checks),
        outside_hypothesis=outside,
        passed=not any(c.conjugate_into for c in checks),
        notes=notes)


# -- brute-force oracles (kept independent of the graph machinery) ------------


def enumerate_subgroup(generators, max_factors: int, max_len: int) -> set[Word]:
    """Products of up to max_factors generator letters, kept when the normal
    form stays within max_len.  This is the enumerated region the graph
    membership test is compared against."""
    gens = [normalize(word(g) if isinstance(g, str) else tuple(g))
            for g in generators]
    alphabet = [g for g in gens if g] + [inverse(g) for g in gens if g]
    seen = {(): ()}
    frontier = {(): ()}
    for _ in range(max_factors):
        nxt = {}
        for w in frontier.values():
            for g in alphabet:
                prod = normalize(concat(w, g))
                if len(prod) <= max_len and prod not in seen:
                    seen[prod] = prod
                    nxt[prod] = prod
        frontier = nxt
        if not frontier:
            break
    return set(seen)


def conjugator_search(graph: SubgroupGraph, w, max_conj_len: int):
    """Search for a conjugator x with x w x^{-1} in the subgroup; returns the
    first witness or None.  Used as the bounded independent oracle for the
    exact conjugacy-into decision."""
    w = normalize(w)
    for x in normal_words(max_conj_len):
        if graph.is_member(conjugate(w, x)):
            return x
    return None
