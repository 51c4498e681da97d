"""Integer Laurent polynomials, Alexander polynomials, and genus-one
certification for the twist-surgered knot family.

Two independent routes to the Alexander polynomial are kept side by side:
``alexander_from_seifert`` evaluates det(V - t V^T) on a Seifert matrix of
the canonical surface, while ``fox_alexander`` runs Fox calculus on the
Wirtinger presentation read straight off the diagram.  They must agree up
to units on every knot diagram, which is the main correctness cross-check
of the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import DiagramError, PlanarDiagram


class LaurentPolynomial:
    """Laurent polynomial over the integers; immutable, no zero coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                if c:
                    data[int(e)] = int(c)
        object.__setattr__(self, "coeffs", data)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def t(cls, exp: int = 1, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exp: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        return isinstance(other, LaurentPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__
    __radd__ = __add__

    def shifted(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e + k: c for e, c in self.coeffs.items()})

    def min_exp(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def max_exp(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def span(self) -> int:
        if not self.coeffs:
            raise ValueError("span of the zero polynomial is undefined")
        return self.max_exp() - self.min_exp()

    def evaluate(self, x):
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * Fraction(x) ** e
        return int(total) if total.denominator == 1 else total

    def coefficient(self, e: int) -> int:
        return self.coeffs.get(e, 0)

    def is_palindromic(self) -> bool:
        return all(self.coefficient(-e) == c for e, c in self.coeffs.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                te = "t" if e == 1 else f"t^{e}"
                body = te if mag == 1 else f"{mag}*{te}"
            parts.append(("- " if c < 0 else "+ ") + body)
        first = parts[0].replace("+ ", "").replace("- ", "-")
        return " ".join([first] + parts[1:])

    __repr__ = __str__


def canonical_alexander(p: LaurentPolynomial) -> LaurentPolynomial:
    """Normalize up to units: center the exponents and make the top
    coefficient positive.  The centered form must be palindromic for honest
    Alexander polynomials, and that is asserted."""
    if p.is_zero():
        raise ValueError("zero polynomial cannot be an Alexander polynomial")
    total = p.max_exp() + p.min_exp()
    if total % 2:
        raise ValueError("exponent spread is not centerable; not an Alexander polynomial")
    q = p.shifted(-total // 2)
    if q.coefficient(q.max_exp()) < 0:
        q = -q
    if not q.is_palindromic():
        raise ValueError(f"not palindromic after centering: {q}")
    return q


def alexander_span(p: LaurentPolynomial) -> int:
    return p.span()


def knot_determinant(p: LaurentPolynomial) -> int:
    return abs(p.evaluate(-1))


# -- polynomial matrix determinant (fraction-free) -----------------------------


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact division of dense integer polynomials; remainder must vanish."""
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError
    if not a:
        return [0]
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        num = a[len(b) - 1 + k]
        if num % b[-1]:
            raise ArithmeticError("inexact polynomial division in Bareiss")
        q[k] = num // b[-1]
        for i, bc in enumerate(b):
            a[i + k] -= q[k] * bc
    if any(a):
        raise ArithmeticError("nonzero remainder in Bareiss division")
    return q or [0]


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def laurent_matrix_determinant(matrix: list[list[LaurentPolynomial]]) -> LaurentPolynomial:
    """Determinant of a square Laurent-polynomial matrix, exactly.

    Rows are shifted into plain polynomials first; the net shift is a unit
    and is restored at the end.  Bareiss keeps every intermediate integer
    exact with no rational arithmetic.
    """
    n = len(matrix)
    if n == 0:
        return LaurentPolynomial.constant(1)
    shift_total = 0
    dense: list[list[list[int]]] = []
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
        k = min((p.min_exp() for p in row if not p.is_zero()), default=0)
        k = min(k, 0)
        shift_total += -k
        dense_row = []
        for p in row:
            q = p.shifted(-k)
            arr = [0] * (q.max_exp() + 1 if not q.is_zero() else 1)
            for e, c in q.coeffs.items():
                arr[e] = c
            dense_row.append(arr)
        dense.append(dense_row)

    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not any(dense[k][k]):
            pivot_row = next((i for i in range(k + 1, n) if any(dense[i][k])), None)
            if pivot_row is None:
                return LaurentPolynomial()
            dense[k], dense[pivot_row] = dense[pivot_row], dense[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _poly_sub(_poly_mul(dense[i][j], dense[k][k]),
                                _poly_mul(dense[i][k], dense[k][j]))
                dense[i][j] = _poly_divexact(num, prev)
            dense[i][k] = [0]
        prev = dense[k][k]
    det = dense[n - 1][n - 1]
    out = LaurentPolynomial({e - shift_total: c for e, c in enumerate(det) if c})
    return out * sign


# -- Alexander from a Seifert matrix -------------------------------------------


def alexander_from_seifert(V: list[list[int]]) -> LaurentPolynomial:
    """Canonical Alexander polynomial det(V - t V^T) of a knot Seifert matrix."""
    n = len(V)
    if n == 0:
        return LaurentPolynomial.constant(1)
    t = LaurentPolynomial.t()
    M = [[LaurentPolynomial.constant(V[i][j]) - t * V[j][i] for j in range(n)]
         for i in range(n)]
    det = laurent_matrix_determinant(M)
    return canonical_alexander(det)


# -- Fox calculus oracle --------------------------------------------------------


def _fox_derivative_column(relator, target, phi_t):
    """Abelianized Fox derivative of a relator word with respect to one
    generator; the word is a list of (generator class, exponent)."""
    total = LaurentPolynomial()
    prefix = LaurentPolynomial.constant(1)
    for (g, e) in relator:
        if e == +1:
            if g == target:
                total = total + prefix
            prefix = prefix * phi_t
        else:
            if g == target:
                total = total - prefix * phi_t.shifted(-2)
            prefix = prefix * phi_t.shifted(-2)
    return total


def fox_alexander(diagram: PlanarDiagram) -> LaurentPolynomial:
    """Alexander polynomial via the Wirtinger presentation; knots only.

    Independent of the Seifert-surface route: only the crossing incidences
    and signs are used.
    """
    diagram.require_valid()
    if diagram.component_count() != 1:
        raise DiagramError("Fox-calculus route implemented for knots only")
    c = diagram.crossing_count
    if c == 0:
        return LaurentPolynomial.constant(1)

    # generator classes: PD arcs glued along over-strand passes
    parent = {a: a for a in diagram.arcs()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ori = diagram._orientation
    for ci, x in enumerate(diagram.crossings):
        over_in = x[1] if ori[(ci, 1)] == +1 else x[3]
        over_out = x[3] if over_in == x[1] else x[1]
        ra, rb = find(over_in), find(over_out)
        if ra != rb:
            parent[ra] = rb

    classes = sorted({find(a) for a in diagram.arcs()})
    if len(classes) != c:
        raise DiagramError("unexpected Wirtinger generator count")
    index = {g: i for i, g in enumerate(classes)}

    t = LaurentPolynomial.t()
    rows = []
    for ci, x in enumerate(diagram.crossings):
        ui, uo = x[0], x[2]
        over_in = x[1] if ori[(ci, 1)] == +1 else x[3]
        o, a_in, a_out = find(over_in), find(ui), find(uo)
        e = diagram.signs[ci]
        # relator: uo^{-1} o^{e} ui o^{-e}
        relator = [(a_out, -1), (o, e), (a_in, +1), (o, -e)]
        rows.append([_fox_derivative_column(relator, g, t) for g in classes])

    minor = [row[:-1] for row in rows[:-1]]
    det = laurent_matrix_determinant(minor)
    if det.is_zero():
        raise DiagramError("vanishing Wirtinger minor; diagram corrupt")
    return canonical_alexander(det)


# -- the pipeline and genus-one certification -----------------------------------


def alexander(diagram: PlanarDiagram) -> LaurentPolynomial:
    """Canonical Alexander polynomial via the canonical-surface Seifert matrix."""
    from .seifert import seifert_matrix
    return alexander_from_seifert(seifert_matrix(diagram))


@dataclass(frozen=True)
class GenusCertificate:
    params: dict
    crossings: int
    alexander_polynomial: str
    span: int
    determinant: int
    genus_upper_bound: int
    verdict: str                  # "genus_exactly_one" | "inconclusive_lower_bound"
    regime_flags: dict
    unimodular_at_1: bool

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "crossings": self.crossings,
            "alexander": self.alexander_polynomial,
            "span": self.span,
            "determinant": self.determinant,
            "genus_upper": self.genus_upper_bound,
            "genus_verdict": self.verdict,
            "regime_flags": self.regime_flags,
            "unimodular_at_1": self.unimodular_at_1,
        }


def certify_genus_one(params) -> GenusCertificate:
    """Build the surgered knot for the given family parameters and certify
    its genus.

    The construction gives a free Seifert surface of genus one, so genus <= 1
    always holds.  Alexander span 2 then pins genus exactly one.  Span 0 only
    means the polynomial fails to see the genus: the verdict is explicitly
    inconclusive, never a triviality claim.
    """
    from .families import FamilyParams, knot_Kprime
    if not isinstance(params, FamilyParams):
        params = FamilyParams(**params)
    diagram = knot_Kprime(params)
    delta = alexander(diagram)
    span = delta.span()
    if span > 2:
        raise DiagramError(
            f"Alexander span {span} > 2 contradicts the genus-one construction; "
            "generator or surgery bug")
    verdict = "genus_exactly_one" if span == 2 else "inconclusive_lower_bound"
    return GenusCertificate(
        params=params.as_dict(),
        crossings=diagram.crossing_count,
        alexander_polynomial=str(delta),
        span=span,
        determinant=knot_determinant(delta),
        genus_upper_bound=1,
        verdict=verdict,
        regime_flags=params.regime_flags(),
        unimodular_at_1=abs(delta.evaluate(1)) == 1,
    )
