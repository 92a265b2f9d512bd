"""Exact arithmetic in finitely presented graded-commutative algebras over F_p.

A presentation fixes a prime, an ordered list of generators with degrees
(and, for odd primes, parities), a homogeneous relation list and a hard
degree cap.  Every graded piece up to the cap is a finite F_p vector space
with a deterministic monomial basis; the relation ideal is realized
degreewise by row-reducing all (monomial x relation) products, and normal
forms are projections onto the non-pivot monomials.  No Groebner machinery:
the degree cap makes the per-degree linear algebra complete and canonical.

Monomials are exponent tuples aligned with the generator list.  The
monomial order is graded lexicographic: within one degree, tuples compare
lexicographically with earlier generators more significant, and bases are
listed in descending order (the leading monomial of an element is its
lex-largest exponent tuple).

Conventions by characteristic:
  * p odd: a generator is exterior iff its degree is odd; exterior
    exponents are 0/1, odd*odd anticommutes and odd squares vanish.
  * p = 2: every generator is polynomial; odd-degree classes square freely.

All values are immutable after construction and all operations are pure;
per-degree caches are idempotent fills, so sharing across threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class FpAlgebraError(Exception):
    """Base class for all errors raised by this package."""


class DegreeCapError(FpAlgebraError):
    """A computation would exceed the presentation's degree cap."""


class PresentationMismatchError(FpAlgebraError):
    """Operands belong to different presentations."""


class NonHomogeneousError(FpAlgebraError):
    """A homogeneous element was required."""


class MorphismError(FpAlgebraError):
    """An algebra morphism failed validation."""


def check_prime(p) -> int:
    """Validate primality (trial division; the primes here are tiny)."""
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"not a prime: {p!r}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"not a prime: {p}")
        d += 1
    return p


@dataclass(frozen=True)
class Generator:
    """A ring generator: name, degree, parity ('even' polynomial /
    'odd' exterior) and an optional motivic weight tag."""

    name: str
    degree: int
    parity: str | None = None
    weight: int | None = None

    def resolved_parity(self, prime: int) -> str:
        if prime == 2:
            # Odd-degree classes are polynomial at p = 2 (x^2 is the
            # degree-doubling class, not zero).
            if self.parity == "odd":
                raise ValueError(
                    f"generator {self.name}: exterior generators do not exist at p = 2"
                )
            return "even"
        inferred = "odd" if self.degree % 2 else "even"
        if self.parity is not None and self.parity != inferred:
            raise ValueError(
                f"generator {self.name}: parity {self.parity!r} contradicts degree "
                f"{self.degree} at odd p"
            )
        return inferred


class GradedPresentation:
    """A finitely presented graded-commutative F_p algebra with a degree cap."""

    def __init__(self, prime: int, generators, degree_cap: int, _relations=None):
        self.prime = check_prime(prime)
        gens = tuple(generators)
        if len({g.name for g in gens}) != len(gens):
            raise ValueError("duplicate generator names")
        for g in gens:
            if g.degree < 1:
                raise ValueError(
                    f"generator {g.name}: degree must be >= 1 to keep graded pieces finite"
                )
        if degree_cap < 0 or (gens and degree_cap < max(g.degree for g in gens)):
            raise ValueError("degree cap below a generator degree")
        self.generators = gens
        self.degree_cap = degree_cap
        self._degrees = tuple(g.degree for g in gens)
        self._odd = tuple(g.resolved_parity(prime) == "odd" for g in gens)
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._relation_terms = tuple(_relations or ())
        self._cache: dict[int, _DegreeData] = {}
        self._free_twin: GradedPresentation | None = None
        for terms in self._relation_terms:
            degs = {self.monomial_degree(m) for m in terms}
            if len(degs) != 1:
                raise NonHomogeneousError("relations must be homogeneous and nonzero")
            if max(degs) > degree_cap:
                raise DegreeCapError("relation degree exceeds the cap")

    # -- construction -----------------------------------------------------

    def quotient(self, relations) -> "GradedPresentation":
        """New presentation with the given homogeneous elements adjoined
        to the relation list."""
        extra = []
        for r in relations:
            if r.pres.generators != self.generators or r.pres.prime != self.prime:
                raise PresentationMismatchError("relation from an incompatible presentation")
            if r.is_zero():
                continue
            extra.append(dict(r.terms))
        return GradedPresentation(
            self.prime,
            self.generators,
            self.degree_cap,
            _relations=self._relation_terms + tuple(extra),
        )

    @property
    def free(self) -> "GradedPresentation":
        """The relation-free presentation on the same generators."""
        if not self._relation_terms:
            return self
        if self._free_twin is None:
            self._free_twin = GradedPresentation(self.prime, self.generators, self.degree_cap)
        return self._free_twin

    @property
    def relations(self) -> tuple["Element", ...]:
        return tuple(Element(self.free, dict(t)) for t in self._relation_terms)

    # -- elements ----------------------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {(0,) * len(self.generators): 1})

    def gen(self, name: str) -> "Element":
        i = self._index.get(name)
        if i is None:
            raise KeyError(f"unknown generator {name!r}")
        exps = [0] * len(self.generators)
        exps[i] = 1
        return Element(self, {tuple(exps): 1})

    def gens(self) -> tuple["Element", ...]:
        return tuple(self.gen(g.name) for g in self.generators)

    def monomial(self, exps, coeff: int = 1) -> "Element":
        exps = tuple(exps)
        if len(exps) != len(self.generators):
            raise ValueError("exponent tuple length mismatch")
        for e, odd in zip(exps, self._odd):
            if e < 0 or (odd and e > 1):
                raise ValueError(f"invalid exponents {exps}")
        return Element(self, {exps: coeff % self.prime}).normal_form()

    def element(self, terms: dict) -> "Element":
        """Inject a raw {exponent tuple: coefficient} map (normal form taken)."""
        return Element(self, {tuple(m): c for m, c in terms.items()}).normal_form()

    def from_element(self, e: "Element") -> "Element":
        """Transplant an element from a presentation with the same generator
        names and degrees (e.g. the free twin); normal form taken here."""
        if len(e.pres.generators) != len(self.generators) or any(
            a.name != b.name or a.degree != b.degree
            for a, b in zip(e.pres.generators, self.generators)
        ):
            raise PresentationMismatchError("generator lists differ")
        return self.element(e.terms)

    # -- monomial bookkeeping ----------------------------------------------

    def monomial_degree(self, exps) -> int:
        return sum(e * d for e, d in zip(exps, self._degrees))

    def monomials(self, degree: int) -> tuple[tuple[int, ...], ...]:
        """All monomials of the free algebra in one degree, descending
        graded-lex order (deterministic)."""
        return self._degree_data(degree).monomials

    def graded_basis(self, degree: int) -> list["Element"]:
        """Deterministic ordered basis of the degree-d piece of the quotient."""
        data = self._degree_data(degree)
        return [Element(self, {m: 1}) for m in data.basis]

    def dimension(self, degree: int) -> int:
        return len(self._degree_data(degree).basis)

    def hilbert_series(self, cap: int | None = None) -> list[int]:
        """Dimensions of the graded pieces for degrees 0..cap."""
        cap = self.degree_cap if cap is None else cap
        if cap > self.degree_cap:
            raise DegreeCapError(f"requested degree {cap} above cap {self.degree_cap}")
        return [self.dimension(d) for d in range(cap + 1)]

    # -- the degreewise reduction engine ------------------------------------

    def _degree_data(self, degree: int) -> "_DegreeData":
        if degree > self.degree_cap:
            raise DegreeCapError(f"degree {degree} above cap {self.degree_cap}")
        if degree < 0:
            raise ValueError("negative degree")
        data = self._cache.get(degree)
        if data is None:
            data = self._build_degree(degree)
            self._cache[degree] = data
        return data

    def _build_degree(self, degree: int) -> "_DegreeData":
        monos = tuple(self._enumerate_monomials(degree, 0))
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for rel in self._relation_terms:
            rel_deg = self.monomial_degree(next(iter(rel)))
            if rel_deg > degree:
                continue
            for cof in self._enumerate_monomials(degree - rel_deg, 0):
                row = np.zeros(len(monos), dtype=np.int64)
                hit = False
                for m, c in rel.items():
                    prod = self._mul_monomials(cof, m)
                    if prod is None:
                        continue
                    mono, sign = prod
                    row[index[mono]] = (row[index[mono]] + sign * c) % self.prime
                    hit = True
                if hit and row.any():
                    rows.append(row)
        if rows:
            R, pivots = _kernels.rref(_kernels.as_matrix(rows, len(monos)), self.prime)
        else:
            R, pivots = np.zeros((0, len(monos)), dtype=np.int64), []
        pivot_set = set(pivots)
        basis = tuple(m for i, m in enumerate(monos) if i not in pivot_set)
        return _DegreeData(monos, index, R, pivots, basis)

    def _enumerate_monomials(self, degree: int, start: int):
        """Exponent tuples of the given degree, descending lex."""
        n = len(self.generators)
        if start == n:
            if degree == 0:
                yield ()
            return
        d = self._degrees[start]
        top = degree // d
        if self._odd[start]:
            top = min(top, 1)
        for e in range(top, -1, -1):
            for rest in self._enumerate_monomials(degree - e * d, start + 1):
                yield (e,) + rest

    def _mul_monomials(self, m1, m2):
        """Product of two exponent tuples: (monomial, sign) or None if zero."""
        out = []
        for e1, e2, odd in zip(m1, m2, self._odd):
            e = e1 + e2
            if odd and e > 1:
                return None
            out.append(e)
        if self.prime == 2:
            return tuple(out), 1
        swaps = 0
        for i in range(len(m1)):
            if not self._odd[i] or not m2[i]:
                continue
            # moving the degree-|g_i| factor of m2 left past the odd part
            # of m1 that sits in later slots
            swaps += sum(m1[j] for j in range(i + 1, len(m1)) if self._odd[j])
        return tuple(out), (-1) ** (swaps & 1)

    def _has_relations_at(self, degree: int) -> bool:
        if not self._relation_terms:
            return False
        return any(
            self.monomial_degree(next(iter(rel))) <= degree for rel in self._relation_terms
        )

    def _reduce_terms(self, terms: dict) -> dict:
        """Normal form of a raw term map (split per degree, reduce each)."""
        by_degree: dict[int, dict] = {}
        for m, c in terms.items():
            c %= self.prime
            if not c:
                continue
            by_degree.setdefault(self.monomial_degree(m), {})[m] = c
        out: dict = {}
        for d, part in by_degree.items():
            if d > self.degree_cap:
                raise DegreeCapError(f"degree {d} above cap {self.degree_cap}")
            if not self._has_relations_at(d):
                out.update(part)
                continue
            data = self._degree_data(d)
            vec = np.zeros(len(data.monomials), dtype=np.int64)
            for m, c in part.items():
                vec[data.index[m]] = c
            vec = _kernels.reduce_vector(vec, data.reducer, data.pivots, self.prime)
            for i in np.nonzero(vec)[0]:
                out[data.monomials[int(i)]] = int(vec[i])
        return out

    # -- misc ----------------------------------------------------------------

    def format_monomial(self, exps) -> str:
        parts = []
        for g, e in zip(self.generators, exps):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        rel = f", {len(self._relation_terms)} relations" if self._relation_terms else ""
        names = ",".join(g.name for g in self.generators)
        return f"GradedPresentation(F_{self.prime}[{names}], cap={self.degree_cap}{rel})"


@dataclass(frozen=True)
class _DegreeData:
    monomials: tuple
    index: dict
    reducer: np.ndarray
    pivots: list
    basis: tuple


class Element:
    """An F_p-linear combination of normal-form monomials of one presentation.

    Public constructors (``pres.gen``, ``pres.element``, arithmetic) always
    return normal forms, so equality of term maps is equality in the quotient.
    """

    __slots__ = ("pres", "terms", "_hash")

    def __init__(self, pres: GradedPresentation, terms: dict):
        self.pres = pres
        object.__setattr__(self, "terms", {m: c for m, c in terms.items() if c % pres.prime})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        if name in ("pres", "terms") and hasattr(self, "terms"):
            raise AttributeError("Element is immutable")
        object.__setattr__(self, name, value)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.normal_form().terms

    def normal_form(self) -> "Element":
        return Element(self.pres, self.pres._reduce_terms(self.terms))

    def is_homogeneous(self) -> bool:
        degs = {self.pres.monomial_degree(m) for m in self.terms}
        return len(degs) <= 1

    def degree(self) -> int | None:
        """Common degree of all terms; None for 0; error when mixed."""
        degs = {self.pres.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise NonHomogeneousError(f"element has degrees {sorted(degs)}")
        return degs.pop()

    def leading_monomial(self) -> tuple[int, ...] | None:
        if not self.terms:
            return None
        return max(self.terms, key=lambda m: (self.pres.monomial_degree(m), m))

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    # -- arithmetic ------------------------------------------------------------

    def _check_same(self, other: "Element"):
        if self.pres is not other.pres:
            raise PresentationMismatchError("elements from different presentations")

    def __add__(self, other):
        if isinstance(other, int):
            other = other * self.pres.one()
        self._check_same(other)
        terms = dict(self.terms)
        p = self.pres.prime
        for m, c in other.terms.items():
            v = (terms.get(m, 0) + c) % p
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Element(self.pres, terms)

    __radd__ = __add__

    def __neg__(self):
        p = self.pres.prime
        return Element(self.pres, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Element) else -(other * self.pres.one()))

    def __rsub__(self, other):
        return (other * self.pres.one()) - self

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.pres.prime
            return Element(self.pres, {m: (v * c) % self.pres.prime for m, v in self.terms.items()})
        self._check_same(other)
        p = self.pres.prime
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = self.pres._mul_monomials(m1, m2)
                if prod is None:
                    continue
                mono, sign = prod
                v = (terms.get(mono, 0) + sign * c1 * c2) % p
                if v:
                    terms[mono] = v
                else:
                    terms.pop(mono, None)
        return Element(self.pres, self.pres._reduce_terms(terms))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.pres.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self == other * self.pres.one()
        return (
            isinstance(other, Element)
            and self.pres is other.pres
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((id(self.pres), frozenset(self.terms.items())))
            )
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        keyed = sorted(
            self.terms.items(),
            key=lambda mc: (self.pres.monomial_degree(mc[0]), mc[0]),
            reverse=True,
        )
        parts = []
        for m, c in keyed:
            mono = self.pres.format_monomial(m)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self}>"


# -- module-level operation names matching the public surface ---------------


def add(a: Element, b: Element) -> Element:
    return a + b


def mul(a: Element, b: Element) -> Element:
    return a * b


def normal_form(e: Element) -> Element:
    return e.normal_form()


def is_zero(e: Element) -> bool:
    return e.is_zero()


def graded_basis(pres: GradedPresentation, degree: int) -> list[Element]:
    return pres.graded_basis(degree)


def hilbert_series(pres: GradedPresentation, cap: int | None = None) -> list[int]:
    return pres.hilbert_series(cap)


def span_rows(elements, degree: int):
    """Coefficient matrix of homogeneous elements in one degree's monomial
    coordinates, plus the degree data (shared helper for membership tests)."""
    pres = elements[0].pres
    data = pres._degree_data(degree)
    rows = []
    for e in elements:
        vec = np.zeros(len(data.monomials), dtype=np.int64)
        for m, c in e.terms.items():
            vec[data.index[m]] = c
        rows.append(vec)
    return _kernels.as_matrix(rows, len(data.monomials)), data


def in_span(e: Element, spanning) -> bool:
    """Is ``e`` an F_p combination of the given homogeneous elements
    (all of the same degree, same presentation)?"""
    e = e.normal_form()
    if e.is_zero():
        return True
    d = e.degree()
    spanning = [s.normal_form() for s in spanning if not s.is_zero()]
    spanning = [s for s in spanning if s.degree() == d]
    if not spanning:
        return False
    mat, data = span_rows(spanning, d)
    R, pivots = _kernels.rref(mat, e.pres.prime)
    vec = np.zeros(len(data.monomials), dtype=np.int64)
    for m, c in e.terms.items():
        vec[data.index[m]] = c
    return not _kernels.reduce_vector(vec, R, pivots, e.pres.prime).any()


def ideal_multiples(gens, degree: int) -> list[Element]:
    """All (monomial x generator) products of the given degree, the
    degreewise spanning set of the two-sided ideal."""
    out = []
    for g in gens:
        g = g.normal_form()
        if g.is_zero():
            continue
        gd = g.degree()
        if gd is None or gd > degree:
            continue
        pres = g.pres
        for cof in pres.monomials(degree - gd):
            prod = pres.monomial(cof) * g
            if not prod.is_zero():
                out.append(prod)
    return out


def in_ideal(e: Element, gens) -> bool:
    """Degreewise membership of a homogeneous element in ideal(gens)."""
    e = e.normal_form()
    if e.is_zero():
        return True
    return in_span(e, ideal_multiples(gens, e.degree()))


@dataclass(frozen=True)
class RegularSequenceReport:
    regular: bool
    cap: int
    quotient_series: tuple[int, ...]
    predicted_series: tuple[int, ...]
    first_failure: int | None

    def describe(self) -> str:
        if self.regular:
            return f"regular up to degree {self.cap}"
        return f"not regular: series mismatch at degree {self.first_failure}"


def regular_sequence_check(pres: GradedPresentation, seq, cap: int) -> RegularSequenceReport:
    """Compare the quotient's Hilbert series with the Koszul prediction
    prod(1 - t^{d_i}) * (free series) through the given degree."""
    if pres._relation_terms or any(pres._odd):
        raise ValueError("regular-sequence check expects a free polynomial presentation")
    degs = []
    for s in seq:
        if not s.is_homogeneous():
            raise NonHomogeneousError("regular-sequence input must be homogeneous")
        d = s.degree()
        if d is None:
            raise ValueError("zero element in sequence")
        degs.append(d)
    quotient = pres.quotient(seq)
    actual = quotient.hilbert_series(cap)
    free = pres.hilbert_series(cap)
    predicted = list(free)
    for d in degs:
        nxt = [0] * (cap + 1)
        for i in range(cap + 1):
            nxt[i] = predicted[i] - (predicted[i - d] if i >= d else 0)
        predicted = nxt
    first = next((i for i in range(cap + 1) if actual[i] != predicted[i]), None)
    return RegularSequenceReport(
        regular=first is None,
        cap=cap,
        quotient_series=tuple(actual),
        predicted_series=tuple(predicted),
        first_failure=first,
    )


class AlgebraMorphism:
    """Degree-preserving algebra map given by images of the generators.

    Construction validates that every generator is mapped, degrees are
    preserved and every source relation maps to zero in the target.
    """

    def __init__(self, source: GradedPresentation, target: GradedPresentation, images: dict):
        if source.prime != target.prime:
            raise MorphismError("primes differ")
        self.source = source
        self.target = target
        self.images: dict[str, Element] = {}
        for g in source.generators:
            if g.name not in images:
                raise MorphismError(f"no image for generator {g.name}")
            img = images[g.name]
            if img.pres is not target:
                raise MorphismError(f"image of {g.name} lies in the wrong presentation")
            if not img.is_zero() and img.degree() != g.degree:
                raise MorphismError(
                    f"image of {g.name} has degree {img.degree()}, expected {g.degree}"
                )
            self.images[g.name] = img
        for rel in source.relations:
            if not self._apply_terms(rel.terms).is_zero():
                raise MorphismError("a source relation does not map to zero")

    def _apply_terms(self, terms: dict) -> Element:
        out = self.target.zero()
        names = [g.name for g in self.source.generators]
        for m, c in terms.items():
            piece = c * self.target.one()
            for name, e in zip(names, m):
                if e:
                    piece = piece * self.images[name] ** e
            out = out + piece
        return out

    def __call__(self, e: Element) -> Element:
        if e.pres is not self.source and e.pres is not self.source.free:
            raise PresentationMismatchError("element not in the morphism's source")
        return self._apply_terms(e.terms)


def apply_morphism(m: AlgebraMorphism, e: Element) -> Element:
    return m(e)


def tensor(a: GradedPresentation, b: GradedPresentation, degree_cap: int | None = None) -> GradedPresentation:
    """Tensor product presentation (disjoint generator names required)."""
    if a.prime != b.prime:
        raise ValueError("primes differ")
    if {g.name for g in a.generators} & {g.name for g in b.generators}:
        raise ValueError("generator names collide")
    cap = min(a.degree_cap, b.degree_cap) if degree_cap is None else degree_cap
    gens = a.generators + b.generators
    pres = GradedPresentation(a.prime, gens, cap)
    na, nb = len(a.generators), len(b.generators)
    rels = []
    for t in a._relation_terms:
        rels.append(Element(pres.free, {m + (0,) * nb: c for m, c in t.items()}))
    for t in b._relation_terms:
        rels.append(Element(pres.free, {(0,) * na + m: c for m, c in t.items()}))
    return pres.quotient(rels)
