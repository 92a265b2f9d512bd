"""Scenario registry and the detection procedures.

A scenario packages a presented cohomology ring, an operation table, the
Chern-class flags and the declared coniveau inputs for one family of
classifying-space approximations.  ``detect`` issues machine-checkable
certificates: a class is certified outside the strong coniveau filtration
when a strictly increasing operation sequence of the right length has a
nonzero value and the class survives the Chern-ideal test.

Two soundness points shape the implementation:

* The Chern-ideal survival test models the integral Chern ideal reduced
  mod p, i.e. the span of (products of flagged classes) x (mod-p classes
  with zero Bockstein).  Testing against the full mod-p ideal of the flags
  would wrongly swallow every Bockstein image (Q_0(x_i x_j) is an F_p
  combination of y_k-multiples even though it is not an integral Chern
  multiple), emptying the tables the procedure is meant to produce.

* For central-extension scenarios the operations act on the polynomial
  cover of the cohomology, not on the spectral-sequence page (the page
  ideal is not stable under the higher operations), and nonvanishing is
  certified through declared restriction maps: either to an elementary
  abelian subgroup ring, or to a comparison quotient whose kernel data is
  declared scenario input backed by the regular-sequence check.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from . import fp
from .charclasses import g2_q_action, so_q_action
from .fp import (
    AlgebraMorphism,
    DegreeCapError,
    Element,
    Generator,
    GradedPresentation,
)
from .milnor import QAction, op_degree
from .parser import parse_expression, render_presentation

NOT_IN_STRONG_CONIVEAU = "not-in-strong-coniveau"
INCONCLUSIVE = "inconclusive"
REJECTED_CHERN = "rejected-chern"


class ScenarioError(fp.FpAlgebraError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Verdict record for one (class, operation sequence) pair."""

    scenario: str
    element: str
    sequence: tuple[int, ...]
    value: str
    value_degree: int | None
    verdict: str
    via: str | None = None
    assumptions: tuple[str, ...] = ()
    audit: tuple[str, ...] = ()
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "element": self.element,
            "sequence": list(self.sequence),
            "value": self.value,
            "value_degree": self.value_degree,
            "verdict": self.verdict,
            "via": self.via,
            "assumptions": list(self.assumptions),
            "audit": list(self.audit),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class DhRow:
    label: str
    degree: int
    witness: tuple[int, ...] | None
    certificate: Certificate


@dataclass(frozen=True)
class DhTable:
    scenario: str
    bound_kind: str  # "equality" for elementary abelian, "lower-bound" otherwise
    rows: tuple[DhRow, ...]

    def certified_rows(self) -> list[DhRow]:
        return [r for r in self.rows if r.certificate.verdict == NOT_IN_STRONG_CONIVEAU]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "bound_kind": self.bound_kind,
            "rows": [
                {
                    "label": r.label,
                    "degree": r.degree,
                    "witness": list(r.witness) if r.witness else None,
                    "certificate": r.certificate.to_dict(),
                }
                for r in self.rows
            ],
        }


@dataclass(frozen=True)
class DhCandidate:
    label: str
    element: Element
    maps: tuple[tuple[str, AlgebraMorphism | None], ...] | None = None  # None -> scenario maps


@dataclass
class Scenario:
    """All data needed to run detections for one group family."""

    name: str
    kind: str
    group: str
    prime: int
    presentation: GradedPresentation
    detect_pres: GradedPresentation
    q_action: QAction | None
    aliases: dict = field(default_factory=dict)
    chern_flags: dict = field(default_factory=dict)
    nonvanish_maps: tuple = (("scenario ring", None),)
    stable_pres: GradedPresentation | None = None
    stable_top: int = 0
    stable_declared_basis: tuple[str, ...] | None = None
    stable_note: str = ""
    declared_n1: dict = field(default_factory=dict)
    dh_candidates: tuple[DhCandidate, ...] = ()
    default_target: tuple[str, tuple[int, ...] | None] = ("", None)
    max_search_index: int = 3
    restriction: tuple | None = None  # (target Scenario, AlgebraMorphism, note)
    extras: dict = field(default_factory=dict)

    def resolve(self, text: str) -> Element:
        """An element of the detection ring from a name or expression."""
        names = {g.name: self.detect_pres.gen(g.name) for g in self.detect_pres.generators}
        names.update(self.aliases)
        if text in names:
            return names[text]
        for cand in self.dh_candidates:
            if cand.label == text:
                return cand.element
        return parse_expression(self.detect_pres, names, text)

    def candidate(self, label: str) -> DhCandidate | None:
        return next((c for c in self.dh_candidates if c.label == label), None)

    def n1_assumption(self, label: str) -> str:
        if label in self.declared_n1:
            return self.declared_n1[label]
        return (
            "coniveau membership of the target class is declared scenario input "
            "(integral torsion classes lie in the first coniveau filtration)"
        )

    def content_hash(self) -> str:
        text = render_presentation(
            self.presentation,
            chern={k: v for k, v in sorted(self.chern_flags.items())},
        )
        text += f"kind {self.kind}\nprime {self.prime}\nmax_index {self.max_search_index}\n"
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def required_length(degree: int) -> int | None:
    """Length of a witnessing sequence for a degree-d class (indices >= 1,
    strictly increasing): single operation in degrees 3 and 4, d - 3 above."""
    if degree < 3:
        return None
    return 1 if degree in (3, 4) else degree - 3


# -- Chern-ideal machinery -----------------------------------------------------


def q0_kernel_basis(scenario: Scenario, degree: int) -> list[Element]:
    """Basis of the Bockstein kernel in one degree of the detection ring
    (the mod-p image of the integral classes for exponent-p torsion)."""
    pres = scenario.detect_pres
    if degree == 0:
        return [pres.one()]
    basis = pres.graded_basis(degree)
    if not basis:
        return []
    if scenario.q_action is None:
        raise ScenarioError("no operation table on the detection ring")
    images = [scenario.q_action.apply(0, b) for b in basis]
    mat, _ = fp.span_rows(images, degree + op_degree(pres.prime, 0))
    from . import _kernels

    # kernel of v -> v @ mat, i.e. combinations of basis elements with zero image
    null = _kernels.nullspace(mat.T, pres.prime)
    out = []
    for vec in null:
        e = pres.zero()
        for k, c in enumerate(vec):
            if c:
                e = e + int(c) * basis[k]
        out.append(e)
    return out


def _chern_products(scenario: Scenario, max_degree: int) -> dict[int, list[Element]]:
    """Nonempty products of flagged classes, grouped by degree <= max_degree."""
    flags = [v for _, v in sorted(scenario.chern_flags.items())]
    out: dict[int, list[Element]] = {}
    stack = [(scenario.detect_pres.one(), 0, 0)]
    while stack:
        elem, deg, i0 = stack.pop()
        for i in range(i0, len(flags)):
            f = flags[i]
            nd = deg + f.degree()
            if nd > max_degree:
                continue
            ne = elem * f
            if ne.is_zero():
                continue
            out.setdefault(nd, []).append(ne)
            stack.append((ne, nd, i))
    return out


def chern_survival(scenario: Scenario, e: Element) -> bool:
    """True when e is NOT in the mod-p image of the integral Chern ideal
    (the span of flagged products times Bockstein-kernel classes)."""
    e = e.normal_form()
    if e.is_zero():
        return False
    d = e.degree()
    span: list[Element] = []
    for cd, elems in _chern_products(scenario, d).items():
        kernel = q0_kernel_basis(scenario, d - cd)
        for c in elems:
            for k in kernel:
                ck = c * k
                if not ck.is_zero():
                    span.append(ck)
    if not span:
        return True
    return not fp.in_span(e, span)


@dataclass(frozen=True)
class FlaggedIdeal:
    """The multiplicative strong-coniveau flag: everything in the mod-p
    ideal of the flagged classes (Frobenius reciprocity closure)."""

    scenario: str
    flag_names: tuple[str, ...]

    def describe(self) -> str:
        return (
            f"ideal({', '.join(self.flag_names)}) carries the strong-coniveau flag "
            "by Frobenius reciprocity"
        )


def reciprocity_flags(scenario: Scenario):
    """Flag descriptor plus the membership predicate for ideal(chern_flags)."""
    if not scenario.chern_flags:
        raise ScenarioError("scenario declares no Chern flags")
    ideal = FlaggedIdeal(scenario.name, tuple(sorted(scenario.chern_flags)))
    gens = list(scenario.chern_flags.values())

    def is_flagged(e: Element) -> bool:
        return fp.in_ideal(e, gens)

    return ideal, is_flagged


# -- detection -----------------------------------------------------------------


def detect(scenario: Scenario, element, sequence, _maps=None) -> Certificate:
    """Run the decision procedure on one homogeneous class.

    Verdict ``not-in-strong-coniveau`` requires: a strictly increasing
    sequence of indices >= 1 whose length matches the class degree, a
    nonzero value certified in a declared ring, and survival of the class
    modulo the Chern ideal.  Cap overflows and uncertified values are
    reported as inconclusive, never as passes.
    """
    label = element if isinstance(element, str) else str(element)
    sequence = tuple(sequence)

    if scenario.restriction is not None:
        return _detect_via_restriction(scenario, label, sequence)

    if scenario.q_action is None:
        return _inconclusive(scenario, label, sequence, "scenario carries no operation table")
    alpha = scenario.resolve(label) if isinstance(element, str) else element
    if alpha.is_zero() or not alpha.is_homogeneous():
        return _inconclusive(scenario, label, sequence, "target class must be nonzero homogeneous")
    d = alpha.degree()

    if scenario.chern_flags:
        try:
            survives = chern_survival(scenario, alpha)
        except DegreeCapError as exc:
            return _inconclusive(scenario, label, sequence, f"Chern test exceeds cap: {exc}")
        if not survives:
            return Certificate(
                scenario=scenario.name,
                element=label,
                sequence=sequence,
                value="",
                value_degree=None,
                verdict=REJECTED_CHERN,
                reason="class lies in the mod-p image of the integral Chern ideal",
            )

    problem = _sequence_problem(d, sequence)
    if problem:
        return _inconclusive(scenario, label, sequence, problem)

    try:
        value, trail = scenario.q_action.apply_sequence(sequence, alpha)
    except DegreeCapError as exc:
        return _inconclusive(scenario, label, sequence, f"degree cap overflow: {exc}")

    if value.is_zero():
        return _inconclusive(
            scenario, label, sequence, "operation value is zero", trail=trail
        )

    via = _certify_nonzero(scenario, _maps, value)
    if via is None:
        return _inconclusive(
            scenario,
            label,
            sequence,
            "value is nonzero in the cover but no declared restriction certifies it",
            trail=trail,
        )

    assumptions = [scenario.n1_assumption(label)]
    if via != "scenario ring":
        assumptions.append(f"nonvanishing certified via {via}")
    return Certificate(
        scenario=scenario.name,
        element=label,
        sequence=sequence,
        value=str(value),
        value_degree=value.degree(),
        verdict=NOT_IN_STRONG_CONIVEAU,
        via=via,
        assumptions=tuple(assumptions),
        audit=tuple(str(t) for t in trail),
    )


def _sequence_problem(degree: int, sequence: tuple[int, ...]) -> str | None:
    need = required_length(degree)
    if need is None:
        return f"no detection rule for classes of degree {degree}"
    if len(sequence) != need:
        return f"degree-{degree} classes need a sequence of length {need}, got {len(sequence)}"
    if any(i < 1 for i in sequence):
        return "operation indices in a witness must be >= 1"
    if any(a >= b for a, b in zip(sequence, sequence[1:])):
        return "witness indices must be strictly increasing"
    return None


def _certify_nonzero(scenario: Scenario, candidate_maps, value: Element) -> str | None:
    maps = candidate_maps if candidate_maps is not None else scenario.nonvanish_maps
    for name, morphism in maps:
        if morphism is None:
            if not value.is_zero():
                return name
        else:
            if not morphism(value).is_zero():
                return name
    return None


def _inconclusive(scenario, label, sequence, reason, trail=()) -> Certificate:
    return Certificate(
        scenario=scenario.name,
        element=label,
        sequence=tuple(sequence),
        value=str(trail[-1]) if trail else "",
        value_degree=None,
        verdict=INCONCLUSIVE,
        audit=tuple(str(t) for t in trail),
        reason=reason,
    )


def _detect_via_restriction(scenario: Scenario, label: str, sequence) -> Certificate:
    target, morphism, note = scenario.restriction
    image = morphism(scenario.resolve(label))
    inner = detect(target, image, sequence)
    assumptions = (scenario.n1_assumption(label), note) + inner.assumptions
    return Certificate(
        scenario=scenario.name,
        element=label,
        sequence=tuple(sequence),
        value=inner.value,
        value_degree=inner.value_degree,
        verdict=inner.verdict,
        via=f"restriction to {target.name}" + (f"; {inner.via}" if inner.via else ""),
        assumptions=assumptions,
        audit=inner.audit,
        reason=inner.reason,
    )


def _detect_candidate(scenario: Scenario, cand: DhCandidate, sequence) -> Certificate:
    cert = detect(scenario, cand.element, sequence, _maps=cand.maps)
    # DhCandidate labels are friendlier than raw element strings
    return Certificate(**{**cert.__dict__, "element": cand.label})


def search_witness(scenario: Scenario, cand: DhCandidate) -> Certificate:
    """First certificate over ascending lexicographic index tuples of the
    required length, bounded by the scenario's operation table and cap."""
    if scenario.restriction is not None:
        target, morphism, _ = scenario.restriction
        inner = search_witness(
            target, DhCandidate(cand.label, morphism(cand.element), None)
        )
        if inner.verdict != NOT_IN_STRONG_CONIVEAU:
            return inner
        return _detect_via_restriction(scenario, cand.label, inner.sequence)
    d = cand.element.degree()
    need = required_length(d)
    if need is None:
        return _inconclusive(scenario, cand.label, (), f"no detection rule in degree {d}")
    last = None
    for seq in combinations(range(1, scenario.max_search_index + 1), need):
        cert = _detect_candidate(scenario, cand, seq)
        if cert.verdict in (NOT_IN_STRONG_CONIVEAU, REJECTED_CHERN):
            return cert
        last = cert
    if last is None:
        return _inconclusive(
            scenario, cand.label, (),
            f"no index sequence of length {need} within the operation table",
        )
    return _inconclusive(
        scenario, cand.label, (),
        "no witnessing sequence found within the table and cap",
    )


def dh_table(scenario: Scenario, cap: int | None = None) -> DhTable:
    """Certificate table over the scenario's candidate family."""
    rows = []
    limit = cap if cap is not None else scenario.detect_pres.degree_cap
    for cand in scenario.dh_candidates:
        degree = cand.element.degree()
        if degree > limit:
            continue
        cert = search_witness(scenario, cand)
        witness = cert.sequence if cert.verdict == NOT_IN_STRONG_CONIVEAU else None
        rows.append(DhRow(cand.label, degree, witness, cert))
    bound = "equality" if scenario.kind == "elementary" else "lower-bound"
    return DhTable(scenario=scenario.name, bound_kind=bound, rows=tuple(rows))


def default_certificate(scenario: Scenario, sequence=None) -> Certificate:
    """Certificate for the scenario's flagship target (used by `verify`)."""
    label, default_seq = scenario.default_target
    seq = tuple(sequence) if sequence is not None else default_seq
    cand = scenario.candidate(label)
    if cand is None:
        cand = DhCandidate(label, scenario.resolve(label))
    if seq is None:
        return search_witness(scenario, cand)
    return _detect_candidate(scenario, cand, seq)


# -- stable quotients ------------------------------------------------------------


@dataclass(frozen=True)
class StableQuotient:
    scenario: str
    dims: tuple[int, ...]
    basis: tuple[tuple[str, ...], ...]
    total_dimension: int
    note: str
    declared: tuple[str, ...] | None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "dims": list(self.dims),
            "basis": [list(b) for b in self.basis],
            "total_dimension": self.total_dimension,
            "note": self.note,
            "declared": list(self.declared) if self.declared else None,
        }


def stable_quotient(scenario: Scenario) -> StableQuotient:
    """Graded basis of the ring modulo the declared coniveau ideal."""
    if scenario.stable_pres is None:
        raise ScenarioError(f"scenario {scenario.name} declares no stable structure")
    dims = []
    basis = []
    for d in range(scenario.stable_top + 1):
        layer = tuple(str(b) for b in scenario.stable_pres.graded_basis(d))
        dims.append(len(layer))
        basis.append(layer)
    return StableQuotient(
        scenario=scenario.name,
        dims=tuple(dims),
        basis=tuple(basis),
        total_dimension=sum(dims),
        note=scenario.stable_note,
        declared=scenario.stable_declared_basis,
    )


# -- ring builders for the central-extension scenarios ---------------------------


def extraspecial_cover(n: int, p: int, cap: int) -> GradedPresentation:
    """Polynomial cover Z/p[y_1..y_2n] (x) Lambda(x_1..x_2n) (p odd) or
    F_2[x_1..x_2n] (p = 2) of the central-extension cohomology."""
    if p == 2:
        gens = [Generator(f"x{i}", 1) for i in range(1, 2 * n + 1)]
    else:
        gens = [Generator(f"y{i}", 2) for i in range(1, 2 * n + 1)]
        gens += [Generator(f"x{i}", 1) for i in range(1, 2 * n + 1)]
    return GradedPresentation(p, gens, cap)


def symplectic_form(pres: GradedPresentation, n: int) -> Element:
    """f = sum x_(2i-1) x_(2i)."""
    f = pres.zero()
    for i in range(1, n + 1):
        f = f + pres.gen(f"x{2 * i - 1}") * pres.gen(f"x{2 * i}")
    return f


def _abelian_q_action(pres: GradedPresentation, max_index: int) -> QAction:
    """Closed-form table: Q_i(x_j) is the p^i-th power of the Bockstein
    image of x_j; Q_i vanishes on the Bockstein images."""
    p = pres.prime

    def supplier(i: int, gname: str) -> Element:
        if gname.startswith("y"):
            return pres.zero()
        j = gname[1:]
        if p == 2:
            return pres.gen(f"x{j}") ** (2 ** (i + 1))
        return pres.gen(f"y{j}") ** (p**i)

    return QAction(pres, max_index=max_index, supplier=supplier)


def extraspecial_e4(n: int, p: int, cap: int | None = None):
    """Quotient of the cover by (f, Q_0 f): the stable page of the central
    extension, with the two differential values exposed as data."""
    if p == 2:
        raise ScenarioError("the stable-page builder expects an odd prime")
    cap = cap if cap is not None else (12 if n <= 2 else 6)
    cover = extraspecial_cover(n, p, max(cap, 8))
    action = _abelian_q_action(cover, 2)
    f = symplectic_form(cover, n)
    q0f = action.apply(0, f)
    base = GradedPresentation(p, cover.generators, cap)
    page = base.quotient([fp.Element(base, dict(t.terms)) for t in (f, q0f)])
    return page, {"d2": f, "d3": q0f}


def quillen_d_ring(n: int, cap: int | None = None):
    """F_2[x_1..x_2n]/(f, Q_0 f, .., Q_(n-2) f) (x) F_2[w_(2^n)], with the
    nonzero Stiefel-Whitney degree list of the spin representation attached."""
    cap = cap if cap is not None else (12 if n <= 2 else 8)
    gens = [Generator(f"x{i}", 1) for i in range(1, 2 * n + 1)]
    gens.append(Generator(f"w{2 ** n}", 2**n))
    base = GradedPresentation(2, gens, cap)
    cover = extraspecial_cover(n, 2, cap)
    action = _abelian_q_action(cover, max(n - 2, 0))
    f = symplectic_form(cover, n)
    rels = [f] + [action.apply(i, f) for i in range(0, n - 1)]
    carried = []
    for r in rels:
        terms = {m + (0,): c for m, c in r.terms.items()}
        carried.append(fp.Element(base.free, terms))
    page = base.quotient(carried)
    degrees = sorted({2**n} | {2**n - 2**i for i in range(n)}, reverse=True)
    return page, {"sw_degrees": degrees}


@lru_cache(maxsize=None)
def symplectic_comparison(p: int = 3, cap: int = 40):
    """The rank-2 comparison quotient: F_p[y_1..y_4] (x) Lambda(x_1..x_4)
    modulo (Q_1 Q_0 f, Q_2 Q_0 f).

    The kernel data is declared scenario input; the regular-sequence check
    (``comparison_regular_pair``) supports it degreewise.
    """
    cover = extraspecial_cover(2, p, cap)
    action = _abelian_q_action(cover, 2)
    f = symplectic_form(cover, 2)
    q0f = action.apply(0, f)
    g1 = action.apply(1, q0f)
    g2 = action.apply(2, q0f)
    ring = cover.quotient([g1, g2])
    return ring, (g1, g2)


def comparison_regular_pair(p: int = 3, cap: int = 40):
    """Regular-sequence report for the comparison kernel generators inside
    the polynomial subring on the Bockstein images."""
    _, (g1, g2) = symplectic_comparison(p)
    ypres = GradedPresentation(p, [Generator(f"y{i}", 2) for i in range(1, 5)], cap)
    moved = []
    for g in (g1, g2):
        terms = {}
        for m, c in g.terms.items():
            if any(m[4:]):
                raise ScenarioError("comparison generators must be x-free")
            terms[m[:4]] = c
        moved.append(fp.Element(ypres, terms))
    report = fp.regular_sequence_check(ypres, moved, cap)
    return report, ypres.quotient(moved), moved


# -- the projective-linear label module -------------------------------------------


@dataclass(frozen=True)
class QModuleScenario:
    """Free module over Z/p[x_(2p+2), x_(2p^2-2p)] on the labels u2, Q0u2,
    Q1u2, Q1Q0u2, with the top label identified with x_(2p+2)."""

    p: int

    @property
    def name(self) -> str:
        return f"pgl(p={self.p})"

    def label_degrees(self) -> dict:
        p = self.p
        return {"u2": 2, "Q0u2": 3, "Q1u2": 2 * p + 1, "Q1Q0u2": 2 * p + 2}

    def sd_generators(self) -> tuple[tuple[str, int], ...]:
        p = self.p
        return ((f"x{2 * p + 2}", 2 * p + 2), (f"x{2 * p * p - 2 * p}", 2 * p * p - 2 * p))

    def sd_presentation(self) -> GradedPresentation:
        """The polynomial coefficient ring of the label module."""
        gens = [Generator(name, degree) for name, degree in self.sd_generators()]
        return GradedPresentation(self.p, gens, 4 * self.p * self.p)

    def apply(self, i: int, labels: dict) -> dict:
        """Q_i on an F_p combination of labels (coefficients mod p)."""
        if i not in (0, 1):
            raise ScenarioError("the label module only carries Q_0 and Q_1")
        p = self.p
        out: dict[str, int] = {}

        def put(label, c):
            v = (out.get(label, 0) + c) % p
            if v:
                out[label] = v
            else:
                out.pop(label, None)

        for label, c in labels.items():
            if i == 0 and label == "u2":
                put("Q0u2", c)
            elif i == 0 and label == "Q1u2":
                put("Q1Q0u2", -c)
            elif i == 1 and label == "u2":
                put("Q1u2", c)
            elif i == 1 and label == "Q0u2":
                put("Q1Q0u2", c)
            # Q_i kills Q1Q0u2 (top label) and repeated indices
        return out

    def identification(self) -> str:
        return f"Q1Q0u2 = x{2 * self.p + 2}"


def pgl_detect(module: QModuleScenario) -> Certificate:
    """Certificate for the degree-3 label: one further operation lands on
    the top label, identified with the polynomial generator x_(2p+2)."""
    p = module.p
    value = module.apply(1, {"Q0u2": 1})
    assert value == {"Q1Q0u2": 1}
    witness = f"x{2 * p + 2}"
    return Certificate(
        scenario=module.name,
        element="Q0u2",
        sequence=(1,),
        value=witness,
        value_degree=2 * p + 2,
        verdict=NOT_IN_STRONG_CONIVEAU,
        via=f"label module ({module.identification()})",
        assumptions=(
            "coniveau membership of the target class is declared scenario input "
            "(integral torsion classes lie in the first coniveau filtration)",
            "the top label is a polynomial generator of the cohomology, hence nonzero",
        ),
        audit=("Q1Q0u2",),
    )


# -- builtin scenarios ---------------------------------------------------------------

_N1_TORSION = (
    "coniveau membership of the target class is declared scenario input "
    "(integral torsion classes lie in the first coniveau filtration)"
)


@lru_cache(maxsize=None)
def elementary_abelian(p: int, n: int, cap: int = 40) -> Scenario:
    fp.check_prime(p)
    if n < 1:
        raise ScenarioError("rank must be >= 1")
    pres = _elementary_pres(p, n, cap)
    max_index = 1
    while 2 * p ** (max_index + 1) <= cap and max_index < 4:
        max_index += 1
    action = _abelian_q_action(pres, max_index)
    aliases = {}
    chern = {}
    if p == 2:
        for i in range(1, n + 1):
            aliases[f"y{i}"] = pres.gen(f"x{i}") ** 2
            chern[f"y{i}"] = aliases[f"y{i}"]
    else:
        for i in range(1, n + 1):
            chern[f"y{i}"] = pres.gen(f"y{i}")
    top = pres.one()
    for i in range(1, n + 1):
        top = top * pres.gen(f"x{i}")
    aliases["alpha"] = action.apply(0, top)
    candidates = []
    from itertools import combinations as _comb

    for size in range(2, n + 1):
        for subset in _comb(range(1, n + 1), size):
            mono = pres.one()
            for i in subset:
                mono = mono * pres.gen(f"x{i}")
            label = "Q0(" + "*".join(f"x{i}" for i in subset) + ")"
            candidates.append(DhCandidate(label, action.apply(0, mono)))
    stable = _elementary_stable(p, n)
    return Scenario(
        name=f"elementary(p={p},n={n})",
        kind="elementary",
        group=f"rank-{n} elementary abelian {p}-group",
        prime=p,
        presentation=pres,
        detect_pres=pres,
        q_action=action,
        aliases=aliases,
        chern_flags=chern,
        nonvanish_maps=(("scenario ring", None),),
        stable_pres=stable,
        stable_top=n,
        stable_note="quotient by the ideal of the degree-2 Chern classes",
        declared_n1={"alpha": _N1_TORSION},
        dh_candidates=tuple(candidates),
        default_target=("alpha", None),
        max_search_index=max_index,
    )


def _elementary_pres(p: int, n: int, cap: int) -> GradedPresentation:
    if p == 2:
        return GradedPresentation(2, [Generator(f"x{i}", 1) for i in range(1, n + 1)], cap)
    gens = [Generator(f"y{i}", 2) for i in range(1, n + 1)]
    gens += [Generator(f"x{i}", 1) for i in range(1, n + 1)]
    return GradedPresentation(p, gens, cap)


def _elementary_stable(p: int, n: int) -> GradedPresentation:
    cap = max(n, 1)
    if p == 2:
        pres = GradedPresentation(2, [Generator(f"x{i}", 1) for i in range(1, n + 1)], cap + 2)
        return pres.quotient([pres.gen(f"x{i}") ** 2 for i in range(1, n + 1)])
    return GradedPresentation(p, [Generator(f"x{i}", 1) for i in range(1, n + 1)], cap)


@lru_cache(maxsize=None)
def so_odd(m: int, cap: int = 64) -> Scenario:
    if m < 1:
        raise ScenarioError("m must be >= 1")
    rank = 2 * m + 1
    pres, action = so_q_action(rank, cap=cap, max_index=3)
    chern = {f"c{i}": pres.gen(f"w{i}") ** 2 for i in range(2, rank + 1)}
    declared = {
        f"w{2 * j + 1}": _N1_TORSION for j in range(1, m + 1)
    }
    candidates = tuple(
        DhCandidate(f"w{2 * j + 1}", pres.gen(f"w{2 * j + 1}")) for j in range(1, m + 1)
    )
    stable_rels = [pres.gen(f"w{i}") * pres.gen(f"w{j}") for i in range(2, rank + 1) for j in range(i, rank + 1) if i + j <= cap]
    stable_rels += [pres.gen(f"w{i}") for i in range(3, rank + 1, 2)]
    stable = pres.quotient(stable_rels)
    declared_basis = ("1",) + tuple(f"w{2 * k}" for k in range(1, m + 1))
    return Scenario(
        name=f"so(m={m})",
        kind="so",
        group=f"special orthogonal group of rank {rank}",
        prime=2,
        presentation=pres,
        detect_pres=pres,
        q_action=action,
        aliases=dict(chern),
        chern_flags=chern,
        nonvanish_maps=(("scenario ring", None),),
        stable_pres=stable,
        stable_top=2 * m,
        stable_note="declared coniveau ideal: all products and the odd classes",
        stable_declared_basis=declared_basis,
        declared_n1=declared,
        dh_candidates=candidates,
        default_target=("w3", (1,)),
        max_search_index=3,
    )


@lru_cache(maxsize=None)
def g2_scenario(cap: int = 40) -> Scenario:
    pres, action = g2_q_action(cap=cap, max_index=2)
    chern = {f"c{i}": pres.gen(f"w{i}") ** 2 for i in (4, 6, 7)}
    candidates = (
        DhCandidate("w4", pres.gen("w4")),
        DhCandidate("w7", pres.gen("w7")),
        DhCandidate("w4*w7", pres.gen("w4") * pres.gen("w7")),
    )
    return Scenario(
        name="g2",
        kind="g2",
        group="compact exceptional group of rank 2",
        prime=2,
        presentation=pres,
        detect_pres=pres,
        q_action=action,
        aliases=dict(chern),
        chern_flags=chern,
        nonvanish_maps=(("scenario ring", None),),
        declared_n1={
            "w4": "twice the degree-4 class is a Chern class, so the class is "
            "integrally torsion on the complement; coniveau membership is declared input"
        },
        dh_candidates=candidates,
        default_target=("w4", (1,)),
        max_search_index=2,
    )


@lru_cache(maxsize=None)
def simply_connected(p: int) -> Scenario:
    fp.check_prime(p)
    source = GradedPresentation(p, [Generator("w", 4)], 16)
    if p == 2:
        target = g2_scenario()
        image = target.presentation.gen("w4")
        note = (
            "restriction to the rank-2 exceptional subgroup sends the degree-4 "
            "class to w4 (declared input)"
        )
    elif p in (3, 5):
        target = elementary_abelian(p, 3)
        image = target.resolve("alpha")
        note = (
            "restriction to a rank-3 elementary abelian subgroup sends the "
            "degree-4 class to the Bockstein of the top exterior monomial (declared input)"
        )
    else:
        raise ScenarioError("simply connected scenarios exist for p in {2, 3, 5}")
    morphism = AlgebraMorphism(source, target.detect_pres, {"w": image})
    return Scenario(
        name=f"simply-connected(p={p})",
        kind="simply-connected",
        group=f"simply connected simple group with {p}-torsion",
        prime=p,
        presentation=source,
        detect_pres=source,
        q_action=None,
        declared_n1={
            "w": "p times the degree-4 class is a Chern class, hence the class is "
            "p-torsion away from a divisor; coniveau membership is declared input"
        },
        dh_candidates=(DhCandidate("w", source.gen("w")),),
        default_target=("w", (1,)),
        max_search_index=target.max_search_index,
        restriction=(target, morphism, note),
    )


def _pair_maps(cover: GradedPresentation, n: int, p: int, i: int, j: int):
    """Declared nonvanishing maps for the candidate Q_0(x_i x_j)."""
    sym_pairs = {(2 * k - 1, 2 * k) for k in range(1, n + 1)}
    if (i, j) not in sym_pairs:
        # commuting pair: restrict to the rank-2 elementary abelian subgroup
        target = _elementary_pres(p, 2, cover.degree_cap)
        images = {}
        for g in cover.generators:
            kind, idx = g.name[0], int(g.name[1:])
            slot = {i: "1", j: "2"}.get(idx)
            if slot is None:
                images[g.name] = target.zero()
            elif p == 2:
                images[g.name] = target.gen(f"x{slot}")
            else:
                images[g.name] = target.gen(f"{kind}{slot}")
        return (
            (f"restriction to the abelian subgroup on ({i},{j})",
             AlgebraMorphism(cover, target, images)),
        )
    if p == 2:
        return ()  # no declared comparison at p = 2: rows stay inconclusive
    ring, _ = symplectic_comparison(p, cap=cover.degree_cap)
    images = {}
    for g in cover.generators:
        kind, idx = g.name[0], int(g.name[1:])
        if idx in (1, 2):
            images[g.name] = ring.gen(f"{kind}{idx}")
        elif idx in (i, j):
            images[g.name] = ring.gen(f"{kind}{3 + (idx == j)}")
        else:
            images[g.name] = ring.zero()
    return (
        ("comparison quotient with declared kernel (regular pair)",
         AlgebraMorphism(cover, ring, images)),
    )


@lru_cache(maxsize=None)
def extraspecial_e(n: int, p: int = 3, cap: int = 24) -> Scenario:
    fp.check_prime(p)
    if p == 2:
        raise ScenarioError("use the dihedral-type builder at p = 2")
    if n < 2:
        raise ScenarioError("n must be >= 2 (the rank-1 case has no degree-3 table)")
    cover = extraspecial_cover(n, p, cap)
    action = _abelian_q_action(cover, 2)
    page, diffs = extraspecial_e4(n, p)
    candidates = []
    for i in range(1, 2 * n + 1):
        for j in range(i + 1, 2 * n + 1):
            if (i, j) == (1, 2):
                continue
            elem = action.apply(0, cover.gen(f"x{i}") * cover.gen(f"x{j}"))
            candidates.append(
                DhCandidate(f"Q0(x{i}*x{j})", elem, maps=_pair_maps(cover, n, p, i, j))
            )
    stable = _lambda_mod_f(n, p)
    return Scenario(
        name=f"extraspecial-e(n={n},p={p})",
        kind="extraspecial-e",
        group=f"extraspecial {p}-group of order p^(1+{2 * n}), exponent p",
        prime=p,
        presentation=page,
        detect_pres=cover,
        q_action=action,
        chern_flags={f"y{i}": cover.gen(f"y{i}") for i in range(1, 2 * n + 1)},
        nonvanish_maps=(),
        stable_pres=stable,
        stable_top=2 * n,
        stable_note="exterior classes modulo the symplectic form",
        declared_n1={},
        dh_candidates=tuple(candidates),
        default_target=("Q0(x1*x3)", (1,)),
        max_search_index=2,
        extras={"page_differentials": {k: str(v) for k, v in diffs.items()}},
    )


def _lambda_mod_f(n: int, p: int) -> GradedPresentation:
    cap = 2 * n + 1
    if p == 2:
        pres = GradedPresentation(2, [Generator(f"x{i}", 1) for i in range(1, 2 * n + 1)], cap)
        rels = [pres.gen(f"x{i}") ** 2 for i in range(1, 2 * n + 1)]
        rels.append(symplectic_form(pres, n))
        return pres.quotient(rels)
    pres = GradedPresentation(p, [Generator(f"x{i}", 1) for i in range(1, 2 * n + 1)], cap)
    return pres.quotient([symplectic_form(pres, n)])


@lru_cache(maxsize=None)
def extraspecial_d(n: int, cap: int | None = None) -> Scenario:
    if n < 1:
        raise ScenarioError("n must be >= 1")
    cap = cap if cap is not None else (12 if n <= 2 else 8)
    cover = extraspecial_cover(n, 2, cap)
    action = _abelian_q_action(cover, max(1, min(2, n)))
    page, meta = quillen_d_ring(n, cap)
    candidates = []
    for i in range(1, 2 * n + 1):
        for j in range(i + 1, 2 * n + 1):
            if (i, j) == (1, 2):
                continue
            elem = action.apply(0, cover.gen(f"x{i}") * cover.gen(f"x{j}"))
            candidates.append(
                DhCandidate(f"Q0(x{i}*x{j})", elem, maps=_pair_maps(cover, n, 2, i, j))
            )
    return Scenario(
        name=f"extraspecial-d(n={n})",
        kind="extraspecial-d",
        group=f"central product of {n} dihedral groups of order 8",
        prime=2,
        presentation=page,
        detect_pres=cover,
        q_action=action,
        chern_flags={f"y{i}": cover.gen(f"x{i}") ** 2 for i in range(1, 2 * n + 1)},
        nonvanish_maps=(),
        stable_pres=_lambda_mod_f(n, 2),
        stable_top=2 * n,
        stable_note="exterior classes modulo the symplectic form",
        dh_candidates=tuple(candidates),
        default_target=("Q0(x1*x3)", (1,)),
        max_search_index=min(2, max(1, n)),
        extras={"sw_degrees": meta["sw_degrees"]},
    )


@lru_cache(maxsize=None)
def pgl_module(p: int) -> QModuleScenario:
    fp.check_prime(p)
    if p == 2:
        raise ScenarioError("the label-module scenario expects an odd prime")
    return QModuleScenario(p)


BUILTIN_DEFAULTS = (
    "elementary(p=2,n=2)",
    "elementary(p=2,n=3)",
    "elementary(p=2,n=4)",
    "elementary(p=3,n=2)",
    "elementary(p=3,n=3)",
    "extraspecial-d(n=2)",
    "extraspecial-d(n=3)",
    "extraspecial-e(n=2,p=3)",
    "extraspecial-e(n=3,p=3)",
    "g2",
    "pgl(p=3)",
    "pgl(p=5)",
    "simply-connected(p=2)",
    "simply-connected(p=3)",
    "simply-connected(p=5)",
    "so(m=1)",
    "so(m=2)",
)


def builtin_scenarios() -> dict:
    """name -> zero-argument constructor for every canonical instance."""
    registry = {}
    for key in BUILTIN_DEFAULTS:
        registry[key] = _constructor_for(key)
    return registry


def _constructor_for(key: str):
    family, params = _parse_key(key)
    if family == "elementary":
        return lambda: elementary_abelian(params["p"], params["n"])
    if family == "so":
        return lambda: so_odd(params["m"])
    if family == "g2":
        return lambda: g2_scenario()
    if family == "simply-connected":
        return lambda: simply_connected(params["p"])
    if family == "extraspecial-e":
        return lambda: extraspecial_e(params["n"], params.get("p", 3))
    if family == "extraspecial-d":
        return lambda: extraspecial_d(params["n"])
    if family == "pgl":
        return lambda: pgl_module(params["p"])
    raise ScenarioError(f"unknown scenario family {family!r}")


def _parse_key(key: str):
    if "(" not in key:
        return key, {}
    family, rest = key.split("(", 1)
    rest = rest.rstrip(")")
    params = {}
    for bit in rest.split(","):
        if not bit:
            continue
        k, v = bit.split("=")
        params[k.strip()] = int(v)
    return family, params


def get_scenario(family: str, **params):
    """Resolve a family name plus parameters to a canonical instance."""
    canonical = family
    if params:
        canonical += "(" + ",".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
    try:
        ctor = _constructor_for(canonical)
    except ScenarioError:
        raise
    return ctor()
