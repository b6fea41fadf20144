"""Knowledge-base model: TBox unfolding, RBox closure, ABox, GCI normalization."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional

from .degrees import HALF, ONE, ZERO, Degree, Ineq, SignedBound, neg_lukasiewicz
from .syntax import (
    AtLeast,
    AtMost,
    Concept,
    Exists,
    Forall,
    Name,
    Not,
    And,
    Or,
    Role,
    inv,
    nnf,
    subconcepts,
)


class CyclicTBox(Exception):
    pass


class DuplicateDefinition(Exception):
    pass


@dataclass(frozen=True)
class ConceptAssertion:
    individual: str
    concept: Concept
    bound: SignedBound


@dataclass(frozen=True)
class RoleAssertion:
    subject: str
    object: str
    role: Role
    bound: SignedBound


@dataclass
class ABox:
    concept_assertions: list[ConceptAssertion] = field(default_factory=list)
    role_assertions: list[RoleAssertion] = field(default_factory=list)
    # each pair is a frozenset {a, b}; a singleton encodes the absurd a != a
    inequalities: set[frozenset[str]] = field(default_factory=set)

    def individuals(self) -> list[str]:
        seen: dict[str, None] = {}
        for ca in self.concept_assertions:
            seen.setdefault(ca.individual)
        for ra in self.role_assertions:
            seen.setdefault(ra.subject)
            seen.setdefault(ra.object)
        for pair in sorted(self.inequalities, key=sorted):
            for ind in sorted(pair):
                seen.setdefault(ind)
        return list(seen)

    def degrees(self) -> set[Degree]:
        out = {ca.bound.degree for ca in self.concept_assertions}
        out |= {ra.bound.degree for ra in self.role_assertions}
        return out


@dataclass
class TBox:
    # name -> (kind, body) with kind "sub" (inclusion) or "equiv"
    definitions: dict[str, tuple[str, Concept]] = field(default_factory=dict)
    gcis: list[tuple[Concept, Concept]] = field(default_factory=list)

    def is_unfoldable(self) -> bool:
        if self.gcis:
            return False
        try:
            _definition_order(self.definitions)
        except CyclicTBox:
            return False
        return True


def _definition_order(defs: dict[str, tuple[str, Concept]]) -> list[str]:
    """Topological order of defined names; raises CyclicTBox on a cycle."""
    order: list[str] = []
    state: dict[str, int] = {}  # 1 = visiting, 2 = done

    def visit(name: str) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            raise CyclicTBox(name)
        state[name] = 1
        _, body = defs[name]
        for sub in subconcepts(body):
            if isinstance(sub, Name) and sub.id in defs:
                visit(sub.id)
        state[name] = 2
        order.append(name)

    for name in sorted(defs):
        visit(name)
    return order


def _fresh_primitive(base: str, taken: set[str]) -> str:
    cand = base + "_prim"
    while cand in taken:
        cand += "_"
    return cand


def unfold(tbox: TBox) -> TBox:
    """Fully expanded unfoldable TBox: every defined name maps, as an
    equivalence, to a definition-free concept.  Inclusions A (= C become
    equivalences A = A' n C with a fresh primitive A'."""
    if tbox.gcis:
        raise CyclicTBox("TBox with GCIs is not unfoldable")
    taken = set(tbox.definitions)
    for _, body in tbox.definitions.values():
        for sub in subconcepts(body):
            if isinstance(sub, Name):
                taken.add(sub.id)
    defs: dict[str, tuple[str, Concept]] = {}
    for name, (kind, body) in tbox.definitions.items():
        if kind == "sub":
            prim = _fresh_primitive(name, taken)
            taken.add(prim)
            defs[name] = ("equiv", And(Name(prim), body))
        else:
            defs[name] = ("equiv", body)
    expanded: dict[str, tuple[str, Concept]] = {}
    for name in _definition_order(defs):
        _, body = defs[name]
        expanded[name] = ("equiv", _substitute(body, expanded))
    return TBox(definitions=expanded, gcis=[])


def _substitute(c: Concept, defs: dict[str, tuple[str, Concept]]) -> Concept:
    if isinstance(c, Name):
        if c.id in defs:
            return defs[c.id][1]
        return c
    if isinstance(c, Not):
        return Not(_substitute(c.arg, defs))
    if isinstance(c, And):
        return And(_substitute(c.left, defs), _substitute(c.right, defs))
    if isinstance(c, Or):
        return Or(_substitute(c.left, defs), _substitute(c.right, defs))
    if isinstance(c, Exists):
        return Exists(c.role, _substitute(c.body, defs))
    if isinstance(c, Forall):
        return Forall(c.role, _substitute(c.body, defs))
    return c


def expand_concept(c: Concept, unfolded: TBox) -> Concept:
    """Replace defined names in c by their expansions and normalize to NNF."""
    return nnf(_substitute(c, unfolded.definitions))


@dataclass
class RBox:
    transitive: set[str] = field(default_factory=set)
    inclusions: set[tuple[Role, Role]] = field(default_factory=set)
    # reflexive-transitive, inverse-closed role hierarchy; None until computed
    closure: Optional[dict[Role, frozenset[Role]]] = None

    def _need_closure(self) -> dict[Role, frozenset[Role]]:
        if self.closure is None:
            raise RuntimeError("hierarchy_closure has not been applied")
        return self.closure

    def superroles(self, r: Role) -> frozenset[Role]:
        return self._need_closure().get(r, frozenset([r]))

    def subroles(self, r: Role) -> frozenset[Role]:
        return frozenset(p for p, supers in self._need_closure().items() if r in supers) | {r}

    def includes(self, p: Role, r: Role) -> bool:
        """p is a sub-role of r under the reflexive-transitive closure."""
        return p == r or r in self.superroles(p)

    def is_transitive(self, r: Role) -> bool:
        # transitivity of a relation and of its inverse coincide
        return r.name in self.transitive

    def simple(self, r: Role) -> bool:
        """No transitive role at or below r in the hierarchy."""
        return not any(self.is_transitive(p) for p in self.subroles(r))


def hierarchy_closure(rbox: RBox) -> RBox:
    """RBox with the role hierarchy closed reflexively, transitively, and
    under inverses (R (= S gives Inv(R) (= Inv(S)))."""
    roles: set[Role] = set()
    for sub, sup in rbox.inclusions:
        roles.update((sub, sup, inv(sub), inv(sup)))
    for name in rbox.transitive:
        roles.update((Role(name), inv(Role(name))))
    supers: dict[Role, set[Role]] = {r: {r} for r in roles}
    edges = set(rbox.inclusions) | {(inv(a), inv(b)) for a, b in rbox.inclusions}
    for a, b in edges:
        supers[a].add(b)
    changed = True
    while changed:
        changed = False
        for r in roles:
            extra = set()
            for s in supers[r]:
                extra |= supers.get(s, {s})
            if not extra <= supers[r]:
                supers[r] |= extra
                changed = True
    return RBox(
        transitive=set(rbox.transitive),
        inclusions=set(rbox.inclusions),
        closure={r: frozenset(s) for r, s in supers.items()},
    )


@dataclass
class FuzzyKB:
    tbox: TBox = field(default_factory=TBox)
    rbox: RBox = field(default_factory=RBox)
    abox: ABox = field(default_factory=ABox)

    def with_concept_assertion(self, a: ConceptAssertion) -> "FuzzyKB":
        abox = ABox(
            self.abox.concept_assertions + [a],
            list(self.abox.role_assertions),
            set(self.abox.inequalities),
        )
        return FuzzyKB(self.tbox, self.rbox, abox)

    def with_role_assertion(self, a: RoleAssertion) -> "FuzzyKB":
        abox = ABox(
            list(self.abox.concept_assertions),
            self.abox.role_assertions + [a],
            set(self.abox.inequalities),
        )
        return FuzzyKB(self.tbox, self.rbox, abox)

    def concepts(self) -> Iterator[Concept]:
        for ca in self.abox.concept_assertions:
            yield ca.concept
        for _, (_, body) in sorted(self.tbox.definitions.items()):
            yield body
        for lhs, rhs in self.tbox.gcis:
            yield lhs
            yield rhs


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def detect_mode(kb: FuzzyKB) -> str:
    """auto mode resolution: gci > shin > si."""
    if not kb.tbox.is_unfoldable():
        return "gci"
    if kb.rbox.inclusions or kb.abox.inequalities:
        return "shin"
    for c in kb.concepts():
        if any(isinstance(d, (AtLeast, AtMost)) for d in subconcepts(c)):
            return "shin"
    return "si"


def validate(kb: FuzzyKB) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    rbox = kb.rbox if kb.rbox.closure is not None else hierarchy_closure(kb.rbox)
    for c in kb.concepts():
        for d in subconcepts(c):
            if isinstance(d, (AtLeast, AtMost)) and not rbox.simple(d.role):
                out.append(
                    Diagnostic(
                        "non-simple-role-in-number-restriction",
                        f"number restriction over non-simple role {d.role}",
                    )
                )
    if kb.tbox.gcis:
        out.append(Diagnostic("gci-mode", "TBox contains general inclusions"))
    elif not kb.tbox.is_unfoldable():
        out.append(Diagnostic("gci-mode", "TBox is cyclic or has duplicate definitions"))
    return out


@dataclass(frozen=True)
class RelativeDegrees:
    """The relative membership degree set for the GCI technique."""

    xs: tuple[Degree, ...]

    def __iter__(self) -> Iterator[Degree]:
        return iter(self.xs)


def compute_ell(degrees: Iterable[Degree]) -> Degree:
    """Half the minimum positive gap among the degrees, their complements,
    and {0, 1/2, 1}; small enough to preserve all strict/non-strict
    distinctions when strict bounds are shifted by it."""
    pool = {ZERO, HALF, ONE}
    for d in degrees:
        pool.add(d)
        pool.add(neg_lukasiewicz(d))
    ordered = sorted(pool)
    gap = min(b - a for a, b in zip(ordered, ordered[1:]) if b > a)
    return gap / 2


def normalize_for_gci(abox: ABox, ell: Degree) -> tuple[ABox, RelativeDegrees]:
    """Strict bounds become non-strict shifted by ell; the relative degree
    set collects {0, 1/2, 1} plus every normalized degree and complement."""

    def norm(b: SignedBound) -> SignedBound:
        if b.ineq is Ineq.GT:
            return SignedBound(Ineq.GE, b.degree + ell)
        if b.ineq is Ineq.LT:
            return SignedBound(Ineq.LE, b.degree - ell)
        return b

    out = ABox(
        [replace(ca, bound=norm(ca.bound)) for ca in abox.concept_assertions],
        [replace(ra, bound=norm(ra.bound)) for ra in abox.role_assertions],
        set(abox.inequalities),
    )
    pool = {ZERO, HALF, ONE}
    for d in out.degrees():
        pool.add(d)
        pool.add(neg_lukasiewicz(d))
    return out, RelativeDegrees(tuple(sorted(pool)))
