"""Completion-forest tableau engine.

Decides fuzzy ABox consistency by expanding a forest of labelled nodes and
edges under the completion rules, backtracking depth-first over the
nondeterministic choices (disjunction splits, merge picks, general-inclusion
splits).  Blocking keeps branches finite: label-equality blocking with
un/re-blocking in SI mode, pair-wise blocking in SHIN and GCI modes.

Rule priority (fixed, deterministic): clash check, then negation pushing,
then deterministic decompositions, then propagations, then merges, then
generators, then the remaining nondeterministic splits.  Nodes are always
scanned oldest-first and label sets in a canonical order, so identical
input yields identical behaviour.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .degrees import (
    Degree,
    INEQ_ORDER,
    Ineq,
    ONE,
    SignedBound,
    ZERO,
    conjugates,
    format_degree,
    neg_lukasiewicz,
    reflect,
)
from .kb import ABox, RBox
from .syntax import (
    And,
    AtLeast,
    AtMost,
    Bottom,
    Exists,
    Forall,
    Name,
    Not,
    Or,
    Role,
    Subject,
    Top,
    inv,
)


class ResourceLimit(Exception):
    """Raised when the configured work budget is exhausted; distinct from
    both verdicts."""


@dataclass(frozen=True)
class Triple:
    subject: Subject  # Concept in node labels, Role in edge labels
    ineq: Ineq
    degree: Degree

    def bound(self) -> SignedBound:
        return SignedBound(self.ineq, self.degree)

    def __str__(self) -> str:
        return f"<{self.subject},{self.ineq},{format_degree(self.degree)}>"


def triple_key(t: Triple) -> tuple[str, int, Degree]:
    return (str(t.subject), INEQ_ORDER[t.ineq], t.degree)


def inv_triple(t: Triple) -> Triple:
    assert isinstance(t.subject, Role)
    return Triple(inv(t.subject), t.ineq, t.degree)


@dataclass
class Node:
    id: int
    label: set[Triple]
    is_root: bool
    parent: Optional[int] = None
    root_name: Optional[str] = None


@dataclass(frozen=True)
class Clash:
    kind: str
    where: Union[int, tuple[int, int]]
    triples: tuple[Triple, ...]

    def __str__(self) -> str:
        ts = " ".join(str(t) for t in self.triples)
        return f"{self.kind} at {self.where}: {ts}"


@dataclass
class Budget:
    limit: int
    used: int = 0

    def charge(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceLimit(f"work budget of {self.limit} exceeded")


@dataclass(frozen=True)
class ChoicePoint:
    rule: str
    node: int
    info: object
    alternatives: tuple  # each alternative is ("add", node, Triple) or
    #                      ("merge"/"merge_root", x, y, z)


UNBLOCKED = "unblocked"
DIRECT = "direct"
INDIRECT = "indirect"


class Forest:
    def __init__(
        self,
        mode: str,
        rbox: RBox,
        budget: Budget,
        trace: Optional[list] = None,
        gcis: tuple = (),
        xa: tuple = (),
        ell: Optional[Degree] = None,
    ):
        self.mode = mode
        self.rbox = rbox
        self.budget = budget
        self.trace: list = trace if trace is not None else []
        self.gcis = gcis
        self.xa = xa
        self.ell = ell
        self.nodes: dict[int, Node] = {}
        self.edges: dict[tuple[int, int], set[Triple]] = {}
        self.neq: set[frozenset[int]] = set()
        self.merged: dict[int, int] = {}
        self.next_id = 0
        # direct-block map from the previous scan, for block/unblock tracing
        self._last_blocks: dict[int, int] = {}

    # --- construction and copying ---

    def new_node(self, is_root: bool, parent: Optional[int], root_name: Optional[str] = None) -> Node:
        self.budget.charge()
        node = Node(self.next_id, set(), is_root, parent, root_name)
        self.nodes[node.id] = node
        self.next_id += 1
        return node

    def clone(self) -> "Forest":
        g = Forest(self.mode, self.rbox, self.budget, self.trace, self.gcis, self.xa, self.ell)
        g.nodes = {
            i: Node(n.id, set(n.label), n.is_root, n.parent, n.root_name)
            for i, n in self.nodes.items()
        }
        g.edges = {k: set(v) for k, v in self.edges.items()}
        g.neq = set(self.neq)
        g.merged = dict(self.merged)
        g.next_id = self.next_id
        g._last_blocks = dict(self._last_blocks)
        return g

    # --- basic accessors ---

    def ordered_nodes(self) -> list[Node]:
        return [self.nodes[i] for i in sorted(self.nodes)]

    def sorted_label(self, node: Node) -> list[Triple]:
        return sorted(node.label, key=triple_key)

    def is_ancestor(self, a: int, x: int) -> bool:
        cur = self.nodes[x].parent
        while cur is not None:
            if cur == a:
                return True
            cur = self.nodes[cur].parent
        return False

    def ancestors(self, x: int) -> Iterator[int]:
        cur = self.nodes[x].parent
        while cur is not None:
            yield cur
            cur = self.nodes[cur].parent

    def add_triple(self, node_id: int, t: Triple, rule: str) -> bool:
        node = self.nodes[node_id]
        if t in node.label:
            return False
        self.budget.charge()
        node.label.add(t)
        self.trace.append(("add", rule, node_id, t))
        return True

    def union_edge(self, a: int, b: int, triples: set[Triple]) -> None:
        """Add role triples between a and b, reusing an existing edge in
        either orientation (inverting as needed)."""
        if (a, b) in self.edges:
            self.edges[(a, b)] |= triples
        elif (b, a) in self.edges:
            self.edges[(b, a)] |= {inv_triple(t) for t in triples}
        else:
            self.edges[(a, b)] = set(triples)

    # --- neighbours ---

    def neighbour_bounds(self, x: int, r: Role) -> list[tuple[int, SignedBound]]:
        """All (y, bound) with y an r-neighbour of x through that bound:
        successor edges carry a sub-role of r, predecessor edges a sub-role
        of Inv(r)."""
        out = []
        rinv = inv(r)
        for (a, b), lab in self.edges.items():
            if a == x:
                for t in lab:
                    if self.rbox.includes(t.subject, r):
                        out.append((b, t.bound()))
            if b == x:
                for t in lab:
                    if self.rbox.includes(t.subject, rinv):
                        out.append((a, t.bound()))
        out.sort(key=lambda p: (p[0], INEQ_ORDER[p[1].ineq], p[1].degree))
        return out

    def conjugated_neighbours(self, x: int, r: Role, probe: SignedBound) -> list[int]:
        """The members of R^F_C(x, probe): r-neighbours whose connecting
        bound conjugates with the probe."""
        out = []
        for y, b in self.neighbour_bounds(x, r):
            if y not in out and conjugates(b, probe):
                out.append(y)
        return sorted(out)

    def has_exact_neighbour(self, x: int, r: Role, bound: SignedBound, required: Optional[Triple]) -> bool:
        for y, b in self.neighbour_bounds(x, r):
            if b == bound and (required is None or required in self.nodes[y].label):
                return True
        return False

    # --- blocking ---

    def blocking(self) -> dict[int, tuple[str, Optional[int]]]:
        """Status map for every node, computed top-down (parents have
        smaller ids than their children throughout)."""
        status: dict[int, tuple[str, Optional[int]]] = {}
        labels = {i: frozenset(n.label) for i, n in self.nodes.items()}
        for node in self.ordered_nodes():
            if node.is_root:
                status[node.id] = (UNBLOCKED, None)
                continue
            parent = node.parent
            assert parent is not None
            if status[parent][0] != UNBLOCKED:
                status[node.id] = (INDIRECT, None)
                continue
            in_edge = self.edges.get((parent, node.id))
            if in_edge is not None and not in_edge:
                status[node.id] = (INDIRECT, None)
                continue
            blocker = self._direct_blocker(node, labels)
            if blocker is not None:
                status[node.id] = (DIRECT, blocker)
            else:
                status[node.id] = (UNBLOCKED, None)
        return status

    def _direct_blocker(self, node: Node, labels: dict[int, frozenset]) -> Optional[int]:
        if self.mode == "si":
            for anc in self.ancestors(node.id):
                if labels[anc] == labels[node.id]:
                    return anc
            return None
        # pair-wise blocking: equal labels, equal parent labels, equal
        # connecting edge labels; the blocker must not be a root
        parent = node.parent
        assert parent is not None
        own_edge = frozenset(self.edges.get((parent, node.id), set()))
        for y in self.ancestors(node.id):
            ynode = self.nodes[y]
            if ynode.is_root or ynode.parent is None:
                continue
            if labels[y] != labels[node.id]:
                continue
            if labels[ynode.parent] != labels[parent]:
                continue
            if frozenset(self.edges.get((ynode.parent, y), set())) != own_edge:
                continue
            return y
        return None

    def _trace_block_changes(self, status: dict[int, tuple[str, Optional[int]]]) -> None:
        blocks = {i: s[1] for i, s in status.items() if s[0] == DIRECT}
        for x, y in blocks.items():
            if self._last_blocks.get(x) != y:
                self.trace.append(("block", x, y))
        for x in self._last_blocks:
            if x not in blocks:
                self.trace.append(("unblock", x))
        self._last_blocks = blocks

    # --- rendering ---

    def dump(self) -> str:
        lines = []
        for node in self.ordered_nodes():
            body = " ".join(
                f"⟨{t.subject},{t.ineq},{t.degree}⟩" for t in self.sorted_label(node)
            )
            tag = " root" if node.is_root else ""
            lines.append(f"node {node.id}{tag} {{{body}}}")
        for (a, b) in sorted(self.edges):
            ts = sorted(self.edges[(a, b)], key=triple_key)
            body = " ".join(f"⟨{t.subject},{t.ineq},{t.degree}⟩" for t in ts)
            lines.append(f"edge {a} -> {b} {{{body}}}")
        return "\n".join(lines) + ("\n" if lines else "")


def init_forest(
    abox: ABox,
    rbox: RBox,
    mode: str,
    budget: Optional[Budget] = None,
    trace: Optional[list] = None,
    gcis: tuple = (),
    xa: tuple = (),
    ell: Optional[Degree] = None,
) -> Forest:
    f = Forest(mode, rbox, budget or Budget(10**6), trace, gcis, xa, ell)
    roots: dict[str, int] = {}
    for ind in abox.individuals():
        roots[ind] = f.new_node(is_root=True, parent=None, root_name=ind).id
    for ca in abox.concept_assertions:
        f.add_triple(roots[ca.individual], Triple(ca.concept, ca.bound.ineq, ca.bound.degree), "init")
    for ra in abox.role_assertions:
        t = Triple(ra.role, ra.bound.ineq, ra.bound.degree)
        a, b = roots[ra.subject], roots[ra.object]
        f.union_edge(a, b, {t})
    for pair in abox.inequalities:
        f.neq.add(frozenset(roots[i] for i in pair))
    return f


# --- clash detection ---


def _concept_clash(f: Forest, node: Node) -> Optional[Clash]:
    label = f.sorted_label(node)
    for t in label:
        c, n = t.subject, t.degree
        if isinstance(c, Bottom) and t.ineq is Ineq.GE and n > ZERO:
            return Clash("bottom", node.id, (t,))
        if isinstance(c, Bottom) and t.ineq is Ineq.GT:
            return Clash("bottom", node.id, (t,))
        if isinstance(c, Top) and t.ineq is Ineq.LE and n < ONE:
            return Clash("top", node.id, (t,))
        if isinstance(c, Top) and t.ineq is Ineq.LT:
            return Clash("top", node.id, (t,))
        if t.ineq is Ineq.LT and n == ZERO:
            return Clash("interval", node.id, (t,))
        if t.ineq is Ineq.GT and n == ONE:
            return Clash("interval", node.id, (t,))
        if t.ineq is Ineq.LE and n < ZERO:
            return Clash("interval", node.id, (t,))
        if t.ineq is Ineq.GE and n > ONE:
            return Clash("interval", node.id, (t,))
    for i, t1 in enumerate(label):
        for t2 in label[i + 1 :]:
            if t1.subject == t2.subject and conjugates(t1.bound(), t2.bound()):
                return Clash("conjugated-pair", node.id, (t1, t2))
    return None


def _directed_edge_triples(f: Forest, a: int, b: int) -> list[Triple]:
    out = list(f.edges.get((a, b), ()))
    out.extend(inv_triple(t) for t in f.edges.get((b, a), ()))
    return sorted(out, key=triple_key)


def _edge_clash(f: Forest) -> Optional[Clash]:
    pairs = sorted({(min(a, b), max(a, b)) for a, b in f.edges})
    for a, b in pairs:
        ts = _directed_edge_triples(f, a, b)
        for t in ts:
            n = t.degree
            if (
                t.ineq is Ineq.LT and n == ZERO
                or t.ineq is Ineq.GT and n == ONE
                or t.ineq is Ineq.LE and n < ZERO
                or t.ineq is Ineq.GE and n > ONE
            ):
                return Clash("interval", (a, b), (t,))
        for t1 in ts:
            if not t1.ineq.positive:
                continue
            for t2 in ts:
                if t2.ineq.positive:
                    continue
                if f.rbox.includes(t1.subject, t2.subject) and conjugates(t1.bound(), t2.bound()):
                    return Clash("edge", (a, b), (t1, t2))
    return None


def _has_pairwise_distinct(f: Forest, members: list[int], k: int) -> bool:
    if k <= 0:
        return True
    if len(members) < k:
        return False
    for combo in itertools.combinations(members, k):
        if all(frozenset((u, v)) in f.neq for u, v in itertools.combinations(combo, 2)):
            return True
    return False


def _counting_clash(f: Forest, node: Node) -> Optional[Clash]:
    for t in f.sorted_label(node):
        c = t.subject
        if isinstance(c, AtMost) and t.ineq.positive:
            probe = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
            members = f.conjugated_neighbours(node.id, c.role, probe)
            if _has_pairwise_distinct(f, members, c.count + 1):
                return Clash("at-most", node.id, (t,))
        if isinstance(c, AtLeast) and t.ineq.negative:
            if c.count == 0:
                # (>= 0 R) is identically 1
                if not t.ineq.holds(ONE, t.degree):
                    return Clash("at-least", node.id, (t,))
                continue
            probe = SignedBound(t.ineq, t.degree)
            members = f.conjugated_neighbours(node.id, c.role, probe)
            if _has_pairwise_distinct(f, members, c.count):
                return Clash("at-least", node.id, (t,))
    return None


def find_clash(f: Forest) -> Optional[Clash]:
    for pair in f.neq:
        if len(pair) == 1:
            return Clash("distinct-self", next(iter(pair)), ())
    for node in f.ordered_nodes():
        clash = _concept_clash(f, node)
        if clash:
            return clash
    clash = _edge_clash(f)
    if clash:
        return clash
    if f.mode in ("shin", "gci"):
        for node in f.ordered_nodes():
            clash = _counting_clash(f, node)
            if clash:
                return clash
    return None


# --- deterministic rules ---


def _rule_negation(f: Forest, status, node: Node) -> bool:
    for t in f.sorted_label(node):
        if isinstance(t.subject, Not):
            derived = Triple(t.subject.arg, reflect(t.ineq), neg_lukasiewicz(t.degree))
            if derived not in node.label:
                return f.add_triple(node.id, derived, "negation")
    return False


def _rule_decompose(f: Forest, status, node: Node) -> bool:
    if status[node.id][0] == INDIRECT:
        return False
    for t in f.sorted_label(node):
        c = t.subject
        if isinstance(c, And) and t.ineq.positive or isinstance(c, Or) and t.ineq.negative:
            for part in (c.left, c.right):
                derived = Triple(part, t.ineq, t.degree)
                if derived not in node.label:
                    rule = "and-pos" if isinstance(c, And) else "or-neg"
                    return f.add_triple(node.id, derived, rule)
    return False


def _rule_forall_pos(f: Forest, status, node: Node) -> bool:
    if status[node.id][0] == INDIRECT:
        return False
    for t in f.sorted_label(node):
        c = t.subject
        if not (isinstance(c, Forall) and t.ineq.positive):
            continue
        probe = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
        derived = Triple(c.body, t.ineq, t.degree)
        for y, b in f.neighbour_bounds(node.id, c.role):
            if conjugates(b, probe) and derived not in f.nodes[y].label:
                return f.add_triple(y, derived, "forall-pos")
    return False


def _rule_exists_neg(f: Forest, status, node: Node) -> bool:
    if status[node.id][0] == INDIRECT:
        return False
    for t in f.sorted_label(node):
        c = t.subject
        if not (isinstance(c, Exists) and t.ineq.negative):
            continue
        probe = SignedBound(t.ineq, t.degree)
        derived = Triple(c.body, t.ineq, t.degree)
        for y, b in f.neighbour_bounds(node.id, c.role):
            if conjugates(b, probe) and derived not in f.nodes[y].label:
                return f.add_triple(y, derived, "exists-neg")
    return False


def _transitive_subroles(f: Forest, s: Role) -> list[Role]:
    return sorted(
        (r for r in f.rbox.subroles(s) if f.rbox.is_transitive(r)),
        key=str,
    )


def _rule_forall_trans(f: Forest, status, node: Node) -> bool:
    if status[node.id][0] == INDIRECT:
        return False
    for t in f.sorted_label(node):
        c = t.subject
        if not (isinstance(c, Forall) and t.ineq.positive):
            continue
        probe = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
        for r in _transitive_subroles(f, c.role):
            derived = Triple(Forall(r, c.body), t.ineq, t.degree)
            for y, b in f.neighbour_bounds(node.id, r):
                if conjugates(b, probe) and derived not in f.nodes[y].label:
                    return f.add_triple(y, derived, "forall-trans")
    return False


def _rule_exists_trans(f: Forest, status, node: Node) -> bool:
    if status[node.id][0] == INDIRECT:
        return False
    for t in f.sorted_label(node):
        c = t.subject
        if not (isinstance(c, Exists) and t.ineq.negative):
            continue
        probe = SignedBound(t.ineq, t.degree)
        for r in _transitive_subroles(f, c.role):
            derived = Triple(Exists(r, c.body), t.ineq, t.degree)
            for y, b in f.neighbour_bounds(node.id, r):
                if conjugates(b, probe) and derived not in f.nodes[y].label:
                    return f.add_triple(y, derived, "exists-trans")
    return False


def _generate_node(f: Forest, x: int, edge: Triple, label: Triple, rule: str) -> None:
    y = f.new_node(is_root=False, parent=x)
    f.edges[(x, y.id)] = {edge}
    y.label.add(label)
    f.trace.append(("new-node", rule, x, y.id, edge, label))


def _rule_exists_pos(f: Forest, status) -> bool:
    for node in f.ordered_nodes():
        if status[node.id][0] != UNBLOCKED:
            continue
        for t in f.sorted_label(node):
            c = t.subject
            if not (isinstance(c, Exists) and t.ineq.positive):
                continue
            bound = SignedBound(t.ineq, t.degree)
            derived = Triple(c.body, t.ineq, t.degree)
            if f.has_exact_neighbour(node.id, c.role, bound, derived):
                continue
            f.budget.charge()
            _generate_node(f, node.id, Triple(c.role, t.ineq, t.degree), derived, "exists-pos")
            return True
    return False


def _rule_forall_neg(f: Forest, status) -> bool:
    for node in f.ordered_nodes():
        if status[node.id][0] != UNBLOCKED:
            continue
        for t in f.sorted_label(node):
            c = t.subject
            if not (isinstance(c, Forall) and t.ineq.negative):
                continue
            edge_bound = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
            derived = Triple(c.body, t.ineq, t.degree)
            if f.has_exact_neighbour(node.id, c.role, edge_bound, derived):
                continue
            f.budget.charge()
            _generate_node(
                f,
                node.id,
                Triple(c.role, edge_bound.ineq, edge_bound.degree),
                derived,
                "forall-neg",
            )
            return True
    return False


def _atleast_instances(f: Forest, node: Node) -> Iterator[tuple[Triple, AtLeast, SignedBound, str]]:
    """Positive at-least triples plus negative at-most triples rewritten to
    their at-least counterpart (the <=-neg rule delegates to >=-pos)."""
    for t in f.sorted_label(node):
        c = t.subject
        if isinstance(c, AtLeast) and t.ineq.positive and c.count >= 1:
            yield t, c, SignedBound(t.ineq, t.degree), "atleast-pos"
        if isinstance(c, AtMost) and t.ineq.negative:
            synth = AtLeast(c.count + 1, c.role)
            yield t, synth, SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree)), "atmost-neg"


def _rule_atleast(f: Forest, status) -> bool:
    if f.mode not in ("shin", "gci"):
        return False
    for node in f.ordered_nodes():
        if status[node.id][0] != UNBLOCKED:
            continue
        for _, c, bound, rule in _atleast_instances(f, node):
            members = [y for y, b in f.neighbour_bounds(node.id, c.role) if b == bound]
            members = sorted(set(members))
            if _has_pairwise_distinct(f, members, c.count):
                continue
            created = []
            for _ in range(c.count):
                f.budget.charge()
                y = f.new_node(is_root=False, parent=node.id)
                f.edges[(node.id, y.id)] = {Triple(c.role, bound.ineq, bound.degree)}
                created.append(y.id)
            for u, v in itertools.combinations(created, 2):
                f.neq.add(frozenset((u, v)))
            f.trace.append(("new-nodes", rule, node.id, tuple(created)))
            return True
    return False


# --- merge choice points ---


def _atmost_instances(f: Forest, node: Node) -> Iterator[tuple[AtMost, SignedBound, str]]:
    """Positive at-most triples plus negative at-least triples rewritten to
    their at-most counterpart (the >=-neg rule delegates to <=-pos)."""
    for t in f.sorted_label(node):
        c = t.subject
        if isinstance(c, AtMost) and t.ineq.positive:
            yield c, SignedBound(t.ineq, t.degree), "atmost-merge"
        if isinstance(c, AtLeast) and t.ineq.negative and c.count >= 1:
            synth = AtMost(c.count - 1, c.role)
            yield synth, SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree)), "atleast-merge"


def _merge_pairs(
    f: Forest, x: int, members: list[int], roots_only: bool
) -> list[tuple[str, int, int, int]]:
    out = []
    for z in members:
        for y in sorted(members, reverse=True):
            if y == z or frozenset((y, z)) in f.neq:
                continue
            ny, nz = f.nodes[y], f.nodes[z]
            if roots_only:
                if ny.is_root and nz.is_root:
                    out.append(("merge_root", x, y, z))
            else:
                if ny.is_root:
                    continue
                # the pruned node must hang below x so its edge can be
                # transferred and emptied
                if ny.parent != x:
                    continue
                if f.is_ancestor(y, z):
                    continue
                out.append(("merge", x, y, z))
    return out


def _merge_choice(f: Forest, status) -> Optional[ChoicePoint]:
    for roots_only in (False, True):
        for node in f.ordered_nodes():
            if status[node.id][0] == INDIRECT:
                continue
            for c, bound, rule in _atmost_instances(f, node):
                probe = SignedBound(reflect(bound.ineq), neg_lukasiewicz(bound.degree))
                members = f.conjugated_neighbours(node.id, c.role, probe)
                if len(members) <= c.count:
                    continue
                pairs = _merge_pairs(f, node.id, members, roots_only)
                if pairs:
                    name = rule + ("-roots" if roots_only else "")
                    return ChoicePoint(name, node.id, (c, bound), tuple(pairs))
    return None


def _apply_merge(f: Forest, x: int, y: int, z: int) -> None:
    ynode, znode = f.nodes[y], f.nodes[z]
    znode.label |= ynode.label
    xy = f.edges[(x, y)]
    f.union_edge(x, z, set(xy))
    f.edges[(x, y)] = set()
    for pair in [p for p in f.neq if y in p]:
        others = set(pair) - {y}
        f.neq.add(frozenset(others | {z}))
    f.trace.append(("merge", x, y, z))


def _apply_root_merge(f: Forest, x: int, y: int, z: int) -> None:
    ynode, znode = f.nodes[y], f.nodes[z]
    znode.label |= ynode.label
    for (a, b) in [e for e in list(f.edges) if y in e]:
        ts = f.edges.pop((a, b))
        if a == y and b == y:
            f.union_edge(z, z, ts)
        elif a == y:
            f.union_edge(z, b, ts)
        else:
            f.union_edge(a, z, ts)
    for node in f.nodes.values():
        if node.parent == y:
            node.parent = z
    ynode.label = set()
    for pair in [p for p in f.neq if y in p]:
        others = set(pair) - {y}
        f.neq.add(frozenset(others | {z}))
    f.merged[y] = z
    f.trace.append(("merge-root", x, y, z))


# --- nondeterministic concept choices ---


def _split_choice(f: Forest, status) -> Optional[ChoicePoint]:
    for node in f.ordered_nodes():
        if status[node.id][0] == INDIRECT:
            continue
        for t in f.sorted_label(node):
            c = t.subject
            if isinstance(c, Or) and t.ineq.positive or isinstance(c, And) and t.ineq.negative:
                alts = (
                    ("add", node.id, Triple(c.left, t.ineq, t.degree)),
                    ("add", node.id, Triple(c.right, t.ineq, t.degree)),
                )
                if any(a[2] in node.label for a in alts):
                    continue
                rule = "or-pos" if isinstance(c, Or) else "and-neg"
                return ChoicePoint(rule, node.id, t, alts)
    return None


def _gci_choice(f: Forest, status) -> Optional[ChoicePoint]:
    if not f.gcis:
        return None
    for node in f.ordered_nodes():
        if node.id in f.merged or status[node.id][0] == INDIRECT:
            continue
        for n in f.xa:
            for idx, (lhs, rhs) in enumerate(f.gcis):
                t1 = Triple(lhs, Ineq.LE, n - f.ell)
                t2 = Triple(rhs, Ineq.GE, n)
                if t1 in node.label or t2 in node.label:
                    continue
                alts = (("add", node.id, t1), ("add", node.id, t2))
                return ChoicePoint("gci", node.id, (idx, n), alts)
    return None


# --- search ---


_DETERMINISTIC = (
    _rule_negation,
    _rule_decompose,
    _rule_forall_pos,
    _rule_exists_neg,
    _rule_forall_trans,
    _rule_exists_trans,
)

_GENERATORS = (_rule_exists_pos, _rule_forall_neg, _rule_atleast)


@dataclass
class ExpandResult:
    kind: str  # "complete", "clash", "choice"
    clash: Optional[Clash] = None
    choice: Optional[ChoicePoint] = None


def expand(f: Forest) -> ExpandResult:
    """Run deterministic rules to fixpoint; stop at a clash or at the first
    nondeterministic choice in priority order."""
    while True:
        f.budget.charge()
        status = f.blocking()
        f._trace_block_changes(status)
        clash = find_clash(f)
        if clash:
            f.trace.append(("clash", clash))
            return ExpandResult("clash", clash=clash)
        # node-major: exhaust one node's propagations before the next node's
        if any(
            rule(f, status, node)
            for node in f.ordered_nodes()
            for rule in _DETERMINISTIC
        ):
            continue
        if f.mode in ("shin", "gci"):
            cp = _merge_choice(f, status)
            if cp:
                return ExpandResult("choice", choice=cp)
        if any(rule(f, status) for rule in _GENERATORS):
            continue
        cp = _split_choice(f, status) or _gci_choice(f, status)
        if cp:
            return ExpandResult("choice", choice=cp)
        return ExpandResult("complete")


def apply_alternative(f: Forest, alt: tuple) -> None:
    if alt[0] == "add":
        _, node, triple = alt
        f.add_triple(node, triple, "choice")
    elif alt[0] == "merge":
        _, x, y, z = alt
        _apply_merge(f, x, y, z)
    elif alt[0] == "merge_root":
        _, x, y, z = alt
        _apply_root_merge(f, x, y, z)
    else:  # pragma: no cover
        raise ValueError(f"unknown alternative {alt!r}")


@dataclass
class SolveResult:
    consistent: bool
    forest: Optional[Forest]  # complete clash-free forest when consistent
    first_clash_forest: Optional[Forest]
    trace: list


def solve(f: Forest) -> SolveResult:
    """Depth-first chronological backtracking over choice points."""
    first_clash: Optional[Forest] = None
    # frames: [base forest, choice point, index of next alternative]
    stack: list[list] = []
    current = f
    while True:
        result = expand(current)
        if result.kind == "complete":
            return SolveResult(True, current, first_clash, current.trace)
        if result.kind == "choice":
            cp = result.choice
            stack.append([current, cp, 0])
        else:  # clash
            if first_clash is None:
                first_clash = current
            while stack and stack[-1][2] >= len(stack[-1][1].alternatives):
                stack.pop()
            if not stack:
                f.trace.append(("exhausted",))
                return SolveResult(False, None, first_clash, f.trace)
        base, cp, idx = stack[-1]
        stack[-1][2] = idx + 1
        current = base.clone()
        current.trace.append(("branch", cp.rule, cp.node, idx, cp.alternatives[idx]))
        apply_alternative(current, cp.alternatives[idx])


# --- model extraction (SI soundness construction) ---


class NotApplicable(Exception):
    """Model extraction is only defined for SI-mode forests."""


def _glb_value(bounds: list[SignedBound], eps: Degree) -> Degree:
    positives = [b for b in bounds if b.ineq.positive]
    if not positives:
        return ZERO
    top = max(b.degree for b in positives)
    if any(b.degree == top and b.ineq is Ineq.GT for b in positives):
        return top + eps
    return top


def extract_model(f: Forest):
    """Finite witnessed interpretation read off a complete clash-free SI
    forest: non-blocked nodes form the domain, degrees are the least values
    compatible with the labels (a strict lower bound gets a small exact
    bump), edges to blocked nodes are redirected to their blockers, and
    transitive roles are closed under sup-min composition."""
    from .kb import compute_ell
    from .oracle import FuzzyInterpretation
    from .syntax import subconcepts

    if f.mode != "si":
        raise NotApplicable("model extraction requires an SI-mode forest")
    status = f.blocking()
    domain = tuple(i for i in sorted(f.nodes) if status[i][0] == UNBLOCKED)

    pool: set[Degree] = set()
    for node in f.nodes.values():
        pool.update(t.degree for t in node.label)
    for lab in f.edges.values():
        pool.update(t.degree for t in lab)
    eps = compute_ell(pool)

    cnames: set[str] = set()
    for node in f.nodes.values():
        for t in node.label:
            for sub in subconcepts(t.subject):
                if isinstance(sub, Name):
                    cnames.add(sub.id)

    concept_map: dict[tuple[str, int], Degree] = {
        (name, e): ZERO for name in cnames for e in domain
    }
    for e in domain:
        for name in cnames:
            bounds = [t.bound() for t in f.nodes[e].label if t.subject == Name(name)]
            if bounds:
                concept_map[(name, e)] = _glb_value(bounds, eps)

    rnames: set[str] = set(f.rbox.transitive)
    for lab in f.edges.values():
        for t in lab:
            rnames.add(t.subject.name)

    bounds_by_pair: dict[tuple[str, int, int], list[SignedBound]] = {}
    for (u, v), lab in f.edges.items():
        if u not in domain:
            continue
        if v in domain:
            target = v
        elif status[v][0] == DIRECT:
            target = status[v][1]
        else:
            continue
        for t in lab:
            role = t.subject
            pair = (target, u) if role.inverted else (u, target)
            bounds_by_pair.setdefault((role.name, *pair), []).append(t.bound())

    role_map: dict[tuple[str, int, int], Degree] = {
        (name, a, b): ZERO for name in rnames for a in domain for b in domain
    }
    for key, bounds in bounds_by_pair.items():
        role_map[key] = _glb_value(bounds, eps)

    for name in sorted(f.rbox.transitive):
        changed = True
        while changed:
            changed = False
            for a, b, c in itertools.product(domain, repeat=3):
                through = min(role_map[(name, a, b)], role_map[(name, b, c)])
                if role_map[(name, a, c)] < through:
                    role_map[(name, a, c)] = through
                    changed = True

    individual_map = {
        node.root_name: node.id
        for node in f.nodes.values()
        if node.is_root and node.root_name is not None
    }
    return FuzzyInterpretation(domain, concept_map, role_map, individual_map)


# --- property audit ---


def audit_properties(f: Forest, abox: Optional[ABox] = None) -> list[str]:
    """Independent re-check of the completeness/coherence properties a
    complete clash-free forest must satisfy, read as a tableau over
    non-blocked nodes.  Returns human-readable violations (empty = pass)."""
    out: list[str] = []
    status = f.blocking()
    clash = find_clash(f)
    if clash:
        out.append(f"clash present: {clash}")

    for node in f.ordered_nodes():
        blocked_kind = status[node.id][0]
        for t in f.sorted_label(node):
            c = t.subject
            if isinstance(c, Not):
                want = Triple(c.arg, reflect(t.ineq), neg_lukasiewicz(t.degree))
                if want not in node.label:
                    out.append(f"negation not pushed at {node.id}: {t}")
            if blocked_kind == INDIRECT:
                continue
            if isinstance(c, And) and t.ineq.positive or isinstance(c, Or) and t.ineq.negative:
                for part in (c.left, c.right):
                    if Triple(part, t.ineq, t.degree) not in node.label:
                        out.append(f"decomposition incomplete at {node.id}: {t}")
            if isinstance(c, Or) and t.ineq.positive or isinstance(c, And) and t.ineq.negative:
                if not any(
                    Triple(part, t.ineq, t.degree) in node.label for part in (c.left, c.right)
                ):
                    out.append(f"split unresolved at {node.id}: {t}")
            if isinstance(c, Forall) and t.ineq.positive:
                probe = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
                want = Triple(c.body, t.ineq, t.degree)
                for y, b in f.neighbour_bounds(node.id, c.role):
                    if conjugates(b, probe) and want not in f.nodes[y].label:
                        out.append(f"universal not propagated from {node.id} to {y}: {t}")
                for r in _transitive_subroles(f, c.role):
                    want_r = Triple(Forall(r, c.body), t.ineq, t.degree)
                    for y, b in f.neighbour_bounds(node.id, r):
                        if conjugates(b, probe) and want_r not in f.nodes[y].label:
                            out.append(
                                f"transitive universal not propagated from {node.id} to {y}: {t}"
                            )
            if isinstance(c, Exists) and t.ineq.negative:
                probe = SignedBound(t.ineq, t.degree)
                want = Triple(c.body, t.ineq, t.degree)
                for y, b in f.neighbour_bounds(node.id, c.role):
                    if conjugates(b, probe) and want not in f.nodes[y].label:
                        out.append(f"negated existential not propagated from {node.id} to {y}: {t}")
                for r in _transitive_subroles(f, c.role):
                    want_r = Triple(Exists(r, c.body), t.ineq, t.degree)
                    for y, b in f.neighbour_bounds(node.id, r):
                        if conjugates(b, probe) and want_r not in f.nodes[y].label:
                            out.append(
                                f"transitive negated existential not propagated "
                                f"from {node.id} to {y}: {t}"
                            )
            if blocked_kind != UNBLOCKED:
                continue
            if isinstance(c, Exists) and t.ineq.positive:
                if not f.has_exact_neighbour(
                    node.id, c.role, t.bound(), Triple(c.body, t.ineq, t.degree)
                ):
                    out.append(f"existential without witness at {node.id}: {t}")
            if isinstance(c, Forall) and t.ineq.negative:
                bound = SignedBound(reflect(t.ineq), neg_lukasiewicz(t.degree))
                if not f.has_exact_neighbour(
                    node.id, c.role, bound, Triple(c.body, t.ineq, t.degree)
                ):
                    out.append(f"negated universal without witness at {node.id}: {t}")
        if blocked_kind == UNBLOCKED:
            for _, c, bound, _ in _atleast_instances(f, node):
                members = sorted(
                    {y for y, b in f.neighbour_bounds(node.id, c.role) if b == bound}
                )
                if not _has_pairwise_distinct(f, members, c.count):
                    out.append(f"at-least unsatisfied at {node.id}: >= {c.count} {c.role}")
        if blocked_kind != INDIRECT:
            for c, bound, _ in _atmost_instances(f, node):
                probe = SignedBound(reflect(bound.ineq), neg_lukasiewicz(bound.degree))
                members = f.conjugated_neighbours(node.id, c.role, probe)
                if len(members) > c.count:
                    if _merge_pairs(f, node.id, members, False) or _merge_pairs(
                        f, node.id, members, True
                    ):
                        out.append(f"at-most merge still applicable at {node.id}")
            if f.gcis and node.id not in f.merged:
                for n in f.xa:
                    for lhs, rhs in f.gcis:
                        t1 = Triple(lhs, Ineq.LE, n - f.ell)
                        t2 = Triple(rhs, Ineq.GE, n)
                        if t1 not in node.label and t2 not in node.label:
                            out.append(f"inclusion split unresolved at {node.id} for degree {n}")

    if abox is not None:
        roots = {
            node.root_name: node.id
            for node in f.nodes.values()
            if node.is_root and node.root_name is not None
        }

        def resolve(i: int) -> int:
            while i in f.merged:
                i = f.merged[i]
            return i

        for ca in abox.concept_assertions:
            node = f.nodes[resolve(roots[ca.individual])]
            if Triple(ca.concept, ca.bound.ineq, ca.bound.degree) not in node.label:
                out.append(f"initial assertion missing at root {ca.individual}")
        for ra in abox.role_assertions:
            a = resolve(roots[ra.subject])
            b = resolve(roots[ra.object])
            t = Triple(ra.role, ra.bound.ineq, ra.bound.degree)
            if t not in _directed_edge_triples(f, a, b):
                out.append(f"initial role assertion missing on ({ra.subject},{ra.object})")
    return out
