"""Textual KB format (.fkb): tokenizer, parser, and canonical serializer.

Statement forms, each terminated by ".":

    define NAME (subsumed-by|equiv) concept
    implies concept concept          # general inclusion lhs (= rhs
    trans role
    subrole role role
    assert NAME : concept CMP degree
    assert ( NAME , NAME ) : role CMP degree
    distinct NAME NAME

Concepts use keywords top, bottom, not, and, or, some, all and number
restrictions ">= INT role" / "<= INT role"; "and" binds tighter than "or",
quantifier bodies bind tightly (write "some r.(A and B)" for a complex
body).  Roles are NAME or NAME- (inverse).  CMP is >=, >, <=, < or =,
where "=" stores the >=/<= pair.  Degrees are decimals, integers, or p/q
fractions, all read exactly.  Comments run from "#" to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .degrees import Degree, Ineq, ONE, SignedBound, ZERO, format_degree
from .kb import ConceptAssertion, FuzzyKB, RoleAssertion
from .syntax import (
    And,
    AtLeast,
    AtMost,
    BOTTOM,
    Concept,
    Exists,
    Forall,
    Name,
    Not,
    Or,
    Role,
    TOP,
    concept_text,
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(f"{span}: {message}" if span else message)
        self.message = message
        self.span = span


KEYWORDS = {
    "define", "subsumed-by", "equiv", "implies", "trans", "subrole",
    "assert", "distinct", "top", "bottom", "not", "and", "or", "some", "all",
}

_SYMBOLS = (">=", "<=", "⊑", "≡", "(", ")", ":", ",", ".", "-", ">", "<", "=", "/")


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "keyword", "int", "decimal", "sym", "eof"
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        span = SourceSpan(line, col, i)
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(Token("decimal", text[i:j], span))
            else:
                toks.append(Token("int", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_"):
                j += 1
            # the one hyphenated keyword
            if text[i:j] == "subsumed" and text[j : j + 3] == "-by":
                j += 3
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "name"
            toks.append(Token(kind, word, span))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, span))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", span)
    toks.append(Token("eof", "", SourceSpan(line, col, n)))
    return toks


_CMP = {">=": Ineq.GE, ">": Ineq.GT, "<=": Ineq.LE, "<": Ineq.LT}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise self.fail(f"expected {want!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    # --- degrees, roles, concepts ---

    def degree(self) -> Degree:
        tok = self.peek()
        if tok.kind == "decimal":
            self.next()
            value = Fraction(tok.text)
        elif tok.kind == "int":
            self.next()
            value = Fraction(int(tok.text))
            if self.at("sym", "/"):
                self.next()
                den = self.expect("int")
                value = value / int(den.text)
        else:
            raise self.fail("expected a degree")
        if not ZERO <= value <= ONE:
            raise ParseError(f"degree {format_degree(value)} outside [0,1]", tok.span)
        return value

    def role(self) -> Role:
        name = self.expect("name")
        if self.at("sym", "-"):
            self.next()
            return Role(name.text, inverted=True)
        return Role(name.text)

    def concept(self) -> Concept:
        left = self.conjunction()
        while self.at("keyword", "or"):
            self.next()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Concept:
        left = self.primary()
        while self.at("keyword", "and"):
            self.next()
            left = And(left, self.primary())
        return left

    def primary(self) -> Concept:
        tok = self.peek()
        if tok.kind == "keyword":
            if tok.text == "top":
                self.next()
                return TOP
            if tok.text == "bottom":
                self.next()
                return BOTTOM
            if tok.text == "not":
                self.next()
                return Not(self.primary())
            if tok.text in ("some", "all"):
                self.next()
                role = self.role()
                self.expect("sym", ".")
                body = self.primary()
                return Exists(role, body) if tok.text == "some" else Forall(role, body)
            raise self.fail(f"unexpected keyword {tok.text!r} in concept")
        if tok.kind == "name":
            self.next()
            return Name(tok.text)
        if tok.kind == "sym" and tok.text == "(":
            self.next()
            inner = self.concept()
            self.expect("sym", ")")
            return inner
        if tok.kind == "sym" and tok.text in (">=", "<="):
            self.next()
            count = self.expect("int")
            role = self.role()
            if tok.text == ">=":
                return AtLeast(int(count.text), role)
            return AtMost(int(count.text), role)
        raise self.fail(f"expected a concept, found {tok.text or 'end of input'!r}")

    def bounds(self) -> list[SignedBound]:
        tok = self.peek()
        if tok.kind == "sym" and tok.text in _CMP:
            self.next()
            return [SignedBound(_CMP[tok.text], self.degree())]
        if tok.kind == "sym" and tok.text == "=":
            self.next()
            d = self.degree()
            return [SignedBound(Ineq.GE, d), SignedBound(Ineq.LE, d)]
        raise self.fail("expected a comparison (>=, >, <=, <, =)")

    # --- statements ---

    def kb(self) -> FuzzyKB:
        out = FuzzyKB()
        while not self.at("eof"):
            self.statement(out)
            self.expect("sym", ".")
        return out

    def statement(self, out: FuzzyKB) -> None:
        tok = self.peek()
        if tok.kind != "keyword":
            raise self.fail(f"expected a statement, found {tok.text or 'end of input'!r}")
        if tok.text == "define":
            self.next()
            name = self.expect("name")
            kind_tok = self.next()
            if (kind_tok.kind, kind_tok.text) in (("keyword", "subsumed-by"), ("sym", "⊑")):
                kind = "sub"
            elif (kind_tok.kind, kind_tok.text) in (("keyword", "equiv"), ("sym", "≡")):
                kind = "equiv"
            else:
                raise ParseError("expected 'subsumed-by' or 'equiv'", kind_tok.span)
            if name.text in out.tbox.definitions:
                raise ParseError(f"duplicate definition of {name.text!r}", name.span)
            out.tbox.definitions[name.text] = (kind, self.concept())
        elif tok.text == "implies":
            self.next()
            lhs = self.concept()
            rhs = self.concept()
            out.tbox.gcis.append((lhs, rhs))
        elif tok.text == "trans":
            self.next()
            role = self.role()
            out.rbox.transitive.add(role.name)
        elif tok.text == "subrole":
            self.next()
            sub = self.role()
            sup = self.role()
            out.rbox.inclusions.add((sub, sup))
        elif tok.text == "assert":
            self.next()
            self.assertion(out)
        elif tok.text == "distinct":
            self.next()
            a = self.expect("name")
            b = self.expect("name")
            out.abox.inequalities.add(frozenset((a.text, b.text)))
        else:
            raise self.fail(f"unexpected keyword {tok.text!r}")

    def assertion(self, out: FuzzyKB) -> None:
        if self.at("sym", "("):
            self.next()
            a = self.expect("name")
            self.expect("sym", ",")
            b = self.expect("name")
            self.expect("sym", ")")
            self.expect("sym", ":")
            role = self.role()
            for bound in self.bounds():
                out.abox.role_assertions.append(RoleAssertion(a.text, b.text, role, bound))
        else:
            a = self.expect("name")
            self.expect("sym", ":")
            concept = self.concept()
            for bound in self.bounds():
                out.abox.concept_assertions.append(ConceptAssertion(a.text, concept, bound))


def parse_kb(text: str) -> FuzzyKB:
    return _Parser(text).kb()


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    p.expect("eof")
    return c


Query = Union[tuple[str, Concept], tuple[str, str, Role]]


def parse_query(text: str) -> tuple[Query, Optional[SignedBound]]:
    """Query syntax for the CLI: "a : C [CMP degree]", "(a): C ...", or
    "(a,b): r [CMP degree]".  "=" bounds are not accepted here."""
    p = _Parser(text)
    if p.at("sym", "("):
        p.next()
        a = p.expect("name")
        if p.at("sym", ","):
            p.next()
            b = p.expect("name")
            p.expect("sym", ")")
            p.expect("sym", ":")
            role = p.role()
            subject: Query = (a.text, b.text, role)
        else:
            p.expect("sym", ")")
            p.expect("sym", ":")
            subject = (a.text, p.concept())
    else:
        a = p.expect("name")
        p.expect("sym", ":")
        subject = (a.text, p.concept())
    bound: Optional[SignedBound] = None
    if not p.at("eof"):
        tok = p.peek()
        if tok.kind == "sym" and tok.text in _CMP:
            p.next()
            bound = SignedBound(_CMP[tok.text], p.degree())
        else:
            raise p.fail("expected a comparison or end of query")
    p.expect("eof")
    return subject, bound


# --- serialization ---


def _role_text(r: Role) -> str:
    return str(r)


def serialize_kb(kb: FuzzyKB) -> str:
    lines: list[str] = []
    for name, (kind, body) in kb.tbox.definitions.items():
        word = "subsumed-by" if kind == "sub" else "equiv"
        lines.append(f"define {name} {word} {concept_text(body)}.")
    for lhs, rhs in kb.tbox.gcis:
        lines.append(f"implies {concept_text(lhs)} {concept_text(rhs)}.")
    for name in sorted(kb.rbox.transitive):
        lines.append(f"trans {name}.")
    for sub, sup in sorted(kb.rbox.inclusions, key=lambda p: (str(p[0]), str(p[1]))):
        lines.append(f"subrole {_role_text(sub)} {_role_text(sup)}.")
    for ca in kb.abox.concept_assertions:
        lines.append(
            f"assert {ca.individual} : {concept_text(ca.concept)} "
            f"{ca.bound.ineq} {format_degree(ca.bound.degree)}."
        )
    for ra in kb.abox.role_assertions:
        lines.append(
            f"assert ({ra.subject},{ra.object}) : {_role_text(ra.role)} "
            f"{ra.bound.ineq} {format_degree(ra.bound.degree)}."
        )
    for pair in sorted(kb.abox.inequalities, key=sorted):
        names = sorted(pair)
        a = names[0]
        b = names[-1]
        lines.append(f"distinct {a} {b}.")
    return "\n".join(lines) + ("\n" if lines else "")
