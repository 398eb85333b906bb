"""Indexed in-memory triple store with basic-graph-pattern matching.

The store has set semantics and four indexes (subject, predicate, object,
predicate+object).  Iteration order everywhere is insertion order, never
hash order, so query results are deterministic across processes.

BGP evaluation joins patterns most-selective-first: at each step the
remaining pattern with the cheapest index estimate (given the variables
already bound) is evaluated next via index lookups.
"""

from dataclasses import dataclass
from datetime import datetime

from .errors import IncomparableTermsError
from .terms import Iri, PlainLiteral, Term, Triple, TypedLiteral, NUMERIC_DATATYPES, XSD_DATETIME
from .timeutil import parse_instant


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"?{self.name}"


PatternTerm = Term | Var


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def positions(self):
        return (self.subject, self.predicate, self.object)

    def variables(self) -> set[str]:
        return {p.name for p in self.positions() if isinstance(p, Var)}


BindingSet = dict[str, Term]


def compare_terms(a: Term, b: Term) -> int:
    """Total order within a comparable class; returns <0, 0, or >0.

    Comparable classes: two xsd:dateTime literals (by instant), two numeric
    literals (by value), two plain literals (by string).  IRIs support
    equality only.  Anything else raises IncomparableTermsError, which query
    filters treat as false.
    """
    if isinstance(a, Iri) and isinstance(b, Iri):
        if a.value == b.value:
            return 0
        raise IncomparableTermsError("IRIs have no order, only equality")
    if isinstance(a, TypedLiteral) and isinstance(b, TypedLiteral):
        if a.datatype == XSD_DATETIME and b.datatype == XSD_DATETIME:
            try:
                da, db = parse_instant(a.lexical), parse_instant(b.lexical)
            except ValueError as exc:
                raise IncomparableTermsError(f"malformed dateTime literal: {exc}") from None
            return (da > db) - (da < db)
        if a.datatype in NUMERIC_DATATYPES and b.datatype in NUMERIC_DATATYPES:
            try:
                na, nb = float(a.lexical), float(b.lexical)
            except ValueError as exc:
                raise IncomparableTermsError(f"malformed numeric literal: {exc}") from None
            return (na > nb) - (na < nb)
        raise IncomparableTermsError(
            f"cannot compare literals of datatypes {a.datatype.value} and {b.datatype.value}"
        )
    if isinstance(a, PlainLiteral) and isinstance(b, PlainLiteral):
        return (a.value > b.value) - (a.value < b.value)
    raise IncomparableTermsError(f"cannot compare {type(a).__name__} with {type(b).__name__}")


def datetime_value(term: Term) -> datetime | None:
    """Instant of an xsd:dateTime literal, or None when term is not one."""
    if isinstance(term, TypedLiteral) and term.datatype == XSD_DATETIME:
        try:
            return parse_instant(term.lexical)
        except ValueError:
            return None
    return None


class TripleStore:
    def __init__(self, triples=()):
        # dicts double as insertion-ordered sets
        self._triples: dict[Triple, None] = {}
        self._by_s: dict[Term, dict[Triple, None]] = {}
        self._by_p: dict[Term, dict[Triple, None]] = {}
        self._by_o: dict[Term, dict[Triple, None]] = {}
        self._by_po: dict[tuple[Term, Term], dict[Triple, None]] = {}
        self._frozen = False
        for t in triples:
            self.insert(t)

    def __len__(self):
        return len(self._triples)

    def __iter__(self):
        return iter(self._triples)

    def __contains__(self, triple: Triple):
        return triple in self._triples

    def insert(self, triple: Triple) -> "TripleStore":
        """Add a triple; duplicates are ignored (set semantics)."""
        if self._frozen:
            raise RuntimeError("store is frozen")
        if triple in self._triples:
            return self
        self._triples[triple] = None
        self._by_s.setdefault(triple.subject, {})[triple] = None
        self._by_p.setdefault(triple.predicate, {})[triple] = None
        self._by_o.setdefault(triple.object, {})[triple] = None
        self._by_po.setdefault((triple.predicate, triple.object), {})[triple] = None
        return self

    def freeze(self) -> "TripleStore":
        """Make the store immutable; analyses expect a frozen store."""
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def triples(self):
        return list(self._triples)

    # -- pattern matching ---------------------------------------------------

    def _candidates(self, s, p, o):
        """Smallest applicable index for the constant positions (None = variable)."""
        if p is not None and o is not None:
            return self._by_po.get((p, o), {})
        if s is not None:
            return self._by_s.get(s, {})
        if o is not None:
            return self._by_o.get(o, {})
        if p is not None:
            return self._by_p.get(p, {})
        return self._triples

    def match_pattern(self, pattern: TriplePattern) -> list[BindingSet]:
        """One binding set per matching triple; equals an exhaustive scan."""
        consts = [None if isinstance(t, Var) else t for t in pattern.positions()]
        out: list[BindingSet] = []
        for triple in self._candidates(*consts):
            binding: BindingSet = {}
            ok = True
            for want, got in zip(pattern.positions(), (triple.subject, triple.predicate, triple.object)):
                if isinstance(want, Var):
                    if want.name in binding and binding[want.name] != got:
                        ok = False
                        break
                    binding[want.name] = got
                elif want != got:
                    ok = False
                    break
            if ok:
                out.append(binding)
        return out

    def _estimate(self, pattern: TriplePattern, bound: set[str]) -> float:
        """Cardinality estimate used for join ordering; deterministic."""
        consts = []
        n_bound = 0
        for t in pattern.positions():
            if isinstance(t, Var):
                consts.append(None)
                if t.name in bound:
                    n_bound += 1
            else:
                consts.append(t)
        base = len(self._candidates(*consts))
        # variables already bound by earlier patterns act as constants at
        # evaluation time; discount them
        return base / (10.0**n_bound)

    def _plan(self, patterns):
        remaining = list(enumerate(patterns))
        bound: set[str] = set()
        ordered = []
        while remaining:
            index, pattern = min(
                remaining, key=lambda item: (self._estimate(item[1], bound), item[0])
            )
            remaining = [item for item in remaining if item[0] != index]
            ordered.append(pattern)
            bound |= pattern.variables()
        return ordered

    def match_bgp(self, patterns: list[TriplePattern]) -> list[BindingSet]:
        """Natural join of the patterns' matches (deterministic order)."""
        solutions: list[BindingSet] = [{}]
        for pattern in self._plan(list(patterns)):
            next_solutions: list[BindingSet] = []
            for solution in solutions:
                bound_pattern = _substitute(pattern, solution)
                for match in self.match_pattern(bound_pattern):
                    merged = dict(solution)
                    merged.update(match)
                    next_solutions.append(merged)
            solutions = next_solutions
            if not solutions:
                break
        return solutions

    def match_optional(
        self,
        required: list[TriplePattern],
        optional_groups: list[list[TriplePattern]],
    ) -> list[BindingSet]:
        """Left-outer-join semantics: each solution of the required block is
        extended by every compatible match of each optional group, or kept
        as-is when a group has no compatible match."""
        solutions = self.match_bgp(required)
        for group in optional_groups:
            extended: list[BindingSet] = []
            for solution in solutions:
                bound_group = [_substitute(p, solution) for p in group]
                matches = self.match_bgp(bound_group)
                if matches:
                    for match in matches:
                        merged = dict(solution)
                        merged.update(match)
                        extended.append(merged)
                else:
                    extended.append(solution)
            solutions = extended
        return solutions


def _substitute(pattern: TriplePattern, binding: BindingSet) -> TriplePattern:
    def sub(term):
        if isinstance(term, Var) and term.name in binding:
            return binding[term.name]
        return term

    return TriplePattern(sub(pattern.subject), sub(pattern.predicate), sub(pattern.object))
