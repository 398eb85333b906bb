"""RDF terms and the fixed vocabulary used by the graph serialization.

Three term kinds exist: IRIs, typed literals, and plain literals (optionally
language-tagged).  Triples restrict subject and predicate to IRIs.
"""

from dataclasses import dataclass, field
from typing import Union

# Namespace IRIs.  The ocedo/ext pair is fixed by the vocabulary this tool
# emits; ex is the instance namespace minted for converted entities.
OCEDO = "https://w3id.org/ocedo/core#"
EXT = "https://w3id.org/ocedo/ext#"
XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
EX = "http://example.org/oced/"

# Prefixes in the order they are declared in Turtle output.
PREFIXES: tuple[tuple[str, str], ...] = (
    ("ocedo", OCEDO),
    ("ext", EXT),
    ("xsd", XSD),
    ("rdf", RDF),
    ("ex", EX),
)

# Terms and triples live in dict-based indexes, so their hashes are computed
# constantly; each caches its hash at construction.


@dataclass(frozen=True)
class Iri:
    value: str
    _h: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("iri", self.value)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class TypedLiteral:
    lexical: str
    datatype: Iri
    _h: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("typed", self.lexical, self.datatype.value)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"TypedLiteral({self.lexical!r}, {self.datatype.value!r})"


@dataclass(frozen=True)
class PlainLiteral:
    value: str
    lang: str | None = None
    _h: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("plain", self.value, self.lang)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        if self.lang:
            return f"PlainLiteral({self.value!r}, lang={self.lang!r})"
        return f"PlainLiteral({self.value!r})"


Term = Union[Iri, TypedLiteral, PlainLiteral]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term
    _h: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        if not isinstance(self.subject, Iri):
            raise TypeError(f"triple subject must be an IRI, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"triple predicate must be an IRI, got {self.predicate!r}")
        object.__setattr__(
            self, "_h", hash((self.subject._h, self.predicate._h, hash(self.object)))
        )

    def __hash__(self):
        return self._h


# Fixed predicates and classes.
RDF_TYPE = Iri(RDF + "type")
OBSERVED_AT = Iri(OCEDO + "observed_at")
EXT_EVENT = Iri(EXT + "event")
EXT_OBJECT = Iri(EXT + "object")
EXT_EVENT_CASE = Iri(EXT + "event_case")
EXT_HANDLED_BY_TEAM = Iri(EXT + "handled_by_support_team")
EXT_EVENT_TYPE = Iri(EXT + "event_type")
EXT_OBJECT_TYPE = Iri(EXT + "object_type")
EXT_CLASSIFIER = Iri(EXT + "classifier")
EXT_EVENT_OBJECT_CLASS = Iri(EXT + "EventObject")

XSD_DATETIME = Iri(XSD + "dateTime")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DOUBLE = Iri(XSD + "double")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_BOOLEAN = Iri(XSD + "boolean")

# Datatypes whose literals compare as numbers.
NUMERIC_DATATYPES = frozenset(
    Iri(XSD + local)
    for local in ("integer", "decimal", "double", "float", "long", "int", "short", "byte")
)

# ext: predicates with a fixed meaning; every other ext: predicate between
# entities is a data-derived qualifier.
EXT_FIXED_PREDICATES = frozenset(
    {
        EXT_EVENT,
        EXT_OBJECT,
        EXT_CLASSIFIER,
        EXT_EVENT_TYPE,
        EXT_OBJECT_TYPE,
    }
)
