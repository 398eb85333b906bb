"""Turtle serialization of OCED graphs and a parser for the Turtle subset
this tool emits.

Serialization is deterministic: prefixes are declared in a fixed order
(ocedo, ext, xsd, rdf, ex), triples are sorted lexicographically by their
rendered (subject, predicate, object) tokens, and all dateTime lexical forms
are UTC with milliseconds.

Event-object relations are emitted twice on purpose: once as a reified
ext:EventObject node (ext:event / ext:object / ext:classifier) and once as a
direct qualifier predicate from the event to the object, so both the
reified and the direct query styles work against the same file.

The parser supports prefix declarations, IRIs, prefixed names, plain / typed
/ language-tagged literals, numeric and boolean shorthand, the ';' and ','
abbreviations, and 'a' for rdf:type.  Blank nodes, collections, long
strings, and @base are rejected as unsupported constructs.
"""

import re

from .errors import SerializationError, TurtleSyntaxError, UnsupportedConstructError
from .oced_model import OcedGraph, TypedValue, escape_id
from .terms import (
    EX,
    EXT,
    EXT_CLASSIFIER,
    EXT_EVENT,
    EXT_EVENT_OBJECT_CLASS,
    EXT_EVENT_TYPE,
    EXT_OBJECT,
    EXT_OBJECT_TYPE,
    OBSERVED_AT,
    PREFIXES,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Iri,
    PlainLiteral,
    Term,
    Triple,
    TypedLiteral,
)
from .timeutil import format_utc_millis
from .triple_query import TripleStore

_PN_LOCAL_RE = re.compile(
    r"^(?:[A-Za-z0-9_]|%[0-9A-Fa-f]{2})(?:[A-Za-z0-9_\-]|%[0-9A-Fa-f]{2})*$"
)
_ABSOLUTE_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_BAD_IRI_CHARS = re.compile(r'[\x00-\x20<>"{}|^`\\]')


# -- graph -> triples --------------------------------------------------------


def _ext_iri(name: str) -> Iri:
    if not name:
        raise SerializationError("cannot mint an IRI from an empty name")
    return Iri(EXT + escape_id(name))


def _float_lexical(value: float) -> str:
    if value != value:
        return "NaN"
    if value == float("inf"):
        return "INF"
    if value == float("-inf"):
        return "-INF"
    return repr(value)


def _value_literal(tv: TypedValue) -> Term:
    if tv.kind in ("string", "id"):
        return PlainLiteral(str(tv.value))
    if tv.kind == "date":
        return TypedLiteral(format_utc_millis(tv.value), XSD_DATETIME)
    if tv.kind == "int":
        return TypedLiteral(str(tv.value), XSD_INTEGER)
    if tv.kind == "float":
        return TypedLiteral(_float_lexical(float(tv.value)), XSD_DOUBLE)
    if tv.kind == "boolean":
        return TypedLiteral("true" if tv.value else "false", XSD_BOOLEAN)
    raise SerializationError(f"attribute value kind {tv.kind!r} cannot be serialized")


def graph_to_triples(graph: OcedGraph) -> TripleStore:
    """Emit the Turtle-level triples for a graph.

    Events and objects share the ex: instance namespace, so an event id that
    equals an object id (legal in the graph's separate namespaces) cannot be
    serialized and raises SerializationError.
    """
    store = TripleStore()
    owner: dict[str, tuple[str, str]] = {}

    def instance_iri(entity_id: str, kind: str) -> Iri:
        iri = EX + entity_id
        previous = owner.get(iri)
        if previous is not None and previous != (kind, entity_id):
            raise SerializationError(
                f"id {entity_id!r} is used as both {previous[0]} and {kind}; "
                f"ids share one IRI namespace in Turtle output"
            )
        owner[iri] = (kind, entity_id)
        return Iri(iri)

    for event in graph.events.values():
        e_iri = instance_iri(event.id, "event")
        store.insert(Triple(e_iri, RDF_TYPE, _ext_iri(event.event_type)))
        store.insert(
            Triple(e_iri, OBSERVED_AT, TypedLiteral(format_utc_millis(event.observed_at), XSD_DATETIME))
        )
        store.insert(Triple(e_iri, EXT_EVENT_TYPE, PlainLiteral(event.event_type)))
        for key in sorted(event.attributes):
            store.insert(Triple(e_iri, _ext_iri(key), _value_literal(event.attributes[key])))

    for obj in graph.objects.values():
        o_iri = instance_iri(obj.id, "object")
        store.insert(Triple(o_iri, RDF_TYPE, _ext_iri(obj.object_type)))
        store.insert(Triple(o_iri, EXT_OBJECT_TYPE, PlainLiteral(obj.object_type)))

    for rel in graph.event_object_relations:
        node = instance_iri(rel.id, "relation")
        e_iri = Iri(EX + rel.event)
        o_iri = Iri(EX + rel.object)
        store.insert(Triple(node, RDF_TYPE, EXT_EVENT_OBJECT_CLASS))
        store.insert(Triple(node, EXT_EVENT, e_iri))
        store.insert(Triple(node, EXT_OBJECT, o_iri))
        if rel.qualifier is not None:
            store.insert(Triple(node, EXT_CLASSIFIER, PlainLiteral(rel.qualifier)))
            store.insert(Triple(e_iri, _ext_iri(rel.qualifier), o_iri))

    for rel in graph.object_object_relations:
        store.insert(
            Triple(Iri(EX + rel.source), _ext_iri(rel.qualifier), Iri(EX + rel.target))
        )

    return store


# -- rendering ---------------------------------------------------------------


def _escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _render_iri(iri: Iri) -> str:
    for prefix, namespace in PREFIXES:
        if iri.value.startswith(namespace):
            local = iri.value[len(namespace):]
            if local and _PN_LOCAL_RE.match(local):
                return f"{prefix}:{local}"
    if _BAD_IRI_CHARS.search(iri.value):
        raise SerializationError(f"IRI contains characters illegal in Turtle: {iri.value!r}")
    return f"<{iri.value}>"


def render_term(term: Term) -> str:
    """Turtle token for one term, using the fixed prefixes where possible."""
    if isinstance(term, Iri):
        return _render_iri(term)
    if isinstance(term, TypedLiteral):
        return f'"{_escape_literal(term.lexical)}"^^{_render_iri(term.datatype)}'
    if isinstance(term, PlainLiteral):
        rendered = f'"{_escape_literal(term.value)}"'
        return f"{rendered}@{term.lang}" if term.lang else rendered
    raise TypeError(f"not a term: {term!r}")


def write_turtle(store: TripleStore) -> str:
    """Deterministic Turtle text: fixed prefix header, sorted triples."""
    lines = [f"@prefix {prefix}: <{namespace}> ." for prefix, namespace in PREFIXES]
    body = sorted(
        (render_term(t.subject), render_term(t.predicate), render_term(t.object))
        for t in store
    )
    if body:
        lines.append("")
        lines.extend(f"{s} {p} {o} ." for s, p, o in body)
    return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------

_IRIREF, _PNAME, _STRING, _NUMBER, _WORD, _ATWORD = "iriref", "pname", "string", "number", "word", "atword"
_PUNCT = "punct"  # . ; , ^^
_EOF = "eof"

_HEX = "0123456789abcdefABCDEF"
_SKIP_RE = re.compile(r"(?:[ \t\r\n]+|#[^\n]*)+")
_NUMBER_RE = re.compile(r"[+-]?\d+(\.\d+)?([eE][+-]?\d+)?")
_IRIREF_RE = re.compile(r"<([^>\n]*)>")
_IRI_ILLEGAL_RE = re.compile(r'[ <"{}|^`\\]')
_STRING_RE = re.compile(r'"((?:[^"\\\n]|\\.)*)"')
_ESCAPE_RE = re.compile(r"\\(.)")
_ATWORD_RE = re.compile(r"@([A-Za-z][A-Za-z0-9\-]*)")
_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_.\-]*)?:((?:[A-Za-z0-9_.\-]|%[0-9A-Fa-f]{2})*)")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.\-]*")

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - text.rfind("\n", 0, pos)


class _Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _error(self, message, pos=None, cls=TurtleSyntaxError):
        line, col = _line_col(self.text, self.pos if pos is None else pos)
        raise cls(message, line, col)

    def _unescape(self, body: str, start: int) -> str:
        out = []
        i = 0
        while i < len(body):
            ch = body[i]
            if ch != "\\":
                out.append(ch)
                i += 1
                continue
            esc = body[i + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 2
            elif esc in ("u", "U"):
                width = 4 if esc == "u" else 8
                digits = body[i + 2 : i + 2 + width]
                if len(digits) != width or any(d not in _HEX for d in digits):
                    self._error(f"bad \\{esc} escape", pos=start + i)
                out.append(chr(int(digits, 16)))
                i += 2 + width
            else:
                self._error(f"unknown string escape \\{esc}", pos=start + i)
        return "".join(out)

    def tokens(self):
        """Yield tokens one at a time; the EOF token is yielded last."""
        text = self.text
        length = len(text)
        while True:
            skip = _SKIP_RE.match(text, self.pos)
            if skip is not None:
                self.pos = skip.end()
            start = self.pos
            if start >= length:
                yield _Token(_EOF, "", start)
                return
            ch = text[start]

            if ch == "<":
                m = _IRIREF_RE.match(text, start)
                if m is None:
                    self._error("unterminated IRI", pos=start)
                bad = _IRI_ILLEGAL_RE.search(m.group(1))
                if bad is not None:
                    if bad.group(0) == "\\":
                        self._error(
                            "escape sequences in IRIs are not supported",
                            pos=start + 1 + bad.start(),
                        )
                    self._error(
                        f"character {bad.group(0)!r} is illegal inside an IRI",
                        pos=start + 1 + bad.start(),
                    )
                self.pos = m.end()
                yield _Token(_IRIREF, m.group(1), start)
            elif ch == '"':
                if text.startswith('"""', start):
                    self._error("long string literal", pos=start, cls=UnsupportedConstructError)
                m = _STRING_RE.match(text, start)
                if m is None:
                    self._error("unterminated string literal", pos=start)
                body = m.group(1)
                self.pos = m.end()
                cooked = self._unescape(body, start + 1) if "\\" in body else body
                yield _Token(_STRING, cooked, start)
            elif ch == "'":
                self._error("single-quoted literal", pos=start, cls=UnsupportedConstructError)
            elif ch in "[]":
                self._error("blank node", pos=start, cls=UnsupportedConstructError)
            elif ch in "()":
                self._error("collection", pos=start, cls=UnsupportedConstructError)
            elif ch == "_" and text.startswith("_:", start):
                self._error("blank node label", pos=start, cls=UnsupportedConstructError)
            elif ch == "@":
                m = _ATWORD_RE.match(text, start)
                if m is None:
                    self._error("expected a name after '@'", pos=start)
                self.pos = m.end()
                yield _Token(_ATWORD, m.group(1), start)
            elif ch == "^":
                if not text.startswith("^^", start):
                    self._error("expected '^^'", pos=start)
                self.pos = start + 2
                yield _Token(_PUNCT, "^^", start)
            elif ch in ".;,":
                if ch != "." or not text[start + 1 : start + 2].isdigit():
                    self.pos = start + 1
                    yield _Token(_PUNCT, ch, start)
                    continue
                self._error("unexpected character '.'", pos=start)
            elif ch.isdigit() or (ch in "+-" and text[start + 1 : start + 2].isdigit()):
                m = _NUMBER_RE.match(text, start)
                self.pos = m.end()
                yield _Token(_NUMBER, m.group(0), start)
            else:
                m = _PNAME_RE.match(text, start)
                if m is not None:
                    prefix, local = m.group(1) or "", m.group(2)
                    end = m.end()
                    if text[end : end + 1] == "%":
                        self._error("bad percent escape in local name", pos=end)
                    # a trailing dot terminates the statement, not the name
                    while local.endswith("."):
                        local = local[:-1]
                        end -= 1
                    self.pos = end
                    yield _Token(_PNAME, (prefix, local), start)
                    continue
                m = _WORD_RE.match(text, start)
                if m is not None:
                    word = m.group(0)
                    end = m.end()
                    while word.endswith("."):
                        word = word[:-1]
                        end -= 1
                    self.pos = end
                    yield _Token(_WORD, word, start)
                    continue
                self._error(f"unexpected character {ch!r}", pos=start)


class _TurtleParser:
    def __init__(self, text: str):
        self.text = text
        self._tokens = _Tokenizer(text).tokens()
        self._lookahead = next(self._tokens)
        self.prefixes: dict[str, str] = {}
        self.store = TripleStore()
        self._iri_cache: dict[str, Iri] = {}

    def _peek(self) -> _Token:
        return self._lookahead

    def _next(self) -> _Token:
        token = self._lookahead
        if token.kind != _EOF:
            self._lookahead = next(self._tokens)
        return token

    def _intern(self, value: str) -> Iri:
        iri = self._iri_cache.get(value)
        if iri is None:
            iri = Iri(value)
            self._iri_cache[value] = iri
        return iri

    def _error(self, message, token=None):
        token = token or self._peek()
        line, col = _line_col(self.text, token.pos)
        raise TurtleSyntaxError(message, line, col)

    def _expect_punct(self, value):
        token = self._next()
        if token.kind != _PUNCT or token.value != value:
            self._error(f"expected {value!r}", token)

    def parse(self) -> TripleStore:
        while self._peek().kind != _EOF:
            token = self._peek()
            if token.kind == _ATWORD:
                if token.value.lower() == "prefix":
                    self._next()
                    self._directive(needs_dot=True)
                elif token.value.lower() == "base":
                    raise UnsupportedConstructError("@base directive", *_line_col(self.text, token.pos))
                else:
                    self._error(f"unexpected @{token.value}", token)
            elif token.kind == _WORD and token.value.lower() == "prefix":
                self._next()
                self._directive(needs_dot=False)
            elif token.kind == _WORD and token.value.lower() == "base":
                raise UnsupportedConstructError("BASE directive", *_line_col(self.text, token.pos))
            else:
                self._triples()
        return self.store

    def _directive(self, needs_dot: bool):
        name = self._next()
        if name.kind != _PNAME or name.value[1] != "":
            self._error("expected a prefix name ending in ':'", name)
        iri = self._next()
        if iri.kind != _IRIREF:
            self._error("expected an IRI", iri)
        self._check_absolute(iri)
        self.prefixes[name.value[0]] = iri.value
        if needs_dot:
            self._expect_punct(".")

    def _check_absolute(self, token):
        if not _ABSOLUTE_IRI_RE.match(token.value):
            self._error(f"relative IRI {token.value!r} (no base support)", token)

    def _iri(self, role: str) -> Iri:
        token = self._next()
        if token.kind == _IRIREF:
            self._check_absolute(token)
            return self._intern(token.value)
        if token.kind == _PNAME:
            prefix, local = token.value
            if prefix not in self.prefixes:
                self._error(f"unknown prefix {prefix + ':'!r}", token)
            return self._intern(self.prefixes[prefix] + local)
        self._error(f"expected an IRI as {role}", token)

    def _verb(self) -> Iri:
        token = self._peek()
        if token.kind == _WORD and token.value == "a":
            self._next()
            return RDF_TYPE
        return self._iri("predicate")

    def _object(self) -> Term:
        token = self._peek()
        if token.kind in (_IRIREF, _PNAME):
            return self._iri("object")
        if token.kind == _STRING:
            self._next()
            nxt = self._peek()
            if nxt.kind == _ATWORD:
                self._next()
                return PlainLiteral(token.value, lang=nxt.value)
            if nxt.kind == _PUNCT and nxt.value == "^^":
                self._next()
                return TypedLiteral(token.value, self._iri("datatype"))
            return PlainLiteral(token.value)
        if token.kind == _NUMBER:
            self._next()
            lexeme = token.value
            if "e" in lexeme or "E" in lexeme:
                return TypedLiteral(lexeme, XSD_DOUBLE)
            if "." in lexeme:
                return TypedLiteral(lexeme, XSD_DECIMAL)
            return TypedLiteral(lexeme, XSD_INTEGER)
        if token.kind == _WORD and token.value in ("true", "false"):
            self._next()
            return TypedLiteral(token.value, XSD_BOOLEAN)
        self._error("expected an IRI or literal object", token)

    def _triples(self):
        subject = self._iri("subject")
        while True:
            predicate = self._verb()
            while True:
                self.store.insert(Triple(subject, predicate, self._object()))
                nxt = self._peek()
                if nxt.kind == _PUNCT and nxt.value == ",":
                    self._next()
                    continue
                break
            nxt = self._next()
            if nxt.kind == _PUNCT and nxt.value == ";":
                # tolerate trailing ';' before the final dot
                if self._peek().kind == _PUNCT and self._peek().value == ".":
                    self._next()
                    return
                continue
            if nxt.kind == _PUNCT and nxt.value == ".":
                return
            self._error("expected ';', ',' or '.'", nxt)


def parse_turtle(text: str) -> TripleStore:
    """Parse the supported Turtle subset into a triple store.

    Raises TurtleSyntaxError (with line/column) on malformed input and
    UnsupportedConstructError for syntax outside the subset.
    """
    return _TurtleParser(text).parse()
