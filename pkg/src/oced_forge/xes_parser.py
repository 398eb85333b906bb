"""Parser for XES event logs.

Reads XES XML (optionally gzip-compressed, detected by magic bytes) into an
in-memory log that preserves document order of traces, events, and
attributes.  Nested attributes are kept; the XES list/container construct is
rejected.  Unknown elements are skipped and recorded as warnings on the
returned log.

A canonical writer (`write_xes`) exists so tests can check that parsing is
lossless; it is not a general-purpose XES exporter.
"""

import gzip
import io
import sys
from dataclasses import dataclass, field
from xml.etree import ElementTree

from .errors import XesParseError, XesStructureError
from .timeutil import format_offset_millis, parse_instant

VALUE_KINDS = ("string", "date", "int", "float", "boolean", "id")
_LIST_TAGS = ("list", "container", "values")
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class XesAttribute:
    key: str
    kind: str  # one of VALUE_KINDS
    value: object
    children: tuple["XesAttribute", ...] = ()


@dataclass(frozen=True)
class XesEvent:
    attributes: tuple[XesAttribute, ...]

    def get(self, key: str) -> XesAttribute | None:
        for attr in self.attributes:
            if attr.key == key:
                return attr
        return None


@dataclass(frozen=True)
class XesTrace:
    attributes: tuple[XesAttribute, ...]
    events: tuple[XesEvent, ...]

    def get(self, key: str) -> XesAttribute | None:
        for attr in self.attributes:
            if attr.key == key:
                return attr
        return None


@dataclass(frozen=True)
class XesExtension:
    name: str
    prefix: str
    uri: str


@dataclass(frozen=True)
class XesClassifier:
    name: str
    keys: tuple[str, ...]


@dataclass(frozen=True)
class XesGlobals:
    trace: tuple[XesAttribute, ...] = ()
    event: tuple[XesAttribute, ...] = ()


@dataclass(frozen=True)
class XesLog:
    xes_version: str
    extensions: tuple[XesExtension, ...]
    globals: XesGlobals
    classifiers: tuple[XesClassifier, ...]
    attributes: tuple[XesAttribute, ...]
    traces: tuple[XesTrace, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def event_count(self) -> int:
        return sum(len(t.events) for t in self.traces)


@dataclass(frozen=True)
class GlobalViolation:
    """One missing declared global attribute, or a classifier key not covered
    by the declared event globals."""

    scope: str  # "trace", "event", or "classifier"
    key: str
    trace_index: int | None = None
    event_index: int | None = None
    detail: str = ""


def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


def _attribute_text(attr: XesAttribute) -> str:
    """Canonical string form of an attribute value (used for ids and types)."""
    if attr.kind == "date":
        return format_offset_millis(attr.value)
    if attr.kind == "boolean":
        return "true" if attr.value else "false"
    if attr.kind == "float":
        return repr(attr.value)
    return str(attr.value)


class _Parser:
    def __init__(self):
        self.warnings: list[str] = []

    def warn(self, message: str):
        self.warnings.append(message)

    def parse_value(self, kind: str, key: str, raw: str):
        if kind == "string" or kind == "id":
            return raw
        if kind == "date":
            try:
                return parse_instant(raw)
            except ValueError:
                raise XesStructureError(
                    f"unparseable date for key {key!r}: {raw!r}"
                ) from None
        if kind == "int":
            try:
                value = int(raw)
            except ValueError:
                raise XesStructureError(f"unparseable int for key {key!r}: {raw!r}") from None
            if not -_INT64_MAX - 1 <= value <= _INT64_MAX:
                raise XesStructureError(f"int out of 64-bit range for key {key!r}: {raw!r}")
            return value
        if kind == "float":
            try:
                return float(raw)
            except ValueError:
                raise XesStructureError(f"unparseable float for key {key!r}: {raw!r}") from None
        if kind == "boolean":
            lowered = raw.strip().lower()
            if lowered not in ("true", "false"):
                raise XesStructureError(f"unparseable boolean for key {key!r}: {raw!r}")
            return lowered == "true"
        raise XesStructureError(f"unknown attribute kind {kind!r}")

    def parse_attribute(self, elem) -> XesAttribute | None:
        """Parse one attribute element; None when the element is not an
        attribute (skipped with a warning)."""
        tag = _local(elem.tag)
        if tag in _LIST_TAGS:
            raise XesStructureError(
                f"list attributes are not supported (element <{tag}>, key={elem.get('key')!r})"
            )
        if tag not in VALUE_KINDS:
            self.warn(f"skipped unknown element <{tag}>")
            return None
        key = elem.get("key")
        if not key:
            raise XesStructureError(f"<{tag}> element without a key")
        raw = elem.get("value")
        if raw is None:
            raise XesStructureError(f"<{tag}> element for key {key!r} without a value")
        value = self.parse_value(tag, key, raw)
        children = []
        for child in elem:
            parsed = self.parse_attribute(child)
            if parsed is not None:
                children.append(parsed)
        return XesAttribute(key=key, kind=tag, value=value, children=tuple(children))

    def parse_attribute_list(self, elem) -> tuple[XesAttribute, ...]:
        out = []
        for child in elem:
            parsed = self.parse_attribute(child)
            if parsed is not None:
                out.append(parsed)
        return tuple(out)

    def parse_event(self, elem) -> XesEvent:
        attributes = []
        seen: set[str] = set()
        for child in elem:
            parsed = self.parse_attribute(child)
            if parsed is None:
                continue
            if parsed.key in seen:
                raise XesStructureError(f"duplicate key {parsed.key!r} in event")
            seen.add(parsed.key)
            attributes.append(parsed)
        return XesEvent(attributes=tuple(attributes))

    def parse_trace(self, elem) -> XesTrace:
        attributes = []
        events = []
        for child in elem:
            tag = _local(child.tag)
            if tag == "event":
                events.append(self.parse_event(child))
            else:
                parsed = self.parse_attribute(child)
                if parsed is not None:
                    attributes.append(parsed)
        return XesTrace(attributes=tuple(attributes), events=tuple(events))

    def parse_log(self, root) -> XesLog:
        if _local(root.tag) != "log":
            raise XesStructureError(f"root element is <{_local(root.tag)}>, expected <log>")
        version = root.get("xes.version", "")
        if not version:
            self.warn("log element has no xes.version attribute")

        extensions: list[XesExtension] = []
        classifiers: list[XesClassifier] = []
        globals_trace: tuple[XesAttribute, ...] = ()
        globals_event: tuple[XesAttribute, ...] = ()
        attributes: list[XesAttribute] = []
        traces: list[XesTrace] = []
        prefixes: set[str] = set()

        for child in root:
            tag = _local(child.tag)
            if tag == "extension":
                name, prefix, uri = child.get("name"), child.get("prefix"), child.get("uri")
                if not (name and prefix and uri):
                    self.warn("skipped extension element missing name/prefix/uri")
                    continue
                if prefix in prefixes:
                    raise XesStructureError(f"duplicate extension prefix {prefix!r}")
                prefixes.add(prefix)
                extensions.append(XesExtension(name=name, prefix=prefix, uri=uri))
            elif tag == "global":
                scope = child.get("scope")
                if scope == "trace":
                    globals_trace = self.parse_attribute_list(child)
                elif scope == "event":
                    globals_event = self.parse_attribute_list(child)
                else:
                    self.warn(f"skipped global element with scope {scope!r}")
            elif tag == "classifier":
                name, keys = child.get("name"), child.get("keys")
                if not (name and keys):
                    self.warn("skipped classifier element missing name/keys")
                    continue
                classifiers.append(XesClassifier(name=name, keys=tuple(keys.split())))
            elif tag == "trace":
                traces.append(self.parse_trace(child))
            else:
                parsed = self.parse_attribute(child)
                if parsed is not None:
                    attributes.append(parsed)

        return XesLog(
            xes_version=version,
            extensions=tuple(extensions),
            globals=XesGlobals(trace=globals_trace, event=globals_event),
            classifiers=tuple(classifiers),
            attributes=tuple(attributes),
            traces=tuple(traces),
            warnings=tuple(self.warnings),
        )


def parse_xes(data: bytes) -> XesLog:
    """Parse XES XML bytes (gzip-compressed input is detected and inflated).

    Raises XesParseError for malformed XML (with line/column) and
    XesStructureError for XES-level violations.
    """
    if data[:2] == b"\x1f\x8b":
        try:
            data = gzip.decompress(data)
        except (OSError, EOFError) as exc:
            raise XesParseError(f"bad gzip stream: {exc}") from exc
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        message = str(exc).rsplit(": line ", 1)[0]
        raise XesParseError(message, line, column) from exc
    return _Parser().parse_log(root)


def load_xes(path: str | None) -> XesLog:
    """Read and parse XES from a file path, or from stdin when path is None or '-'."""
    if path is None or path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return parse_xes(data)


def validate_globals(log: XesLog) -> list[GlobalViolation]:
    """Check every declared global attribute against every trace/event.

    Also reports classifier keys that are not declared event globals.  Pure
    check: returns violation records, never raises.
    """
    violations: list[GlobalViolation] = []
    trace_keys = [a.key for a in log.globals.trace]
    event_keys = [a.key for a in log.globals.event]
    for ti, trace in enumerate(log.traces):
        present = {a.key for a in trace.attributes}
        for key in trace_keys:
            if key not in present:
                violations.append(
                    GlobalViolation(
                        scope="trace",
                        key=key,
                        trace_index=ti,
                        detail=f"trace {ti} lacks global trace attribute {key!r}",
                    )
                )
        for ei, event in enumerate(trace.events):
            present = {a.key for a in event.attributes}
            for key in event_keys:
                if key not in present:
                    violations.append(
                        GlobalViolation(
                            scope="event",
                            key=key,
                            trace_index=ti,
                            event_index=ei,
                            detail=f"event {ei} of trace {ti} lacks global event attribute {key!r}",
                        )
                    )
    declared = set(event_keys) | set(trace_keys)
    for classifier in log.classifiers:
        for key in classifier.keys:
            if key not in declared:
                violations.append(
                    GlobalViolation(
                        scope="classifier",
                        key=key,
                        detail=f"classifier {classifier.name!r} references undeclared key {key!r}",
                    )
                )
    return violations


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _write_attribute(out: io.StringIO, attr: XesAttribute, indent: int):
    pad = "  " * indent
    value = _attribute_text(attr)
    head = f'{pad}<{attr.kind} key="{_xml_escape(attr.key)}" value="{_xml_escape(value)}"'
    if attr.children:
        out.write(head + ">\n")
        for child in attr.children:
            _write_attribute(out, child, indent + 1)
        out.write(f"{pad}</{attr.kind}>\n")
    else:
        out.write(head + "/>\n")


def write_xes(log: XesLog) -> str:
    """Serialize a log back to canonical XES (round-trip support for tests)."""
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<log xes.version="{_xml_escape(log.xes_version)}">\n')
    for ext in log.extensions:
        out.write(
            f'  <extension name="{_xml_escape(ext.name)}" '
            f'prefix="{_xml_escape(ext.prefix)}" uri="{_xml_escape(ext.uri)}"/>\n'
        )
    for scope, attrs in (("trace", log.globals.trace), ("event", log.globals.event)):
        if attrs:
            out.write(f'  <global scope="{scope}">\n')
            for attr in attrs:
                _write_attribute(out, attr, 2)
            out.write("  </global>\n")
    for clf in log.classifiers:
        out.write(
            f'  <classifier name="{_xml_escape(clf.name)}" '
            f'keys="{_xml_escape(" ".join(clf.keys))}"/>\n'
        )
    for attr in log.attributes:
        _write_attribute(out, attr, 1)
    for trace in log.traces:
        out.write("  <trace>\n")
        for attr in trace.attributes:
            _write_attribute(out, attr, 2)
        for event in trace.events:
            out.write("    <event>\n")
            for attr in event.attributes:
                _write_attribute(out, attr, 3)
            out.write("    </event>\n")
        out.write("  </trace>\n")
    out.write("</log>\n")
    return out.getvalue()
