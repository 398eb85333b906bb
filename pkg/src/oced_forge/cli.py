"""Command-line interface.

Commands: convert (XES -> Turtle), analyze (Turtle -> ping-pong /
event-objects / teams as CSV or JSONL), stats (XES or Turtle counts), and
export-dot (Turtle -> Graphviz DOT).  Data goes to stdout or --output;
diagnostics go to stderr, so output is pipe-safe and byte-deterministic.

Exit codes: 0 success (also with skipped-event warnings), 2 unreadable or
invalid input file, 3 parse error (XML or Turtle, with location), 64 usage
error, 65 unrecognized input format for stats.
"""

import argparse
import gzip
import logging
import os
import sys

from .analyses import (
    EVENT_OBJECT_COLUMNS,
    PING_PONG_COLUMNS,
    TEAM_COLUMNS,
    detect_ping_pong,
    enumerate_event_objects,
    event_object_records,
    ping_pong_records,
    records_to_csv,
    records_to_jsonl,
    team_involvement,
    team_records,
)
from .dot_export import store_to_dot
from .errors import (
    ConfigError,
    OcedForgeError,
    TurtleSyntaxError,
    XesParseError,
    XesStructureError,
)
from .terms import (
    EXT,
    EXT_EVENT_CASE,
    EXT_EVENT_OBJECT_CLASS,
    EXT_EVENT_TYPE,
    EXT_FIXED_PREDICATES,
    EXT_OBJECT_TYPE,
    Iri,
    RDF_TYPE,
)
from .transform import default_bpic2013_config, load_mapping_config, transform_log
from .triple_query import TriplePattern, TripleStore, Var
from .turtle_io import graph_to_triples, parse_turtle, write_turtle
from .xes_parser import parse_xes

EXIT_OK = 0
EXIT_UNREADABLE = 2
EXIT_PARSE = 3
EXIT_USAGE = 64
EXIT_BAD_FORMAT = 65

_ANALYSES = ("ping-pong", "event-objects", "teams")


class _Parser(argparse.ArgumentParser):
    # usage problems exit 64, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="oced-forge",
        description="Convert XES event logs to object-centric event data in Turtle "
        "and run object-centric analyses over them.",
        epilog="exit codes: 0 ok, 2 unreadable input, 3 parse error, 64 usage, "
        "65 unrecognized format. Set OCED_FORGE_LOG=debug|info|warning for diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="convert an XES log (optionally .gz) to Turtle")
    convert.add_argument("input", help="XES file, or - for stdin")
    convert.add_argument("--config", help="mapping configuration JSON (default: BPIC 2013 rules)")
    convert.add_argument("--format", choices=["ttl"], default="ttl")
    convert.add_argument("--output", "-o", help="output path (default: stdout)")
    convert.add_argument("--quiet", "-q", action="store_true", help="suppress the summary line")
    convert.set_defaults(func=cmd_convert)

    analyze = sub.add_parser("analyze", help="run an analysis over a Turtle file")
    analyze.add_argument("input", help="Turtle file, or - for stdin")
    analyze.add_argument("--analysis", choices=_ANALYSES, required=True)
    analyze.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    analyze.add_argument("--output", "-o", help="output path (default: stdout)")
    analyze.add_argument("--quiet", "-q", action="store_true", help="suppress the row count line")
    analyze.set_defaults(func=cmd_analyze)

    stats = sub.add_parser("stats", help="print counts for an XES or Turtle file")
    stats.add_argument("input", help="XES or Turtle file, or - for stdin (format sniffed)")
    stats.add_argument("--output", "-o", help="output path (default: stdout)")
    stats.add_argument("--quiet", "-q", action="store_true")
    stats.set_defaults(func=cmd_stats)

    export_dot = sub.add_parser("export-dot", help="render a Turtle file as a Graphviz digraph")
    export_dot.add_argument("input", help="Turtle file, or - for stdin")
    export_dot.add_argument("--format", choices=["dot"], default="dot")
    export_dot.add_argument("--output", "-o", help="output path (default: stdout)")
    export_dot.add_argument("--quiet", "-q", action="store_true")
    export_dot.set_defaults(func=cmd_export_dot)

    return parser


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _read_text(path: str) -> str:
    data = _read_bytes(path)
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data.decode("utf-8")


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_store(path: str) -> TripleStore:
    try:
        text = _read_text(path)
    except UnicodeDecodeError as exc:
        raise TurtleSyntaxError(f"{path}: not UTF-8 text: {exc}") from exc
    return parse_turtle(text).freeze()


def cmd_convert(args) -> int:
    data = _read_bytes(args.input)
    log = parse_xes(data)
    config = load_mapping_config(args.config) if args.config else default_bpic2013_config()
    graph, report = transform_log(log, config)
    store = graph_to_triples(graph)
    _write_text(args.output, write_turtle(store))
    if not args.quiet:
        print(
            f"convert: {len(log.traces)} traces, {report.events_emitted} events emitted, "
            f"{len(report.events_skipped)} skipped, {report.objects_emitted} objects, "
            f"{len(store)} triples, {len(report.warnings) + len(log.warnings)} warnings",
            file=sys.stderr,
        )
        for skipped in report.events_skipped:
            print(
                f"  skipped trace {skipped.trace_index} event {skipped.event_index}: "
                f"{skipped.reason}",
                file=sys.stderr,
            )
    return EXIT_OK


def cmd_analyze(args) -> int:
    store = _load_store(args.input)
    if args.analysis == "ping-pong":
        records, columns = ping_pong_records(detect_ping_pong(store)), PING_PONG_COLUMNS
    elif args.analysis == "event-objects":
        records, columns = event_object_records(enumerate_event_objects(store)), EVENT_OBJECT_COLUMNS
    else:
        records, columns = team_records(team_involvement(store)), TEAM_COLUMNS
    if args.format == "csv":
        out = records_to_csv(records, columns)
    else:
        out = records_to_jsonl(records, columns)
    _write_text(args.output, out)
    if not args.quiet:
        print(f"analyze {args.analysis}: {len(records)} rows", file=sys.stderr)
    return EXIT_OK


def _turtle_summary(store: TripleStore) -> list[tuple[str, int | str]]:
    def subjects(predicate):
        return {sol["s"] for sol in store.match_pattern(TriplePattern(Var("s"), predicate, Var("v")))}

    events = subjects(EXT_EVENT_TYPE)
    objects = subjects(EXT_OBJECT_TYPE)
    eo_nodes = store.match_pattern(TriplePattern(Var("s"), RDF_TYPE, EXT_EVENT_OBJECT_CLASS))
    oo = [
        t
        for t in store.triples()
        if t.subject in objects
        and isinstance(t.object, Iri)
        and t.object in objects
        and t.predicate.value.startswith(EXT)
        and t.predicate not in EXT_FIXED_PREDICATES
    ]
    event_types = {sol["v"] for sol in store.match_pattern(TriplePattern(Var("s"), EXT_EVENT_TYPE, Var("v")))}
    object_types = {sol["v"] for sol in store.match_pattern(TriplePattern(Var("s"), EXT_OBJECT_TYPE, Var("v")))}
    cases = {sol["o"] for sol in store.match_pattern(TriplePattern(Var("s"), EXT_EVENT_CASE, Var("o")))}
    return [
        ("format", "ttl"),
        ("triples", len(store)),
        ("events", len(events)),
        ("objects", len(objects)),
        ("eo_relations", len(eo_nodes)),
        ("oo_relations", len(oo)),
        ("event_types", len(event_types)),
        ("object_types", len(object_types)),
        ("cases", len(cases)),
    ]


def cmd_stats(args) -> int:
    data = _read_bytes(args.input)
    if data[:2] == b"\x1f\x8b":
        try:
            data = gzip.decompress(data)
        except (OSError, EOFError):
            print(f"stats: {args.input}: bad gzip stream", file=sys.stderr)
            return EXIT_BAD_FORMAT
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        print(f"stats: {args.input}: not XES or Turtle", file=sys.stderr)
        return EXIT_BAD_FORMAT

    head = text.lstrip("﻿ \t\r\n")
    if head.startswith("<"):
        log = parse_xes(data)
        rows = [
            ("format", "xes"),
            ("traces", len(log.traces)),
            ("events", log.event_count),
            ("cases", len(log.traces)),
        ]
    elif head.startswith(("@prefix", "@PREFIX", "PREFIX", "prefix", "#")):
        rows = _turtle_summary(parse_turtle(text).freeze())
    else:
        try:
            store = parse_turtle(text).freeze()
        except TurtleSyntaxError:
            print(f"stats: {args.input}: not XES or Turtle", file=sys.stderr)
            return EXIT_BAD_FORMAT
        rows = _turtle_summary(store)

    width = max(len(name) for name, _ in rows)
    _write_text(args.output, "".join(f"{name:<{width}}  {value}\n" for name, value in rows))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    store = _load_store(args.input)
    _write_text(args.output, store_to_dot(store))
    return EXIT_OK


def _configure_logging():
    name = os.environ.get("OCED_FORGE_LOG", "WARNING").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except OSError as exc:
        print(f"oced-forge: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except ConfigError as exc:
        print(f"oced-forge: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except (XesParseError, XesStructureError, TurtleSyntaxError) as exc:
        print(f"oced-forge: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OcedForgeError as exc:
        print(f"oced-forge: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
