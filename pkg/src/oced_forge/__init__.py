"""oced-forge: XES event logs as object-centric event data.

Parses XES, converts traces and events into an object-centric graph via
configurable mapping rules, serializes the graph to Turtle, and evaluates
object-centric analyses (event-object enumeration, ping-pong detection,
team involvement) over an in-memory triple store.
"""

from .analyses import (
    CaseTimeline,
    EventObjectRow,
    PingPongRow,
    TeamInvolvement,
    build_case_timelines,
    detect_ping_pong,
    enumerate_event_objects,
    team_involvement,
)
from .dot_export import store_to_dot
from .errors import (
    ConfigError,
    GraphIntegrityError,
    IncomparableTermsError,
    OcedForgeError,
    SerializationError,
    TurtleSyntaxError,
    UnsupportedConstructError,
    XesParseError,
    XesStructureError,
)
from .oced_model import (
    GraphStats,
    OcedEvent,
    OcedGraph,
    OcedObject,
    TypedValue,
    escape_id,
    graph_stats,
    unescape_id,
)
from .terms import Iri, PlainLiteral, Triple, TypedLiteral
from .transform import (
    MappingConfig,
    ObjectRule,
    TransformReport,
    default_bpic2013_config,
    derive_event_type,
    dump_mapping_config,
    load_mapping_config,
    transform_log,
)
from .triple_query import TriplePattern, TripleStore, Var, compare_terms
from .turtle_io import graph_to_triples, parse_turtle, write_turtle
from .xes_parser import (
    XesAttribute,
    XesEvent,
    XesLog,
    XesTrace,
    load_xes,
    parse_xes,
    validate_globals,
    write_xes,
)

__version__ = "0.1.0"

__all__ = [
    "CaseTimeline",
    "ConfigError",
    "EventObjectRow",
    "GraphIntegrityError",
    "GraphStats",
    "IncomparableTermsError",
    "Iri",
    "MappingConfig",
    "ObjectRule",
    "OcedEvent",
    "OcedForgeError",
    "OcedGraph",
    "OcedObject",
    "PingPongRow",
    "PlainLiteral",
    "SerializationError",
    "TeamInvolvement",
    "TransformReport",
    "Triple",
    "TriplePattern",
    "TripleStore",
    "TurtleSyntaxError",
    "TypedLiteral",
    "TypedValue",
    "UnsupportedConstructError",
    "Var",
    "XesAttribute",
    "XesEvent",
    "XesLog",
    "XesParseError",
    "XesStructureError",
    "XesTrace",
    "build_case_timelines",
    "compare_terms",
    "default_bpic2013_config",
    "derive_event_type",
    "detect_ping_pong",
    "dump_mapping_config",
    "enumerate_event_objects",
    "escape_id",
    "graph_stats",
    "graph_to_triples",
    "load_mapping_config",
    "load_xes",
    "parse_turtle",
    "parse_xes",
    "store_to_dot",
    "team_involvement",
    "transform_log",
    "unescape_id",
    "validate_globals",
    "write_turtle",
    "write_xes",
]
