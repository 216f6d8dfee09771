"""Object-relative memory trace format: parser, writer, and validator.

A trace records one program's memory behavior as a sequence of
object-level operations.  Objects are named by integer ids rather than
absolute addresses, because the simulator relocates data during
collection and only object identity survives a relocation.  All sizes
and offsets are in cells, the smallest wear-counted unit.

Wire format (UTF-8 text, LF line endings)::

    #! wearsim-trace v1    optional version line (first line only)
    #mem <N>               optional suggested memory size, in cells
    # anything             comment
    A <id> <size>          allocate <size> cells for object <id>
    F <id>                 free object <id>
    R <id> <off> <len>     read <len> cells starting <off> into the object
    W <id> <off> <len>     write <len> cells starting <off> into the object
    G                      garbage-collection trigger

Fields are decimal unsigned integers separated by single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import BinaryIO, TextIO, Union

FORMAT_VERSION = 1
MAGIC_PREFIX = "#! wearsim-trace v"


class TraceParseError(ValueError):
    """Malformed trace text; the message names the offending line."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"{message} at line {line_no}")
        self.line_no = line_no


def _check_uint(name: str, value: int) -> None:
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class Alloc:
    object_id: int
    size_cells: int

    def __post_init__(self):
        _check_uint("object_id", self.object_id)
        if self.size_cells < 1:
            raise ValueError(f"size_cells must be >= 1, got {self.size_cells}")


@dataclass(frozen=True)
class Free:
    object_id: int

    def __post_init__(self):
        _check_uint("object_id", self.object_id)


@dataclass(frozen=True)
class _Access:
    object_id: int
    offset_cells: int
    len_cells: int

    def __post_init__(self):
        _check_uint("object_id", self.object_id)
        _check_uint("offset_cells", self.offset_cells)
        if self.len_cells < 1:
            raise ValueError(f"len_cells must be >= 1, got {self.len_cells}")


class Read(_Access):
    """Read of a cell range within a live object."""


class Write(_Access):
    """Write of a cell range within a live object."""


@dataclass(frozen=True)
class Gc:
    """Explicit garbage-collection trigger."""


TraceEvent = Union[Alloc, Free, Read, Write, Gc]


@dataclass(frozen=True)
class TraceHeader:
    format_version: int = FORMAT_VERSION
    suggested_mem_size_cells: int | None = None


@dataclass
class Trace:
    events: list[TraceEvent]
    header: TraceHeader = field(default_factory=TraceHeader)


@dataclass(frozen=True)
class Violation:
    """One broken live-object rule found by validate_trace."""

    event_index: int
    rule: str
    message: str


TraceSource = Union[str, bytes, TextIO, BinaryIO]

_OPCODE_ARITY = {"A": 3, "F": 2, "R": 4, "W": 4, "G": 1}


def _as_text(source: TraceSource) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _parse_uint(token: str, line_no: int) -> int:
    if not token or not all("0" <= c <= "9" for c in token):
        raise TraceParseError(f"non-integer field '{token}'", line_no)
    return int(token)


def _parse_version(line: str, line_no: int) -> int:
    if not line.startswith(MAGIC_PREFIX):
        raise TraceParseError("malformed version line", line_no)
    version = _parse_uint(line[len(MAGIC_PREFIX):], line_no)
    if version != FORMAT_VERSION:
        raise TraceParseError(f"unsupported trace format version {version}", line_no)
    return version


def _parse_event(line: str, line_no: int) -> TraceEvent:
    fields = line.split(" ")
    opcode = fields[0]
    arity = _OPCODE_ARITY.get(opcode)
    if arity is None:
        raise TraceParseError(f"unknown opcode '{opcode}'", line_no)
    if len(fields) != arity:
        raise TraceParseError(
            f"expected {arity} fields for '{opcode}', got {len(fields)}", line_no)
    args = [_parse_uint(token, line_no) for token in fields[1:]]
    if opcode == "A":
        if args[1] < 1:
            raise TraceParseError("size must be >= 1", line_no)
        return Alloc(args[0], args[1])
    if opcode == "F":
        return Free(args[0])
    if opcode in ("R", "W"):
        if args[2] < 1:
            raise TraceParseError("length must be >= 1", line_no)
        cls = Read if opcode == "R" else Write
        return cls(args[0], args[1], args[2])
    return Gc()


def parse_trace(source: TraceSource) -> Trace:
    """Parse the text wire format into a Trace.

    Accepts a string, UTF-8 bytes, or a file-like object.  Raises
    TraceParseError naming the first offending line.
    """
    text = _as_text(source)
    events: list[TraceEvent] = []
    version = FORMAT_VERSION
    suggested: int | None = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw  # tolerate CRLF input
        if not line.strip():
            continue
        if line.startswith("#"):
            if line_no == 1 and line.startswith("#!"):
                version = _parse_version(line, line_no)
                continue
            fields = line.split(" ")
            if fields[0] == "#mem":
                if len(fields) != 2:
                    raise TraceParseError("malformed #mem header", line_no)
                suggested = _parse_uint(fields[1], line_no)
            continue
        events.append(_parse_event(line, line_no))
    return Trace(events, TraceHeader(version, suggested))


def validate_trace(trace: Trace) -> list[Violation]:
    """Replay the live-object rules over the events; return all violations.

    Order-sensitive and deterministic.  A violating event does not
    change the tracked live set, so later events are judged as if the
    offender had been dropped.
    """
    violations: list[Violation] = []
    live: dict[int, int] = {}
    for index, event in enumerate(trace.events):
        if isinstance(event, Alloc):
            if event.object_id in live:
                violations.append(Violation(
                    index, "alloc-live", f"alloc of live object {event.object_id}"))
            else:
                live[event.object_id] = event.size_cells
        elif isinstance(event, Free):
            if event.object_id not in live:
                violations.append(Violation(
                    index, "free-dead", f"free of dead object {event.object_id}"))
            else:
                del live[event.object_id]
        elif isinstance(event, (Read, Write)):
            kind = "read" if isinstance(event, Read) else "write"
            size = live.get(event.object_id)
            if size is None:
                violations.append(Violation(
                    index, "access-dead", f"{kind} of dead object {event.object_id}"))
            elif event.offset_cells + event.len_cells > size:
                violations.append(Violation(
                    index, "out-of-bounds",
                    f"{kind} of {event.len_cells} cells at offset {event.offset_cells} "
                    f"exceeds size {size} of object {event.object_id}"))
    return violations


def _format_event(event: TraceEvent) -> str:
    if isinstance(event, Alloc):
        return f"A {event.object_id} {event.size_cells}"
    if isinstance(event, Free):
        return f"F {event.object_id}"
    if isinstance(event, Read):
        return f"R {event.object_id} {event.offset_cells} {event.len_cells}"
    if isinstance(event, Write):
        return f"W {event.object_id} {event.offset_cells} {event.len_cells}"
    if isinstance(event, Gc):
        return "G"
    raise TypeError(f"not a trace event: {event!r}")


def format_trace(trace: Trace) -> str:
    """Render a trace in the wire format; parse_trace inverts this exactly."""
    lines = [f"{MAGIC_PREFIX}{trace.header.format_version}"]
    if trace.header.suggested_mem_size_cells is not None:
        lines.append(f"#mem {trace.header.suggested_mem_size_cells}")
    lines.extend(_format_event(event) for event in trace.events)
    return "\n".join(lines) + "\n"


def write_trace(trace: Trace, sink) -> None:
    """Write the wire format to a text or binary sink."""
    text = format_trace(trace)
    try:
        sink.write(text)
    except TypeError:
        sink.write(text.encode("utf-8"))
