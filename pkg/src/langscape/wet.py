"""Streaming parser for WARC/WET crawl archives.

Records are length-delimited: a version line, case-insensitive headers, a
blank line, exactly Content-Length payload bytes, then a two-line-break
separator. Parsing never sniffs payload content, so byte sequences that
look like a version line inside a payload are consumed as payload.

Memory use is bounded by the largest single record plus one read chunk,
never by file size.
"""

from __future__ import annotations

import gzip
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator, Mapping, Optional, Union

from .model import InputError

__all__ = [
    "WetRecord",
    "WetParseError",
    "MissingVersionLine",
    "MissingContentLength",
    "MalformedHeader",
    "TruncatedFile",
    "DecompressError",
    "parse_record",
    "open_wet_stream",
    "open_wet_path",
    "extract_text",
]

CHUNK_SIZE = 64 * 1024

# A header line longer than this means the framing is broken; giving up
# preserves the bounded-memory guarantee.
_MAX_HEADER_LINE = 64 * 1024


class WetParseError(InputError):
    """Framing violation in a WET stream."""


class MissingVersionLine(WetParseError):
    pass


class MissingContentLength(WetParseError):
    pass


class MalformedHeader(WetParseError):
    pass


class TruncatedFile(WetParseError):
    pass


class DecompressError(InputError):
    pass


@dataclass(frozen=True)
class WetRecord:
    """One parsed record; payload length always equals content_length."""

    warc_type: str
    target_uri: Optional[str]
    content_length: int
    payload: bytes
    headers: Mapping[str, str]
    frame_bytes: int
    bare_lf_lines: int

    @property
    def is_conversion(self) -> bool:
        return self.warc_type.lower() == "conversion"


_NEED_MORE = object()

_VERSION_LINES = (b"WARC/1.0\r\n", b"WARC/1.1\r\n", b"WARC/1.0\n", b"WARC/1.1\n")


def _parse_frame(buf, at_eof: bool):
    """Parse one record at the start of ``buf``.

    Returns (record, consumed bytes) or _NEED_MORE when the buffer holds
    only a record prefix that further bytes could complete.
    """
    n = len(buf)
    bare_lf = 0

    matched = None
    for cand in _VERSION_LINES:
        if buf.startswith(cand):
            matched = cand
            break
    if matched is None:
        if n < 10 and any(cand.startswith(bytes(buf)) for cand in _VERSION_LINES):
            return _NEED_MORE
        raise MissingVersionLine("record does not start with a WARC/1.0 or WARC/1.1 version line")
    if matched.endswith(b"\r\n"):
        pos = len(matched)
    else:
        pos = len(matched)
        bare_lf += 1

    headers: dict[str, str] = {}
    while True:
        j = buf.find(b"\n", pos)
        if j == -1:
            if n - pos > _MAX_HEADER_LINE:
                raise MalformedHeader("unterminated header line")
            return _NEED_MORE
        raw = buf[pos:j]
        if raw.endswith(b"\r"):
            raw = raw[:-1]
        else:
            bare_lf += 1
        pos = j + 1
        if not raw:
            break
        name, sep, value = bytes(raw).partition(b":")
        if not sep or not name.strip():
            raise MalformedHeader(f"not a 'Name: value' header line: {bytes(raw[:60])!r}")
        headers[name.strip().lower().decode("utf-8", "replace")] = value.strip().decode("utf-8", "replace")

    length_raw = headers.get("content-length")
    if length_raw is None:
        raise MissingContentLength("header block has no Content-Length")
    try:
        content_length = int(length_raw)
    except ValueError:
        raise MalformedHeader(f"Content-Length is not an integer: {length_raw!r}") from None
    if content_length < 0:
        raise MalformedHeader(f"negative Content-Length: {content_length}")

    if n < pos + content_length:
        return _NEED_MORE
    payload = bytes(buf[pos : pos + content_length])
    pos += content_length

    # two line breaks terminate the record; bare LF tolerated with a warning
    for _ in range(2):
        if buf.startswith(b"\r\n", pos):
            pos += 2
        elif buf.startswith(b"\n", pos):
            pos += 1
            bare_lf += 1
        elif pos >= n or (pos == n - 1 and buf[pos] == 0x0D):
            return _NEED_MORE
        else:
            raise MalformedHeader("missing record separator after payload")

    record = WetRecord(
        warc_type=headers.get("warc-type", ""),
        target_uri=headers.get("warc-target-uri"),
        content_length=content_length,
        payload=payload,
        headers=headers,
        frame_bytes=pos,
        bare_lf_lines=bare_lf,
    )
    return record, pos


def parse_record(data: Union[bytes, bytearray]) -> tuple[WetRecord, int]:
    """Parse a single record from bytes starting at a record boundary.

    Returns the record and the number of bytes it consumed, so a caller
    can resume at the next record.
    """
    if not data:
        raise MissingVersionLine("empty input")
    result = _parse_frame(data, at_eof=True)
    if result is _NEED_MORE:
        raise TruncatedFile("input ends inside a record")
    return result


def open_wet_stream(
    source: BinaryIO, gzipped: bool = False, chunk_size: int = CHUNK_SIZE
) -> Iterator[WetRecord]:
    """Yield records from a byte stream in file order, single consumer.

    Complete records are yielded before a truncation error is raised for
    a final partial one.
    """
    if gzipped:
        reader = gzip.GzipFile(fileobj=source, mode="rb")

        def _read(nbytes: int) -> bytes:
            try:
                return reader.read(nbytes)
            except (EOFError, zlib.error, gzip.BadGzipFile) as exc:
                raise DecompressError(f"gzip decompression failed: {exc}") from exc

    else:

        def _read(nbytes: int) -> bytes:
            return source.read(nbytes)

    buf = bytearray()
    at_eof = False
    while True:
        if buf:
            result = _parse_frame(buf, at_eof)
            if result is not _NEED_MORE:
                record, consumed = result
                del buf[:consumed]
                yield record
                continue
            if at_eof:
                raise TruncatedFile(f"stream ends inside a record ({len(buf)} trailing bytes)")
        elif at_eof:
            return
        chunk = _read(chunk_size)
        if not chunk:
            at_eof = True
        else:
            buf += chunk


def open_wet_path(path: Union[str, Path]) -> Iterator[WetRecord]:
    """Stream records from a .wet or .wet.gz file."""
    path = Path(path)
    gzipped = path.suffix == ".gz"
    with open(path, "rb") as fh:
        yield from open_wet_stream(fh, gzipped=gzipped)


def extract_text(record: WetRecord) -> str:
    """Payload as text: lossy UTF-8 decode, whitespace collapsed and trimmed."""
    text = record.payload.decode("utf-8", errors="replace")
    return " ".join(text.split())
