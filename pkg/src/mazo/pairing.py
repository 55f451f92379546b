"""Signaling-payload codec: checksummed, chunked, QR-friendly text frames.

Opaque payload bytes are optionally deflate-compressed (kept only when it
actually shrinks them), base64url-encoded without padding, and split into
frames of at most 512 chunk characters:

    MZ1:<index>/<total>:<crc32-hex-8>:<flags>:<chunk>

with 1-based indices, flags "-" (raw) or "z" (compressed), and a single
crc32 — computed over the payload bytes after the compression decision —
repeated in every frame.  Because the crc covers the pre-split bytes, a
scanner can validate the whole assembly with one field and detect frames
mixed in from a different payload.

Frames from a looping animation arrive out of order and repeatedly, so
assembly is order-independent and duplicates are idempotent.  Compression
uses zlib (deflate) at level 9; the crc is validated before any
decompression happens.
"""

from __future__ import annotations

import base64
import binascii
import re
import zlib
from dataclasses import dataclass, field
from typing import Optional, Union

MAX_PAYLOAD_BYTES = 256 * 1024
CHUNK_CHARS = 512
FRAME_PREFIX = "MZ1"

_CHUNK_RE = re.compile(r"^[A-Za-z0-9_-]*$")
_CRC_RE = re.compile(r"^[0-9a-f]{8}$")


class PairingError(Exception):
    """Base class for codec failures."""


class OversizePayloadError(PairingError):
    pass


class MalformedFrameError(PairingError):
    """The text violates the frame grammar; the message names the rule."""


class IntegrityError(PairingError):
    """All frames present but the reassembled bytes fail validation."""


@dataclass(frozen=True)
class Frame:
    index: int
    total: int
    crc: int
    flags: str
    chunk: str


@dataclass(frozen=True)
class NeedMore:
    missing: tuple[int, ...]


@dataclass(frozen=True)
class Complete:
    payload: bytes


@dataclass(frozen=True)
class Conflict:
    reason: str


Status = Union[NeedMore, Complete, Conflict]


@dataclass
class AssemblyState:
    expected_total: Optional[int] = None
    expected_crc: Optional[int] = None
    expected_flags: Optional[str] = None
    received: dict[int, str] = field(default_factory=dict)
    # memoized _finalize result; a cache only, so it never affects equality
    _payload: Optional[bytes] = field(default=None, compare=False)

    def clone(self) -> AssemblyState:
        return AssemblyState(
            self.expected_total,
            self.expected_crc,
            self.expected_flags,
            dict(self.received),
            self._payload,
        )


def new_assembly() -> AssemblyState:
    return AssemblyState()


def encode_payload(payload: bytes, compress: bool) -> list[str]:
    """Encode bytes as a list of frame texts (at least one, even for b"")."""
    if len(payload) > MAX_PAYLOAD_BYTES:
        raise OversizePayloadError(f"payload is {len(payload)} bytes, limit {MAX_PAYLOAD_BYTES}")
    body = payload
    flags = "-"
    if compress:
        squeezed = zlib.compress(payload, 9)
        if len(squeezed) < len(payload):
            body, flags = squeezed, "z"
    crc = zlib.crc32(body) & 0xFFFFFFFF
    text = base64.urlsafe_b64encode(body).rstrip(b"=").decode("ascii")
    chunks = [text[i : i + CHUNK_CHARS] for i in range(0, len(text), CHUNK_CHARS)] or [""]
    total = len(chunks)
    return [
        f"{FRAME_PREFIX}:{index}/{total}:{crc:08x}:{flags}:{chunk}"
        for index, chunk in enumerate(chunks, start=1)
    ]


def decode_frame(text: str) -> Frame:
    parts = text.split(":")
    if len(parts) != 5:
        raise MalformedFrameError("frame must have exactly five colon-separated fields")
    prefix, position, crc_hex, flags, chunk = parts
    if prefix != FRAME_PREFIX:
        raise MalformedFrameError(f"bad prefix {prefix!r}, expected {FRAME_PREFIX!r}")
    head, sep, tail = position.partition("/")
    if not sep or not head.isdigit() or not tail.isdigit():
        raise MalformedFrameError(f"bad index/total field {position!r}")
    index, total = int(head), int(tail)
    if total < 1:
        raise MalformedFrameError("total must be at least 1")
    if not 1 <= index <= total:
        raise MalformedFrameError(f"index {index} out of range 1..{total}")
    if not _CRC_RE.match(crc_hex):
        raise MalformedFrameError(f"crc must be 8 lowercase hex characters, got {crc_hex!r}")
    if flags not in ("-", "z"):
        raise MalformedFrameError(f"flags must be '-' or 'z', got {flags!r}")
    if len(chunk) > CHUNK_CHARS:
        raise MalformedFrameError(f"chunk exceeds {CHUNK_CHARS} characters")
    if not _CHUNK_RE.match(chunk):
        raise MalformedFrameError("chunk contains characters outside base64url")
    return Frame(index=index, total=total, crc=int(crc_hex, 16), flags=flags, chunk=chunk)


def _finalize(state: AssemblyState) -> bytes:
    assert state.expected_total is not None
    text = "".join(state.received[i] for i in range(1, state.expected_total + 1))
    padding = "=" * (-len(text) % 4)
    try:
        body = base64.urlsafe_b64decode(text + padding)
    except (binascii.Error, ValueError) as exc:
        raise IntegrityError(f"reassembled text is not valid base64url: {exc}") from exc
    if (zlib.crc32(body) & 0xFFFFFFFF) != state.expected_crc:
        raise IntegrityError("crc mismatch over reassembled payload")
    if state.expected_flags == "z":
        try:
            return zlib.decompress(body)
        except zlib.error as exc:
            raise IntegrityError(f"payload does not decompress: {exc}") from exc
    return body


def absorb(state: AssemblyState, frame: Frame) -> tuple[AssemblyState, Status]:
    """Fold one frame into the assembly.

    Returns the unchanged state with a Conflict status when the frame
    disagrees with earlier frames; raises IntegrityError when the final
    assembled payload fails its checksum.
    """
    if state.expected_total is not None:
        if frame.total != state.expected_total:
            return state, Conflict(f"total {frame.total} != {state.expected_total}")
        if frame.crc != state.expected_crc:
            return state, Conflict("crc differs from earlier frames")
        if frame.flags != state.expected_flags:
            return state, Conflict("flags differ from earlier frames")
    previous = state.received.get(frame.index)
    if previous is not None:
        if previous != frame.chunk:
            return state, Conflict(f"index {frame.index} already received with different content")
        return state, _status(state)

    out = state.clone()
    out.expected_total = frame.total
    out.expected_crc = frame.crc
    out.expected_flags = frame.flags
    out.received[frame.index] = frame.chunk
    return out, _status(out)


def _status(state: AssemblyState) -> Status:
    assert state.expected_total is not None
    missing = tuple(i for i in range(1, state.expected_total + 1) if i not in state.received)
    if missing:
        return NeedMore(missing=missing)
    if state._payload is None:
        state._payload = _finalize(state)
    return Complete(payload=state._payload)


def absorb_text(state: AssemblyState, blob: str) -> tuple[AssemblyState, Status]:
    """Absorb a whitespace-separated blob of frames (the manual-paste path).

    Stops at the first Conflict; otherwise returns the status after the
    last frame.
    """
    tokens = blob.split()
    if not tokens:
        raise MalformedFrameError("no frames in text")
    status: Status = NeedMore(missing=())
    for token in tokens:
        state, status = absorb(state, decode_frame(token))
        if isinstance(status, Conflict):
            return state, status
    return state, status
