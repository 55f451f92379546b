"""Frame codec tests: grammar, assembly, and corruption detection."""

import math
import random
import re
import zlib

import pytest

from mazo.pairing import (
    CHUNK_CHARS,
    MAX_PAYLOAD_BYTES,
    AssemblyState,
    Complete,
    Conflict,
    Frame,
    IntegrityError,
    MalformedFrameError,
    NeedMore,
    OversizePayloadError,
    absorb,
    absorb_text,
    decode_frame,
    encode_payload,
    new_assembly,
)

FRAME_RE = re.compile(r"^MZ1:[0-9]+/[0-9]+:[0-9a-f]{8}:[-z]:[A-Za-z0-9_-]{0,512}$")


def assemble(frames):
    state = new_assembly()
    status = None
    for text in frames:
        state, status = absorb(state, decode_frame(text))
    return state, status


class TestEncode:
    def test_empty_payload_is_one_frame_with_zero_crc(self):
        frames = encode_payload(b"", compress=False)
        assert frames == ["MZ1:1/1:00000000:-:"]

    def test_two_byte_payload_known_frame(self):
        frames = encode_payload(b"hi", compress=False)
        assert frames == ["MZ1:1/1:d8932aac:-:aGk"]

    def test_ten_kib_frame_count_matches_base64_length(self):
        body = bytes(range(256)) * 40
        frames = encode_payload(body, compress=False)
        assert len(frames) == 27
        assert len(frames) == math.ceil((len(body) * 4 + 2) // 3 / CHUNK_CHARS)

    def test_every_chunk_at_most_512_chars(self):
        frames = encode_payload(bytes(5000), compress=False)
        for text in frames:
            assert len(decode_frame(text).chunk) <= CHUNK_CHARS

    def test_indices_count_up_from_one(self):
        frames = encode_payload(bytes(3000), compress=False)
        decoded = [decode_frame(t) for t in frames]
        assert [f.index for f in decoded] == list(range(1, len(frames) + 1))
        assert {f.total for f in decoded} == {len(frames)}

    def test_crc_repeated_in_every_frame(self):
        frames = encode_payload(b"x" * 3000, compress=False)
        decoded = [decode_frame(t) for t in frames]
        assert len({(f.crc, f.flags) for f in decoded}) == 1

    def test_compression_used_when_it_shrinks(self):
        body = b"a" * 10_000
        frames = encode_payload(body, compress=True)
        assert decode_frame(frames[0]).flags == "z"
        assert len(frames) < len(encode_payload(body, compress=False))

    def test_compression_silently_dropped_when_it_grows(self):
        body = random.Random(7).randbytes(400)
        frames = encode_payload(body, compress=True)
        assert decode_frame(frames[0]).flags == "-"
        assert frames == encode_payload(body, compress=False)

    def test_crc_covers_post_compression_bytes(self):
        body = b"b" * 2_000
        frame = decode_frame(encode_payload(body, compress=True)[0])
        assert frame.flags == "z"
        assert frame.crc == zlib.crc32(zlib.compress(body, 9))
        assert frame.crc != zlib.crc32(body)

    def test_payload_at_limit_accepted(self):
        frames = encode_payload(bytes(MAX_PAYLOAD_BYTES), compress=False)
        assert decode_frame(frames[-1]).total == len(frames)

    def test_payload_over_limit_rejected(self):
        with pytest.raises(OversizePayloadError):
            encode_payload(bytes(MAX_PAYLOAD_BYTES + 1), compress=False)

    def test_frames_match_scanner_charset(self):
        rng = random.Random(11)
        for _ in range(50):
            body = rng.randbytes(rng.randrange(0, 4000))
            for text in encode_payload(body, compress=rng.random() < 0.5):
                assert FRAME_RE.match(text), text


class TestDecodeFrame:
    def test_round_trip_fields(self):
        frame = decode_frame("MZ1:3/7:0a1b2c3d:z:AbC_-9")
        assert frame == Frame(index=3, total=7, crc=0x0A1B2C3D, flags="z", chunk="AbC_-9")

    def test_empty_chunk_allowed(self):
        assert decode_frame("MZ1:1/1:00000000:-:").chunk == ""

    @pytest.mark.parametrize(
        "text",
        [
            "MZ2:1/1:00000000:-:aGk",
            "mz1:1/1:00000000:-:aGk",
            ":1/1:00000000:-:aGk",
            "MZ1:0/1:00000000:-:aGk",
            "MZ1:2/1:00000000:-:aGk",
            "MZ1:1/0:00000000:-:aGk",
            "MZ1:-1/1:00000000:-:aGk",
            "MZ1:1:00000000:-:aGk",
            "MZ1:a/b:00000000:-:aGk",
            "MZ1:1/1:0000000:-:aGk",
            "MZ1:1/1:000000000:-:aGk",
            "MZ1:1/1:0000ZZZZ:-:aGk",
            "MZ1:1/1:0000AAAA:-:aGk",
            "MZ1:1/1:00000000:x:aGk",
            "MZ1:1/1:00000000::aGk",
            "MZ1:1/1:00000000:-:aGk=",
            "MZ1:1/1:00000000:-:aG k",
            "MZ1:1/1:00000000:-:aGk:extra",
            "MZ1:1/1:00000000:-",
            "",
        ],
    )
    def test_malformed_frames_rejected(self, text):
        with pytest.raises(MalformedFrameError):
            decode_frame(text)

    def test_chunk_over_512_rejected(self):
        with pytest.raises(MalformedFrameError):
            decode_frame("MZ1:1/1:00000000:-:" + "A" * (CHUNK_CHARS + 1))

    def test_chunk_exactly_512_accepted(self):
        frame = decode_frame("MZ1:1/1:00000000:-:" + "A" * CHUNK_CHARS)
        assert len(frame.chunk) == CHUNK_CHARS


class TestAssembly:
    def test_single_frame_completes_immediately(self):
        _, status = assemble(encode_payload(b"hi", compress=False))
        assert status == Complete(payload=b"hi")

    def test_empty_payload_round_trips(self):
        _, status = assemble(encode_payload(b"", compress=False))
        assert status == Complete(payload=b"")

    def test_out_of_order_frames_complete(self):
        body = bytes(range(256)) * 20
        frames = encode_payload(body, compress=False)
        _, status = assemble(reversed(frames))
        assert status == Complete(payload=body)

    def test_shuffled_and_duplicated_frames_complete(self):
        rng = random.Random(3)
        for trial in range(40):
            body = rng.randbytes(rng.randrange(0, 8000))
            frames = encode_payload(body, compress=trial % 2 == 0) * 3
            rng.shuffle(frames)
            _, status = assemble(frames)
            assert status == Complete(payload=body)

    def test_need_more_reports_missing_indices(self):
        frames = encode_payload(bytes(2000), compress=False)
        total = len(frames)
        assert total >= 4
        state = new_assembly()
        state, status = absorb(state, decode_frame(frames[1]))
        assert status == NeedMore(missing=tuple(i for i in range(1, total + 1) if i != 2))
        state, status = absorb(state, decode_frame(frames[3]))
        assert 4 not in status.missing and 2 not in status.missing

    def test_duplicate_absorb_is_idempotent(self):
        frames = encode_payload(bytes(2000), compress=False)
        state = new_assembly()
        state, first = absorb(state, decode_frame(frames[0]))
        again, second = absorb(state, decode_frame(frames[0]))
        assert second == first
        assert again == state

    def test_compressed_payload_round_trips(self):
        body = b"the same phrase over and over " * 300
        _, status = assemble(encode_payload(body, compress=True))
        assert status == Complete(payload=body)

    def test_conflict_on_total_disagreement(self):
        state, _ = assemble(encode_payload(bytes(2000), compress=False)[:1])
        stray = Frame(index=1, total=99, crc=0, flags="-", chunk="")
        after, status = absorb(state, stray)
        assert isinstance(status, Conflict)
        assert after == state

    def test_conflict_on_crc_disagreement(self):
        frames_a = encode_payload(b"payload one", compress=False)
        frames_b = encode_payload(b"payload two", compress=False)
        state, _ = assemble(frames_a)
        _, status = absorb(state, decode_frame(frames_b[0]))
        assert isinstance(status, Conflict)

    def test_conflict_on_flags_disagreement(self):
        frame = decode_frame(encode_payload(b"hi", compress=False)[0])
        state, _ = absorb(new_assembly(), frame)
        twisted = Frame(frame.index, frame.total, frame.crc, "z", frame.chunk)
        _, status = absorb(state, twisted)
        assert isinstance(status, Conflict)

    def test_conflict_on_same_index_different_chunk(self):
        frames = encode_payload(bytes(2000), compress=False)
        first = decode_frame(frames[0])
        state, _ = absorb(new_assembly(), first)
        swapped = Frame(first.index, first.total, first.crc, first.flags, "AAAA")
        after, status = absorb(state, swapped)
        assert isinstance(status, Conflict)
        assert after.received == state.received

    def test_conflict_leaves_assembly_usable(self):
        body = bytes(1500)
        frames = encode_payload(body, compress=False)
        state, _ = assemble(frames[:-1])
        state, status = absorb(state, Frame(1, 99, 0, "-", ""))
        assert isinstance(status, Conflict)
        _, status = absorb(state, decode_frame(frames[-1]))
        assert status == Complete(payload=body)

    def test_crc_mismatch_raises_integrity_error(self):
        frames = encode_payload(b"hello world", compress=False)
        frame = decode_frame(frames[0])
        forged = Frame(frame.index, frame.total, frame.crc ^ 1, frame.flags, frame.chunk)
        with pytest.raises(IntegrityError):
            absorb(new_assembly(), forged)

    def test_integrity_error_is_not_a_conflict(self):
        assert not issubclass(IntegrityError, Conflict)

    def test_single_character_corruption_never_completes_wrong(self):
        # flips one chunk character per trial; the crc must catch every one
        rng = random.Random(99)
        alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"
        wrong = 0
        for _ in range(300):
            body = rng.randbytes(rng.randrange(1, 600))
            frames = encode_payload(body, compress=False)
            pick = rng.randrange(len(frames))
            frame = decode_frame(frames[pick])
            pos = rng.randrange(len(frame.chunk)) if frame.chunk else 0
            if not frame.chunk:
                continue
            old = frame.chunk[pos]
            new = rng.choice([c for c in alphabet if c != old])
            frames[pick] = frames[pick].replace(
                ":" + frame.chunk, ":" + frame.chunk[:pos] + new + frame.chunk[pos + 1 :]
            )
            try:
                _, status = assemble(frames)
            except IntegrityError:
                continue
            if isinstance(status, Complete) and status.payload != body:
                wrong += 1
        assert wrong == 0


class TestPasteBlob:
    def test_newline_joined_frames_assemble(self):
        body = bytes(range(200)) * 10
        blob = "\n".join(encode_payload(body, compress=False))
        _, status = absorb_text(new_assembly(), blob)
        assert status == Complete(payload=body)

    def test_mixed_whitespace_and_duplicates(self):
        body = b"clipboard payload " * 100
        frames = encode_payload(body, compress=True)
        blob = "  " + "\r\n".join(frames) + "\n\n" + frames[0] + "\t" + frames[-1]
        _, status = absorb_text(new_assembly(), blob)
        assert status == Complete(payload=body)

    def test_blob_can_continue_partial_assembly(self):
        frames = encode_payload(bytes(2000), compress=False)
        state, _ = absorb(new_assembly(), decode_frame(frames[0]))
        _, status = absorb_text(state, "\n".join(frames[1:]))
        assert status == Complete(payload=bytes(2000))

    def test_conflicting_blob_reports_conflict(self):
        blob = (
            encode_payload(b"one", compress=False)[0]
            + "\n"
            + encode_payload(b"two", compress=False)[0]
        )
        _, status = absorb_text(new_assembly(), blob)
        assert isinstance(status, Conflict)

    def test_empty_blob_rejected(self):
        with pytest.raises(MalformedFrameError):
            absorb_text(new_assembly(), "   \n ")

    def test_malformed_token_in_blob_raises(self):
        with pytest.raises(MalformedFrameError):
            absorb_text(new_assembly(), "MZ1:1/2:00000000:-:aGk\nnot-a-frame")


class TestStateShape:
    def test_absorb_does_not_mutate_input_state(self):
        frames = encode_payload(bytes(2000), compress=False)
        state = new_assembly()
        out, _ = absorb(state, decode_frame(frames[0]))
        assert state == AssemblyState()
        assert out != state
