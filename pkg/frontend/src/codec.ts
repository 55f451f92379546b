/**
 * Signaling-payload codec: checksummed, chunked, QR-friendly text frames.
 *
 *     MZ1:<index>/<total>:<crc32-hex-8>:<flags>:<chunk>
 *
 * Payload bytes are optionally deflate-compressed (kept only when it
 * actually shrinks them), base64url-encoded without padding, and split
 * into frames of at most 512 chunk characters. Indices are 1-based;
 * flags are "-" (raw) or "z" (compressed); the single crc32 is computed
 * over the payload bytes after the compression decision and repeated in
 * every frame, so one field validates the whole assembly and flags
 * frames mixed in from a different payload.
 *
 * Frames from a looping animation arrive out of order and repeatedly,
 * so assembly is order-independent and duplicates are idempotent.
 */

import { crc32 } from "./crc32.js";

export const MAX_PAYLOAD_BYTES = 256 * 1024;
export const CHUNK_CHARS = 512;
export const FRAME_PREFIX = "MZ1";

const CHUNK_RE = /^[A-Za-z0-9_-]*$/;
const CRC_RE = /^[0-9a-f]{8}$/;
const B64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
const B64_VALUE = new Map([...B64].map((ch, i) => [ch, i]));

export class PairingError extends Error {}
export class OversizePayloadError extends PairingError {}
/** The text violates the frame grammar; the message names the rule. */
export class MalformedFrameError extends PairingError {}
/** All frames present but the reassembled bytes fail validation. */
export class IntegrityError extends PairingError {}

/** Compression backend; node uses zlib, a browser build would bring its own. */
export interface Compression {
  deflate(data: Uint8Array): Uint8Array;
  inflate(data: Uint8Array): Uint8Array;
}

export interface Frame {
  index: number;
  total: number;
  crc: number;
  flags: string;
  chunk: string;
}

export type Status =
  | { state: "need-more"; missing: number[] }
  | { state: "complete"; payload: Uint8Array }
  | { state: "conflict"; reason: string };

function base64urlEncode(data: Uint8Array): string {
  let out = "";
  for (let i = 0; i < data.length; i += 3) {
    const a = data[i]!;
    const b = data[i + 1];
    const c = data[i + 2];
    out += B64[a >> 2]!;
    out += B64[((a & 0x03) << 4) | ((b ?? 0) >> 4)]!;
    if (b === undefined) break;
    out += B64[((b & 0x0f) << 2) | ((c ?? 0) >> 6)]!;
    if (c === undefined) break;
    out += B64[c & 0x3f]!;
  }
  return out;
}

function base64urlDecode(text: string): Uint8Array {
  if (text.length % 4 === 1) {
    throw new IntegrityError("reassembled text is not valid base64url: bad length");
  }
  const out = new Uint8Array(Math.floor((text.length * 3) / 4));
  let pos = 0;
  let buffer = 0;
  let bits = 0;
  for (const ch of text) {
    const value = B64_VALUE.get(ch);
    if (value === undefined) {
      throw new IntegrityError(`reassembled text is not valid base64url: ${JSON.stringify(ch)}`);
    }
    buffer = (buffer << 6) | value;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out[pos++] = (buffer >> bits) & 0xff;
    }
  }
  return out.subarray(0, pos);
}

export function encodePayload(
  payload: Uint8Array,
  compress: boolean,
  compression: Compression,
): string[] {
  if (payload.length > MAX_PAYLOAD_BYTES) {
    throw new OversizePayloadError(
      `payload is ${payload.length} bytes, limit ${MAX_PAYLOAD_BYTES}`,
    );
  }
  let body = payload;
  let flags = "-";
  if (compress) {
    const squeezed = compression.deflate(payload);
    if (squeezed.length < payload.length) {
      body = squeezed;
      flags = "z";
    }
  }
  const crcHex = crc32(body).toString(16).padStart(8, "0");
  const text = base64urlEncode(body);
  const chunks: string[] = [];
  for (let i = 0; i < text.length; i += CHUNK_CHARS) {
    chunks.push(text.slice(i, i + CHUNK_CHARS));
  }
  if (chunks.length === 0) chunks.push("");
  const total = chunks.length;
  return chunks.map(
    (chunk, i) => `${FRAME_PREFIX}:${i + 1}/${total}:${crcHex}:${flags}:${chunk}`,
  );
}

export function decodeFrame(text: string): Frame {
  const parts = text.split(":");
  if (parts.length !== 5) {
    throw new MalformedFrameError("frame must have exactly five colon-separated fields");
  }
  const [prefix, position, crcHex, flags, chunk] = parts as [string, string, string, string, string];
  if (prefix !== FRAME_PREFIX) {
    throw new MalformedFrameError(`bad prefix ${JSON.stringify(prefix)}, expected "${FRAME_PREFIX}"`);
  }
  const slash = position.indexOf("/");
  const head = slash < 0 ? position : position.slice(0, slash);
  const tail = slash < 0 ? "" : position.slice(slash + 1);
  if (slash < 0 || !/^[0-9]+$/.test(head) || !/^[0-9]+$/.test(tail)) {
    throw new MalformedFrameError(`bad index/total field ${JSON.stringify(position)}`);
  }
  const index = parseInt(head, 10);
  const total = parseInt(tail, 10);
  if (total < 1) throw new MalformedFrameError("total must be at least 1");
  if (index < 1 || index > total) {
    throw new MalformedFrameError(`index ${index} out of range 1..${total}`);
  }
  if (!CRC_RE.test(crcHex)) {
    throw new MalformedFrameError(`crc must be 8 lowercase hex characters, got ${JSON.stringify(crcHex)}`);
  }
  if (flags !== "-" && flags !== "z") {
    throw new MalformedFrameError(`flags must be '-' or 'z', got ${JSON.stringify(flags)}`);
  }
  if (chunk.length > CHUNK_CHARS) {
    throw new MalformedFrameError(`chunk exceeds ${CHUNK_CHARS} characters`);
  }
  if (!CHUNK_RE.test(chunk)) {
    throw new MalformedFrameError("chunk contains characters outside base64url");
  }
  return { index, total, crc: parseInt(crcHex, 16), flags, chunk };
}

export class Assembly {
  private expectedTotal: number | null = null;
  private expectedCrc = 0;
  private expectedFlags = "-";
  private received = new Map<number, string>();
  private payload: Uint8Array | null = null;

  constructor(private readonly compression: Compression) {}

  get progress(): { received: number; total: number } | null {
    if (this.expectedTotal === null) return null;
    return { received: this.received.size, total: this.expectedTotal };
  }

  private finalize(): Uint8Array {
    const total = this.expectedTotal!;
    let text = "";
    for (let i = 1; i <= total; i++) text += this.received.get(i)!;
    const body = base64urlDecode(text);
    if (crc32(body) !== this.expectedCrc) {
      throw new IntegrityError("crc mismatch over reassembled payload");
    }
    if (this.expectedFlags === "z") {
      try {
        return this.compression.inflate(body);
      } catch (exc) {
        throw new IntegrityError(`payload does not decompress: ${exc}`);
      }
    }
    return body;
  }

  private status(): Status {
    const total = this.expectedTotal!;
    const missing: number[] = [];
    for (let i = 1; i <= total; i++) {
      if (!this.received.has(i)) missing.push(i);
    }
    if (missing.length > 0) return { state: "need-more", missing };
    if (this.payload === null) this.payload = this.finalize();
    return { state: "complete", payload: this.payload };
  }

  /**
   * Fold one frame into the assembly. Returns a conflict status when the
   * frame disagrees with earlier frames; throws IntegrityError when the
   * final assembled payload fails its checksum.
   */
  absorb(frame: Frame): Status {
    if (this.expectedTotal !== null) {
      if (frame.total !== this.expectedTotal) {
        return { state: "conflict", reason: `total ${frame.total} != ${this.expectedTotal}` };
      }
      if (frame.crc !== this.expectedCrc) {
        return { state: "conflict", reason: "crc differs from earlier frames" };
      }
      if (frame.flags !== this.expectedFlags) {
        return { state: "conflict", reason: "flags differ from earlier frames" };
      }
    }
    const previous = this.received.get(frame.index);
    if (previous !== undefined) {
      if (previous !== frame.chunk) {
        return {
          state: "conflict",
          reason: `index ${frame.index} already received with different content`,
        };
      }
      return this.status();
    }
    this.expectedTotal = frame.total;
    this.expectedCrc = frame.crc;
    this.expectedFlags = frame.flags;
    this.received.set(frame.index, frame.chunk);
    return this.status();
  }

  /**
   * Absorb a whitespace-separated blob of frames (the manual-paste path).
   * Stops at the first conflict; otherwise returns the status after the
   * last frame.
   */
  absorbText(blob: string): Status {
    const tokens = blob.split(/\s+/).filter((t) => t.length > 0);
    if (tokens.length === 0) throw new MalformedFrameError("no frames in text");
    let status: Status = { state: "need-more", missing: [] };
    for (const token of tokens) {
      status = this.absorb(decodeFrame(token));
      if (status.state === "conflict") return status;
    }
    return status;
  }
}
