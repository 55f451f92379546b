/** Node implementations of the platform seams (tests run headless here). */

import { createHash } from "node:crypto";
import { deflateSync, inflateSync } from "node:zlib";

import type { Compression } from "./codec.js";

export const nodeCompression: Compression = {
  // Level 9 mirrors the engine's encoder settings. The compressed bytes
  // are not guaranteed identical across zlib builds — only raw frames
  // are byte-stable — so receivers must accept any valid stream.
  deflate: (data) => new Uint8Array(deflateSync(data, { level: 9 })),
  inflate: (data) => new Uint8Array(inflateSync(data)),
};

export function sha256Hex(data: Uint8Array): string {
  return createHash("sha256").update(data).digest("hex");
}
