/**
 * QR rendering and scanning for the pairing screen, kept headless: a
 * frame of pairing text becomes an RGBA raster, and a raster (from a
 * real camera or a synthetic feed) becomes text again. Medium error
 * correction balances density against the blurry phone-camera case.
 */

import jsqrModule from "jsqr";
import type { Options as JsQrOptions, QRCode as JsQrResult } from "jsqr";
import QRCode from "qrcode";

type JsQrFn = (
  data: Uint8ClampedArray,
  width: number,
  height: number,
  options?: JsQrOptions,
) => JsQrResult | null;

// The scanner ships as CommonJS; unwrap its default under either interop.
const jsQR: JsQrFn =
  (jsqrModule as unknown as { default?: JsQrFn }).default ?? (jsqrModule as unknown as JsQrFn);

export interface QrImage {
  width: number;
  height: number;
  data: Uint8ClampedArray;
}

export const QR_SCALE = 4;
export const QR_MARGIN = 4;

/** Rasterize one frame of pairing text as an RGBA image. */
export function frameToImage(text: string, scale = QR_SCALE, margin = QR_MARGIN): QrImage {
  const code = QRCode.create(text, { errorCorrectionLevel: "M" });
  const size = code.modules.size;
  const dim = (size + margin * 2) * scale;
  const data = new Uint8ClampedArray(dim * dim * 4).fill(255);
  for (let row = 0; row < size; row += 1) {
    for (let col = 0; col < size; col += 1) {
      if (!code.modules.get(row, col)) continue;
      const top = (row + margin) * scale;
      const left = (col + margin) * scale;
      for (let y = top; y < top + scale; y += 1) {
        for (let x = left; x < left + scale; x += 1) {
          const at = (y * dim + x) * 4;
          data[at] = 0;
          data[at + 1] = 0;
          data[at + 2] = 0;
        }
      }
    }
  }
  return { width: dim, height: dim, data };
}

/** Decode the QR code in an RGBA image, or null when none reads. */
export function scanImage(image: QrImage): string | null {
  const hit = jsQR(image.data, image.width, image.height, {
    inversionAttempts: "dontInvert",
  });
  return hit === null ? null : hit.data;
}
