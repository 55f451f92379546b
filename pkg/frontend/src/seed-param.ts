/**
 * Session seed from the page URL. Seeds are unsigned 64-bit values, so
 * they travel as decimal strings and parse to bigint; anything out of
 * range or non-numeric is ignored rather than guessed at.
 */

const SEED_LIMIT = 1n << 64n;

export function parseSeedParam(url: string): bigint | null {
  let parsed: URL;
  try {
    parsed = new URL(url, "http://localhost/");
  } catch {
    return null;
  }
  const raw = parsed.searchParams.get("seed");
  if (raw === null || !/^[0-9]+$/.test(raw)) return null;
  const value = BigInt(raw);
  return value < SEED_LIMIT ? value : null;
}
