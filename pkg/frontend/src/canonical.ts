/**
 * Canonical structured-text encoding: key-sorted JSON, UTF-8, minimal
 * separators, and no floating point anywhere. Identical values always
 * produce identical bytes, which is what lets the client byte-compare
 * its outbound messages against engine recordings.
 *
 * JSON.parse cannot host this format: wire documents carry unsigned
 * 64-bit stream states that a double silently rounds. Integers outside
 * the safe range therefore parse to bigint, and both number and bigint
 * stringify to the same digits.
 */

export type Canon = null | boolean | number | bigint | string | Canon[] | CanonDict;

export interface CanonDict {
  [key: string]: Canon;
}

export class CanonicalError extends Error {}

// Python sorts keys by code point; JS string comparison orders UTF-16
// code units, which disagrees above the basic plane.
function compareCodePoints(a: string, b: string): number {
  const as = Array.from(a);
  const bs = Array.from(b);
  const n = Math.min(as.length, bs.length);
  for (let i = 0; i < n; i++) {
    const ca = as[i]!.codePointAt(0)!;
    const cb = bs[i]!.codePointAt(0)!;
    if (ca !== cb) return ca - cb;
  }
  return as.length - bs.length;
}

function quote(text: string): string {
  return JSON.stringify(text);
}

export function canonicalString(value: Canon): string {
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "bigint") return value.toString();
  if (typeof value === "number") {
    if (!Number.isSafeInteger(value)) {
      throw new CanonicalError(`non-integer number ${value} not allowed in canonical form`);
    }
    return String(value);
  }
  if (typeof value === "string") return quote(value);
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalString).join(",") + "]";
  }
  const keys = Object.keys(value).sort(compareCodePoints);
  const parts = keys.map((k) => quote(k) + ":" + canonicalString(value[k]!));
  return "{" + parts.join(",") + "}";
}

export function canonicalBytes(value: Canon): Uint8Array {
  return new TextEncoder().encode(canonicalString(value));
}

const WHITESPACE = new Set([" ", "\t", "\n", "\r"]);

class Parser {
  pos = 0;

  constructor(readonly text: string) {}

  error(message: string): never {
    throw new CanonicalError(`${message} at offset ${this.pos}`);
  }

  peek(): string {
    const ch = this.text[this.pos];
    if (ch === undefined) this.error("unexpected end of input");
    return ch;
  }

  skipWs(): void {
    while (this.pos < this.text.length && WHITESPACE.has(this.text[this.pos]!)) this.pos++;
  }

  expect(ch: string): void {
    if (this.peek() !== ch) this.error(`expected ${JSON.stringify(ch)}`);
    this.pos++;
  }

  literal(word: string, value: Canon): Canon {
    if (this.text.startsWith(word, this.pos)) {
      this.pos += word.length;
      return value;
    }
    this.error(`bad literal, expected ${word}`);
  }

  string(): string {
    this.expect('"');
    let out = "";
    for (;;) {
      const ch = this.peek();
      this.pos++;
      if (ch === '"') return out;
      if (ch === "\\") {
        const esc = this.peek();
        this.pos++;
        switch (esc) {
          case '"': out += '"'; break;
          case "\\": out += "\\"; break;
          case "/": out += "/"; break;
          case "b": out += "\b"; break;
          case "f": out += "\f"; break;
          case "n": out += "\n"; break;
          case "r": out += "\r"; break;
          case "t": out += "\t"; break;
          case "u": {
            const hex = this.text.slice(this.pos, this.pos + 4);
            if (!/^[0-9a-fA-F]{4}$/.test(hex)) this.error("bad unicode escape");
            this.pos += 4;
            out += String.fromCharCode(parseInt(hex, 16));
            break;
          }
          default:
            this.error(`bad escape \\${esc}`);
        }
        continue;
      }
      if (ch.charCodeAt(0) < 0x20) this.error("raw control character in string");
      out += ch;
    }
  }

  number(): number | bigint {
    const start = this.pos;
    if (this.peek() === "-") this.pos++;
    if (!/[0-9]/.test(this.peek())) this.error("bad number");
    while (this.pos < this.text.length && /[0-9]/.test(this.text[this.pos]!)) this.pos++;
    const next = this.text[this.pos];
    if (next === "." || next === "e" || next === "E") {
      this.error("float values are not allowed");
    }
    const digits = this.text.slice(start, this.pos);
    if (/^-?0[0-9]/.test(digits)) this.error("number has a leading zero");
    const big = BigInt(digits);
    if (big >= BigInt(Number.MIN_SAFE_INTEGER) && big <= BigInt(Number.MAX_SAFE_INTEGER)) {
      return Number(big);
    }
    return big;
  }

  value(): Canon {
    this.skipWs();
    const ch = this.peek();
    if (ch === "{") return this.object();
    if (ch === "[") return this.array();
    if (ch === '"') return this.string();
    if (ch === "t") return this.literal("true", true);
    if (ch === "f") return this.literal("false", false);
    if (ch === "n") return this.literal("null", null);
    if (ch === "-" || /[0-9]/.test(ch)) return this.number();
    this.error(`unexpected character ${JSON.stringify(ch)}`);
  }

  object(): CanonDict {
    this.expect("{");
    const out: CanonDict = {};
    this.skipWs();
    if (this.peek() === "}") {
      this.pos++;
      return out;
    }
    for (;;) {
      this.skipWs();
      const key = this.string();
      this.skipWs();
      this.expect(":");
      out[key] = this.value();
      this.skipWs();
      const ch = this.peek();
      this.pos++;
      if (ch === "}") return out;
      if (ch !== ",") this.error("expected ',' or '}'");
    }
  }

  array(): Canon[] {
    this.expect("[");
    const out: Canon[] = [];
    this.skipWs();
    if (this.peek() === "]") {
      this.pos++;
      return out;
    }
    for (;;) {
      out.push(this.value());
      this.skipWs();
      const ch = this.peek();
      this.pos++;
      if (ch === "]") return out;
      if (ch !== ",") this.error("expected ',' or ']'");
    }
  }
}

export function parseCanonical(text: string): Canon {
  const parser = new Parser(text);
  const value = parser.value();
  parser.skipWs();
  if (parser.pos !== text.length) parser.error("trailing data after document");
  return value;
}

export function parseCanonicalBytes(data: Uint8Array): Canon {
  return parseCanonical(new TextDecoder("utf-8", { fatal: true }).decode(data));
}

/** Narrow a parsed value to a plain object or fail loudly. */
export function asDict(value: Canon, where: string): CanonDict {
  if (value === null || typeof value !== "object" || Array.isArray(value)) {
    throw new CanonicalError(`expected object at ${where}`);
  }
  return value;
}

export function asArray(value: Canon, where: string): Canon[] {
  if (!Array.isArray(value)) throw new CanonicalError(`expected array at ${where}`);
  return value;
}

export function asString(value: Canon, where: string): string {
  if (typeof value !== "string") throw new CanonicalError(`expected string at ${where}`);
  return value;
}

/** Integers the client reasons about must fit in a plain number. */
export function asInt(value: Canon, where: string): number {
  if (typeof value === "number" && Number.isSafeInteger(value)) return value;
  throw new CanonicalError(`expected small integer at ${where}`);
}
