/**
 * Session wire format: length-prefixed canonical JSON messages over a
 * reliable ordered byte channel. The prefix is the body's byte length in
 * decimal ASCII followed by a colon; the body is one canonical document
 * with a "type" field.
 */

import {
  Canon,
  CanonDict,
  CanonicalError,
  asDict,
  asInt,
  asString,
  canonicalBytes,
  parseCanonicalBytes,
} from "./canonical.js";

export const PROTOCOL_VERSION = 1;

export class MalformedMessageError extends Error {}

export type MessageType =
  | "Hello"
  | "Welcome"
  | "Start"
  | "NodeChoice"
  | "HeroAction"
  | "StateUpdate"
  | "HeroSummary"
  | "Reject"
  | "Bye"
  | "Ping"
  | "Pong";

const FIELDS: Record<MessageType, readonly string[]> = {
  Hello: ["protocol_version", "display_name", "content_hash"],
  Welcome: ["assigned_hero_index"],
  Start: ["seed", "config", "content_hash"],
  NodeChoice: ["node_id"],
  HeroAction: ["hero_index", "scene_kind", "payload"],
  StateUpdate: ["sequence", "party", "scene", "heroes"],
  HeroSummary: ["hero_index", "hp", "max_hp", "credits"],
  Reject: ["reason"],
  Bye: ["reason"],
  Ping: [],
  Pong: [],
};

/** A validated message: its type plus the raw canonical document. */
export interface Message {
  type: MessageType;
  doc: CanonDict;
}

export function validateMessage(value: Canon): Message {
  let doc: CanonDict;
  try {
    doc = asDict(value, "message");
  } catch {
    throw new MalformedMessageError("message must be an object with a type");
  }
  const kind = doc["type"];
  if (typeof kind !== "string" || !(kind in FIELDS)) {
    throw new MalformedMessageError(`unknown message type ${JSON.stringify(kind)}`);
  }
  const type = kind as MessageType;
  const expected = new Set([...FIELDS[type], "type"]);
  const actual = Object.keys(doc);
  if (actual.length !== expected.size || !actual.every((k) => expected.has(k))) {
    throw new MalformedMessageError(`${type} message has the wrong field set`);
  }
  return { type, doc };
}

export function encodeMessage(doc: CanonDict): Uint8Array {
  validateMessage(doc);
  const body = canonicalBytes(doc);
  const prefix = new TextEncoder().encode(`${body.length}:`);
  const out = new Uint8Array(prefix.length + body.length);
  out.set(prefix, 0);
  out.set(body, prefix.length);
  return out;
}

function concat(a: Uint8Array, b: Uint8Array): Uint8Array {
  const out = new Uint8Array(a.length + b.length);
  out.set(a, 0);
  out.set(b, a.length);
  return out;
}

/**
 * Incremental reader for a byte stream of messages. Feed arbitrary
 * chunks; `drain` yields every complete message and keeps the tail.
 */
export class MessageReader {
  private buffer: Uint8Array = new Uint8Array(0);

  feed(data: Uint8Array): Message[] {
    this.buffer = concat(this.buffer, data);
    const out: Message[] = [];
    for (;;) {
      const msg = this.next();
      if (msg === null) return out;
      out.push(msg);
    }
  }

  get pending(): number {
    return this.buffer.length;
  }

  private next(): Message | null {
    const sep = this.buffer.indexOf(0x3a); // ':'
    if (sep === 0) throw new MalformedMessageError("missing length prefix");
    if (sep < 0) {
      if (this.buffer.length > 20) {
        // no colon within any plausible length prefix
        throw new MalformedMessageError("missing length prefix");
      }
      return null;
    }
    const prefix = new TextDecoder().decode(this.buffer.subarray(0, sep));
    if (!/^[0-9]+$/.test(prefix)) {
      throw new MalformedMessageError("length prefix must be decimal digits");
    }
    if (prefix.length > 1 && prefix.startsWith("0")) {
      throw new MalformedMessageError("length prefix has a leading zero");
    }
    const length = parseInt(prefix, 10);
    if (this.buffer.length < sep + 1 + length) return null;
    const body = this.buffer.subarray(sep + 1, sep + 1 + length);
    this.buffer = this.buffer.slice(sep + 1 + length);
    let value: Canon;
    try {
      value = parseCanonicalBytes(body);
    } catch (exc) {
      if (exc instanceof CanonicalError) {
        throw new MalformedMessageError(`unreadable message body: ${exc.message}`);
      }
      throw new MalformedMessageError("unreadable message body");
    }
    return validateMessage(value);
  }
}

// -- convenience constructors for the documents the client sends ----------

export function helloDoc(displayName: string, contentHash: string): CanonDict {
  return {
    type: "Hello",
    protocol_version: PROTOCOL_VERSION,
    display_name: displayName,
    content_hash: contentHash,
  };
}

export function nodeChoiceDoc(nodeId: string): CanonDict {
  return { type: "NodeChoice", node_id: nodeId };
}

export function heroActionDoc(heroIndex: number, sceneKind: string, payload: CanonDict): CanonDict {
  return { type: "HeroAction", hero_index: heroIndex, scene_kind: sceneKind, payload };
}

export function playCardPayload(handIndex: number, target: number | null): CanonDict {
  return { kind: "PlayCard", hand_index: handIndex, target };
}

export function endTurnPayload(): CanonDict {
  return { kind: "EndTurn", hand_index: -1, target: null };
}

export function heroSummaryDoc(
  heroIndex: number,
  hp: number,
  maxHp: number,
  credits: number,
): CanonDict {
  return { type: "HeroSummary", hero_index: heroIndex, hp, max_hp: maxHp, credits };
}

export function byeDoc(reason: string): CanonDict {
  return { type: "Bye", reason };
}

export function pongDoc(): CanonDict {
  return { type: "Pong" };
}

// -- typed readers for inbound fields --------------------------------------

export function messageInt(msg: Message, field: string): number {
  return asInt(msg.doc[field] ?? null, `${msg.type}.${field}`);
}

export function messageStr(msg: Message, field: string): string {
  return asString(msg.doc[field] ?? null, `${msg.type}.${field}`);
}

export function messageDict(msg: Message, field: string): CanonDict {
  return asDict(msg.doc[field] ?? null, `${msg.type}.${field}`);
}
