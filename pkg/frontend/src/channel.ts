/**
 * In-memory stand-in for the peer link. Real deployments would ride a
 * reliable ordered datachannel; tests need the same shape without a
 * network stack, so this models the handshake honestly: the host mints
 * an offer document, the guest answers it, and only when the host
 * accepts that answer do both channel halves open. Until then sending
 * throws, exactly like a datachannel before its open event.
 *
 * All randomness comes from a seeded 64-bit linear congruential
 * generator so pairing transcripts are reproducible in tests.
 */

import { Canon, CanonDict, asArray, asDict, asString, canonicalBytes, parseCanonicalBytes } from "./canonical.js";

export class SignalError extends Error {}

export interface Channel {
  readonly open: boolean;
  send(data: Uint8Array): void;
  /** Register the receive handler; queued data is flushed to it. */
  onMessage(handler: (data: Uint8Array) => void): void;
  /** Register the open handler; fires immediately if already open. */
  onOpen(handler: () => void): void;
  close(): void;
}

class Duplex implements Channel {
  peer: Duplex | null = null;
  private isOpen = false;
  private closed = false;
  private handler: ((data: Uint8Array) => void) | null = null;
  private openHandler: (() => void) | null = null;
  private inbox: Uint8Array[] = [];

  get open(): boolean {
    return this.isOpen && !this.closed;
  }

  send(data: Uint8Array): void {
    if (!this.open) throw new SignalError("channel is not open");
    this.peer?.deliver(data);
  }

  onMessage(handler: (data: Uint8Array) => void): void {
    this.handler = handler;
    const pending = this.inbox;
    this.inbox = [];
    for (const data of pending) handler(data);
  }

  onOpen(handler: () => void): void {
    this.openHandler = handler;
    if (this.open) handler();
  }

  close(): void {
    this.closed = true;
  }

  markOpen(): void {
    this.isOpen = true;
    this.openHandler?.();
  }

  private deliver(data: Uint8Array): void {
    if (this.closed) return;
    if (this.handler !== null) this.handler(data);
    else this.inbox.push(data);
  }
}

const MASK64 = (1n << 64n) - 1n;

class Lcg {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = (BigInt(seed) ^ 0x9e3779b97f4a7c15n) & MASK64;
  }

  next32(): number {
    this.state = (this.state * 6364136223846793005n + 1442695040888963407n) & MASK64;
    return Number(this.state >> 32n);
  }

  hex(chars: number): string {
    let out = "";
    while (out.length < chars) out += this.next32().toString(16).padStart(8, "0");
    return out.slice(0, chars);
  }

  range(lo: number, hi: number): number {
    return lo + (this.next32() % (hi - lo));
  }
}

interface PendingSession {
  answered: boolean;
  answerToken: string | null;
  hostHalf: Duplex;
  guestHalf: Duplex;
}

export interface OfferHandle {
  payload: Uint8Array;
  session: string;
}

export interface AnswerHandle {
  payload: Uint8Array;
  /** The guest's half; opens when the host accepts the answer. */
  channel: Channel;
}

export class FakeRtcNetwork {
  private readonly rng: Lcg;
  private readonly sessions = new Map<string, PendingSession>();

  constructor(seed: number | bigint = 1) {
    this.rng = new Lcg(seed);
  }

  private candidateList(): Canon[] {
    const candidates: Canon[] = [];
    for (let i = 0; i < 8; i += 1) {
      candidates.push({
        addr: `10.${this.rng.range(0, 256)}.${this.rng.range(0, 256)}.${this.rng.range(2, 255)}`,
        port: this.rng.range(1024, 65535),
        token: this.rng.hex(96),
      });
    }
    return candidates;
  }

  /** Host side: mint an offer document for the pairing display. */
  createOffer(): OfferHandle {
    const session = this.rng.hex(8);
    const doc: CanonDict = { kind: "offer", session, candidates: this.candidateList() };
    this.sessions.set(session, {
      answered: false,
      answerToken: null,
      hostHalf: new Duplex(),
      guestHalf: new Duplex(),
    });
    return { payload: canonicalBytes(doc), session };
  }

  /** Guest side: answer a scanned offer; yields the (still closed) channel. */
  answerOffer(offerPayload: Uint8Array): AnswerHandle {
    const doc = asDict(parseCanonicalBytes(offerPayload), "offer");
    if (asString(doc["kind"] ?? null, "offer.kind") !== "offer") {
      throw new SignalError("not an offer document");
    }
    const session = asString(doc["session"] ?? null, "offer.session");
    if (asArray(doc["candidates"] ?? null, "offer.candidates").length === 0) {
      throw new SignalError("offer lists no candidates");
    }
    const pending = this.sessions.get(session);
    if (pending === undefined) throw new SignalError(`unknown session ${session}`);
    if (pending.answered) throw new SignalError("session already answered");
    pending.answered = true;
    pending.answerToken = this.rng.hex(32);
    pending.hostHalf.peer = pending.guestHalf;
    pending.guestHalf.peer = pending.hostHalf;
    const answer: CanonDict = {
      kind: "answer",
      session,
      token: pending.answerToken,
      candidates: this.candidateList(),
    };
    return { payload: canonicalBytes(answer), channel: pending.guestHalf };
  }

  /** Host side: accept the guest's answer; both halves open now. */
  acceptAnswer(answerPayload: Uint8Array): Channel {
    const doc = asDict(parseCanonicalBytes(answerPayload), "answer");
    if (asString(doc["kind"] ?? null, "answer.kind") !== "answer") {
      throw new SignalError("not an answer document");
    }
    const session = asString(doc["session"] ?? null, "answer.session");
    const pending = this.sessions.get(session);
    if (pending === undefined) throw new SignalError(`unknown session ${session}`);
    if (!pending.answered || pending.answerToken === null) {
      throw new SignalError("session has no pending answer");
    }
    if (asString(doc["token"] ?? null, "answer.token") !== pending.answerToken) {
      throw new SignalError("answer token mismatch");
    }
    pending.guestHalf.markOpen();
    pending.hostHalf.markOpen();
    return pending.hostHalf;
  }
}

/** A pre-opened linked pair, for tests that skip the handshake. */
export function linkedPair(): [Channel, Channel] {
  const a = new Duplex();
  const b = new Duplex();
  a.peer = b;
  b.peer = a;
  a.markOpen();
  b.markOpen();
  return [a, b];
}
