/**
 * Guest-side session driver. The host owns the rules; this client sends
 * requests and renders whatever snapshots come back. It keeps no game
 * state of its own beyond the latest accepted snapshot, so every screen
 * is a pure function of host data plus the locally assigned hero index.
 *
 * Protocol mirror of the engine's guest loop:
 *  - Welcome is only legal before the lobby; Start only inside it, and
 *    only when the content hash matches ours.
 *  - Snapshots whose sequence does not advance are dropped and counted.
 *  - Fresh snapshots replace party, scene, and heroes wholesale; when
 *    our own hero's (hp, max hp, credits) changed we answer with a
 *    summary so the host can show it in its lobby.
 *  - Reject records the reason; Ping gets a Pong; anything unexpected
 *    ends the session with a Bye.
 */

import { CanonDict } from "./canonical.js";
import { Pack } from "./content.js";
import { LocaleCode } from "./locale.js";
import { Snapshot, parseSnapshot } from "./snapshot.js";
import { ViewModel, render } from "./view.js";
import {
  Message,
  MessageReader,
  byeDoc,
  encodeMessage,
  helloDoc,
  heroSummaryDoc,
  messageInt,
  messageStr,
  pongDoc,
} from "./wire.js";

export type GuestPhase = "awaiting-welcome" | "lobby" | "running" | "ended";

interface OwnStats {
  hp: number;
  maxHp: number;
  credits: number;
}

export interface Outbound {
  send(data: Uint8Array): void;
}

export class GuestClient {
  phase: GuestPhase = "awaiting-welcome";
  assignedHeroIndex = -1;
  snapshot: Snapshot | null = null;
  staleDropped = 0;
  lastReject: string | null = null;
  endReason: string | null = null;

  private readonly reader = new MessageReader();
  private lastSequence = 0;
  private ownBaseline: OwnStats | null = null;

  constructor(
    private readonly channel: Outbound,
    private readonly pack: Pack,
    private readonly displayName: string,
  ) {}

  /** Announce ourselves; call once when the channel opens. */
  hello(): void {
    this.channel.send(encodeMessage(helloDoc(this.displayName, this.pack.fingerprint)));
  }

  /** Feed raw channel bytes; frames may arrive split or coalesced. */
  receive(data: Uint8Array): void {
    for (const msg of this.reader.feed(data)) this.handle(msg);
  }

  /** Dispatch a tile's action document to the host. */
  dispatch(action: CanonDict): void {
    this.channel.send(encodeMessage(action));
  }

  render(locale: LocaleCode): ViewModel {
    if (this.snapshot === null) throw new Error("no snapshot to render yet");
    return render(this.snapshot, this.pack, this.assignedHeroIndex, locale);
  }

  private end(reason: string): void {
    this.channel.send(encodeMessage(byeDoc(reason)));
    this.phase = "ended";
    this.endReason = reason;
  }

  private handle(msg: Message): void {
    if (this.phase === "ended") return;
    switch (msg.type) {
      case "Bye":
        this.phase = "ended";
        this.endReason = messageStr(msg, "reason");
        return;
      case "Ping":
        this.channel.send(encodeMessage(pongDoc()));
        return;
      case "Pong":
        return;
      case "Reject":
        this.lastReject = messageStr(msg, "reason");
        return;
      case "Welcome":
        if (this.phase !== "awaiting-welcome") {
          this.end("protocol violation: unexpected Welcome");
          return;
        }
        this.assignedHeroIndex = messageInt(msg, "assigned_hero_index");
        this.phase = "lobby";
        return;
      case "Start":
        if (this.phase !== "lobby") {
          this.end("protocol violation: unexpected Start");
          return;
        }
        if (messageStr(msg, "content_hash") !== this.pack.fingerprint) {
          this.end("content mismatch");
          return;
        }
        this.phase = "running";
        this.lastSequence = 0;
        return;
      case "StateUpdate":
        this.handleUpdate(msg);
        return;
      default:
        this.end(`protocol violation: unexpected ${msg.type}`);
    }
  }

  private handleUpdate(msg: Message): void {
    if (this.phase !== "running") {
      this.end("protocol violation: StateUpdate outside a run");
      return;
    }
    const sequence = messageInt(msg, "sequence");
    if (sequence <= this.lastSequence) {
      this.staleDropped += 1;
      return;
    }
    let snapshot: Snapshot;
    try {
      snapshot = parseSnapshot(msg.doc);
    } catch (exc) {
      this.end(`malformed snapshot: ${exc instanceof Error ? exc.message : String(exc)}`);
      return;
    }
    this.snapshot = snapshot;
    this.lastSequence = sequence;
    const own = snapshot.heroes[this.assignedHeroIndex];
    if (own === undefined) return;
    const stats: OwnStats = { hp: own.hp, maxHp: own.maxHp, credits: own.credits };
    if (
      this.ownBaseline !== null &&
      (stats.hp !== this.ownBaseline.hp ||
        stats.maxHp !== this.ownBaseline.maxHp ||
        stats.credits !== this.ownBaseline.credits)
    ) {
      this.channel.send(
        encodeMessage(heroSummaryDoc(this.assignedHeroIndex, stats.hp, stats.maxHp, stats.credits)),
      );
    }
    this.ownBaseline = stats;
  }
}
