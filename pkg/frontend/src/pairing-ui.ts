/**
 * Pairing screen state machines, tick-driven so a test (or a real
 * render loop) can pump them deterministically on one thread.
 *
 * Host: animate the offer's frames at a fixed cadence while watching
 * the camera; the first answer frame absorbed moves show-offer to
 * await-answer, and a completed answer opens the channel (connected).
 *
 * Guest: watch the camera for offer frames; once the offer assembles,
 * answer it and animate the answer's frames until the host accepts,
 * which opens the channel from the far side (connected).
 *
 * Camera feeds are noisy, so scans that are not pairing frames are
 * dropped, frames from a different payload reset collection, and an
 * integrity failure at completion restarts the assembly.
 */

import { Channel, FakeRtcNetwork } from "./channel.js";
import {
  Assembly,
  Compression,
  Frame,
  IntegrityError,
  Status,
  decodeFrame,
  encodePayload,
} from "./codec.js";
import { QrImage, scanImage } from "./qr.js";

export const FRAME_INTERVAL_MS = 250;

export interface CameraSource {
  /** One camera sample, or null when nothing is in front of the lens. */
  sample(): QrImage | null;
}

export interface AssemblyProgress {
  received: number;
  total: number;
}

class FrameLoop {
  index = 0;
  private lastAdvance: number | null = null;

  constructor(private readonly frames: string[]) {
    if (frames.length === 0) throw new Error("nothing to animate");
  }

  get current(): string {
    return this.frames[this.index]!;
  }

  tick(nowMs: number): void {
    if (this.lastAdvance === null) {
      this.lastAdvance = nowMs;
      return;
    }
    while (nowMs - this.lastAdvance >= FRAME_INTERVAL_MS) {
      this.index = (this.index + 1) % this.frames.length;
      this.lastAdvance += FRAME_INTERVAL_MS;
    }
  }
}

/** Collects frames with camera-noise tolerance; null until complete. */
class Collector {
  private assembly: Assembly;

  constructor(private readonly compression: Compression) {
    this.assembly = new Assembly(compression);
  }

  get progress(): AssemblyProgress | null {
    return this.assembly.progress;
  }

  absorbScan(text: string): Uint8Array | null {
    let frame: Frame;
    try {
      frame = decodeFrame(text);
    } catch {
      return null;
    }
    let status: Status;
    try {
      status = this.assembly.absorb(frame);
    } catch (exc) {
      if (exc instanceof IntegrityError) {
        this.assembly = new Assembly(this.compression);
        return null;
      }
      throw exc;
    }
    if (status.state === "conflict") {
      this.assembly = new Assembly(this.compression);
      return null;
    }
    return status.state === "complete" ? status.payload : null;
  }

  /** True once at least one frame of the target payload is in. */
  get started(): boolean {
    return this.assembly.progress !== null;
  }
}

export type HostPairingPhase = "show-offer" | "await-answer" | "connected";

export class HostPairing {
  readonly role = "host";
  phase: HostPairingPhase = "show-offer";
  readonly frames: string[];
  channel: Channel | null = null;

  private readonly loop: FrameLoop;
  private readonly collector: Collector;

  constructor(
    private readonly network: FakeRtcNetwork,
    private readonly camera: CameraSource,
    compression: Compression,
  ) {
    const offer = network.createOffer();
    this.frames = encodePayload(offer.payload, true, compression);
    this.loop = new FrameLoop(this.frames);
    this.collector = new Collector(compression);
  }

  get frameIndex(): number {
    return this.loop.index;
  }

  get currentFrame(): string {
    return this.loop.current;
  }

  get progress(): AssemblyProgress | null {
    return this.collector.progress;
  }

  tick(nowMs: number): void {
    if (this.phase === "connected") return;
    this.loop.tick(nowMs);
    const image = this.camera.sample();
    if (image === null) return;
    const text = scanImage(image);
    if (text === null) return;
    this.absorb(text);
  }

  /** Manual path: answer frames pasted as newline-joined text. */
  paste(text: string): void {
    if (this.phase === "connected") return;
    for (const token of text.split(/\s+/)) {
      if (token.length === 0) continue;
      if (this.absorb(token)) return;
    }
  }

  /** Returns true once the answer completed and the channel opened. */
  private absorb(text: string): boolean {
    const payload = this.collector.absorbScan(text);
    if (this.phase === "show-offer" && this.collector.started) {
      this.phase = "await-answer";
    }
    if (payload === null) return false;
    this.channel = this.network.acceptAnswer(payload);
    this.phase = "connected";
    return true;
  }
}

export type GuestPairingPhase = "scan-offer" | "show-answer" | "connected";

export class GuestPairing {
  readonly role = "guest";
  phase: GuestPairingPhase = "scan-offer";
  frames: string[] = [];
  channel: Channel | null = null;

  private loop: FrameLoop | null = null;
  private readonly collector: Collector;

  constructor(
    private readonly network: FakeRtcNetwork,
    private readonly camera: CameraSource,
    private readonly compression: Compression,
  ) {
    this.collector = new Collector(compression);
  }

  get frameIndex(): number {
    return this.loop === null ? 0 : this.loop.index;
  }

  get currentFrame(): string | null {
    return this.loop === null ? null : this.loop.current;
  }

  get progress(): AssemblyProgress | null {
    return this.collector.progress;
  }

  tick(nowMs: number): void {
    if (this.phase === "connected") return;
    if (this.phase === "scan-offer") {
      const image = this.camera.sample();
      if (image === null) return;
      const text = scanImage(image);
      if (text === null) return;
      this.absorb(text);
      return;
    }
    this.loop?.tick(nowMs);
  }

  /** Manual path: offer frames pasted as newline-joined text. */
  paste(text: string): void {
    if (this.phase !== "scan-offer") return;
    for (const token of text.split(/\s+/)) {
      if (token.length === 0) continue;
      if (this.absorb(token)) return;
    }
  }

  /** Returns true once the offer completed and the answer is showing. */
  private absorb(text: string): boolean {
    const payload = this.collector.absorbScan(text);
    if (payload === null) return false;
    const answer = this.network.answerOffer(payload);
    this.frames = encodePayload(answer.payload, true, this.compression);
    this.loop = new FrameLoop(this.frames);
    this.channel = answer.channel;
    answer.channel.onOpen(() => {
      this.phase = "connected";
    });
    if (this.phase === "scan-offer") this.phase = "show-answer";
    return true;
  }
}
