import { readFileSync } from "node:fs";

export function b64(text: string): Uint8Array {
  const buf = Buffer.from(text, "base64");
  return new Uint8Array(buf.buffer, buf.byteOffset, buf.byteLength);
}

export function sameBytes(a: Uint8Array, b: Uint8Array): boolean {
  return Buffer.from(a).equals(Buffer.from(b));
}

export function fixture<T>(name: string): T {
  const path = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(path, "utf8")) as T;
}

export function packText(): string {
  const path = new URL("../../content/baseline.pack.json", import.meta.url);
  return readFileSync(path, "utf8");
}

export interface PairingVectors {
  crc_vectors: { crc_hex: string; payload_b64: string }[];
  payloads: {
    name: string;
    payload_b64: string;
    raw_frames: string[];
    z_frames: string[];
  }[];
}

export interface SeqRow {
  sequence: number;
  scene_kind: string;
  current_node: string | null;
  visited_path: string[];
  heroes: { hp: number; max_hp: number; credits: number; deck: string[]; modules: string[] }[];
  phase_hero?: number;
  enemy_def_ids?: string[];
  living_enemies?: number;
  own_hand?: string[];
  own_energy?: number;
  card_offers?: string[][];
  reward_tier?: string;
  resolved?: boolean[];
}

export interface WireSession {
  content_hash: string;
  seed: number;
  config: Record<string, number>;
  assigned_hero_index: number;
  picked_node: string;
  reject_reason: string;
  map: {
    nodes: { id: string; sector: number; layer: number; kind: string }[];
    edges: [string, string][];
  };
  per_seq: SeqRow[];
  combat_steps: {
    by: "host" | "guest";
    update_b64: string;
    after: SeqRow;
    outbound_b64?: string;
    payload?: Record<string, unknown>;
  }[];
  final: SeqRow;
  outbound_b64: {
    hello: string;
    node_choice: string;
    hero_summary: string;
    bad_choice: string;
    pong: string;
  };
  tape_b64: { after_hello: string; after_choice: string; noise: string };
}
