/**
 * Read-only view of a content pack file: the card and enemy facts the
 * client needs to label tiles, plus the locale tables and the content
 * fingerprint exchanged during the session handshake.
 *
 * The shipped pack is already in canonical form, so the fingerprint is
 * the sha256 of the file's canonical re-encoding; re-encoding instead of
 * hashing raw bytes keeps the check independent of trailing whitespace.
 */

import {
  Canon,
  CanonDict,
  asArray,
  asDict,
  asInt,
  asString,
  canonicalBytes,
  parseCanonical,
} from "./canonical.js";

export interface EffectView {
  op: string;
  target: string;
  magnitude: number;
}

export interface CardView {
  id: string;
  nameKey: string;
  cost: number;
  kind: string;
  effects: EffectView[];
}

export interface IntentView {
  kind: string;
  magnitude: number;
  hits: number;
  axis: string | null;
}

export interface EnemyView {
  id: string;
  nameKey: string;
  maxHp: number;
  tier: string;
  intentCycle: IntentView[];
}

export interface EventChoiceView {
  labelKey: string;
}

export interface EventView {
  id: string;
  promptKey: string;
  choices: EventChoiceView[];
}

export interface Pack {
  cards: Map<string, CardView>;
  enemies: Map<string, EnemyView>;
  moduleNames: Map<string, string>;
  events: Map<string, EventView>;
  locales: Map<string, Map<string, string>>;
  fingerprint: string;
}

function parseEffect(raw: Canon, where: string): EffectView {
  const doc = asDict(raw, where);
  return {
    op: asString(doc["op"] ?? null, `${where}.op`),
    target: asString(doc["target"] ?? null, `${where}.target`),
    magnitude: asInt(doc["magnitude"] ?? null, `${where}.magnitude`),
  };
}

export function parsePack(text: string, sha256Hex: (data: Uint8Array) => string): Pack {
  const root = asDict(parseCanonical(text.trimEnd()), "pack");
  const fingerprint = sha256Hex(canonicalBytes(root));

  const cards = new Map<string, CardView>();
  for (const raw of asArray(root["cards"] ?? null, "pack.cards")) {
    const doc = asDict(raw, "card");
    const id = asString(doc["id"] ?? null, "card.id");
    cards.set(id, {
      id,
      nameKey: asString(doc["name_key"] ?? null, "card.name_key"),
      cost: asInt(doc["cost"] ?? null, "card.cost"),
      kind: asString(doc["kind"] ?? null, "card.kind"),
      effects: asArray(doc["effects"] ?? null, "card.effects").map((e, i) =>
        parseEffect(e, `card.effects[${i}]`),
      ),
    });
  }

  const enemies = new Map<string, EnemyView>();
  for (const raw of asArray(root["enemies"] ?? null, "pack.enemies")) {
    const doc = asDict(raw, "enemy");
    const id = asString(doc["id"] ?? null, "enemy.id");
    const cycle: IntentView[] = [];
    for (const entry of asArray(doc["intent_cycle"] ?? null, "enemy.intent_cycle")) {
      const intent = asDict(entry, "intent");
      const axis = intent["axis"];
      cycle.push({
        kind: asString(intent["kind"] ?? null, "intent.kind"),
        magnitude: asInt(intent["magnitude"] ?? null, "intent.magnitude"),
        hits: asInt(intent["hits"] ?? 1, "intent.hits"),
        axis: typeof axis === "string" ? axis : null,
      });
    }
    enemies.set(id, {
      id,
      nameKey: asString(doc["name_key"] ?? null, "enemy.name_key"),
      maxHp: asInt(doc["max_hp"] ?? null, "enemy.max_hp"),
      tier: asString(doc["tier"] ?? null, "enemy.tier"),
      intentCycle: cycle,
    });
  }

  const moduleNames = new Map<string, string>();
  for (const raw of asArray(root["modules"] ?? null, "pack.modules")) {
    const doc = asDict(raw, "module");
    moduleNames.set(
      asString(doc["id"] ?? null, "module.id"),
      asString(doc["name_key"] ?? null, "module.name_key"),
    );
  }

  const events = new Map<string, EventView>();
  for (const raw of asArray(root["events"] ?? null, "pack.events")) {
    const doc = asDict(raw, "event");
    const id = asString(doc["id"] ?? null, "event.id");
    events.set(id, {
      id,
      promptKey: asString(doc["prompt_key"] ?? null, "event.prompt_key"),
      choices: asArray(doc["choices"] ?? null, "event.choices").map((c, i) => ({
        labelKey: asString(asDict(c, `event.choices[${i}]`)["label_key"] ?? null, "choice.label_key"),
      })),
    });
  }

  const locales = new Map<string, Map<string, string>>();
  const rawLocales: CanonDict = asDict(root["locales"] ?? null, "pack.locales");
  for (const [code, table] of Object.entries(rawLocales)) {
    const entries = new Map<string, string>();
    for (const [key, value] of Object.entries(asDict(table, `locales.${code}`))) {
      entries.set(key, asString(value, `locales.${code}.${key}`));
    }
    locales.set(code, entries);
  }

  return { cards, enemies, moduleNames, events, locales, fingerprint };
}

/** A card needs a chosen enemy when any effect aims at a single enemy. */
export function cardNeedsTarget(card: CardView): boolean {
  return card.effects.some((e) => e.target === "SingleEnemy");
}
