/**
 * Typed views over the snapshot documents a host broadcasts: party
 * (map, position, progression), scene, and the persistent hero list.
 * The client never simulates rules; it only reads these documents, so
 * parsing is shape-checking plus field access.
 */

import { Canon, CanonDict, asArray, asDict, asInt, asString } from "./canonical.js";

export interface MapNodeDoc {
  id: string;
  sector: number;
  layer: number;
  kind: string;
}

export interface MapDoc {
  nodes: MapNodeDoc[];
  edges: [string, string][];
  sectorCount: number;
  layersPerSector: number;
}

export interface PartyDoc {
  map: MapDoc;
  currentNode: string | null;
  visitedPath: string[];
  levelProgression: number;
}

export interface HeroDoc {
  hp: number;
  maxHp: number;
  credits: number;
  deck: string[];
  modules: string[];
}

export interface AxesDoc {
  focus: number;
  rhythm: number;
  momentum: number;
}

export interface CombatantDoc {
  hp: number;
  maxHp: number;
  shield: number;
  axes: AxesDoc;
}

export interface HeroCombatDoc {
  heroIndex: number;
  combatant: CombatantDoc;
  hand: string[];
  energy: number;
}

export interface EnemyDoc {
  defId: string;
  combatant: CombatantDoc;
  cyclePos: number;
}

export interface CombatDoc {
  heroes: HeroCombatDoc[];
  enemies: EnemyDoc[];
  phaseKind: string;
  phaseHero: number;
  turnNumber: number;
}

export interface ShopItemDoc {
  kind: string;
  itemId: string;
  price: number;
  sold: boolean;
}

export interface SceneDoc {
  kind: string;
  combat: CombatDoc | null;
  eventId: string;
  rewardTier: string;
  cardOffers: string[][];
  cardTaken: boolean[];
  items: ShopItemDoc[];
  resolved: boolean[];
  result: string | null;
  raw: CanonDict;
}

function strings(value: Canon, where: string): string[] {
  return asArray(value, where).map((v, i) => asString(v, `${where}[${i}]`));
}

function bools(value: Canon, where: string): boolean[] {
  return asArray(value, where).map((v, i) => {
    if (typeof v !== "boolean") throw new Error(`expected boolean at ${where}[${i}]`);
    return v;
  });
}

export function parseParty(doc: CanonDict): PartyDoc {
  const map = asDict(doc["map"] ?? null, "party.map");
  const nodes: MapNodeDoc[] = asArray(map["nodes"] ?? null, "map.nodes").map((raw, i) => {
    const n = asDict(raw, `map.nodes[${i}]`);
    return {
      id: asString(n["id"] ?? null, "node.id"),
      sector: asInt(n["sector"] ?? null, "node.sector"),
      layer: asInt(n["layer"] ?? null, "node.layer"),
      kind: asString(n["kind"] ?? null, "node.kind"),
    };
  });
  const edges: [string, string][] = asArray(map["edges"] ?? null, "map.edges").map((raw, i) => {
    const pair = strings(raw, `map.edges[${i}]`);
    if (pair.length !== 2) throw new Error(`edge ${i} must have two endpoints`);
    return [pair[0]!, pair[1]!];
  });
  const current = doc["current_node"] ?? null;
  return {
    map: {
      nodes,
      edges,
      sectorCount: asInt(map["sector_count"] ?? null, "map.sector_count"),
      layersPerSector: asInt(map["layers_per_sector"] ?? null, "map.layers_per_sector"),
    },
    currentNode: current === null ? null : asString(current, "party.current_node"),
    visitedPath: strings(doc["visited_path"] ?? null, "party.visited_path"),
    levelProgression: asInt(doc["level_progression"] ?? null, "party.level_progression"),
  };
}

export function parseHero(doc: CanonDict): HeroDoc {
  return {
    hp: asInt(doc["hp"] ?? null, "hero.hp"),
    maxHp: asInt(doc["max_hp"] ?? null, "hero.max_hp"),
    credits: asInt(doc["credits"] ?? null, "hero.credits"),
    deck: strings(doc["deck"] ?? null, "hero.deck"),
    modules: strings(doc["modules"] ?? null, "hero.modules"),
  };
}

function parseCombatant(doc: CanonDict): CombatantDoc {
  const axes = asDict(doc["axes"] ?? null, "combatant.axes");
  return {
    hp: asInt(doc["hp"] ?? null, "combatant.hp"),
    maxHp: asInt(doc["max_hp"] ?? null, "combatant.max_hp"),
    shield: asInt(doc["shield"] ?? null, "combatant.shield"),
    axes: {
      focus: asInt(axes["focus"] ?? null, "axes.focus"),
      rhythm: asInt(axes["rhythm"] ?? null, "axes.rhythm"),
      momentum: asInt(axes["momentum"] ?? null, "axes.momentum"),
    },
  };
}

function parseCombat(doc: CanonDict): CombatDoc {
  const heroes: HeroCombatDoc[] = asArray(doc["heroes"] ?? null, "combat.heroes").map((raw, i) => {
    const h = asDict(raw, `combat.heroes[${i}]`);
    return {
      heroIndex: asInt(h["hero_index"] ?? null, "fighter.hero_index"),
      combatant: parseCombatant(asDict(h["combatant"] ?? null, "fighter.combatant")),
      hand: strings(h["hand"] ?? null, "fighter.hand"),
      energy: asInt(h["energy"] ?? null, "fighter.energy"),
    };
  });
  const enemies: EnemyDoc[] = asArray(doc["enemies"] ?? null, "combat.enemies").map((raw, i) => {
    const e = asDict(raw, `combat.enemies[${i}]`);
    return {
      defId: asString(e["def_id"] ?? null, "enemy.def_id"),
      combatant: parseCombatant(asDict(e["combatant"] ?? null, "enemy.combatant")),
      cyclePos: asInt(e["cycle_pos"] ?? null, "enemy.cycle_pos"),
    };
  });
  const phase = asDict(doc["phase"] ?? null, "combat.phase");
  return {
    heroes,
    enemies,
    phaseKind: asString(phase["kind"] ?? null, "phase.kind"),
    phaseHero: asInt(phase["hero_index"] ?? null, "phase.hero_index"),
    turnNumber: asInt(doc["turn_number"] ?? null, "combat.turn_number"),
  };
}

export function parseScene(doc: CanonDict): SceneDoc {
  const combat = doc["combat"] ?? null;
  const result = doc["result"] ?? null;
  return {
    kind: asString(doc["kind"] ?? null, "scene.kind"),
    combat: combat === null ? null : parseCombat(asDict(combat, "scene.combat")),
    eventId: asString(doc["event_id"] ?? "", "scene.event_id"),
    rewardTier: asString(doc["reward_tier"] ?? "", "scene.reward_tier"),
    cardOffers: asArray(doc["card_offers"] ?? [], "scene.card_offers").map((row, i) =>
      strings(row, `card_offers[${i}]`),
    ),
    cardTaken: doc["card_taken"] ? bools(doc["card_taken"], "scene.card_taken") : [],
    items: asArray(doc["items"] ?? [], "scene.items").map((raw, i) => {
      const item = asDict(raw, `items[${i}]`);
      const sold = item["sold"];
      return {
        kind: asString(item["kind"] ?? null, "item.kind"),
        itemId: asString(item["item_id"] ?? null, "item.item_id"),
        price: asInt(item["price"] ?? null, "item.price"),
        sold: typeof sold === "boolean" ? sold : false,
      };
    }),
    resolved: doc["resolved"] ? bools(doc["resolved"], "scene.resolved") : [],
    result: result === null ? null : asString(result, "scene.result"),
    raw: doc,
  };
}

export interface Snapshot {
  sequence: number;
  party: PartyDoc;
  scene: SceneDoc;
  heroes: HeroDoc[];
}

export function parseSnapshot(doc: CanonDict): Snapshot {
  return {
    sequence: asInt(doc["sequence"] ?? null, "update.sequence"),
    party: parseParty(asDict(doc["party"] ?? null, "update.party")),
    scene: parseScene(asDict(doc["scene"] ?? null, "update.scene")),
    heroes: asArray(doc["heroes"] ?? null, "update.heroes").map((h, i) =>
      parseHero(asDict(h, `heroes[${i}]`)),
    ),
  };
}
