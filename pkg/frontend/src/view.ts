/**
 * Pure projection of a snapshot into render-ready tiles. Every
 * interactive tile carries exactly the wire document its tap would send;
 * anything not legal right now carries null and renders inert. The
 * client never mutates game state itself, it only dispatches these
 * documents to the host.
 *
 * Reflow rule: hand tiles compact as the hand grows; card tiles expand
 * as enemies leave play. Width tiers run 1 (compact) to 4 (wide); a
 * hand of nine or more always pins tier 1, otherwise the hand sets the
 * base tier and a lone surviving enemy widens it one step.
 */

import { CanonDict } from "./canonical.js";
import { CardView, Pack, cardNeedsTarget } from "./content.js";
import { LocaleCode, Translator } from "./locale.js";
import {
  CombatDoc,
  EnemyDoc,
  SceneDoc,
  Snapshot,
} from "./snapshot.js";
import { endTurnPayload, heroActionDoc, nodeChoiceDoc, playCardPayload } from "./wire.js";

export type WidthTier = 1 | 2 | 3 | 4;

export const TIER_NAMES: Record<WidthTier, string> = {
  1: "compact",
  2: "narrow",
  3: "roomy",
  4: "wide",
};

export function cardWidthTier(handSize: number, livingEnemies: number): WidthTier {
  if (handSize >= 9) return 1;
  const base: WidthTier = handSize <= 4 ? 4 : handSize <= 6 ? 3 : 2;
  if (livingEnemies <= 1 && base < 4) return (base + 1) as WidthTier;
  return base;
}

export interface CardTile {
  cardId: string;
  handIndex: number;
  name: string;
  cost: number;
  playable: boolean;
  needsTarget: boolean;
  action: CanonDict | null;
}

export interface IntentReadout {
  verb: string;
  magnitude: number;
  hits: number;
  axisLabel: string | null;
}

export interface EnemyPanel {
  index: number;
  defId: string;
  name: string;
  hp: number;
  maxHp: number;
  shield: number;
  axes: { focus: number; rhythm: number; momentum: number };
  alive: boolean;
  intent: IntentReadout | null;
}

export interface StatusReadout {
  energyLabel: string;
  energy: number;
  hpLabel: string;
  hp: number;
  maxHp: number;
  shieldLabel: string;
  shield: number;
  axes: { label: string; value: number }[];
}

export interface MapNodeTile {
  id: string;
  sector: number;
  layer: number;
  kind: string;
  kindLabel: string;
  current: boolean;
  visited: boolean;
  action: CanonDict | null;
}

export interface MapView {
  nodes: MapNodeTile[];
  edges: [string, string][];
  currentNode: string | null;
  visited: string[];
}

export interface ActionTile {
  label: string;
  action: CanonDict | null;
}

export interface ChoiceTile extends ActionTile {
  price?: number;
}

export interface PartyRow {
  heroLabel: string;
  heroIndex: number;
  mine: boolean;
  hp: number;
  maxHp: number;
  credits: number;
  creditsLabel: string;
  hpLabel: string;
}

export interface ViewModel {
  locale: LocaleCode;
  sceneKind: string;
  banner: string;
  viewerHero: number;
  cardWidthTier: WidthTier;
  cardWidthTierName: string;
  cards: CardTile[];
  enemies: EnemyPanel[];
  status: StatusReadout | null;
  endTurn: ActionTile;
  map: MapView;
  party: PartyRow[];
  rewards: ChoiceTile[];
  choices: ChoiceTile[];
}

function livingEnemies(combat: CombatDoc): number[] {
  const out: number[] = [];
  combat.enemies.forEach((e, i) => {
    if (e.combatant.hp > 0) out.push(i);
  });
  return out;
}

function enemyPanel(t: Translator, pack: Pack, enemy: EnemyDoc, index: number): EnemyPanel {
  const def = pack.enemies.get(enemy.defId);
  if (def === undefined) throw new Error(`snapshot names unknown enemy ${enemy.defId}`);
  const alive = enemy.combatant.hp > 0;
  let intent: IntentReadout | null = null;
  if (alive && def.intentCycle.length > 0) {
    const next = def.intentCycle[enemy.cyclePos % def.intentCycle.length]!;
    intent = {
      verb: t.t(`ui.intent.${next.kind}`),
      magnitude: next.magnitude,
      hits: next.hits,
      axisLabel: next.axis === null ? null : t.t(`ui.axis.${next.axis.toLowerCase()}`),
    };
  }
  return {
    index,
    defId: enemy.defId,
    name: t.t(def.nameKey),
    hp: enemy.combatant.hp,
    maxHp: enemy.combatant.maxHp,
    shield: enemy.combatant.shield,
    axes: enemy.combatant.axes,
    alive,
    intent,
  };
}

function cardTiles(
  t: Translator,
  pack: Pack,
  scene: SceneDoc,
  combat: CombatDoc,
  viewer: number,
): CardTile[] {
  const fighter = combat.heroes[viewer];
  if (fighter === undefined) return [];
  const living = livingEnemies(combat);
  const myTurn =
    combat.phaseKind === "HeroTurn" && combat.phaseHero === viewer && fighter.combatant.hp > 0;
  return fighter.hand.map((cardId, handIndex) => {
    const card: CardView | undefined = pack.cards.get(cardId);
    if (card === undefined) throw new Error(`snapshot names unknown card ${cardId}`);
    const needsTarget = cardNeedsTarget(card);
    const playable =
      myTurn && card.cost <= fighter.energy && (!needsTarget || living.length > 0);
    const target = needsTarget ? (living[0] ?? null) : null;
    return {
      cardId,
      handIndex,
      name: t.t(card.nameKey),
      cost: card.cost,
      playable,
      needsTarget,
      action: playable
        ? heroActionDoc(viewer, scene.kind, playCardPayload(handIndex, target))
        : null,
    };
  });
}

/** The same action a card tile carries, re-aimed at a chosen enemy. */
export function withTarget(action: CanonDict, enemyIndex: number): CanonDict {
  const payload = { ...(action["payload"] as CanonDict), target: enemyIndex };
  return { ...action, payload };
}

function mapView(t: Translator, snapshot: Snapshot): MapView {
  const party = snapshot.party;
  const choosing = snapshot.scene.kind === "ChoosingNode";
  let choosable = new Set<string>();
  if (choosing) {
    if (party.currentNode === null) {
      choosable = new Set(
        party.map.nodes.filter((n) => n.sector === 0 && n.layer === 0).map((n) => n.id),
      );
    } else {
      choosable = new Set(
        party.map.edges.filter((e) => e[0] === party.currentNode).map((e) => e[1]),
      );
    }
  }
  const visited = new Set(party.visitedPath);
  return {
    nodes: party.map.nodes.map((n) => ({
      id: n.id,
      sector: n.sector,
      layer: n.layer,
      kind: n.kind,
      kindLabel: t.t(`ui.room.${n.kind}`),
      current: n.id === party.currentNode,
      visited: visited.has(n.id),
      action: choosable.has(n.id) ? nodeChoiceDoc(n.id) : null,
    })),
    edges: party.map.edges,
    currentNode: party.currentNode,
    visited: party.visitedPath,
  };
}

function rewardTiles(t: Translator, pack: Pack, scene: SceneDoc, viewer: number): ChoiceTile[] {
  if (scene.kind !== "ChoosingReward") return [];
  const offers = scene.cardOffers[viewer] ?? [];
  const open = scene.cardTaken[viewer] === false;
  const tiles: ChoiceTile[] = offers.map((cardId) => {
    const card = pack.cards.get(cardId);
    if (card === undefined) throw new Error(`offer names unknown card ${cardId}`);
    return {
      label: t.t(card.nameKey),
      action: open
        ? heroActionDoc(viewer, scene.kind, { kind: "TakeReward", choice: cardId })
        : null,
    };
  });
  tiles.push({
    label: t.t("ui.reward.skip"),
    action: open
      ? heroActionDoc(viewer, scene.kind, { kind: "TakeReward", choice: "Skip" })
      : null,
  });
  return tiles;
}

function choiceTiles(t: Translator, pack: Pack, scene: SceneDoc, viewer: number): ChoiceTile[] {
  const open = scene.resolved[viewer] === false;
  if (scene.kind === "AtRest") {
    return [
      {
        label: t.t("ui.rest.heal"),
        action: open ? heroActionDoc(viewer, scene.kind, { kind: "Rest", choice: "Heal" }) : null,
      },
      {
        label: t.t("ui.rest.upgrade"),
        action: open
          ? heroActionDoc(viewer, scene.kind, { kind: "Rest", choice: "UpgradeMaxHp" })
          : null,
      },
    ];
  }
  if (scene.kind === "AtEvent") {
    const event = pack.events.get(scene.eventId);
    if (event === undefined) throw new Error(`snapshot names unknown event ${scene.eventId}`);
    return event.choices.map((choice, i) => ({
      label: t.t(choice.labelKey),
      action: open
        ? heroActionDoc(viewer, scene.kind, { kind: "Event", choice_index: i })
        : null,
    }));
  }
  if (scene.kind === "AtShop") {
    const tiles: ChoiceTile[] = scene.items.map((item, i) => {
      const nameKey =
        item.kind === "card"
          ? pack.cards.get(item.itemId)?.nameKey
          : pack.moduleNames.get(item.itemId);
      return {
        label: nameKey === undefined ? item.itemId : t.t(nameKey),
        price: item.price,
        action:
          open && !item.sold
            ? heroActionDoc(viewer, scene.kind, { kind: "ShopBuy", item_index: i })
            : null,
      };
    });
    tiles.push({
      label: t.t("ui.shop.leave"),
      action: open ? heroActionDoc(viewer, scene.kind, { kind: "ShopLeave" }) : null,
    });
    return tiles;
  }
  return [];
}

export function render(snapshot: Snapshot, pack: Pack, viewer: number, locale: LocaleCode): ViewModel {
  const t = new Translator(locale, pack);
  const scene = snapshot.scene;
  const combat = scene.combat;

  let banner = t.t(`ui.scene.${scene.kind}`);
  if (scene.kind === "Finished" && scene.result !== null) {
    banner = t.t(`ui.result.${scene.result}`);
  }

  let cards: CardTile[] = [];
  let enemies: EnemyPanel[] = [];
  let status: StatusReadout | null = null;
  let endTurn: ActionTile = { label: t.t("ui.endTurn"), action: null };
  let tier: WidthTier = cardWidthTier(0, 0);

  if (combat !== null && scene.kind === "InCombat") {
    const living = livingEnemies(combat);
    const fighter = combat.heroes[viewer];
    cards = cardTiles(t, pack, scene, combat, viewer);
    enemies = combat.enemies.map((e, i) => enemyPanel(t, pack, e, i));
    tier = cardWidthTier(fighter?.hand.length ?? 0, living.length);
    if (fighter !== undefined) {
      status = {
        energyLabel: t.t("ui.energy"),
        energy: fighter.energy,
        hpLabel: t.t("ui.hp"),
        hp: fighter.combatant.hp,
        maxHp: fighter.combatant.maxHp,
        shieldLabel: t.t("ui.shield"),
        shield: fighter.combatant.shield,
        axes: [
          { label: t.t("ui.axis.focus"), value: fighter.combatant.axes.focus },
          { label: t.t("ui.axis.rhythm"), value: fighter.combatant.axes.rhythm },
          { label: t.t("ui.axis.momentum"), value: fighter.combatant.axes.momentum },
        ],
      };
      const myTurn =
        combat.phaseKind === "HeroTurn" &&
        combat.phaseHero === viewer &&
        fighter.combatant.hp > 0;
      endTurn = {
        label: t.t("ui.endTurn"),
        action: myTurn ? heroActionDoc(viewer, scene.kind, endTurnPayload()) : null,
      };
    }
  }

  return {
    locale,
    sceneKind: scene.kind,
    banner,
    viewerHero: viewer,
    cardWidthTier: tier,
    cardWidthTierName: TIER_NAMES[tier],
    cards,
    enemies,
    status,
    endTurn,
    map: mapView(t, snapshot),
    party: snapshot.heroes.map((h, i) => ({
      heroLabel: t.t("ui.hero"),
      heroIndex: i,
      mine: i === viewer,
      hp: h.hp,
      maxHp: h.maxHp,
      credits: h.credits,
      creditsLabel: t.t("ui.credits"),
      hpLabel: t.t("ui.hp"),
    })),
    rewards: rewardTiles(t, pack, scene, viewer),
    choices: choiceTiles(t, pack, scene, viewer),
  };
}

/** Every user-facing string in the model, for locale-swap checks. */
export function visibleStrings(view: ViewModel): string[] {
  const out: string[] = [view.banner, view.endTurn.label];
  for (const card of view.cards) out.push(card.name);
  for (const enemy of view.enemies) {
    out.push(enemy.name);
    if (enemy.intent !== null) {
      out.push(enemy.intent.verb);
      if (enemy.intent.axisLabel !== null) out.push(enemy.intent.axisLabel);
    }
  }
  if (view.status !== null) {
    out.push(view.status.energyLabel, view.status.hpLabel, view.status.shieldLabel);
    for (const axis of view.status.axes) out.push(axis.label);
  }
  for (const node of view.map.nodes) out.push(node.kindLabel);
  for (const row of view.party) out.push(row.heroLabel, row.creditsLabel, row.hpLabel);
  for (const tile of view.rewards) out.push(tile.label);
  for (const tile of view.choices) out.push(tile.label);
  return out;
}
