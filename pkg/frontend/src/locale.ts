/**
 * Locale layer: every string the user sees goes through one lookup, so
 * toggling the locale swaps the entire visible surface at once. Game
 * entity names come from the pack's locale tables; client chrome (scene
 * banners, buttons, intent verbs) lives here.
 */

import type { Pack } from "./content.js";

export type LocaleCode = "en" | "es";

export const LOCALES: readonly LocaleCode[] = ["en", "es"];

const CHROME: Record<LocaleCode, Record<string, string>> = {
  en: {
    "ui.scene.ChoosingNode": "Choose the next room",
    "ui.scene.InCombat": "Combat",
    "ui.scene.AtShop": "Shop",
    "ui.scene.AtEvent": "Event",
    "ui.scene.AtRest": "Rest site",
    "ui.scene.ChoosingReward": "Spoils",
    "ui.scene.Finished": "Run over",
    "ui.endTurn": "End turn",
    "ui.energy": "Energy",
    "ui.hp": "HP",
    "ui.shield": "Shield",
    "ui.credits": "Credits",
    "ui.hero": "Hero",
    "ui.enemy.defeated": "Defeated",
    "ui.intent.Attack": "Attacks",
    "ui.intent.Shield": "Braces",
    "ui.intent.Multi": "Flurries",
    "ui.intent.AxisDelta": "Destabilizes",
    "ui.axis.focus": "Focus",
    "ui.axis.rhythm": "Rhythm",
    "ui.axis.momentum": "Momentum",
    "ui.room.Combat": "Skirmish",
    "ui.room.Elite": "Elite hunt",
    "ui.room.Boss": "Boss gate",
    "ui.room.Shop": "Trader",
    "ui.room.Event": "Anomaly",
    "ui.room.Rest": "Refuge",
    "ui.room.Treasure": "Cache",
    "ui.reward.take": "Take",
    "ui.reward.skip": "Skip",
    "ui.rest.heal": "Patch up",
    "ui.rest.upgrade": "Toughen up",
    "ui.shop.leave": "Leave the shop",
    "ui.result.Won": "Victory",
    "ui.result.Lost": "Defeat",
  },
  es: {
    "ui.scene.ChoosingNode": "Elige la siguiente sala",
    "ui.scene.InCombat": "Combate",
    "ui.scene.AtShop": "Tienda",
    "ui.scene.AtEvent": "Suceso",
    "ui.scene.AtRest": "Campamento",
    "ui.scene.ChoosingReward": "Botín",
    "ui.scene.Finished": "Fin de la partida",
    "ui.endTurn": "Terminar turno",
    "ui.energy": "Energía",
    "ui.hp": "Vida",
    "ui.shield": "Escudo",
    "ui.credits": "Créditos",
    "ui.hero": "Héroe",
    "ui.enemy.defeated": "Derrotado",
    "ui.intent.Attack": "Ataca",
    "ui.intent.Shield": "Se protege",
    "ui.intent.Multi": "Acomete",
    "ui.intent.AxisDelta": "Desestabiliza",
    "ui.axis.focus": "Foco",
    "ui.axis.rhythm": "Ritmo",
    "ui.axis.momentum": "Impulso",
    "ui.room.Combat": "Escaramuza",
    "ui.room.Elite": "Caza de élite",
    "ui.room.Boss": "Puerta del jefe",
    "ui.room.Shop": "Mercader",
    "ui.room.Event": "Anomalía",
    "ui.room.Rest": "Refugio",
    "ui.room.Treasure": "Alijo",
    "ui.reward.take": "Tomar",
    "ui.reward.skip": "Omitir",
    "ui.rest.heal": "Vendarse",
    "ui.rest.upgrade": "Fortalecerse",
    "ui.shop.leave": "Salir de la tienda",
    "ui.result.Won": "Victoria",
    "ui.result.Lost": "Derrota",
  },
};

export class Translator {
  constructor(
    readonly locale: LocaleCode,
    private readonly pack: Pack,
  ) {}

  /** Look up a key in the pack locale first, then the chrome table. */
  t(key: string): string {
    const fromPack = this.pack.locales.get(this.locale)?.get(key);
    if (fromPack !== undefined) return fromPack;
    const fromChrome = CHROME[this.locale][key];
    if (fromChrome !== undefined) return fromChrome;
    throw new Error(`missing locale key ${key} for ${this.locale}`);
  }
}

/** Chrome key set, for completeness checks in tests. */
export function chromeKeys(): string[] {
  return Object.keys(CHROME.en);
}

export function chromeTable(locale: LocaleCode): Record<string, string> {
  return { ...CHROME[locale] };
}
