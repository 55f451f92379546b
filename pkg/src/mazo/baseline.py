"""The baseline content pack shipped with the engine.

Authored directly in Python and serialized through the canonical pack
format, so the repo fixture `content/baseline.pack.json` is reproducible
byte for byte.  Scope: 16 cards, 8 normal enemies, 3 elites, 3 bosses,
4 events, 6 modules, per-tier reward tables, shop rules, 3 sectors of
encounter groups, and full en/es locale tables.
"""

from __future__ import annotations

from functools import lru_cache

from .canonical import canonical_bytes
from .content import PACK_VERSION, ContentDb, load_content


def _eff(op: str, magnitude: int, target: str, axis: str | None = None) -> dict:
    out: dict = {"op": op, "magnitude": magnitude, "target": target}
    if axis is not None:
        out["axis"] = axis
    return out


def _card(cid: str, cost: int, kind: str, effects: list[dict]) -> dict:
    return {"id": cid, "name_key": f"card.{cid}.name", "cost": cost, "kind": kind, "effects": effects}


def _intent(kind: str, magnitude: int, hits: int = 1, axis: str | None = None) -> dict:
    out: dict = {"kind": kind, "magnitude": magnitude, "hits": hits}
    if axis is not None:
        out["axis"] = axis
    return out


def _enemy(eid: str, max_hp: int, tier: str, cycle: list[dict], **axes: int) -> dict:
    out: dict = {
        "id": eid,
        "name_key": f"enemy.{eid}.name",
        "max_hp": max_hp,
        "tier": tier,
        "intent_cycle": cycle,
    }
    if axes:
        out["start_axes"] = {"focus": 0, "rhythm": 0, "momentum": 0, **axes}
    return out


def _module(mid: str, hook: str, effect: dict) -> dict:
    return {"id": mid, "name_key": f"module.{mid}.name", "hook": hook, "effect": effect}


_CARDS = [
    _card("strike", 1, "Attack", [_eff("Damage", 6, "SingleEnemy")]),
    _card("heavy_blow", 2, "Attack", [_eff("Damage", 13, "SingleEnemy")]),
    _card("twin_strike", 1, "Attack", [_eff("Damage", 4, "SingleEnemy"), _eff("Damage", 4, "SingleEnemy")]),
    _card("slash_all", 2, "Attack", [_eff("Damage", 8, "AllEnemies")]),
    _card("shatter", 1, "Attack", [_eff("RemoveShield", 999, "SingleEnemy"), _eff("Damage", 5, "SingleEnemy")]),
    _card("guard", 1, "Skill", [_eff("Shield", 6, "Self")]),
    _card("brace", 2, "Skill", [_eff("Shield", 13, "Self")]),
    _card("rally", 2, "Skill", [_eff("Shield", 5, "Party")]),
    _card("second_wind", 1, "Skill", [_eff("Heal", 5, "Self")]),
    _card("surge", 0, "Skill", [_eff("GainEnergy", 1, "Self")]),
    _card("quick_draw", 1, "Skill", [_eff("Draw", 2, "Self")]),
    _card("disrupt", 1, "Skill", [_eff("AxisDelta", -2, "SingleEnemy", axis="Momentum")]),
    _card("focus_up", 1, "Power", [_eff("AxisDelta", 2, "Self", axis="Focus")]),
    _card("tempo", 1, "Power", [_eff("AxisDelta", 2, "Self", axis="Rhythm")]),
    _card("flow", 1, "Power", [_eff("AxisDelta", 1, "Self", axis="Momentum")]),
    _card("war_cry", 2, "Power", [_eff("AxisDelta", 1, "Self", axis="Focus"), _eff("AxisDelta", 1, "Self", axis="Rhythm")]),
]

_ENEMIES = [
    _enemy("drone", 16, "Normal", [_intent("Attack", 7), _intent("Attack", 7), _intent("Shield", 5)]),
    _enemy("pouncer", 14, "Normal", [_intent("Attack", 10)]),
    _enemy("lurker", 21, "Normal", [_intent("Shield", 5), _intent("Attack", 8)]),
    _enemy("sentry", 25, "Normal", [_intent("Attack", 6), _intent("Shield", 7)]),
    _enemy("stinger", 19, "Normal", [_intent("Multi", 3, hits=2), _intent("Attack", 5)]),
    _enemy("bruiser", 30, "Normal", [_intent("Attack", 9), _intent("AxisDelta", 1, axis="Momentum"), _intent("Attack", 9)]),
    _enemy("warden", 34, "Normal", [_intent("Shield", 8), _intent("Attack", 8), _intent("Attack", 8)]),
    _enemy("howler", 23, "Normal", [_intent("AxisDelta", 2, axis="Momentum"), _intent("Attack", 7)]),
    _enemy("juggernaut", 55, "Elite", [_intent("Attack", 12), _intent("Shield", 8), _intent("Attack", 14)]),
    _enemy("twin_fang", 46, "Elite", [_intent("Multi", 5, hits=2), _intent("AxisDelta", 1, axis="Momentum")]),
    _enemy("bulwark", 62, "Elite", [_intent("Shield", 12), _intent("Attack", 10), _intent("Attack", 10)], rhythm=2),
    _enemy("colossus", 104, "Boss", [_intent("Attack", 13), _intent("Shield", 10), _intent("Attack", 15), _intent("AxisDelta", 1, axis="Momentum")]),
    _enemy("hive_mind", 92, "Boss", [_intent("Multi", 4, hits=3), _intent("Shield", 9), _intent("AxisDelta", 2, axis="Momentum")]),
    _enemy("abyss_king", 126, "Boss", [_intent("Attack", 11), _intent("Attack", 13), _intent("Shield", 12), _intent("Attack", 17)], momentum=1),
]

_MODULES = [
    _module("iron_plating", "CombatStart", _eff("Shield", 6, "Self")),
    _module("war_drum", "CombatStart", _eff("AxisDelta", 1, "Self", axis="Focus")),
    _module("coolant_loop", "TurnStart", _eff("Shield", 2, "Self")),
    _module("battery_pack", "CombatStart", _eff("GainEnergy", 1, "Self")),
    _module("thorn_mail", "DamageTaken", _eff("Damage", 2, "SingleEnemy")),
    _module("echo_bell", "CardPlayed", _eff("Shield", 1, "Self")),
]

_EVENTS = [
    {
        "id": "wandering_trader",
        "prompt_key": "event.wandering_trader.prompt",
        "choices": [
            {
                "label_key": "event.wandering_trader.buy",
                "requirement": {"kind": "credits", "min": 25},
                "outcomes": [_eff("GainCredits", -25, "Self"), _eff("Heal", 18, "Self")],
            },
            {
                "label_key": "event.wandering_trader.haggle",
                "outcomes": [_eff("GainCredits", 8, "Self")],
            },
        ],
    },
    {
        "id": "ancient_shrine",
        "prompt_key": "event.ancient_shrine.prompt",
        "choices": [
            {
                "label_key": "event.ancient_shrine.commune",
                "requirement": {"kind": "axis", "axis": "Focus", "min": 0},
                "outcomes": [],
                "card_grant": "focus_up",
            },
            {
                "label_key": "event.ancient_shrine.pray",
                "outcomes": [_eff("Heal", 8, "Self")],
            },
        ],
    },
    {
        "id": "rusted_cache",
        "prompt_key": "event.rusted_cache.prompt",
        "choices": [
            {
                "label_key": "event.rusted_cache.force",
                "outcomes": [_eff("Damage", 6, "Self"), _eff("GainCredits", 35, "Self")],
            },
            {
                "label_key": "event.rusted_cache.leave",
                "outcomes": [_eff("GainCredits", 5, "Self")],
            },
        ],
    },
    {
        "id": "field_hospital",
        "prompt_key": "event.field_hospital.prompt",
        "choices": [
            {
                "label_key": "event.field_hospital.donate",
                "requirement": {"kind": "credits", "min": 15},
                "outcomes": [_eff("GainCredits", -15, "Self"), _eff("Heal", 25, "Self")],
            },
            {
                "label_key": "event.field_hospital.rest",
                "outcomes": [_eff("Heal", 5, "Self")],
            },
        ],
    },
]

_REWARD_TABLES = {
    "Normal": {
        "cards": [
            {"card": "twin_strike", "weight": 3},
            {"card": "heavy_blow", "weight": 3},
            {"card": "brace", "weight": 3},
            {"card": "guard", "weight": 2},
            {"card": "second_wind", "weight": 2},
            {"card": "quick_draw", "weight": 2},
            {"card": "surge", "weight": 2},
            {"card": "disrupt", "weight": 2},
            {"card": "focus_up", "weight": 2},
            {"card": "tempo", "weight": 2},
            {"card": "slash_all", "weight": 2},
            {"card": "rally", "weight": 2},
        ],
        "credits_min": 12,
        "credits_max": 20,
    },
    "Elite": {
        "cards": [
            {"card": "heavy_blow", "weight": 3},
            {"card": "slash_all", "weight": 3},
            {"card": "shatter", "weight": 3},
            {"card": "brace", "weight": 3},
            {"card": "rally", "weight": 2},
            {"card": "flow", "weight": 2},
            {"card": "war_cry", "weight": 2},
            {"card": "focus_up", "weight": 2},
        ],
        "credits_min": 25,
        "credits_max": 40,
    },
    "Boss": {
        "cards": [
            {"card": "shatter", "weight": 3},
            {"card": "slash_all", "weight": 3},
            {"card": "flow", "weight": 3},
            {"card": "war_cry", "weight": 3},
            {"card": "heavy_blow", "weight": 2},
            {"card": "brace", "weight": 2},
        ],
        "credits_min": 45,
        "credits_max": 70,
    },
}

_SHOP_RULES = {
    "card_price": {"low": 45, "high": 65},
    "module_price": {"low": 70, "high": 100},
    "heal_price": {"low": 25, "high": 40},
    "heal_amount": 20,
}


def _grp(enemies: list[str], weight: int) -> dict:
    return {"enemies": enemies, "weight": weight}


_ENCOUNTERS = [
    {
        "normal": [
            _grp(["drone"], 3),
            _grp(["pouncer"], 2),
            _grp(["lurker"], 2),
            _grp(["sentry"], 2),
            _grp(["drone", "pouncer"], 2),
            _grp(["stinger"], 1),
        ],
        "elite": [_grp(["juggernaut"], 1), _grp(["twin_fang"], 1)],
        "boss": [_grp(["colossus"], 1)],
    },
    {
        "normal": [
            _grp(["bruiser"], 3),
            _grp(["warden"], 2),
            _grp(["sentry", "drone"], 2),
            _grp(["stinger", "lurker"], 2),
            _grp(["howler", "drone"], 1),
            _grp(["bruiser", "pouncer"], 1),
        ],
        "elite": [_grp(["twin_fang"], 1), _grp(["bulwark"], 1)],
        "boss": [_grp(["hive_mind"], 1)],
    },
    {
        "normal": [
            _grp(["warden", "stinger"], 2),
            _grp(["bruiser", "howler"], 2),
            _grp(["warden", "bruiser"], 1),
            _grp(["sentry", "warden"], 1),
            _grp(["howler", "stinger", "drone"], 1),
            _grp(["bruiser", "bruiser"], 1),
        ],
        "elite": [_grp(["bulwark"], 1), _grp(["twin_fang"], 1), _grp(["juggernaut", "drone"], 1)],
        "boss": [_grp(["abyss_king"], 1)],
    },
]

STARTER_DECK = [
    "strike", "strike", "strike", "strike", "strike",
    "guard", "guard", "guard", "guard",
    "focus_up",
]

_EN = {
    "card.strike.name": "Strike",
    "card.heavy_blow.name": "Heavy Blow",
    "card.twin_strike.name": "Twin Strike",
    "card.slash_all.name": "Sweeping Slash",
    "card.shatter.name": "Shatter",
    "card.guard.name": "Guard",
    "card.brace.name": "Brace",
    "card.rally.name": "Rally",
    "card.second_wind.name": "Second Wind",
    "card.surge.name": "Surge",
    "card.quick_draw.name": "Quick Draw",
    "card.disrupt.name": "Disrupt",
    "card.focus_up.name": "Sharpen Focus",
    "card.tempo.name": "Tempo",
    "card.flow.name": "Flow State",
    "card.war_cry.name": "War Cry",
    "enemy.drone.name": "Scrap Drone",
    "enemy.pouncer.name": "Pouncer",
    "enemy.lurker.name": "Lurker",
    "enemy.sentry.name": "Sentry",
    "enemy.stinger.name": "Stinger",
    "enemy.bruiser.name": "Bruiser",
    "enemy.warden.name": "Warden",
    "enemy.howler.name": "Howler",
    "enemy.juggernaut.name": "Juggernaut",
    "enemy.twin_fang.name": "Twin Fang",
    "enemy.bulwark.name": "Bulwark",
    "enemy.colossus.name": "Colossus",
    "enemy.hive_mind.name": "Hive Mind",
    "enemy.abyss_king.name": "Abyss King",
    "module.iron_plating.name": "Iron Plating",
    "module.war_drum.name": "War Drum",
    "module.coolant_loop.name": "Coolant Loop",
    "module.battery_pack.name": "Battery Pack",
    "module.thorn_mail.name": "Thorn Mail",
    "module.echo_bell.name": "Echo Bell",
    "event.wandering_trader.prompt": "A wandering trader offers supplies.",
    "event.wandering_trader.buy": "Buy a medkit (25 credits).",
    "event.wandering_trader.haggle": "Haggle for spare parts.",
    "event.ancient_shrine.prompt": "An ancient shrine hums quietly.",
    "event.ancient_shrine.commune": "Commune with the shrine.",
    "event.ancient_shrine.pray": "Pray and move on.",
    "event.rusted_cache.prompt": "A rusted cache is wedged into the wall.",
    "event.rusted_cache.force": "Force it open.",
    "event.rusted_cache.leave": "Pry off the loose coins and leave.",
    "event.field_hospital.prompt": "A field hospital takes in the wounded.",
    "event.field_hospital.donate": "Donate 15 credits for treatment.",
    "event.field_hospital.rest": "Rest briefly by the door.",
}

_ES = {
    "card.strike.name": "Golpe",
    "card.heavy_blow.name": "Golpe Pesado",
    "card.twin_strike.name": "Golpe Doble",
    "card.slash_all.name": "Tajo Amplio",
    "card.shatter.name": "Quebrantar",
    "card.guard.name": "Guardia",
    "card.brace.name": "Refuerzo",
    "card.rally.name": "Reagrupar",
    "card.second_wind.name": "Segundo Aliento",
    "card.surge.name": "Oleada",
    "card.quick_draw.name": "Mano Rápida",
    "card.disrupt.name": "Perturbar",
    "card.focus_up.name": "Afinar el Foco",
    "card.tempo.name": "Compás",
    "card.flow.name": "Estado de Flujo",
    "card.war_cry.name": "Grito de Guerra",
    "enemy.drone.name": "Dron de Chatarra",
    "enemy.pouncer.name": "Acechador",
    "enemy.lurker.name": "Merodeador",
    "enemy.sentry.name": "Centinela",
    "enemy.stinger.name": "Aguijón",
    "enemy.bruiser.name": "Matón",
    "enemy.warden.name": "Guardián",
    "enemy.howler.name": "Aullador",
    "enemy.juggernaut.name": "Coloso de Asalto",
    "enemy.twin_fang.name": "Colmillo Doble",
    "enemy.bulwark.name": "Baluarte",
    "enemy.colossus.name": "Coloso",
    "enemy.hive_mind.name": "Mente Colmena",
    "enemy.abyss_king.name": "Rey del Abismo",
    "module.iron_plating.name": "Blindaje de Hierro",
    "module.war_drum.name": "Tambor de Guerra",
    "module.coolant_loop.name": "Circuito Refrigerante",
    "module.battery_pack.name": "Batería Auxiliar",
    "module.thorn_mail.name": "Cota de Espinas",
    "module.echo_bell.name": "Campana de Eco",
    "event.wandering_trader.prompt": "Un mercader ambulante ofrece suministros.",
    "event.wandering_trader.buy": "Comprar un botiquín (25 créditos).",
    "event.wandering_trader.haggle": "Regatear por piezas sueltas.",
    "event.ancient_shrine.prompt": "Un santuario antiguo zumba en silencio.",
    "event.ancient_shrine.commune": "Comulgar con el santuario.",
    "event.ancient_shrine.pray": "Rezar y seguir adelante.",
    "event.rusted_cache.prompt": "Un cofre oxidado está encajado en el muro.",
    "event.rusted_cache.force": "Forzarlo.",
    "event.rusted_cache.leave": "Arrancar las monedas sueltas y marcharse.",
    "event.field_hospital.prompt": "Un hospital de campaña acoge a los heridos.",
    "event.field_hospital.donate": "Donar 15 créditos por tratamiento.",
    "event.field_hospital.rest": "Descansar un momento junto a la puerta.",
}


def baseline_pack_dict() -> dict:
    return {
        "version": PACK_VERSION,
        "cards": _CARDS,
        "enemies": _ENEMIES,
        "modules": _MODULES,
        "events": _EVENTS,
        "reward_tables": _REWARD_TABLES,
        "shop_rules": _SHOP_RULES,
        "encounters": _ENCOUNTERS,
        "locales": {"en": _EN, "es": _ES},
        "starter_deck": STARTER_DECK,
    }


def baseline_pack_bytes() -> bytes:
    return canonical_bytes(baseline_pack_dict())


@lru_cache(maxsize=1)
def baseline_db() -> ContentDb:
    return load_content(baseline_pack_bytes())
