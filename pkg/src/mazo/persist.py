"""Versioned canonical serialization of whole run states.

One save document captures everything a run needs to continue: config,
seed, map, heroes, the active scene (including a mid-combat snapshot), and
the exact state and draw count of every named RNG stream.  Streams are
stored verbatim rather than re-derived, so a loaded run continues with the
same future as the run it was saved from.  Content is never embedded; the
caller reattaches a ContentDb at load and every referenced id must resolve
in it.

Documents are canonical key-sorted UTF-8 JSON with integers only, so equal
states always serialize to equal bytes.  Save files use the extension
``.mazosave.json`` with top-level keys {version, state}.
"""

from __future__ import annotations

from typing import Any, Optional

from .canonical import canonical_bytes, parse_canonical
from .combat import (
    Combatant,
    CombatState,
    EnemyInstance,
    HeroCombat,
    Outcome,
    Phase,
    PhaseKind,
)
from .content import (
    AxisState,
    ContentDb,
    UnknownIdError,
    lookup_card,
    lookup_enemy,
    lookup_event,
    lookup_module,
)
from .mapgen import MapGraph, MapNode, RoomKind
from .rng import RngStream, StreamLabel
from .run import (
    HeroState,
    PartyState,
    RunConfig,
    RunResult,
    RunState,
    Scene,
    SceneKind,
    ShopItem,
)

SAVE_VERSION = 1


class PersistError(Exception):
    """Base class for save/load failures."""


class MalformedSaveError(PersistError):
    """The document is not a well-formed save of a run state."""


class UnsupportedVersionError(PersistError):
    """The document's version is not one this build can load."""


# ---------------------------------------------------------------------------
# State -> dict
# ---------------------------------------------------------------------------


def _stream_to_dict(stream: RngStream) -> dict:
    return {"state": stream.state, "draws": stream.draws}


def _axes_to_dict(axes: AxisState) -> dict:
    return {"focus": axes.focus, "rhythm": axes.rhythm, "momentum": axes.momentum}


def _combatant_to_dict(unit: Combatant) -> dict:
    return {
        "hp": unit.hp,
        "max_hp": unit.max_hp,
        "shield": unit.shield,
        "axes": _axes_to_dict(unit.axes),
    }


def _hero_combat_to_dict(hero: HeroCombat) -> dict:
    return {
        "hero_index": hero.hero_index,
        "combatant": _combatant_to_dict(hero.combatant),
        "hand": list(hero.hand),
        "draw_pile": list(hero.draw_pile),
        "discard_pile": list(hero.discard_pile),
        "energy": hero.energy,
        "modules": list(hero.modules),
        "credits_gained": hero.credits_gained,
    }


def _enemy_to_dict(enemy: EnemyInstance) -> dict:
    return {
        "def_id": enemy.def_id,
        "combatant": _combatant_to_dict(enemy.combatant),
        "cycle_pos": enemy.cycle_pos,
    }


def _phase_to_dict(phase: Phase) -> dict:
    return {
        "kind": phase.kind.value,
        "hero_index": phase.hero_index,
        "outcome": phase.outcome.value,
    }


def _combat_to_dict(combat: CombatState) -> dict:
    return {
        "heroes": [_hero_combat_to_dict(h) for h in combat.heroes],
        "enemies": [_enemy_to_dict(e) for e in combat.enemies],
        "phase": _phase_to_dict(combat.phase),
        "turn_number": combat.turn_number,
        "shuffle_stream": _stream_to_dict(combat.shuffle_stream),
        "ai_stream": _stream_to_dict(combat.ai_stream),
        "log": [dict(entry) for entry in combat.log],
    }


def _map_to_dict(graph: MapGraph) -> dict:
    return {
        "nodes": [
            {"id": n.id, "sector": n.sector, "layer": n.layer, "kind": n.kind.value}
            for n in graph.nodes
        ],
        "edges": [[src, dst] for src, dst in graph.edges],
        "sector_count": graph.sector_count,
        "layers_per_sector": graph.layers_per_sector,
    }


def _party_to_dict(party: PartyState) -> dict:
    return {
        "map": _map_to_dict(party.map),
        "current_node": party.current_node,
        "visited_path": list(party.visited_path),
        "level_progression": party.level_progression,
        "room_counters": {kind.value: count for kind, count in party.room_counters.items()},
    }


def _hero_to_dict(hero: HeroState) -> dict:
    return {
        "deck": list(hero.deck),
        "modules": list(hero.modules),
        "hp": hero.hp,
        "max_hp": hero.max_hp,
        "credits": hero.credits,
    }


def _item_to_dict(item: ShopItem) -> dict:
    return {"kind": item.kind, "item_id": item.item_id, "price": item.price, "sold": item.sold}


def _scene_to_dict(scene: Scene) -> dict:
    return {
        "kind": scene.kind.value,
        "combat": _combat_to_dict(scene.combat) if scene.combat is not None else None,
        "items": [_item_to_dict(i) for i in scene.items],
        "event_id": scene.event_id,
        "reward_tier": scene.reward_tier,
        "card_offers": [list(row) for row in scene.card_offers],
        "module_offers": [list(row) for row in scene.module_offers],
        "card_taken": list(scene.card_taken),
        "module_taken": list(scene.module_taken),
        "resolved": list(scene.resolved),
        "result": scene.result.value if scene.result is not None else None,
    }


def run_to_dict(run: RunState) -> dict:
    return {
        "config": {
            "sector_count": run.config.sector_count,
            "players": run.config.players,
            "layers_per_sector": run.config.layers_per_sector,
            "map_width": run.config.map_width,
        },
        "seed": run.seed,
        "party": _party_to_dict(run.party),
        "heroes": [_hero_to_dict(h) for h in run.heroes],
        "scene": _scene_to_dict(run.scene),
        "streams": {
            label.value: _stream_to_dict(stream) for label, stream in run.streams.items()
        },
    }


# ---------------------------------------------------------------------------
# dict -> state
# ---------------------------------------------------------------------------


def _stream_from_dict(label: StreamLabel, d: dict) -> RngStream:
    return RngStream(label=label, state=_int(d["state"]), draws=_int(d["draws"]))


def _int(value: Any) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedSaveError(f"expected integer, got {value!r}")
    return value


def _str(value: Any) -> str:
    if not isinstance(value, str):
        raise MalformedSaveError(f"expected string, got {value!r}")
    return value


def _bool(value: Any) -> bool:
    if not isinstance(value, bool):
        raise MalformedSaveError(f"expected boolean, got {value!r}")
    return value


def _str_list(value: Any) -> list[str]:
    return [_str(item) for item in value]


def _axes_from_dict(d: dict) -> AxisState:
    return AxisState(focus=_int(d["focus"]), rhythm=_int(d["rhythm"]), momentum=_int(d["momentum"]))


def _combatant_from_dict(d: dict) -> Combatant:
    return Combatant(
        hp=_int(d["hp"]),
        max_hp=_int(d["max_hp"]),
        shield=_int(d["shield"]),
        axes=_axes_from_dict(d["axes"]),
    )


def _hero_combat_from_dict(d: dict, db: ContentDb) -> HeroCombat:
    hand = _str_list(d["hand"])
    draw_pile = _str_list(d["draw_pile"])
    discard_pile = _str_list(d["discard_pile"])
    modules = _str_list(d["modules"])
    for card_id in hand + draw_pile + discard_pile:
        lookup_card(db, card_id)
    for module_id in modules:
        lookup_module(db, module_id)
    return HeroCombat(
        hero_index=_int(d["hero_index"]),
        combatant=_combatant_from_dict(d["combatant"]),
        hand=hand,
        draw_pile=draw_pile,
        discard_pile=discard_pile,
        energy=_int(d["energy"]),
        modules=modules,
        credits_gained=_int(d["credits_gained"]),
    )


def _enemy_from_dict(d: dict, db: ContentDb) -> EnemyInstance:
    def_id = _str(d["def_id"])
    lookup_enemy(db, def_id)
    return EnemyInstance(
        def_id=def_id,
        combatant=_combatant_from_dict(d["combatant"]),
        cycle_pos=_int(d["cycle_pos"]),
    )


def _phase_from_dict(d: dict) -> Phase:
    return Phase(
        kind=PhaseKind(_str(d["kind"])),
        hero_index=_int(d["hero_index"]),
        outcome=Outcome(_str(d["outcome"])),
    )


def _combat_from_dict(d: dict, db: ContentDb) -> CombatState:
    log = [entry for entry in d["log"]]
    for entry in log:
        if not isinstance(entry, dict):
            raise MalformedSaveError("combat log entries must be objects")
    return CombatState(
        heroes=[_hero_combat_from_dict(h, db) for h in d["heroes"]],
        enemies=[_enemy_from_dict(e, db) for e in d["enemies"]],
        phase=_phase_from_dict(d["phase"]),
        turn_number=_int(d["turn_number"]),
        shuffle_stream=_stream_from_dict(StreamLabel.SHUFFLE, d["shuffle_stream"]),
        ai_stream=_stream_from_dict(StreamLabel.ENEMY_AI, d["ai_stream"]),
        log=[dict(entry) for entry in log],
        db=db,
    )


def _map_from_dict(d: dict) -> MapGraph:
    nodes = [
        MapNode(
            id=_str(n["id"]),
            sector=_int(n["sector"]),
            layer=_int(n["layer"]),
            kind=RoomKind(_str(n["kind"])),
        )
        for n in d["nodes"]
    ]
    edges = [(_str(e[0]), _str(e[1])) for e in d["edges"]]
    return MapGraph(
        nodes=nodes,
        edges=edges,
        sector_count=_int(d["sector_count"]),
        layers_per_sector=_int(d["layers_per_sector"]),
    )


def _party_from_dict(d: dict) -> PartyState:
    current = d["current_node"]
    counters = {RoomKind(name): _int(count) for name, count in d["room_counters"].items()}
    for kind in RoomKind:
        if kind not in counters:
            raise MalformedSaveError(f"room_counters missing {kind.value}")
    return PartyState(
        map=_map_from_dict(d["map"]),
        current_node=None if current is None else _str(current),
        visited_path=_str_list(d["visited_path"]),
        level_progression=_int(d["level_progression"]),
        room_counters=counters,
    )


def _hero_from_dict(d: dict, db: ContentDb) -> HeroState:
    deck = _str_list(d["deck"])
    modules = _str_list(d["modules"])
    for card_id in deck:
        lookup_card(db, card_id)
    for module_id in modules:
        lookup_module(db, module_id)
    return HeroState(
        deck=deck,
        modules=modules,
        hp=_int(d["hp"]),
        max_hp=_int(d["max_hp"]),
        credits=_int(d["credits"]),
    )


def _item_from_dict(d: dict, db: ContentDb) -> ShopItem:
    kind = _str(d["kind"])
    item_id = _str(d["item_id"])
    if kind == "card":
        lookup_card(db, item_id)
    elif kind == "module":
        lookup_module(db, item_id)
    elif kind != "heal":
        raise MalformedSaveError(f"unknown shop item kind {kind!r}")
    return ShopItem(kind=kind, item_id=item_id, price=_int(d["price"]), sold=_bool(d["sold"]))


def _scene_from_dict(d: dict, db: ContentDb) -> Scene:
    event_id = _str(d["event_id"])
    if event_id:
        lookup_event(db, event_id)
    card_offers = [_str_list(row) for row in d["card_offers"]]
    module_offers = [_str_list(row) for row in d["module_offers"]]
    for row in card_offers:
        for card_id in row:
            lookup_card(db, card_id)
    for row in module_offers:
        for module_id in row:
            lookup_module(db, module_id)
    result = d["result"]
    return Scene(
        kind=SceneKind(_str(d["kind"])),
        combat=_combat_from_dict(d["combat"], db) if d["combat"] is not None else None,
        items=[_item_from_dict(i, db) for i in d["items"]],
        event_id=event_id,
        reward_tier=_str(d["reward_tier"]),
        card_offers=card_offers,
        module_offers=module_offers,
        card_taken=[_bool(v) for v in d["card_taken"]],
        module_taken=[_bool(v) for v in d["module_taken"]],
        resolved=[_bool(v) for v in d["resolved"]],
        result=None if result is None else RunResult(_str(result)),
    )


def run_from_dict(d: dict, db: ContentDb) -> RunState:
    config_d = d["config"]
    config = RunConfig(
        sector_count=_int(config_d["sector_count"]),
        players=_int(config_d["players"]),
        layers_per_sector=_int(config_d["layers_per_sector"]),
        map_width=_int(config_d["map_width"]),
    )
    streams = {
        label: _stream_from_dict(label, d["streams"][label.value]) for label in StreamLabel
    }
    return RunState(
        config=config,
        seed=_int(d["seed"]),
        party=_party_from_dict(d["party"]),
        heroes=[_hero_from_dict(h, db) for h in d["heroes"]],
        scene=_scene_from_dict(d["scene"], db),
        streams=streams,
        db=db,
    )


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------


def save_run(run: RunState) -> bytes:
    """Serialize a run to a canonical save document.

    Equal run states produce byte-identical documents.
    """
    return canonical_bytes({"version": SAVE_VERSION, "state": run_to_dict(run)})


def load_run(data: bytes, db: ContentDb) -> RunState:
    """Rebuild a run from a save document, reattaching ``db``.

    Raises MalformedSaveError for documents that do not parse or do not
    have the expected shape, UnsupportedVersionError for version
    mismatches, and UnknownIdError when a referenced id is missing from
    the supplied content.
    """
    try:
        doc = parse_canonical(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedSaveError(f"unreadable save document: {exc}") from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise MalformedSaveError("save document must be an object with a version")
    if doc["version"] != SAVE_VERSION:
        raise UnsupportedVersionError(f"unsupported save version {doc['version']!r}")
    if "state" not in doc:
        raise MalformedSaveError("save document has no state")
    try:
        return run_from_dict(doc["state"], db)
    except UnknownIdError:
        raise
    except MalformedSaveError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedSaveError(f"malformed save state: {exc}") from exc


# ---------------------------------------------------------------------------
# Shared snapshot codecs
# ---------------------------------------------------------------------------
# The session layer ships party, scene, and hero snapshots over the wire in
# exactly the encoding save documents use, so the two never drift apart.


def party_to_dict(party: PartyState) -> dict:
    return _party_to_dict(party)


def party_from_dict(d: dict) -> PartyState:
    return _party_from_dict(d)


def scene_to_dict(scene: Scene) -> dict:
    return _scene_to_dict(scene)


def scene_from_dict(d: dict, db: ContentDb) -> Scene:
    return _scene_from_dict(d, db)


def hero_to_dict(hero: HeroState) -> dict:
    return _hero_to_dict(hero)


def hero_from_dict(d: dict, db: ContentDb) -> HeroState:
    return _hero_from_dict(d, db)
