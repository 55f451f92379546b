"""Run progression: node choice, rooms, rewards, shops, events, rest sites.

A run is a value (RunState) advanced by pure operations.  Each named RNG
stream has a single owner: MapGen is spent at generation, Shuffle and
EnemyAi advance inside combats and are written back when a combat ends,
Rewards covers victory credits and reward offers, Events picks event ids,
Shop rolls inventories and prices.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .combat import (
    CombatAction,
    CombatState,
    HeroSpec,
    Outcome,
    apply_action,
    begin_combat,
    combat_outcome,
    resolve_enemy_phase,
)
from .content import (
    AxisRequirement,
    ContentDb,
    CreditsRequirement,
    EffectOp,
    EventChoice,
    TargetKind,
    lookup_event,
)
from .mapgen import MapGraph, RoomKind, generate_map_with_stream
from .rng import RngStream, StreamLabel, derive_stream

BASE_HERO_HP = 70
STARTING_CREDITS = 50
REST_HEAL_PERCENT = 30
MAX_HP_UPGRADE = 5
SHOP_CARD_CHOICES = 3
SHOP_MODULE_CHOICES = 2
REWARD_CARD_CHOICES = 3
REWARD_MODULE_CHOICES = 2

SKIP = "Skip"


class RunError(Exception):
    """Base class for run API misuse."""


class InvalidConfigError(RunError):
    pass


class WrongSceneError(RunError):
    pass


class IllegalMoveError(RunError):
    pass


class WrongHeroError(RunError):
    """A hero acted out of hero-index order, or re-acted after resolving."""


class InsufficientCreditsError(RunError):
    pass


class RequirementError(RunError):
    """An event choice's requirement is not met by the acting hero."""


@dataclass(frozen=True)
class RunConfig:
    sector_count: int = 3
    players: int = 1
    layers_per_sector: int = 6
    map_width: int = 4


def validate_config(config: RunConfig) -> None:
    if config.sector_count < 1:
        raise InvalidConfigError("sector_count must be >= 1")
    if config.players not in (1, 2):
        raise InvalidConfigError("players must be 1 or 2")
    if config.layers_per_sector < 2:
        raise InvalidConfigError("layers_per_sector must be >= 2")
    if config.map_width < 2:
        raise InvalidConfigError("map_width must be >= 2")


@dataclass
class HeroState:
    deck: list[str]
    modules: list[str]
    hp: int
    max_hp: int
    credits: int

    def clone(self) -> HeroState:
        return HeroState(list(self.deck), list(self.modules), self.hp, self.max_hp, self.credits)


@dataclass
class PartyState:
    map: MapGraph  # immutable once generated; shared across clones
    current_node: Optional[str]
    visited_path: list[str]
    level_progression: int
    room_counters: dict[RoomKind, int]

    def clone(self) -> PartyState:
        return PartyState(
            self.map,
            self.current_node,
            list(self.visited_path),
            self.level_progression,
            dict(self.room_counters),
        )


class SceneKind(Enum):
    CHOOSING_NODE = "ChoosingNode"
    IN_COMBAT = "InCombat"
    AT_SHOP = "AtShop"
    AT_EVENT = "AtEvent"
    AT_REST = "AtRest"
    CHOOSING_REWARD = "ChoosingReward"
    FINISHED = "Finished"


class RunResult(Enum):
    WON = "Won"
    LOST = "Lost"


@dataclass
class ShopItem:
    kind: str  # "card" | "module" | "heal"
    item_id: str  # card or module id; "" for heal
    price: int
    sold: bool = False

    def clone(self) -> ShopItem:
        return ShopItem(self.kind, self.item_id, self.price, self.sold)


@dataclass
class Scene:
    """Tagged record for every scene variant; unused fields stay empty."""

    kind: SceneKind
    combat: Optional[CombatState] = None
    items: list[ShopItem] = field(default_factory=list)
    event_id: str = ""
    reward_tier: str = ""
    card_offers: list[list[str]] = field(default_factory=list)
    module_offers: list[list[str]] = field(default_factory=list)
    card_taken: list[bool] = field(default_factory=list)
    module_taken: list[bool] = field(default_factory=list)
    resolved: list[bool] = field(default_factory=list)
    result: Optional[RunResult] = None

    def clone(self) -> Scene:
        return Scene(
            kind=self.kind,
            combat=self.combat.clone() if self.combat is not None else None,
            items=[item.clone() for item in self.items],
            event_id=self.event_id,
            reward_tier=self.reward_tier,
            card_offers=[list(o) for o in self.card_offers],
            module_offers=[list(o) for o in self.module_offers],
            card_taken=list(self.card_taken),
            module_taken=list(self.module_taken),
            resolved=list(self.resolved),
            result=self.result,
        )


@dataclass
class RunState:
    config: RunConfig
    seed: int
    party: PartyState
    heroes: list[HeroState]
    scene: Scene
    streams: dict[StreamLabel, RngStream]
    db: ContentDb = field(compare=False, repr=False)

    def clone(self) -> RunState:
        return RunState(
            config=self.config,
            seed=self.seed,
            party=self.party.clone(),
            heroes=[h.clone() for h in self.heroes],
            scene=self.scene.clone(),
            streams={label: s.clone() for label, s in self.streams.items()},
            db=self.db,
        )

    @property
    def finished(self) -> bool:
        return self.scene.kind is SceneKind.FINISHED


# ---------------------------------------------------------------------------
# Setup and movement
# ---------------------------------------------------------------------------


def start_run(seed: int, config: RunConfig, db: ContentDb) -> RunState:
    validate_config(config)
    streams = {label: derive_stream(seed, label) for label in StreamLabel}
    graph = generate_map_with_stream(streams[StreamLabel.MAP_GEN], config)
    heroes = [
        HeroState(
            deck=list(db.starter_deck),
            modules=[],
            hp=BASE_HERO_HP,
            max_hp=BASE_HERO_HP,
            credits=STARTING_CREDITS,
        )
        for _ in range(config.players)
    ]
    party = PartyState(
        map=graph,
        current_node=None,
        visited_path=[],
        level_progression=0,
        room_counters={kind: 0 for kind in RoomKind},
    )
    return RunState(
        config=config,
        seed=seed,
        party=party,
        heroes=heroes,
        scene=Scene(SceneKind.CHOOSING_NODE),
        streams=streams,
        db=db,
    )


def available_moves(run: RunState) -> list[str]:
    if run.scene.kind is not SceneKind.CHOOSING_NODE:
        raise WrongSceneError("not choosing a node")
    if run.party.current_node is None:
        return run.party.map.entries(0)
    return run.party.map.successors(run.party.current_node)


def _require_scene(run: RunState, kind: SceneKind) -> None:
    if run.scene.kind is not kind:
        raise WrongSceneError(f"scene is {run.scene.kind.value}, expected {kind.value}")


def _hero_alive(run: RunState, index: int) -> bool:
    return run.heroes[index].hp > 0


def _auto_resolved(run: RunState) -> list[bool]:
    # downed heroes never act in resolution scenes
    return [not _hero_alive(run, i) for i in range(len(run.heroes))]


def _weighted_index(stream: RngStream, weights: list[int]) -> int:
    roll = stream.next_below(sum(weights))
    for index, weight in enumerate(weights):
        if roll < weight:
            return index
        roll -= weight
    raise AssertionError("unreachable: weights exhausted")


def _weighted_pick(stream: RngStream, entries: list[tuple[str, int]]) -> str:
    return entries[_weighted_index(stream, [w for _, w in entries])][0]


def _weighted_sample_distinct(stream: RngStream, entries: list[tuple[str, int]], count: int) -> list[str]:
    remaining = list(entries)
    out: list[str] = []
    while remaining and len(out) < count:
        choice = _weighted_pick(stream, remaining)
        out.append(choice)
        remaining = [(v, w) for v, w in remaining if v != choice]
    return out


def _hero_specs(run: RunState) -> list[HeroSpec]:
    return [
        HeroSpec(hp=h.hp, max_hp=h.max_hp, deck=tuple(h.deck), modules=tuple(h.modules))
        for h in run.heroes
    ]


def _draw_encounter(run: RunState, kind: RoomKind) -> list[str]:
    sector = run.party.map.node(run.party.current_node).sector
    tables = run.db.sector_encounters(sector)
    groups = {
        RoomKind.COMBAT: tables.normal,
        RoomKind.ELITE: tables.elite,
        RoomKind.BOSS: tables.boss,
    }[kind]
    weights = [g.weight for g in groups]
    picked = groups[_weighted_index(run.streams[StreamLabel.ENEMY_AI], weights)]
    return list(picked.enemies)


def _reward_tier(kind: RoomKind) -> str:
    return {
        RoomKind.COMBAT: "Normal",
        RoomKind.TREASURE: "Normal",
        RoomKind.ELITE: "Elite",
        RoomKind.BOSS: "Boss",
    }[kind]


def _card_offer_rows(run: RunState, tier: str) -> list[list[str]]:
    table = run.db.reward_tables[tier]
    entries = [(card_id, weight) for card_id, weight in table.cards]
    stream = run.streams[StreamLabel.REWARDS]
    return [
        _weighted_sample_distinct(stream, entries, REWARD_CARD_CHOICES)
        if _hero_alive(run, i)
        else []
        for i in range(len(run.heroes))
    ]


def _module_offer_rows(run: RunState) -> list[list[str]]:
    entries = [(module_id, 1) for module_id in sorted(run.db.modules)]
    stream = run.streams[StreamLabel.REWARDS]
    return [
        _weighted_sample_distinct(stream, entries, REWARD_MODULE_CHOICES)
        if _hero_alive(run, i)
        else []
        for i in range(len(run.heroes))
    ]


def _reward_scene(run: RunState, kind: RoomKind) -> Scene:
    tier = _reward_tier(kind)
    card_offers = _card_offer_rows(run, tier)
    module_offers = (
        _module_offer_rows(run) if kind is RoomKind.BOSS else [[] for _ in run.heroes]
    )
    done = _auto_resolved(run)
    return Scene(
        kind=SceneKind.CHOOSING_REWARD,
        reward_tier=tier,
        card_offers=card_offers,
        module_offers=module_offers,
        card_taken=list(done),
        module_taken=[d or not offers for d, offers in zip(done, module_offers)],
    )


def _shop_scene(run: RunState) -> Scene:
    stream = run.streams[StreamLabel.SHOP]
    rules = run.db.shop_rules
    table = run.db.reward_tables["Normal"]
    items: list[ShopItem] = []

    def price(rng_range) -> int:
        return rng_range.low + stream.next_below(rng_range.high - rng_range.low + 1)

    for card_id in _weighted_sample_distinct(stream, list(table.cards), SHOP_CARD_CHOICES):
        items.append(ShopItem("card", card_id, price(rules.card_price)))
    module_entries = [(module_id, 1) for module_id in sorted(run.db.modules)]
    for module_id in _weighted_sample_distinct(stream, module_entries, SHOP_MODULE_CHOICES):
        items.append(ShopItem("module", module_id, price(rules.module_price)))
    items.append(ShopItem("heal", "", price(rules.heal_price)))
    return Scene(kind=SceneKind.AT_SHOP, items=items, resolved=_auto_resolved(run))


def enter_node(run: RunState, node_id: str) -> RunState:
    if node_id not in available_moves(run):
        raise IllegalMoveError(f"cannot move to {node_id!r}")
    run = run.clone()
    run.party.current_node = node_id
    run.party.visited_path.append(node_id)
    kind = run.party.map.node(node_id).kind

    if kind in (RoomKind.COMBAT, RoomKind.ELITE, RoomKind.BOSS):
        encounter = _draw_encounter(run, kind)
        combat = begin_combat(
            _hero_specs(run),
            encounter,
            run.db,
            run.streams[StreamLabel.SHUFFLE],
            run.streams[StreamLabel.ENEMY_AI],
        )
        run.scene = Scene(SceneKind.IN_COMBAT, combat=combat)
    elif kind is RoomKind.SHOP:
        run.scene = _shop_scene(run)
    elif kind is RoomKind.EVENT:
        event_ids = sorted(run.db.events)
        picked = event_ids[run.streams[StreamLabel.EVENTS].next_below(len(event_ids))]
        run.scene = Scene(SceneKind.AT_EVENT, event_id=picked, resolved=_auto_resolved(run))
    elif kind is RoomKind.REST:
        run.scene = Scene(SceneKind.AT_REST, resolved=_auto_resolved(run))
    else:
        run.scene = _reward_scene(run, RoomKind.TREASURE)
    return run


# ---------------------------------------------------------------------------
# Combat pass-through
# ---------------------------------------------------------------------------


def combat_action(run: RunState, hero_index: int, action: CombatAction) -> RunState:
    _require_scene(run, SceneKind.IN_COMBAT)
    # apply_action returns a fresh CombatState, and every other field is
    # only ever replaced (never mutated) by run operations, so sharing
    # them keeps this pure without a deep clone per card play.
    new_scene = Scene(SceneKind.IN_COMBAT, combat=apply_action(run.scene.combat, hero_index, action))
    return replace(run, scene=new_scene)


def advance_enemy_phase(run: RunState) -> RunState:
    _require_scene(run, SceneKind.IN_COMBAT)
    new_scene = Scene(SceneKind.IN_COMBAT, combat=resolve_enemy_phase(run.scene.combat))
    return replace(run, scene=new_scene)


def resolve_combat_end(run: RunState) -> RunState:
    _require_scene(run, SceneKind.IN_COMBAT)
    combat = run.scene.combat
    outcome = combat_outcome(combat)
    if outcome is Outcome.ONGOING:
        raise RunError("combat is still ongoing")
    run = run.clone()
    combat = run.scene.combat

    # combats advance the shared streams; write the consumed state back
    run.streams[StreamLabel.SHUFFLE] = combat.shuffle_stream.clone()
    run.streams[StreamLabel.ENEMY_AI] = combat.ai_stream.clone()

    for hero, fighter in zip(run.heroes, combat.heroes):
        hero.hp = fighter.combatant.hp

    if outcome is Outcome.DEFEAT:
        run.scene = Scene(SceneKind.FINISHED, result=RunResult.LOST)
        return run

    node_kind = run.party.map.node(run.party.current_node).kind
    run.party.room_counters[node_kind] += 1

    tier = _reward_tier(node_kind)
    table = run.db.reward_tables[tier]
    span = table.credits_max - table.credits_min + 1
    credits_won = table.credits_min + run.streams[StreamLabel.REWARDS].next_below(span)
    for hero, fighter in zip(run.heroes, combat.heroes):
        if hero.hp > 0:
            hero.credits = max(0, hero.credits + credits_won + fighter.credits_gained)

    if node_kind is RoomKind.BOSS:
        run.party.level_progression += 1
        sector = run.party.map.node(run.party.current_node).sector
        if sector + 1 >= run.config.sector_count:
            run.scene = Scene(SceneKind.FINISHED, result=RunResult.WON)
            return run

    run.scene = _reward_scene(run, node_kind)
    return run


# ---------------------------------------------------------------------------
# Per-hero resolutions (hero-index order)
# ---------------------------------------------------------------------------


def _check_turn(flags: list[bool], hero_index: int) -> None:
    if flags[hero_index]:
        raise WrongHeroError(f"hero {hero_index} already resolved this scene")
    if any(not done for done in flags[:hero_index]):
        raise WrongHeroError(f"hero {hero_index} acted before an earlier hero resolved")


def _maybe_back_to_map(run: RunState, flags: list[bool], count_kind: Optional[RoomKind]) -> None:
    if all(flags):
        if count_kind is not None:
            run.party.room_counters[count_kind] += 1
        run.scene = Scene(SceneKind.CHOOSING_NODE)


def resolve_reward(run: RunState, hero_index: int, choice: str) -> RunState:
    """Card stage then module stage (boss rewards only), per hero in order.

    `choice` is a card or module id from the hero's offer row, or SKIP.
    """
    _require_scene(run, SceneKind.CHOOSING_REWARD)
    scene = run.scene
    if scene.card_taken[hero_index] and scene.module_taken[hero_index]:
        raise WrongHeroError(f"hero {hero_index} already resolved this scene")
    if any(not (c and m) for c, m in zip(scene.card_taken[:hero_index], scene.module_taken[:hero_index])):
        raise WrongHeroError(f"hero {hero_index} acted before an earlier hero resolved")

    run = run.clone()
    scene = run.scene
    hero = run.heroes[hero_index]
    if not scene.card_taken[hero_index]:
        if choice != SKIP:
            if choice not in scene.card_offers[hero_index]:
                raise IllegalMoveError(f"card {choice!r} is not offered")
            hero.deck.append(choice)
        scene.card_taken[hero_index] = True
    else:
        if choice != SKIP:
            if choice not in scene.module_offers[hero_index]:
                raise IllegalMoveError(f"module {choice!r} is not offered")
            hero.modules.append(choice)
        scene.module_taken[hero_index] = True

    all_done = [c and m for c, m in zip(scene.card_taken, scene.module_taken)]
    is_treasure = run.party.map.node(run.party.current_node).kind is RoomKind.TREASURE
    _maybe_back_to_map(run, all_done, RoomKind.TREASURE if is_treasure else None)
    return run


def shop_buy(run: RunState, hero_index: int, item_index: int) -> RunState:
    _require_scene(run, SceneKind.AT_SHOP)
    _check_turn(run.scene.resolved, hero_index)
    if not 0 <= item_index < len(run.scene.items):
        raise IllegalMoveError(f"no shop item {item_index}")
    item = run.scene.items[item_index]
    if item.sold:
        raise IllegalMoveError(f"shop item {item_index} already sold")
    hero = run.heroes[hero_index]
    if hero.credits < item.price:
        raise InsufficientCreditsError(
            f"item costs {item.price}, hero {hero_index} has {hero.credits}"
        )

    run = run.clone()
    hero = run.heroes[hero_index]
    item = run.scene.items[item_index]
    hero.credits -= item.price
    item.sold = True
    if item.kind == "card":
        hero.deck.append(item.item_id)
    elif item.kind == "module":
        hero.modules.append(item.item_id)
    else:
        hero.hp = min(hero.max_hp, hero.hp + run.db.shop_rules.heal_amount)
    return run


def shop_leave(run: RunState, hero_index: int) -> RunState:
    _require_scene(run, SceneKind.AT_SHOP)
    _check_turn(run.scene.resolved, hero_index)
    run = run.clone()
    run.scene.resolved[hero_index] = True
    _maybe_back_to_map(run, run.scene.resolved, RoomKind.SHOP)
    return run


def rest_choice(run: RunState, hero_index: int, choice: str) -> RunState:
    _require_scene(run, SceneKind.AT_REST)
    _check_turn(run.scene.resolved, hero_index)
    if choice not in ("Heal", "UpgradeMaxHp"):
        raise IllegalMoveError(f"unknown rest choice {choice!r}")
    run = run.clone()
    hero = run.heroes[hero_index]
    if choice == "Heal":
        hero.hp = min(hero.max_hp, hero.hp + (hero.max_hp * REST_HEAL_PERCENT) // 100)
    else:
        hero.max_hp += MAX_HP_UPGRADE
    run.scene.resolved[hero_index] = True
    _maybe_back_to_map(run, run.scene.resolved, RoomKind.REST)
    return run


def requirement_met(run: RunState, hero_index: int, choice: EventChoice) -> bool:
    requirement = choice.requirement
    if requirement is None:
        return True
    if isinstance(requirement, CreditsRequirement):
        return run.heroes[hero_index].credits >= requirement.minimum
    assert isinstance(requirement, AxisRequirement)
    # axes are combat-local; outside combat every axis reads 0
    return 0 >= requirement.minimum


def event_choice(run: RunState, hero_index: int, choice_index: int) -> RunState:
    _require_scene(run, SceneKind.AT_EVENT)
    _check_turn(run.scene.resolved, hero_index)
    event = lookup_event(run.db, run.scene.event_id)
    if not 0 <= choice_index < len(event.choices):
        raise IllegalMoveError(f"event has no choice {choice_index}")
    choice = event.choices[choice_index]
    if not requirement_met(run, hero_index, choice):
        raise RequirementError(f"choice {choice_index} requirement not met")

    run = run.clone()
    hero = run.heroes[hero_index]
    for effect in choice.outcomes:
        party = (
            run.heroes
            if effect.target is TargetKind.PARTY
            else [hero]
        )
        for target in party:
            if target.hp <= 0:
                continue
            if effect.op is EffectOp.HEAL:
                target.hp = min(target.max_hp, target.hp + effect.magnitude)
            elif effect.op is EffectOp.DAMAGE:
                target.hp = max(0, target.hp - max(0, effect.magnitude))
            elif effect.op is EffectOp.GAIN_CREDITS:
                target.credits = max(0, target.credits + effect.magnitude)
            # combat-only ops (Shield, AxisDelta, GainEnergy, Draw,
            # RemoveShield) have no meaning between rooms and are ignored
    if choice.card_grant is not None:
        hero.deck.append(choice.card_grant)
    if choice.card_remove is not None and choice.card_remove in hero.deck:
        hero.deck.remove(choice.card_remove)

    if not any(h.hp > 0 for h in run.heroes):
        run.scene = Scene(SceneKind.FINISHED, result=RunResult.LOST)
        return run

    run.scene.resolved[hero_index] = True
    _maybe_back_to_map(run, run.scene.resolved, RoomKind.EVENT)
    return run
