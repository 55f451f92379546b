"""Data-driven content tables.

Cards, enemies, intents, modules, events, reward tables, shop rules,
encounter groups, and locale strings all live in a content pack: canonical
key-sorted JSON with integer-only numerics, so packs hash identically on
every platform.  The rules core executes only what these tables define;
nothing about a specific card or enemy is hard-coded in the engine.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Union

from .canonical import canonical_bytes, parse_canonical

PACK_VERSION = 1

EFFECT_MAGNITUDE_LIMIT = 999


class ContentError(Exception):
    """Base class for content pack problems."""


class PackFormatError(ContentError):
    """The pack text is malformed: bad JSON, floats, or wrong structure."""


class PackValidationError(ContentError):
    """The pack parsed but violates content invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class UnknownIdError(ContentError, KeyError):
    """A lookup referenced an id the pack does not define."""

    def __init__(self, kind: str, entity_id: str):
        super().__init__(f"unknown {kind} id: {entity_id!r}")
        self.kind = kind
        self.entity_id = entity_id


class AxisId(Enum):
    FOCUS = "Focus"
    RHYTHM = "Rhythm"
    MOMENTUM = "Momentum"


class EffectOp(Enum):
    DAMAGE = "Damage"
    SHIELD = "Shield"
    AXIS_DELTA = "AxisDelta"
    GAIN_ENERGY = "GainEnergy"
    DRAW = "Draw"
    HEAL = "Heal"
    GAIN_CREDITS = "GainCredits"
    REMOVE_SHIELD = "RemoveShield"


class TargetKind(Enum):
    SELF = "Self"
    SINGLE_ENEMY = "SingleEnemy"
    ALL_ENEMIES = "AllEnemies"
    SINGLE_HERO = "SingleHero"
    PARTY = "Party"


class CardKind(Enum):
    ATTACK = "Attack"
    SKILL = "Skill"
    POWER = "Power"


class IntentKind(Enum):
    ATTACK = "Attack"
    SHIELD = "Shield"
    AXIS_DELTA = "AxisDelta"
    MULTI = "Multi"


class EnemyTier(Enum):
    NORMAL = "Normal"
    ELITE = "Elite"
    BOSS = "Boss"


class ModuleHook(Enum):
    COMBAT_START = "CombatStart"
    TURN_START = "TurnStart"
    CARD_PLAYED = "CardPlayed"
    DAMAGE_TAKEN = "DamageTaken"


AXIS_MIN = -9
AXIS_MAX = 9


@dataclass
class AxisState:
    """The three signed combat axes, each clamped to [-9, +9]."""

    focus: int = 0
    rhythm: int = 0
    momentum: int = 0

    def clone(self) -> AxisState:
        return AxisState(self.focus, self.rhythm, self.momentum)

    def get(self, axis: AxisId) -> int:
        return getattr(self, axis.value.lower())

    def add(self, axis: AxisId, delta: int) -> int:
        """Apply a clamped delta; returns the new value."""
        name = axis.value.lower()
        value = max(AXIS_MIN, min(AXIS_MAX, getattr(self, name) + delta))
        setattr(self, name, value)
        return value


@dataclass(frozen=True)
class EffectSpec:
    op: EffectOp
    magnitude: int
    target: TargetKind
    axis: AxisId | None = None


@dataclass(frozen=True)
class CardDef:
    id: str
    name_key: str
    cost: int
    kind: CardKind
    effects: tuple[EffectSpec, ...]


@dataclass(frozen=True)
class IntentDef:
    kind: IntentKind
    magnitude: int
    axis: AxisId | None = None
    hits: int = 1


@dataclass(frozen=True)
class EnemyDef:
    id: str
    name_key: str
    max_hp: int
    tier: EnemyTier
    intent_cycle: tuple[IntentDef, ...]
    start_focus: int = 0
    start_rhythm: int = 0
    start_momentum: int = 0

    def start_axes(self) -> AxisState:
        return AxisState(self.start_focus, self.start_rhythm, self.start_momentum)


@dataclass(frozen=True)
class ModuleDef:
    id: str
    name_key: str
    hook: ModuleHook
    effect: EffectSpec


@dataclass(frozen=True)
class AxisRequirement:
    axis: AxisId
    minimum: int


@dataclass(frozen=True)
class CreditsRequirement:
    minimum: int


Requirement = Union[AxisRequirement, CreditsRequirement]


@dataclass(frozen=True)
class EventChoice:
    label_key: str
    outcomes: tuple[EffectSpec, ...]
    requirement: Requirement | None = None
    card_grant: str | None = None
    card_remove: str | None = None


@dataclass(frozen=True)
class EventDef:
    id: str
    prompt_key: str
    choices: tuple[EventChoice, ...]


@dataclass(frozen=True)
class RewardTable:
    """Weighted card offers plus the credit range granted for the tier."""

    cards: tuple[tuple[str, int], ...]
    credits_min: int
    credits_max: int


@dataclass(frozen=True)
class PriceRange:
    low: int
    high: int


@dataclass(frozen=True)
class ShopRules:
    card_price: PriceRange
    module_price: PriceRange
    heal_price: PriceRange
    heal_amount: int


@dataclass(frozen=True)
class EncounterGroup:
    enemies: tuple[str, ...]
    weight: int


@dataclass(frozen=True)
class SectorEncounters:
    normal: tuple[EncounterGroup, ...]
    elite: tuple[EncounterGroup, ...]
    boss: tuple[EncounterGroup, ...]


@dataclass
class ContentDb:
    """Validated, immutable-after-load view of one content pack."""

    version: int
    cards: dict[str, CardDef]
    enemies: dict[str, EnemyDef]
    modules: dict[str, ModuleDef]
    events: dict[str, EventDef]
    reward_tables: dict[str, RewardTable]
    shop_rules: ShopRules
    encounters: tuple[SectorEncounters, ...]
    locales: dict[str, dict[str, str]]
    starter_deck: tuple[str, ...]

    def sector_encounters(self, sector: int) -> SectorEncounters:
        """Encounter tables for a sector, clamped to the last authored one."""
        return self.encounters[min(sector, len(self.encounters) - 1)]

    def text(self, locale: str, key: str) -> str:
        return self.locales[locale][key]


REQUIRED_LOCALES = ("en", "es")
REWARD_TIERS = ("Normal", "Elite", "Boss")


def lookup_card(db: ContentDb, card_id: str) -> CardDef:
    try:
        return db.cards[card_id]
    except KeyError:
        raise UnknownIdError("card", card_id) from None


def lookup_enemy(db: ContentDb, enemy_id: str) -> EnemyDef:
    try:
        return db.enemies[enemy_id]
    except KeyError:
        raise UnknownIdError("enemy", enemy_id) from None


def lookup_module(db: ContentDb, module_id: str) -> ModuleDef:
    try:
        return db.modules[module_id]
    except KeyError:
        raise UnknownIdError("module", module_id) from None


def lookup_event(db: ContentDb, event_id: str) -> EventDef:
    try:
        return db.events[event_id]
    except KeyError:
        raise UnknownIdError("event", event_id) from None


# ---------------------------------------------------------------------------
# Pack parsing
# ---------------------------------------------------------------------------


def _req(obj: dict, key: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise PackFormatError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise PackFormatError(f"{where}.{key}: expected integer, got bool")
    if not isinstance(value, kind):
        raise PackFormatError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _enum(cls: type[Enum], raw: str, where: str) -> Any:
    try:
        return cls(raw)
    except ValueError:
        raise PackFormatError(f"{where}: unknown {cls.__name__} value {raw!r}") from None


def _parse_effect(raw: dict, where: str) -> EffectSpec:
    op = _enum(EffectOp, _req(raw, "op", str, where), where)
    magnitude = _req(raw, "magnitude", int, where)
    target = _enum(TargetKind, _req(raw, "target", str, where), where)
    axis = _enum(AxisId, raw["axis"], where) if raw.get("axis") is not None else None
    return EffectSpec(op=op, magnitude=magnitude, target=target, axis=axis)


def _parse_requirement(raw: dict | None, where: str) -> Requirement | None:
    if raw is None:
        return None
    kind = _req(raw, "kind", str, where)
    if kind == "axis":
        return AxisRequirement(
            axis=_enum(AxisId, _req(raw, "axis", str, where), where),
            minimum=_req(raw, "min", int, where),
        )
    if kind == "credits":
        return CreditsRequirement(minimum=_req(raw, "min", int, where))
    raise PackFormatError(f"{where}: unknown requirement kind {kind!r}")


def _parse_card(raw: dict) -> CardDef:
    cid = _req(raw, "id", str, "card")
    where = f"card {cid!r}"
    return CardDef(
        id=cid,
        name_key=_req(raw, "name_key", str, where),
        cost=_req(raw, "cost", int, where),
        kind=_enum(CardKind, _req(raw, "kind", str, where), where),
        effects=tuple(_parse_effect(e, where) for e in _req(raw, "effects", list, where)),
    )


def _parse_intent(raw: dict, where: str) -> IntentDef:
    return IntentDef(
        kind=_enum(IntentKind, _req(raw, "kind", str, where), where),
        magnitude=_req(raw, "magnitude", int, where),
        axis=_enum(AxisId, raw["axis"], where) if raw.get("axis") is not None else None,
        hits=_req(raw, "hits", int, where) if "hits" in raw else 1,
    )


def _parse_enemy(raw: dict) -> EnemyDef:
    eid = _req(raw, "id", str, "enemy")
    where = f"enemy {eid!r}"
    axes = raw.get("start_axes", {})
    return EnemyDef(
        id=eid,
        name_key=_req(raw, "name_key", str, where),
        max_hp=_req(raw, "max_hp", int, where),
        tier=_enum(EnemyTier, _req(raw, "tier", str, where), where),
        intent_cycle=tuple(_parse_intent(i, where) for i in _req(raw, "intent_cycle", list, where)),
        start_focus=axes.get("focus", 0),
        start_rhythm=axes.get("rhythm", 0),
        start_momentum=axes.get("momentum", 0),
    )


def _parse_module(raw: dict) -> ModuleDef:
    mid = _req(raw, "id", str, "module")
    where = f"module {mid!r}"
    return ModuleDef(
        id=mid,
        name_key=_req(raw, "name_key", str, where),
        hook=_enum(ModuleHook, _req(raw, "hook", str, where), where),
        effect=_parse_effect(_req(raw, "effect", dict, where), where),
    )


def _parse_event(raw: dict) -> EventDef:
    eid = _req(raw, "id", str, "event")
    where = f"event {eid!r}"
    choices = []
    for i, rc in enumerate(_req(raw, "choices", list, where)):
        cw = f"{where} choice {i}"
        choices.append(
            EventChoice(
                label_key=_req(rc, "label_key", str, cw),
                outcomes=tuple(_parse_effect(e, cw) for e in _req(rc, "outcomes", list, cw)),
                requirement=_parse_requirement(rc.get("requirement"), cw),
                card_grant=rc.get("card_grant"),
                card_remove=rc.get("card_remove"),
            )
        )
    return EventDef(id=eid, prompt_key=_req(raw, "prompt_key", str, where), choices=tuple(choices))


def _parse_reward_table(raw: dict, where: str) -> RewardTable:
    cards = tuple(
        (_req(e, "card", str, where), _req(e, "weight", int, where))
        for e in _req(raw, "cards", list, where)
    )
    return RewardTable(
        cards=cards,
        credits_min=_req(raw, "credits_min", int, where),
        credits_max=_req(raw, "credits_max", int, where),
    )


def _parse_price(raw: dict, where: str) -> PriceRange:
    return PriceRange(low=_req(raw, "low", int, where), high=_req(raw, "high", int, where))


def _parse_shop_rules(raw: dict) -> ShopRules:
    return ShopRules(
        card_price=_parse_price(_req(raw, "card_price", dict, "shop_rules"), "shop_rules.card_price"),
        module_price=_parse_price(_req(raw, "module_price", dict, "shop_rules"), "shop_rules.module_price"),
        heal_price=_parse_price(_req(raw, "heal_price", dict, "shop_rules"), "shop_rules.heal_price"),
        heal_amount=_req(raw, "heal_amount", int, "shop_rules"),
    )


def _parse_group(raw: dict, where: str) -> EncounterGroup:
    return EncounterGroup(
        enemies=tuple(_req(raw, "enemies", list, where)),
        weight=_req(raw, "weight", int, where),
    )


def _parse_sector(raw: dict, sector: int) -> SectorEncounters:
    where = f"encounters sector {sector}"
    return SectorEncounters(
        normal=tuple(_parse_group(g, where) for g in _req(raw, "normal", list, where)),
        elite=tuple(_parse_group(g, where) for g in _req(raw, "elite", list, where)),
        boss=tuple(_parse_group(g, where) for g in _req(raw, "boss", list, where)),
    )


def _index_unique(items: Iterable, kind: str, violations: list[str]) -> dict:
    out: dict[str, Any] = {}
    for item in items:
        if item.id in out:
            violations.append(f"duplicate {kind} id {item.id!r}")
        out[item.id] = item
    return out


def load_content(pack_text: bytes) -> ContentDb:
    """Parse and fully validate a content pack.

    Raises PackFormatError for structural problems and PackValidationError
    (carrying the full violation list) when invariants fail.  Loading has
    no ambient state: the same bytes always yield an equal ContentDb.
    """
    try:
        raw = parse_canonical(pack_text)
    except (UnicodeDecodeError, ValueError) as exc:
        raise PackFormatError(f"unparseable pack: {exc}") from None
    if not isinstance(raw, dict):
        raise PackFormatError("pack root must be an object")

    version = _req(raw, "version", int, "pack")
    if version != PACK_VERSION:
        raise PackFormatError(f"unsupported pack version {version}")

    violations: list[str] = []
    cards = _index_unique((_parse_card(c) for c in _req(raw, "cards", list, "pack")), "card", violations)
    enemies = _index_unique((_parse_enemy(e) for e in _req(raw, "enemies", list, "pack")), "enemy", violations)
    modules = _index_unique((_parse_module(m) for m in _req(raw, "modules", list, "pack")), "module", violations)
    events = _index_unique((_parse_event(e) for e in _req(raw, "events", list, "pack")), "event", violations)

    raw_tables = _req(raw, "reward_tables", dict, "pack")
    reward_tables = {
        tier: _parse_reward_table(_req(raw_tables, tier, dict, "reward_tables"), f"reward_tables.{tier}")
        for tier in REWARD_TIERS
    }

    db = ContentDb(
        version=version,
        cards=cards,
        enemies=enemies,
        modules=modules,
        events=events,
        reward_tables=reward_tables,
        shop_rules=_parse_shop_rules(_req(raw, "shop_rules", dict, "pack")),
        encounters=tuple(
            _parse_sector(s, i) for i, s in enumerate(_req(raw, "encounters", list, "pack"))
        ),
        locales={
            loc: dict(strings)
            for loc, strings in _req(raw, "locales", dict, "pack").items()
        },
        starter_deck=tuple(_req(raw, "starter_deck", list, "pack")),
    )
    violations.extend(validate_content(db))
    if violations:
        raise PackValidationError(violations)
    return db


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _check_effect(eff: EffectSpec, where: str, out: list[str]) -> None:
    if abs(eff.magnitude) > EFFECT_MAGNITUDE_LIMIT:
        out.append(f"{where}: magnitude {eff.magnitude} exceeds |{EFFECT_MAGNITUDE_LIMIT}|")
    if eff.op is EffectOp.AXIS_DELTA and eff.axis is None:
        out.append(f"{where}: AxisDelta effect needs an axis")
    if eff.op is not EffectOp.AXIS_DELTA and eff.axis is not None:
        out.append(f"{where}: only AxisDelta effects may carry an axis")
    if eff.op in (EffectOp.DAMAGE, EffectOp.SHIELD) and eff.magnitude < 0:
        out.append(f"{where}: {eff.op.value} magnitude must be >= 0")


def validate_content(db: ContentDb) -> list[str]:
    """Return all invariant violations; an empty list means the db is valid."""
    out: list[str] = []
    needed_keys: list[str] = []

    for card in db.cards.values():
        where = f"card {card.id!r}"
        needed_keys.append(card.name_key)
        if card.cost < 0:
            out.append(f"{where}: negative cost")
        if not card.effects:
            out.append(f"{where}: effects must be nonempty")
        if card.kind is CardKind.ATTACK and not any(
            e.op is EffectOp.DAMAGE for e in card.effects
        ):
            out.append(f"{where}: Attack cards need at least one Damage effect")
        for eff in card.effects:
            _check_effect(eff, where, out)

    for enemy in db.enemies.values():
        where = f"enemy {enemy.id!r}"
        needed_keys.append(enemy.name_key)
        if enemy.max_hp < 1:
            out.append(f"{where}: max_hp must be >= 1")
        if not enemy.intent_cycle:
            out.append(f"{where}: intent_cycle must be nonempty")
        for intent in enemy.intent_cycle:
            if intent.magnitude < 0:
                out.append(f"{where}: intent magnitude must be >= 0")
            if intent.hits < 1:
                out.append(f"{where}: intent hits must be >= 1")
            if intent.kind is IntentKind.MULTI and intent.hits < 2:
                out.append(f"{where}: Multi intents need hits >= 2")
            if intent.kind is IntentKind.AXIS_DELTA and intent.axis is None:
                out.append(f"{where}: AxisDelta intent needs an axis")

    for module in db.modules.values():
        where = f"module {module.id!r}"
        needed_keys.append(module.name_key)
        _check_effect(module.effect, where, out)

    for event in db.events.values():
        where = f"event {event.id!r}"
        needed_keys.append(event.prompt_key)
        if not event.choices:
            out.append(f"{where}: choices must be nonempty")
        if not any(c.requirement is None for c in event.choices):
            out.append(f"{where}: needs at least one requirement-free choice")
        for choice in event.choices:
            needed_keys.append(choice.label_key)
            for eff in choice.outcomes:
                _check_effect(eff, where, out)
            for ref in (choice.card_grant, choice.card_remove):
                if ref is not None and ref not in db.cards:
                    out.append(f"{where}: references unknown card {ref!r}")

    for tier, table in db.reward_tables.items():
        where = f"reward_tables.{tier}"
        if not table.cards:
            out.append(f"{where}: needs at least one card entry")
        for card_id, weight in table.cards:
            if card_id not in db.cards:
                out.append(f"{where}: references unknown card {card_id!r}")
            if weight < 1:
                out.append(f"{where}: weight for {card_id!r} must be >= 1")
        if not 0 <= table.credits_min <= table.credits_max:
            out.append(f"{where}: bad credits range")

    for name, price in (
        ("card_price", db.shop_rules.card_price),
        ("module_price", db.shop_rules.module_price),
        ("heal_price", db.shop_rules.heal_price),
    ):
        if not 0 <= price.low <= price.high:
            out.append(f"shop_rules.{name}: bad range")
    if db.shop_rules.heal_amount < 1:
        out.append("shop_rules.heal_amount must be >= 1")

    if not db.encounters:
        out.append("encounters: need at least one sector")
    for i, sector in enumerate(db.encounters):
        for cls, groups in (("normal", sector.normal), ("elite", sector.elite), ("boss", sector.boss)):
            where = f"encounters sector {i}.{cls}"
            if not groups:
                out.append(f"{where}: must be nonempty")
            for group in groups:
                if group.weight < 1:
                    out.append(f"{where}: group weight must be >= 1")
                if not group.enemies:
                    out.append(f"{where}: empty enemy group")
                for enemy_id in group.enemies:
                    if enemy_id not in db.enemies:
                        out.append(f"{where}: references unknown enemy {enemy_id!r}")

    if not db.starter_deck:
        out.append("starter_deck: must be nonempty")
    for card_id in db.starter_deck:
        if card_id not in db.cards:
            out.append(f"starter_deck: references unknown card {card_id!r}")

    for locale in REQUIRED_LOCALES:
        if locale not in db.locales:
            out.append(f"locales: missing required locale {locale!r}")
    needed = set(needed_keys)
    for locale, strings in db.locales.items():
        for key in needed_keys:
            if key not in strings:
                out.append(f"locales.{locale}: missing key {key!r}")
        # Orphan keys are violations too: a shipped locale table must map
        # exactly the keys the content needs, so stale strings cannot hide.
        for key in strings:
            if key not in needed:
                out.append(f"locales.{locale}: orphan key {key!r}")

    return out


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def _effect_dict(eff: EffectSpec) -> dict:
    out: dict[str, Any] = {"op": eff.op.value, "magnitude": eff.magnitude, "target": eff.target.value}
    if eff.axis is not None:
        out["axis"] = eff.axis.value
    return out


def _requirement_dict(req: Requirement | None) -> dict | None:
    if req is None:
        return None
    if isinstance(req, AxisRequirement):
        return {"kind": "axis", "axis": req.axis.value, "min": req.minimum}
    return {"kind": "credits", "min": req.minimum}


def content_to_pack_dict(db: ContentDb) -> dict:
    """Rebuild the pack structure, entity lists sorted by id."""

    def card_dict(c: CardDef) -> dict:
        return {
            "id": c.id,
            "name_key": c.name_key,
            "cost": c.cost,
            "kind": c.kind.value,
            "effects": [_effect_dict(e) for e in c.effects],
        }

    def intent_dict(i: IntentDef) -> dict:
        out: dict[str, Any] = {"kind": i.kind.value, "magnitude": i.magnitude, "hits": i.hits}
        if i.axis is not None:
            out["axis"] = i.axis.value
        return out

    def enemy_dict(e: EnemyDef) -> dict:
        return {
            "id": e.id,
            "name_key": e.name_key,
            "max_hp": e.max_hp,
            "tier": e.tier.value,
            "intent_cycle": [intent_dict(i) for i in e.intent_cycle],
            "start_axes": {"focus": e.start_focus, "rhythm": e.start_rhythm, "momentum": e.start_momentum},
        }

    def module_dict(m: ModuleDef) -> dict:
        return {"id": m.id, "name_key": m.name_key, "hook": m.hook.value, "effect": _effect_dict(m.effect)}

    def choice_dict(c: EventChoice) -> dict:
        out: dict[str, Any] = {"label_key": c.label_key, "outcomes": [_effect_dict(e) for e in c.outcomes]}
        if c.requirement is not None:
            out["requirement"] = _requirement_dict(c.requirement)
        if c.card_grant is not None:
            out["card_grant"] = c.card_grant
        if c.card_remove is not None:
            out["card_remove"] = c.card_remove
        return out

    def event_dict(e: EventDef) -> dict:
        return {"id": e.id, "prompt_key": e.prompt_key, "choices": [choice_dict(c) for c in e.choices]}

    def table_dict(t: RewardTable) -> dict:
        return {
            "cards": [{"card": cid, "weight": w} for cid, w in t.cards],
            "credits_min": t.credits_min,
            "credits_max": t.credits_max,
        }

    def price_dict(p: PriceRange) -> dict:
        return {"low": p.low, "high": p.high}

    def group_dict(g: EncounterGroup) -> dict:
        return {"enemies": list(g.enemies), "weight": g.weight}

    return {
        "version": db.version,
        "cards": [card_dict(db.cards[k]) for k in sorted(db.cards)],
        "enemies": [enemy_dict(db.enemies[k]) for k in sorted(db.enemies)],
        "modules": [module_dict(db.modules[k]) for k in sorted(db.modules)],
        "events": [event_dict(db.events[k]) for k in sorted(db.events)],
        "reward_tables": {tier: table_dict(db.reward_tables[tier]) for tier in REWARD_TIERS},
        "shop_rules": {
            "card_price": price_dict(db.shop_rules.card_price),
            "module_price": price_dict(db.shop_rules.module_price),
            "heal_price": price_dict(db.shop_rules.heal_price),
            "heal_amount": db.shop_rules.heal_amount,
        },
        "encounters": [
            {
                "normal": [group_dict(g) for g in s.normal],
                "elite": [group_dict(g) for g in s.elite],
                "boss": [group_dict(g) for g in s.boss],
            }
            for s in db.encounters
        ],
        "locales": {loc: dict(sorted(strings.items())) for loc, strings in db.locales.items()},
        "starter_deck": list(db.starter_deck),
    }


def serialize_content(db: ContentDb) -> bytes:
    """Canonical pack bytes; load_content(serialize_content(db)) == db."""
    return canonical_bytes(content_to_pack_dict(db))


def content_hash(pack_text: bytes) -> str:
    """Stable hex digest of canonical pack bytes, used for session checks."""
    return hashlib.sha256(pack_text).hexdigest()
