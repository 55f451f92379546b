"""Turn-based combat: card play, the three signed axes, shields, intents.

All transitions are pure functions old state -> new state; callers never
see partial mutation.  The only randomness is the shuffle stream (deck
shuffles and reshuffles) and the ai stream (reserved for content that
needs it; enemy targeting is deliberately RNG-free).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .content import (
    AxisId,
    AxisState,
    ContentDb,
    EffectOp,
    EffectSpec,
    IntentDef,
    IntentKind,
    ModuleHook,
    TargetKind,
    lookup_card,
    lookup_enemy,
    lookup_module,
)
from .rng import RngStream

HAND_SIZE = 5
BASE_ENERGY = 3


class CombatError(Exception):
    """Base class for combat API misuse."""


class IllegalActionError(CombatError):
    """The caller submitted an action outside legal_actions."""


class WrongPhaseError(CombatError):
    """An operation was invoked in a phase that does not accept it."""


class Outcome(Enum):
    ONGOING = "Ongoing"
    VICTORY = "Victory"
    DEFEAT = "Defeat"


class PhaseKind(Enum):
    HERO_TURN = "HeroTurn"
    ENEMY_TURN = "EnemyTurn"
    FINISHED = "Finished"


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    hero_index: int = 0
    outcome: Outcome = Outcome.ONGOING

    @staticmethod
    def hero_turn(hero_index: int) -> Phase:
        return Phase(PhaseKind.HERO_TURN, hero_index=hero_index)

    @staticmethod
    def enemy_turn() -> Phase:
        return Phase(PhaseKind.ENEMY_TURN)

    @staticmethod
    def finished(outcome: Outcome) -> Phase:
        return Phase(PhaseKind.FINISHED, outcome=outcome)


class ActionKind(Enum):
    PLAY_CARD = "PlayCard"
    END_TURN = "EndTurn"


@dataclass(frozen=True)
class CombatAction:
    kind: ActionKind
    hand_index: int = -1
    target: Optional[int] = None

    @staticmethod
    def play_card(hand_index: int, target: Optional[int] = None) -> CombatAction:
        return CombatAction(ActionKind.PLAY_CARD, hand_index=hand_index, target=target)

    @staticmethod
    def end_turn() -> CombatAction:
        return CombatAction(ActionKind.END_TURN)


@dataclass
class Combatant:
    hp: int
    max_hp: int
    shield: int = 0
    axes: AxisState = field(default_factory=AxisState)

    @property
    def alive(self) -> bool:
        return self.hp > 0

    def clone(self) -> Combatant:
        return Combatant(self.hp, self.max_hp, self.shield, self.axes.clone())


@dataclass
class EnemyInstance:
    def_id: str
    combatant: Combatant
    cycle_pos: int = 0

    def clone(self) -> EnemyInstance:
        return EnemyInstance(self.def_id, self.combatant.clone(), self.cycle_pos)


@dataclass
class HeroCombat:
    hero_index: int
    combatant: Combatant
    hand: list[str]
    draw_pile: list[str]
    discard_pile: list[str]
    energy: int
    modules: list[str]
    credits_gained: int = 0

    def clone(self) -> HeroCombat:
        return HeroCombat(
            self.hero_index,
            self.combatant.clone(),
            list(self.hand),
            list(self.draw_pile),
            list(self.discard_pile),
            self.energy,
            list(self.modules),
            self.credits_gained,
        )


@dataclass(frozen=True)
class HeroSpec:
    """What a hero brings into a combat from the surrounding run."""

    hp: int
    max_hp: int
    deck: tuple[str, ...]
    modules: tuple[str, ...] = ()
    start_axes: Optional[AxisState] = None


@dataclass
class CombatState:
    heroes: list[HeroCombat]
    enemies: list[EnemyInstance]
    phase: Phase
    turn_number: int
    shuffle_stream: RngStream
    ai_stream: RngStream
    log: list[dict]
    # Content is shared, immutable, and reattached on load; it is not part
    # of state identity.
    db: ContentDb = field(compare=False, repr=False)

    def clone(self) -> CombatState:
        return CombatState(
            heroes=[h.clone() for h in self.heroes],
            enemies=[e.clone() for e in self.enemies],
            phase=self.phase,
            turn_number=self.turn_number,
            shuffle_stream=self.shuffle_stream.clone(),
            ai_stream=self.ai_stream.clone(),
            log=list(self.log),
            db=self.db,
        )


# ---------------------------------------------------------------------------
# Axis scaling
# ---------------------------------------------------------------------------


def scaled_damage(base: int, attacker_focus: int) -> int:
    return max(0, base + attacker_focus)


def scaled_shield(base: int, rhythm: int) -> int:
    return max(0, base + rhythm)


def scaled_energy(base: int, momentum: int) -> int:
    return max(0, base + momentum)


def scaled_intent(base: int, enemy_momentum: int) -> int:
    return max(0, base + enemy_momentum)


# ---------------------------------------------------------------------------
# Setup
# ---------------------------------------------------------------------------


def begin_combat(
    party: Sequence[HeroSpec],
    encounter: Sequence[str],
    db: ContentDb,
    shuffle_stream: RngStream,
    ai_stream: RngStream,
) -> CombatState:
    if not party:
        raise CombatError("party must be nonempty")
    if not encounter:
        raise CombatError("encounter must be nonempty")
    for enemy_id in encounter:
        lookup_enemy(db, enemy_id)
    for spec in party:
        for card_id in spec.deck:
            lookup_card(db, card_id)
        for module_id in spec.modules:
            lookup_module(db, module_id)

    shuffle_stream = shuffle_stream.clone()
    ai_stream = ai_stream.clone()

    heroes = []
    for index, spec in enumerate(party):
        axes = spec.start_axes.clone() if spec.start_axes is not None else AxisState()
        draw_pile = shuffle_stream.shuffle(list(spec.deck))
        hand = draw_pile[: HAND_SIZE]
        draw_pile = draw_pile[HAND_SIZE:]
        heroes.append(
            HeroCombat(
                hero_index=index,
                combatant=Combatant(hp=spec.hp, max_hp=spec.max_hp, axes=axes),
                hand=hand,
                draw_pile=draw_pile,
                discard_pile=[],
                energy=scaled_energy(BASE_ENERGY, axes.momentum),
                modules=list(spec.modules),
            )
        )

    enemies = []
    for enemy_id in encounter:
        edef = lookup_enemy(db, enemy_id)
        enemies.append(
            EnemyInstance(
                def_id=enemy_id,
                combatant=Combatant(hp=edef.max_hp, max_hp=edef.max_hp, axes=edef.start_axes()),
            )
        )

    state = CombatState(
        heroes=heroes,
        enemies=enemies,
        phase=Phase.enemy_turn(),  # placeholder until the first hero is picked
        turn_number=1,
        shuffle_stream=shuffle_stream,
        ai_stream=ai_stream,
        log=[],
        db=db,
    )

    for hero in state.heroes:
        if hero.combatant.alive:
            _fire_hooks(state, hero, ModuleHook.COMBAT_START)
    if _refresh_outcome(state) is not Outcome.ONGOING:
        return state

    first = _first_living_hero(state)
    assert first is not None  # an all-dead party is a Defeat above
    _start_hero_turn(state, first, refill=False)
    return state


# ---------------------------------------------------------------------------
# Internal helpers (mutating; public API clones first)
# ---------------------------------------------------------------------------


def _first_living_hero(state: CombatState) -> Optional[int]:
    for hero in state.heroes:
        if hero.combatant.alive:
            return hero.hero_index
    return None


def _next_living_hero(state: CombatState, after: int) -> Optional[int]:
    for hero in state.heroes[after + 1 :]:
        if hero.combatant.alive:
            return hero.hero_index
    return None


def _living_enemies(state: CombatState) -> list[EnemyInstance]:
    return [e for e in state.enemies if e.combatant.alive]


def _living_heroes(state: CombatState) -> list[HeroCombat]:
    return [h for h in state.heroes if h.combatant.alive]


def _refresh_outcome(state: CombatState) -> Outcome:
    # Defeat wins a simultaneous wipe, so it is checked first.
    if not _living_heroes(state):
        state.phase = Phase.finished(Outcome.DEFEAT)
    elif not _living_enemies(state):
        state.phase = Phase.finished(Outcome.VICTORY)
    return combat_outcome(state)


def combat_outcome(state: CombatState) -> Outcome:
    if not any(h.combatant.alive for h in state.heroes):
        return Outcome.DEFEAT
    if not any(e.combatant.alive for e in state.enemies):
        return Outcome.VICTORY
    return Outcome.ONGOING


def _draw_cards(state: CombatState, hero: HeroCombat, count: int) -> None:
    for _ in range(count):
        if not hero.draw_pile:
            if not hero.discard_pile:
                break
            hero.draw_pile = state.shuffle_stream.shuffle(hero.discard_pile)
            hero.discard_pile = []
        hero.hand.append(hero.draw_pile.pop(0))


def _start_hero_turn(state: CombatState, hero_index: int, refill: bool) -> None:
    hero = state.heroes[hero_index]
    state.phase = Phase.hero_turn(hero_index)
    if refill:
        # Shields last through the enemy phase and drop here, at the
        # owner's next turn start.
        hero.combatant.shield = 0
        hero.energy = scaled_energy(BASE_ENERGY, hero.combatant.axes.momentum)
        _draw_cards(state, hero, HAND_SIZE - len(hero.hand))
    state.log.append({"kind": "TurnStart", "turn": state.turn_number, "hero": hero_index})
    _fire_hooks(state, hero, ModuleHook.TURN_START)


def _deal_damage(state: CombatState, source: str, target: Combatant, target_name: str, amount: int) -> int:
    """Shield absorbs first, then hp.  Returns total absorbed + dealt."""
    to_shield = min(target.shield, amount)
    target.shield -= to_shield
    to_hp = min(target.hp, amount - to_shield)
    target.hp -= to_hp
    if to_shield or to_hp:
        state.log.append(
            {
                "kind": "DamageDealt",
                "source": source,
                "target": target_name,
                "amount": amount,
                "to_shield": to_shield,
                "to_hp": to_hp,
            }
        )
    if to_hp and target.hp == 0:
        state.log.append({"kind": "Death", "who": target_name})
    return to_shield + to_hp


def _gain_shield(state: CombatState, who: Combatant, who_name: str, base: int) -> int:
    amount = scaled_shield(base, who.axes.rhythm)
    if amount:
        who.shield += amount
        state.log.append(
            {"kind": "ShieldGained", "who": who_name, "amount": amount, "value": who.shield}
        )
    return amount


def _change_axis(state: CombatState, who: Combatant, who_name: str, axis: AxisId, delta: int) -> int:
    before = who.axes.get(axis)
    after = who.axes.add(axis, delta)
    if after != before:
        state.log.append(
            {"kind": "AxisChanged", "who": who_name, "axis": axis.value, "delta": after - before, "value": after}
        )
    return after - before


def _hero_effect_targets(
    state: CombatState, hero: HeroCombat, effect: EffectSpec, chosen: Optional[int], attacker: Optional[int]
) -> list[tuple[str, Combatant]]:
    """Resolve an effect from a hero (card or module) to concrete targets.

    Single-enemy effects fizzle (empty list) when the chosen enemy has
    already died; there is no implicit retargeting.
    """
    if effect.target is TargetKind.SELF or effect.target is TargetKind.SINGLE_HERO:
        return [(f"hero:{hero.hero_index}", hero.combatant)]
    if effect.target is TargetKind.PARTY:
        return [(f"hero:{h.hero_index}", h.combatant) for h in _living_heroes(state)]
    if effect.target is TargetKind.ALL_ENEMIES:
        return [
            (f"enemy:{i}", e.combatant)
            for i, e in enumerate(state.enemies)
            if e.combatant.alive
        ]
    # SingleEnemy: a chosen card target, or the attacker for DamageTaken
    # module hooks, or the lowest living index for other hooks.
    index = chosen if chosen is not None else attacker
    if index is None:
        living = _living_enemies(state)
        if not living:
            return []
        index = state.enemies.index(living[0])
    enemy = state.enemies[index]
    if not enemy.combatant.alive:
        return []
    return [(f"enemy:{index}", enemy.combatant)]


def _apply_hero_effect(
    state: CombatState,
    hero: HeroCombat,
    effect: EffectSpec,
    chosen: Optional[int],
    attacker: Optional[int] = None,
) -> None:
    targets = _hero_effect_targets(state, hero, effect, chosen, attacker)
    op = effect.op
    if op is EffectOp.DAMAGE:
        for name, combatant in targets:
            if name.startswith("enemy:"):
                amount = scaled_damage(effect.magnitude, hero.combatant.axes.focus)
            else:
                amount = max(0, effect.magnitude)
            _deal_damage(state, f"hero:{hero.hero_index}", combatant, name, amount)
    elif op is EffectOp.SHIELD:
        for name, combatant in targets:
            _gain_shield(state, combatant, name, effect.magnitude)
    elif op is EffectOp.AXIS_DELTA:
        assert effect.axis is not None
        for name, combatant in targets:
            _change_axis(state, combatant, name, effect.axis, effect.magnitude)
    elif op is EffectOp.GAIN_ENERGY:
        hero.energy = max(0, hero.energy + effect.magnitude)
    elif op is EffectOp.DRAW:
        _draw_cards(state, hero, effect.magnitude)
    elif op is EffectOp.HEAL:
        for name, combatant in targets:
            if not name.startswith("enemy:"):
                combatant.hp = min(combatant.max_hp, combatant.hp + effect.magnitude)
    elif op is EffectOp.GAIN_CREDITS:
        hero.credits_gained += effect.magnitude
    elif op is EffectOp.REMOVE_SHIELD:
        for _, combatant in targets:
            combatant.shield = max(0, combatant.shield - max(0, effect.magnitude))


def _fire_hooks(
    state: CombatState, hero: HeroCombat, hook: ModuleHook, attacker: Optional[int] = None
) -> None:
    for module_id in hero.modules:
        module = lookup_module(state.db, module_id)
        if module.hook is hook:
            _apply_hero_effect(state, hero, module.effect, chosen=None, attacker=attacker)
            if _refresh_outcome(state) is not Outcome.ONGOING:
                return


# ---------------------------------------------------------------------------
# Hero actions
# ---------------------------------------------------------------------------


def _card_needs_target(effects: Sequence[EffectSpec]) -> bool:
    return any(e.target is TargetKind.SINGLE_ENEMY for e in effects)


def legal_actions(state: CombatState, hero_index: int) -> list[CombatAction]:
    if state.phase.kind is not PhaseKind.HERO_TURN or state.phase.hero_index != hero_index:
        raise WrongPhaseError(f"not hero {hero_index}'s turn")
    hero = state.heroes[hero_index]
    actions = []
    for hand_index, card_id in enumerate(hero.hand):
        card = lookup_card(state.db, card_id)
        if card.cost > hero.energy:
            continue
        if _card_needs_target(card.effects):
            for enemy_index, enemy in enumerate(state.enemies):
                if enemy.combatant.alive:
                    actions.append(CombatAction.play_card(hand_index, enemy_index))
        else:
            actions.append(CombatAction.play_card(hand_index))
    actions.append(CombatAction.end_turn())
    return actions


def apply_action(state: CombatState, hero_index: int, action: CombatAction) -> CombatState:
    if action not in legal_actions(state, hero_index):
        raise IllegalActionError(f"illegal action {action} for hero {hero_index}")
    state = state.clone()
    hero = state.heroes[hero_index]

    if action.kind is ActionKind.END_TURN:
        hero.discard_pile.extend(hero.hand)
        hero.hand = []
        nxt = _next_living_hero(state, hero_index)
        if nxt is None:
            state.phase = Phase.enemy_turn()
        else:
            _start_hero_turn(state, nxt, refill=state.turn_number > 1)
        return state

    card = lookup_card(state.db, hero.hand[action.hand_index])
    hero.energy -= card.cost
    card_id = hero.hand.pop(action.hand_index)
    entry: dict = {"kind": "CardPlayed", "hero": hero_index, "card": card_id}
    if action.target is not None:
        entry["target"] = action.target
    state.log.append(entry)

    for effect in card.effects:
        if combat_outcome(state) is not Outcome.ONGOING:
            break
        _apply_hero_effect(state, hero, effect, chosen=action.target)
        if _refresh_outcome(state) is not Outcome.ONGOING:
            break

    # The card reaches the discard pile even when the combat just ended,
    # preserving deck conservation for serialized final states.
    hero.discard_pile.append(card_id)

    if combat_outcome(state) is Outcome.ONGOING:
        _fire_hooks(state, hero, ModuleHook.CARD_PLAYED)
    return state


# ---------------------------------------------------------------------------
# Enemy phase
# ---------------------------------------------------------------------------


def _intent_target(state: CombatState) -> Optional[HeroCombat]:
    """Lowest current hp among living heroes; ties go to the lowest index."""
    best: Optional[HeroCombat] = None
    for hero in state.heroes:
        if not hero.combatant.alive:
            continue
        if best is None or hero.combatant.hp < best.combatant.hp:
            best = hero
    return best


def _execute_intent(state: CombatState, enemy_index: int, intent: IntentDef) -> None:
    enemy = state.enemies[enemy_index]
    name = f"enemy:{enemy_index}"
    state.log.append(
        {
            "kind": "IntentExecuted",
            "enemy": enemy_index,
            "intent": intent.kind.value,
            "magnitude": intent.magnitude,
        }
    )
    if intent.kind in (IntentKind.ATTACK, IntentKind.MULTI):
        hits = intent.hits if intent.kind is IntentKind.MULTI else 1
        for _ in range(hits):
            target = _intent_target(state)
            if target is None:
                return
            amount = scaled_intent(intent.magnitude, enemy.combatant.axes.momentum)
            dealt = _deal_damage(state, name, target.combatant, f"hero:{target.hero_index}", amount)
            if _refresh_outcome(state) is not Outcome.ONGOING:
                return
            if dealt > 0:
                _fire_hooks(state, target, ModuleHook.DAMAGE_TAKEN, attacker=enemy_index)
                if combat_outcome(state) is not Outcome.ONGOING:
                    return
            if not enemy.combatant.alive:
                return  # retaliation killed the attacker mid-intent
    elif intent.kind is IntentKind.SHIELD:
        _gain_shield(state, enemy.combatant, name, intent.magnitude)
    else:
        assert intent.axis is not None
        _change_axis(state, enemy.combatant, name, intent.axis, intent.magnitude)


def resolve_enemy_phase(state: CombatState) -> CombatState:
    if state.phase.kind is not PhaseKind.ENEMY_TURN:
        raise WrongPhaseError("not the enemy phase")
    state = state.clone()

    for enemy_index, enemy in enumerate(state.enemies):
        if not enemy.combatant.alive:
            continue
        # Enemy shields last through the hero turns and drop at the
        # owner's turn start, mirroring the hero rule.
        enemy.combatant.shield = 0
        edef = lookup_enemy(state.db, enemy.def_id)
        _execute_intent(state, enemy_index, edef.intent_cycle[enemy.cycle_pos])
        enemy.cycle_pos = (enemy.cycle_pos + 1) % len(edef.intent_cycle)
        if combat_outcome(state) is not Outcome.ONGOING:
            return state

    state.turn_number += 1
    first = _first_living_hero(state)
    assert first is not None  # a defeat would have returned above
    _start_hero_turn(state, first, refill=True)
    return state
