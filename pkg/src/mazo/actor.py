"""Deterministic heuristic autoplay: scoring, progression, driving, reports.

The policy is a single integer score per legal combat action built from
five weighted terms with decade gaps, so a higher-priority predicate
always dominates any combination of lower ones: lethality, shield
coverage of the coming enemy output, useful zero-cost play, net positive
self axis setup, and raw trade value.  Progression scenes (nodes,
rewards, shops, rests, events) use fixed rubrics.  Everything is a pure
function of the run state, which keeps whole runs replayable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .combat import (
    ActionKind,
    CombatAction,
    CombatState,
    IllegalActionError,
    Outcome,
    PhaseKind,
    combat_outcome,
    legal_actions,
    scaled_damage,
    scaled_intent,
    scaled_shield,
)
from .content import (
    AXIS_MAX,
    AXIS_MIN,
    AxisId,
    CardDef,
    ContentDb,
    EffectOp,
    IntentKind,
    TargetKind,
    lookup_card,
    lookup_enemy,
    lookup_event,
    validate_content,
)
from .mapgen import RoomKind
from .run import (
    SKIP,
    InvalidConfigError,
    RunConfig,
    RunResult,
    RunState,
    Scene,
    SceneKind,
    WrongSceneError,
    advance_enemy_phase,
    available_moves,
    combat_action,
    enter_node,
    event_choice,
    requirement_met,
    resolve_combat_end,
    resolve_reward,
    rest_choice,
    shop_buy,
    shop_leave,
    start_run,
)


@dataclass(frozen=True)
class PolicyWeights:
    """Strict priority ladder: each weight dwarfs everything below it."""

    w_lethal: int = 10**6
    w_survive: int = 10**4
    w_zero_cost: int = 10**3
    w_setup: int = 10**2
    w_trade: int = 1


DEFAULT_WEIGHTS = PolicyWeights()


@dataclass(frozen=True)
class StepLimits:
    combat_step_limit: int = 500
    run_step_limit: int = 10_000


DEFAULT_LIMITS = StepLimits()


class RunOutcome(Enum):
    WIN = "Win"
    LOSS = "Loss"
    ABORT = "Abort"


class AbortReason(Enum):
    MISSING_PROGRESSION = "MissingProgression"
    INVALID_SETUP = "InvalidSetup"
    STEP_LIMIT = "StepLimit"


class NoProgressionError(Exception):
    """A decision scene offered no legal decision."""


@dataclass(frozen=True)
class RunRecord:
    seed: int
    outcome: RunOutcome
    abort_reason: Optional[AbortReason]
    combats: int
    elites: int
    bosses: int
    final_hp: int
    surviving_heroes: int
    steps: int


@dataclass(frozen=True)
class Report:
    """Aggregate over records: count averages over all runs, hp averages
    over wins only (absent when there are no wins)."""

    runs: int
    wins: int
    losses: int
    aborts: int
    win_rate: Fraction
    avg_combats: Fraction
    avg_elites: Fraction
    avg_bosses: Fraction
    avg_victory_hp: Optional[Fraction]
    avg_surviving_heroes: Optional[Fraction]


# ---------------------------------------------------------------------------
# Combat action scoring
# ---------------------------------------------------------------------------


def _clamped(value: int) -> int:
    return max(AXIS_MIN, min(AXIS_MAX, value))


class _ActionSim:
    """Cheap arithmetic preview of one card play.

    Mirrors the engine's effect order and scaling on plain integer arrays
    instead of cloning the combat state, tracking exactly the quantities
    the score terms need.
    """

    def __init__(self, state: CombatState, hero_index: int, target: Optional[int]):
        self.state = state
        self.hero_index = hero_index
        self.target = target
        self.enemy_hp = [e.combatant.hp for e in state.enemies]
        self.enemy_shield = [e.combatant.shield for e in state.enemies]
        self.enemy_momentum = [e.combatant.axes.momentum for e in state.enemies]
        self.enemy_rhythm = [e.combatant.axes.rhythm for e in state.enemies]
        self.hero_hp = [h.combatant.hp for h in state.heroes]
        self.hero_shield = [h.combatant.shield for h in state.heroes]
        self.hero_shield_start = list(self.hero_shield)
        me = state.heroes[hero_index].combatant.axes
        self.focus = me.focus
        self.rhythm = me.rhythm
        self.momentum = me.momentum
        self.dealt = 0
        self.shield_gained = 0
        self.heal_done = 0
        self.energy_gain = 0
        self.draw_mag = 0
        self.credits = 0
        self.setup_delta = 0
        self.enemy_axis_drop = 0

    def _enemy_targets(self, kind: TargetKind) -> list[int]:
        if kind is TargetKind.ALL_ENEMIES:
            return [i for i, hp in enumerate(self.enemy_hp) if hp > 0]
        # SingleEnemy fizzles when the chosen enemy is already down
        if self.target is not None and self.enemy_hp[self.target] > 0:
            return [self.target]
        return []

    def _hero_targets(self, kind: TargetKind) -> list[int]:
        if kind is TargetKind.PARTY:
            return [i for i, hp in enumerate(self.hero_hp) if hp > 0]
        return [self.hero_index]

    def apply(self, card: CardDef) -> None:
        for effect in card.effects:
            if all(hp == 0 for hp in self.enemy_hp):
                break  # the engine stops resolving once the fight ends
            op = effect.op
            if op is EffectOp.DAMAGE:
                if effect.target in (TargetKind.SINGLE_ENEMY, TargetKind.ALL_ENEMIES):
                    for i in self._enemy_targets(effect.target):
                        amount = scaled_damage(effect.magnitude, self.focus)
                        absorbed = min(self.enemy_shield[i], amount)
                        self.enemy_shield[i] -= absorbed
                        to_hp = min(self.enemy_hp[i], amount - absorbed)
                        self.enemy_hp[i] -= to_hp
                        self.dealt += absorbed + to_hp
                else:
                    for i in self._hero_targets(effect.target):
                        amount = max(0, effect.magnitude)
                        absorbed = min(self.hero_shield[i], amount)
                        self.hero_shield[i] -= absorbed
                        self.hero_hp[i] = max(0, self.hero_hp[i] - (amount - absorbed))
            elif op is EffectOp.SHIELD:
                if effect.target in (TargetKind.SINGLE_ENEMY, TargetKind.ALL_ENEMIES):
                    for i in self._enemy_targets(effect.target):
                        self.enemy_shield[i] += scaled_shield(effect.magnitude, self.enemy_rhythm[i])
                else:
                    for i in self._hero_targets(effect.target):
                        rhythm = self.rhythm if i == self.hero_index else self.state.heroes[i].combatant.axes.rhythm
                        amount = scaled_shield(effect.magnitude, rhythm)
                        self.hero_shield[i] += amount
                        self.shield_gained += amount
            elif op is EffectOp.AXIS_DELTA:
                assert effect.axis is not None
                if effect.target in (TargetKind.SINGLE_ENEMY, TargetKind.ALL_ENEMIES):
                    for i in self._enemy_targets(effect.target):
                        if effect.axis is AxisId.MOMENTUM:
                            before = self.enemy_momentum[i]
                            self.enemy_momentum[i] = _clamped(before + effect.magnitude)
                            applied = self.enemy_momentum[i] - before
                        elif effect.axis is AxisId.RHYTHM:
                            before = self.enemy_rhythm[i]
                            self.enemy_rhythm[i] = _clamped(before + effect.magnitude)
                            applied = self.enemy_rhythm[i] - before
                        else:
                            focus = self.state.enemies[i].combatant.axes.focus
                            applied = _clamped(focus + effect.magnitude) - focus
                        if applied < 0:
                            self.enemy_axis_drop -= applied
                else:
                    for i in self._hero_targets(effect.target):
                        if i != self.hero_index:
                            continue  # other heroes' axes do not feed self terms
                        if effect.axis is AxisId.FOCUS:
                            before, self.focus = self.focus, _clamped(self.focus + effect.magnitude)
                            self.setup_delta += self.focus - before
                        elif effect.axis is AxisId.RHYTHM:
                            before, self.rhythm = self.rhythm, _clamped(self.rhythm + effect.magnitude)
                            self.setup_delta += self.rhythm - before
                        else:
                            before, self.momentum = self.momentum, _clamped(self.momentum + effect.magnitude)
                            self.setup_delta += self.momentum - before
            elif op is EffectOp.GAIN_ENERGY:
                self.energy_gain += effect.magnitude
            elif op is EffectOp.DRAW:
                self.draw_mag += effect.magnitude
            elif op is EffectOp.HEAL:
                for i in self._hero_targets(effect.target):
                    max_hp = self.state.heroes[i].combatant.max_hp
                    actual = min(max_hp - self.hero_hp[i], max(0, effect.magnitude))
                    self.hero_hp[i] += actual
                    self.heal_done += actual
            elif op is EffectOp.GAIN_CREDITS:
                self.credits += effect.magnitude
            elif op is EffectOp.REMOVE_SHIELD:
                strip = max(0, effect.magnitude)
                if effect.target in (TargetKind.SINGLE_ENEMY, TargetKind.ALL_ENEMIES):
                    for i in self._enemy_targets(effect.target):
                        removed = min(self.enemy_shield[i], strip)
                        self.enemy_shield[i] -= removed
                        self.dealt += removed
                else:
                    for i in self._hero_targets(effect.target):
                        self.hero_shield[i] = max(0, self.hero_shield[i] - strip)

    def incoming_estimate(self) -> list[int]:
        """Per-hero damage the surviving enemies' current intents would deal,
        with targeting frozen at the post-action lowest-hp living hero."""
        incoming = [0] * len(self.hero_hp)
        victim = None
        for i, hp in enumerate(self.hero_hp):
            if hp > 0 and (victim is None or hp < self.hero_hp[victim]):
                victim = i
        if victim is None:
            return incoming
        for i, enemy in enumerate(self.state.enemies):
            if self.enemy_hp[i] <= 0:
                continue
            edef = lookup_enemy(self.state.db, enemy.def_id)
            intent = edef.intent_cycle[enemy.cycle_pos]
            if intent.kind in (IntentKind.ATTACK, IntentKind.MULTI):
                hits = intent.hits if intent.kind is IntentKind.MULTI else 1
                incoming[victim] += hits * scaled_intent(intent.magnitude, self.enemy_momentum[i])
        return incoming

    def any_positive(self) -> bool:
        return (
            self.dealt > 0
            or self.shield_gained > 0
            or self.heal_done > 0
            or self.energy_gain > 0
            or self.draw_mag > 0
            or self.credits > 0
            or self.setup_delta > 0
            or self.enemy_axis_drop > 0
        )


def _score_play(
    state: CombatState, hero_index: int, action: CombatAction, weights: PolicyWeights
) -> int:
    card = lookup_card(state.db, state.heroes[hero_index].hand[action.hand_index])
    sim = _ActionSim(state, hero_index, action.target)
    sim.apply(card)

    score = 0
    if any(e.combatant.alive for e in state.enemies) and all(hp == 0 for hp in sim.enemy_hp):
        score += weights.w_lethal

    incoming = sim.incoming_estimate()
    for i in range(len(sim.hero_hp)):
        inc = incoming[i]
        if inc <= 0:
            continue
        covered_after = min(sim.hero_shield[i], inc)
        covered_before = min(sim.hero_shield_start[i], inc)
        marginal = max(0, covered_after - covered_before)
        score += weights.w_survive * marginal // inc

    if card.cost == 0 and sim.any_positive():
        score += weights.w_zero_cost
    if sim.setup_delta > 0:
        score += weights.w_setup
    score += weights.w_trade * (sim.dealt + sim.shield_gained - 2 * card.cost)
    return score


def score_action(
    state: CombatState,
    hero_index: int,
    action: CombatAction,
    weights: PolicyWeights = DEFAULT_WEIGHTS,
) -> int:
    """Score one legal action; EndTurn always scores 0."""
    if action not in legal_actions(state, hero_index):
        raise IllegalActionError(f"cannot score illegal action {action}")
    if action.kind is ActionKind.END_TURN:
        return 0
    return _score_play(state, hero_index, action, weights)


def choose_combat_action(
    state: CombatState, hero_index: int, weights: PolicyWeights = DEFAULT_WEIGHTS
) -> CombatAction:
    """Highest-scoring legal action; EndTurn when nothing scores above 0.

    legal_actions lists plays by ascending hand index then target index,
    so taking the first strict maximum realizes the tie-break order.
    """
    best = CombatAction.end_turn()
    best_score = 0
    for action in legal_actions(state, hero_index):
        if action.kind is ActionKind.END_TURN:
            continue
        score = _score_play(state, hero_index, action, weights)
        if score > best_score:
            best = action
            best_score = score
    return best


# ---------------------------------------------------------------------------
# Progression decisions
# ---------------------------------------------------------------------------


class ProgressionKind(Enum):
    ENTER_NODE = "EnterNode"
    TAKE_REWARD = "TakeReward"
    SHOP_BUY = "ShopBuy"
    SHOP_LEAVE = "ShopLeave"
    REST = "Rest"
    EVENT = "Event"


@dataclass(frozen=True)
class ProgressionDecision:
    kind: ProgressionKind
    hero_index: int = 0
    node_id: str = ""
    choice: str = ""
    item_index: int = -1
    choice_index: int = -1


def _card_trade_value(card: CardDef) -> int:
    """Out-of-combat card rubric: damage plus shield minus twice the cost."""
    value = 0
    for effect in card.effects:
        if effect.op is EffectOp.DAMAGE and effect.target in (
            TargetKind.SINGLE_ENEMY,
            TargetKind.ALL_ENEMIES,
        ):
            value += effect.magnitude
        elif effect.op is EffectOp.SHIELD and effect.target not in (
            TargetKind.SINGLE_ENEMY,
            TargetKind.ALL_ENEMIES,
        ):
            value += effect.magnitude
    return value - 2 * card.cost


def _event_net_value(choice_outcomes) -> int:
    net = 0
    for effect in choice_outcomes:
        if effect.op is EffectOp.HEAL:
            net += effect.magnitude
        elif effect.op is EffectOp.GAIN_CREDITS:
            net += effect.magnitude
        elif effect.op is EffectOp.DAMAGE:
            net -= effect.magnitude
    return net


def _next_unresolved(flags: Sequence[bool]) -> int:
    for i, done in enumerate(flags):
        if not done:
            return i
    raise NoProgressionError("every hero already resolved this scene")


def _choose_node(run: RunState) -> ProgressionDecision:
    moves = available_moves(run)
    if not moves:
        raise NoProgressionError("no reachable nodes")
    living = [h for h in run.heroes if h.hp > 0]
    if living and any(2 * h.hp < h.max_hp for h in living):
        preferred = RoomKind.REST
    elif living and all(5 * h.hp > 4 * h.max_hp for h in living):
        preferred = RoomKind.ELITE
    else:
        preferred = RoomKind.COMBAT
    of_kind = sorted(m for m in moves if run.party.map.node(m).kind is preferred)
    picked = of_kind[0] if of_kind else sorted(moves)[0]
    return ProgressionDecision(ProgressionKind.ENTER_NODE, node_id=picked)


def _choose_reward(run: RunState) -> ProgressionDecision:
    scene = run.scene
    hero = _next_unresolved(
        [c and m for c, m in zip(scene.card_taken, scene.module_taken)]
    )
    if not scene.card_taken[hero]:
        best = SKIP
        best_value = 0
        for card_id in scene.card_offers[hero]:
            value = _card_trade_value(lookup_card(run.db, card_id))
            if value > best_value:
                best, best_value = card_id, value
        return ProgressionDecision(ProgressionKind.TAKE_REWARD, hero_index=hero, choice=best)
    offers = scene.module_offers[hero]
    choice = offers[0] if offers else SKIP
    return ProgressionDecision(ProgressionKind.TAKE_REWARD, hero_index=hero, choice=choice)


def _choose_shop(run: RunState) -> ProgressionDecision:
    scene = run.scene
    hero_index = _next_unresolved(scene.resolved)
    hero = run.heroes[hero_index]

    def cheapest(kind: str) -> Optional[int]:
        best: Optional[int] = None
        for i, item in enumerate(scene.items):
            if item.kind != kind or item.sold or item.price > hero.credits:
                continue
            if best is None or item.price < scene.items[best].price:
                best = i
        return best

    if 2 * hero.hp < hero.max_hp:
        heal = cheapest("heal")
        if heal is not None:
            return ProgressionDecision(
                ProgressionKind.SHOP_BUY, hero_index=hero_index, item_index=heal
            )
    module = cheapest("module")
    if module is not None:
        return ProgressionDecision(
            ProgressionKind.SHOP_BUY, hero_index=hero_index, item_index=module
        )
    return ProgressionDecision(ProgressionKind.SHOP_LEAVE, hero_index=hero_index)


def _choose_rest(run: RunState) -> ProgressionDecision:
    hero_index = _next_unresolved(run.scene.resolved)
    hero = run.heroes[hero_index]
    choice = "Heal" if 10 * hero.hp < 7 * hero.max_hp else "UpgradeMaxHp"
    return ProgressionDecision(ProgressionKind.REST, hero_index=hero_index, choice=choice)


def _choose_event(run: RunState) -> ProgressionDecision:
    hero_index = _next_unresolved(run.scene.resolved)
    event = lookup_event(run.db, run.scene.event_id)
    for i, choice in enumerate(event.choices):
        if requirement_met(run, hero_index, choice) and _event_net_value(choice.outcomes) >= 0:
            return ProgressionDecision(ProgressionKind.EVENT, hero_index=hero_index, choice_index=i)
    for i, choice in enumerate(event.choices):
        if choice.requirement is None:
            return ProgressionDecision(ProgressionKind.EVENT, hero_index=hero_index, choice_index=i)
    raise NoProgressionError(f"event {run.scene.event_id} has no usable choice")


def choose_progression(run: RunState) -> ProgressionDecision:
    """Deterministic decision for the current non-combat scene."""
    kind = run.scene.kind
    if kind is SceneKind.CHOOSING_NODE:
        return _choose_node(run)
    if kind is SceneKind.CHOOSING_REWARD:
        return _choose_reward(run)
    if kind is SceneKind.AT_SHOP:
        return _choose_shop(run)
    if kind is SceneKind.AT_REST:
        return _choose_rest(run)
    if kind is SceneKind.AT_EVENT:
        return _choose_event(run)
    raise WrongSceneError(f"{kind.value} is not a progression decision scene")


def apply_progression(run: RunState, decision: ProgressionDecision) -> RunState:
    if decision.kind is ProgressionKind.ENTER_NODE:
        return enter_node(run, decision.node_id)
    if decision.kind is ProgressionKind.TAKE_REWARD:
        return resolve_reward(run, decision.hero_index, decision.choice)
    if decision.kind is ProgressionKind.SHOP_BUY:
        return shop_buy(run, decision.hero_index, decision.item_index)
    if decision.kind is ProgressionKind.SHOP_LEAVE:
        return shop_leave(run, decision.hero_index)
    if decision.kind is ProgressionKind.REST:
        return rest_choice(run, decision.hero_index, decision.choice)
    return event_choice(run, decision.hero_index, decision.choice_index)


# ---------------------------------------------------------------------------
# Run driver
# ---------------------------------------------------------------------------


def _record(run: RunState, seed: int, outcome: RunOutcome, reason: Optional[AbortReason], steps: int) -> RunRecord:
    counters = run.party.room_counters
    return RunRecord(
        seed=seed,
        outcome=outcome,
        abort_reason=reason,
        combats=counters[RoomKind.COMBAT],
        elites=counters[RoomKind.ELITE],
        bosses=counters[RoomKind.BOSS],
        final_hp=sum(h.hp for h in run.heroes),
        surviving_heroes=sum(1 for h in run.heroes if h.hp > 0),
        steps=steps,
    )


def play_run_traced(
    seed: int,
    config: RunConfig,
    db: ContentDb,
    weights: PolicyWeights = DEFAULT_WEIGHTS,
    limits: StepLimits = DEFAULT_LIMITS,
) -> tuple[RunRecord, Optional[RunState]]:
    """Drive one full run, returning the record plus the final state (None
    when setup never produced a run); every failure mode is an Abort
    record, not an exception."""
    empty = RunRecord(seed, RunOutcome.ABORT, AbortReason.INVALID_SETUP, 0, 0, 0, 0, 0, 0)
    if validate_content(db):
        return empty, None
    try:
        run = start_run(seed, config, db)
    except InvalidConfigError:
        return empty, None

    steps = 0
    combat_steps = 0
    while not run.finished:
        if steps >= limits.run_step_limit:
            return _record(run, seed, RunOutcome.ABORT, AbortReason.STEP_LIMIT, steps), run
        scene = run.scene
        if scene.kind is SceneKind.IN_COMBAT:
            combat = scene.combat
            if combat_outcome(combat) is not Outcome.ONGOING:
                run = resolve_combat_end(run)
                combat_steps = 0
            else:
                if combat_steps >= limits.combat_step_limit:
                    return _record(run, seed, RunOutcome.ABORT, AbortReason.STEP_LIMIT, steps), run
                if combat.phase.kind is PhaseKind.ENEMY_TURN:
                    run = advance_enemy_phase(run)
                else:
                    hero = combat.phase.hero_index
                    action = choose_combat_action(combat, hero, weights)
                    run = combat_action(run, hero, action)
                combat_steps += 1
        else:
            try:
                decision = choose_progression(run)
            except NoProgressionError:
                record = _record(run, seed, RunOutcome.ABORT, AbortReason.MISSING_PROGRESSION, steps)
                return record, run
            run = apply_progression(run, decision)
        steps += 1

    outcome = RunOutcome.WIN if run.scene.result is RunResult.WON else RunOutcome.LOSS
    return _record(run, seed, outcome, None, steps), run


def play_run(
    seed: int,
    config: RunConfig,
    db: ContentDb,
    weights: PolicyWeights = DEFAULT_WEIGHTS,
    limits: StepLimits = DEFAULT_LIMITS,
) -> RunRecord:
    """Drive one full run; see play_run_traced for the state-returning
    variant."""
    return play_run_traced(seed, config, db, weights, limits)[0]


def aggregate(records: Sequence[RunRecord]) -> Report:
    """Fold records into a report; empty input is an error."""
    if not records:
        raise ValueError("cannot aggregate zero records")
    runs = len(records)
    wins = sum(1 for r in records if r.outcome is RunOutcome.WIN)
    losses = sum(1 for r in records if r.outcome is RunOutcome.LOSS)
    aborts = sum(1 for r in records if r.outcome is RunOutcome.ABORT)
    win_records = [r for r in records if r.outcome is RunOutcome.WIN]
    return Report(
        runs=runs,
        wins=wins,
        losses=losses,
        aborts=aborts,
        win_rate=Fraction(wins, runs),
        avg_combats=Fraction(sum(r.combats for r in records), runs),
        avg_elites=Fraction(sum(r.elites for r in records), runs),
        avg_bosses=Fraction(sum(r.bosses for r in records), runs),
        avg_victory_hp=(
            Fraction(sum(r.final_hp for r in win_records), wins) if wins else None
        ),
        avg_surviving_heroes=(
            Fraction(sum(r.surviving_heroes for r in win_records), wins) if wins else None
        ),
    )
