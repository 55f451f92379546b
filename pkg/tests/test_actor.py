"""Autoplay policy tests: scoring terms, tie-breaks, progression, reports."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from test_combat import DUMMY, GUARD, STRIKE, card, eff, enemy, intent, make_db, solo_combat
from test_run import tiny_db

from mazo.actor import (
    DEFAULT_LIMITS,
    DEFAULT_WEIGHTS,
    AbortReason,
    PolicyWeights,
    ProgressionKind,
    RunOutcome,
    RunRecord,
    StepLimits,
    aggregate,
    apply_progression,
    choose_combat_action,
    choose_progression,
    play_run,
    score_action,
)
from mazo.baseline import baseline_db
from mazo.combat import (
    ActionKind,
    CombatAction,
    IllegalActionError,
    WrongPhaseError,
    apply_action,
    resolve_enemy_phase,
)
from mazo.content import EffectOp, EffectSpec, EventChoice, EventDef, TargetKind
from mazo.mapgen import MapGraph, MapNode, RoomKind
from mazo.run import (
    SKIP,
    RunConfig,
    Scene,
    SceneKind,
    ShopItem,
    WrongSceneError,
    start_run,
)

W = DEFAULT_WEIGHTS


class TestWeights:
    def test_default_ladder_is_strict(self):
        w = PolicyWeights()
        assert w.w_lethal > w.w_survive > w.w_zero_cost > w.w_setup > w.w_trade > 0

    def test_decade_gaps(self):
        assert (W.w_lethal, W.w_survive, W.w_zero_cost, W.w_setup, W.w_trade) == (
            10**6,
            10**4,
            10**3,
            10**2,
            1,
        )


class TestScoreAction:
    def test_end_turn_scores_zero(self):
        db = make_db([STRIKE], [DUMMY])
        state = solo_combat(("strike",), db)
        assert score_action(state, 0, CombatAction.end_turn()) == 0

    def test_lethal_dominates(self):
        nuke = card("nuke", 1, "Attack", eff("Damage", 999, "SingleEnemy"))
        db = make_db([nuke], [DUMMY])
        state = solo_combat(("nuke",), db)
        score = score_action(state, 0, CombatAction.play_card(0, 0))
        # dealt is capped at the dummy's 30 hp
        assert score == W.w_lethal + (30 - 2)

    def test_zero_cost_setup_card(self):
        warmup = card("warmup", 0, "Power", eff("AxisDelta", 1, "Self", axis="Focus"))
        db = make_db([warmup, STRIKE], [DUMMY])
        state = solo_combat(("warmup",), db)
        score = score_action(state, 0, CombatAction.play_card(0))
        assert score == W.w_zero_cost + W.w_setup

    def test_partial_shield_coverage_is_proportional(self):
        db = make_db([GUARD], [DUMMY])  # dummy intends Attack 7
        state = solo_combat(("guard",), db)
        score = score_action(state, 0, CombatAction.play_card(0))
        # 5 of 7 incoming covered, plus the shield's trade value
        assert score == W.w_survive * 5 // 7 + (5 - 2)

    def test_full_shield_coverage(self):
        brace = card("brace", 2, "Skill", eff("Shield", 13, "Self"))
        db = make_db([brace], [DUMMY])
        state = solo_combat(("brace",), db)
        score = score_action(state, 0, CombatAction.play_card(0))
        assert score == W.w_survive + (13 - 4)

    def test_negative_trade(self):
        poke = card("poke", 2, "Attack", eff("Damage", 1, "SingleEnemy"))
        big = enemy("big", 99, [intent("Shield", 5)])
        db = make_db([poke], [big])
        state = solo_combat(("poke",), db, enemies=("big",))
        assert score_action(state, 0, CombatAction.play_card(0, 0)) == 1 - 4

    def test_shield_strip_counts_as_value(self):
        shatter = card("shatter", 1, "Attack", eff("RemoveShield", 999, "SingleEnemy"),
                       eff("Damage", 5, "SingleEnemy"))
        shelled = enemy("shelled", 30, [intent("Shield", 10), intent("Attack", 5)])
        db = make_db([shatter], [shelled])
        state = solo_combat(
            ("shatter", "shatter", "shatter", "shatter", "shatter", "shatter"),
            db,
            enemies=("shelled",),
        )
        state = apply_action(state, 0, CombatAction.end_turn())
        state = resolve_enemy_phase(state)  # enemy now carries 10 shield
        assert state.enemies[0].combatant.shield == 10
        hand_index = 0  # every card is a shatter
        score = score_action(state, 0, CombatAction.play_card(hand_index, 0))
        assert score == (10 + 5) - 2

    def test_mid_card_focus_applies_to_later_damage(self):
        combo = card("combo", 1, "Attack",
                     eff("AxisDelta", 3, "Self", axis="Focus"),
                     eff("Damage", 6, "SingleEnemy"))
        big = enemy("big", 99, [intent("Shield", 5)])
        db = make_db([combo], [big])
        state = solo_combat(("combo",), db, enemies=("big",))
        score = score_action(state, 0, CombatAction.play_card(0, 0))
        assert score == W.w_setup + (9 - 2)

    def test_illegal_action_rejected(self):
        db = make_db([STRIKE], [DUMMY])
        state = solo_combat(("strike",), db)
        with pytest.raises(IllegalActionError):
            score_action(state, 0, CombatAction.play_card(7, 0))

    def test_wrong_phase_rejected(self):
        db = make_db([STRIKE], [DUMMY])
        state = apply_action(solo_combat(("strike",), db), 0, CombatAction.end_turn())
        with pytest.raises(WrongPhaseError):
            score_action(state, 0, CombatAction.end_turn())

    def test_priority_ladder_on_constructed_hands(self):
        kill = card("kill", 1, "Attack", eff("Damage", 40, "SingleEnemy"))
        brace = card("brace", 2, "Skill", eff("Shield", 13, "Self"))
        surge = card("surge", 0, "Skill", eff("GainEnergy", 1, "Self"))
        focus_up = card("focus_up", 1, "Power", eff("AxisDelta", 2, "Self", axis="Focus"))
        db = make_db([kill, brace, surge, focus_up, STRIKE], [DUMMY])
        state = solo_combat(("kill", "brace", "surge", "focus_up", "strike"), db)
        hand = state.heroes[0].hand

        def score_of(card_id: str) -> int:
            index = hand.index(card_id)
            target = 0 if card_id in ("kill", "strike") else None
            return score_action(state, 0, CombatAction.play_card(index, target))

        scores = [score_of(c) for c in ("kill", "brace", "surge", "focus_up", "strike")]
        assert scores == sorted(scores, reverse=True)
        assert scores[0] >= W.w_lethal
        assert W.w_survive <= scores[1] < W.w_lethal
        assert W.w_zero_cost <= scores[2] < W.w_survive
        assert W.w_setup - 2 <= scores[3] < W.w_zero_cost
        assert 0 < scores[4] < W.w_setup


class TestChooseCombatAction:
    def test_tie_breaks_to_lowest_hand_index(self):
        db = make_db([STRIKE], [DUMMY])
        state = solo_combat(("strike", "strike", "strike"), db)
        action = choose_combat_action(state, 0)
        assert action == CombatAction.play_card(0, 0)

    def test_tie_breaks_to_lowest_target_index(self):
        db = make_db([STRIKE], [DUMMY])
        state = solo_combat(("strike",), db, enemies=("dummy", "dummy"))
        action = choose_combat_action(state, 0)
        assert action.target == 0

    def test_unaffordable_hand_ends_turn(self):
        pricey = card("pricey", 9, "Attack", eff("Damage", 50, "SingleEnemy"))
        db = make_db([pricey], [DUMMY])
        state = solo_combat(("pricey", "pricey"), db)
        assert choose_combat_action(state, 0) == CombatAction.end_turn()

    def test_nothing_positive_ends_turn(self):
        poke = card("poke", 2, "Attack", eff("Damage", 1, "SingleEnemy"))
        big = enemy("big", 99, [intent("Shield", 5)])
        db = make_db([poke], [big])
        state = solo_combat(("poke", "poke"), db, enemies=("big",))
        assert choose_combat_action(state, 0) == CombatAction.end_turn()

    def test_fixed_state_fixed_choice(self):
        state = solo_combat(tuple(baseline_db().starter_deck), baseline_db(), enemies=("drone",))
        assert choose_combat_action(state, 0) == choose_combat_action(state, 0)

    def test_lethal_beats_full_cover(self):
        kill = card("kill", 1, "Attack", eff("Damage", 40, "SingleEnemy"))
        brace = card("brace", 2, "Skill", eff("Shield", 13, "Self"))
        db = make_db([kill, brace], [DUMMY])
        state = solo_combat(("kill", "brace"), db)
        action = choose_combat_action(state, 0)
        assert state.heroes[0].hand[action.hand_index] == "kill"


def node_run(successor_kinds, hp: int = 70, players: int = 1):
    """Baseline run with the map swapped for a single handcrafted junction."""
    run = start_run(1, RunConfig(players=players), baseline_db())
    nodes = [MapNode("cur", 0, 0, RoomKind.COMBAT)]
    edges = []
    for i, kind in enumerate(successor_kinds):
        node_id = f"n{i:02d}"
        nodes.append(MapNode(node_id, 0, 1, kind))
        edges.append(("cur", node_id))
    run.party.map = MapGraph(nodes, edges, 1, 2)
    run.party.current_node = "cur"
    for hero in run.heroes:
        hero.hp = hp
    return run


class TestNodeChoice:
    def test_hurt_party_prefers_rest(self):
        run = node_run([RoomKind.COMBAT, RoomKind.REST, RoomKind.ELITE], hp=30)
        assert choose_progression(run).node_id == "n01"

    def test_healthy_party_prefers_elite(self):
        run = node_run([RoomKind.COMBAT, RoomKind.REST, RoomKind.ELITE], hp=70)
        assert choose_progression(run).node_id == "n02"

    def test_middling_party_prefers_combat(self):
        run = node_run([RoomKind.EVENT, RoomKind.COMBAT, RoomKind.ELITE], hp=40)
        assert choose_progression(run).node_id == "n01"

    def test_ties_break_to_lowest_node_id(self):
        run = node_run([RoomKind.COMBAT, RoomKind.COMBAT], hp=40)
        assert choose_progression(run).node_id == "n00"

    def test_missing_preferred_kind_falls_back_to_lowest_id(self):
        run = node_run([RoomKind.EVENT, RoomKind.SHOP], hp=30)
        assert choose_progression(run).node_id == "n00"

    def test_dead_heroes_do_not_drag_preference(self):
        run = node_run([RoomKind.ELITE, RoomKind.REST], hp=70, players=2)
        run.heroes[1].hp = 0
        assert choose_progression(run).node_id == "n00"

    def test_wrong_scene_rejected(self):
        run = start_run(1, RunConfig(), baseline_db())
        run.scene = Scene(SceneKind.FINISHED)
        with pytest.raises(WrongSceneError):
            choose_progression(run)


class TestRewardChoice:
    def reward_run(self, offers, module_offers=None):
        run = start_run(1, RunConfig(), baseline_db())
        run.party.current_node = run.party.map.entries(0)[0]
        run.scene = Scene(
            SceneKind.CHOOSING_REWARD,
            reward_tier="Normal",
            card_offers=[list(offers)],
            module_offers=[list(module_offers or [])],
            card_taken=[module_offers is not None],
            module_taken=[module_offers is None],
        )
        return run

    def test_picks_highest_trade_value(self):
        run = self.reward_run(["strike", "heavy_blow", "guard"])
        decision = choose_progression(run)
        assert decision.kind is ProgressionKind.TAKE_REWARD
        assert decision.choice == "heavy_blow"  # 13 - 2*2 beats 6 - 2*1

    def test_skips_when_nothing_positive(self):
        run = self.reward_run(["disrupt", "second_wind", "surge"])
        assert choose_progression(run).choice == SKIP

    def test_module_stage_takes_first_offer(self):
        run = self.reward_run([], module_offers=["war_drum", "iron_plating"])
        assert choose_progression(run).choice == "war_drum"

    def test_decision_applies(self):
        run = self.reward_run(["strike", "heavy_blow", "guard"])
        after = apply_progression(run, choose_progression(run))
        assert after.heroes[0].deck[-1] == "heavy_blow"


class TestShopChoice:
    def shop_run(self, items, hp: int = 70, credits: int = 50):
        run = start_run(1, RunConfig(), baseline_db())
        run.party.current_node = run.party.map.entries(0)[0]
        run.heroes[0].hp = hp
        run.heroes[0].credits = credits
        run.scene = Scene(SceneKind.AT_SHOP, items=items, resolved=[False])
        return run

    def stock(self):
        return [
            ShopItem("card", "strike", 12),
            ShopItem("card", "guard", 8),
            ShopItem("module", "war_drum", 40),
            ShopItem("module", "iron_plating", 35),
            ShopItem("heal", "", 25),
        ]

    def test_hurt_hero_buys_heal(self):
        decision = choose_progression(self.shop_run(self.stock(), hp=30))
        assert decision.kind is ProgressionKind.SHOP_BUY
        assert decision.item_index == 4

    def test_healthy_hero_buys_cheapest_module(self):
        decision = choose_progression(self.shop_run(self.stock(), hp=70))
        assert decision.item_index == 3

    def test_unaffordable_heal_falls_back_to_module(self):
        items = self.stock()
        items[4] = ShopItem("heal", "", 60)
        decision = choose_progression(self.shop_run(items, hp=30, credits=50))
        assert decision.item_index == 3

    def test_sold_items_skipped(self):
        items = self.stock()
        items[3] = ShopItem("module", "iron_plating", 35, sold=True)
        decision = choose_progression(self.shop_run(items, hp=70))
        assert decision.item_index == 2

    def test_nothing_affordable_leaves(self):
        decision = choose_progression(self.shop_run(self.stock(), credits=5))
        assert decision.kind is ProgressionKind.SHOP_LEAVE


class TestRestChoice:
    def rest_run(self, hp: int, max_hp: int = 70):
        run = start_run(1, RunConfig(), baseline_db())
        run.party.current_node = run.party.map.entries(0)[0]
        run.heroes[0].hp = hp
        run.heroes[0].max_hp = max_hp
        run.scene = Scene(SceneKind.AT_REST, resolved=[False])
        return run

    def test_below_seventy_percent_heals(self):
        assert choose_progression(self.rest_run(48)).choice == "Heal"

    def test_at_seventy_percent_upgrades(self):
        assert choose_progression(self.rest_run(49)).choice == "UpgradeMaxHp"


class TestEventChoice:
    def event_run(self, event_id: str, db=None):
        run = start_run(1, RunConfig(), db or baseline_db())
        run.party.current_node = run.party.map.entries(0)[0]
        run.scene = Scene(SceneKind.AT_EVENT, event_id=event_id, resolved=[False])
        return run

    def test_net_negative_choice_skipped(self):
        # trader's buy is -25 credits +18 heal = net -7; haggle is +8
        decision = choose_progression(self.event_run("wandering_trader"))
        assert decision.choice_index == 1

    def test_net_positive_risky_choice_taken(self):
        # rusted_cache force: -6 hp +35 credits = net +29
        decision = choose_progression(self.event_run("rusted_cache"))
        assert decision.choice_index == 0

    def test_falls_back_to_unconditional_choice(self):
        trap = EventDef(
            id="trap",
            prompt_key="k.trap",
            choices=(
                EventChoice(
                    label_key="k.trap.a",
                    outcomes=(EffectSpec(EffectOp.GAIN_CREDITS, -50, TargetKind.SELF),),
                ),
                EventChoice(
                    label_key="k.trap.b",
                    outcomes=(EffectSpec(EffectOp.DAMAGE, 5, TargetKind.SELF),),
                ),
            ),
        )
        db = baseline_db()
        db = replace(db, events={**db.events, "trap": trap})
        decision = choose_progression(self.event_run("trap", db=db))
        assert decision.choice_index == 0  # first requirement-free choice


class TestPlayRun:
    def test_repeat_runs_are_equal(self):
        a = play_run(5, RunConfig(), baseline_db())
        b = play_run(5, RunConfig(), baseline_db())
        assert a == b

    def test_combat_step_limit_aborts(self):
        record = play_run(1, RunConfig(), baseline_db(), limits=StepLimits(combat_step_limit=1))
        assert record.outcome is RunOutcome.ABORT
        assert record.abort_reason is AbortReason.STEP_LIMIT

    def test_run_step_limit_aborts(self):
        record = play_run(1, RunConfig(), baseline_db(), limits=StepLimits(run_step_limit=3))
        assert record.outcome is RunOutcome.ABORT
        assert record.abort_reason is AbortReason.STEP_LIMIT
        assert record.steps == 3

    def test_invalid_config_is_setup_abort(self):
        record = play_run(1, RunConfig(players=5), baseline_db())
        assert record.outcome is RunOutcome.ABORT
        assert record.abort_reason is AbortReason.INVALID_SETUP

    def test_invalid_content_is_setup_abort(self):
        broken = replace(baseline_db(), starter_deck=())
        record = play_run(1, RunConfig(), broken)
        assert record.abort_reason is AbortReason.INVALID_SETUP

    def test_overwhelming_pack_wins(self):
        record = play_run(3, RunConfig(sector_count=1), tiny_db())
        assert record.outcome is RunOutcome.WIN
        assert record.abort_reason is None
        assert record.bosses == 1
        assert record.surviving_heroes == 1
        assert record.final_hp > 0

    def test_hopeless_pack_loses(self):
        brute = enemy("brute", 90, [intent("Attack", 50)])
        db = make_db([GUARD], [brute])
        record = play_run(2, RunConfig(), db)
        assert record.outcome is RunOutcome.LOSS
        assert record.surviving_heroes == 0
        assert record.final_hp == 0

    def test_baseline_smoke_seeds_terminate_cleanly(self):
        for seed in range(1, 11):
            record = play_run(seed, RunConfig(), baseline_db())
            assert record.outcome in (RunOutcome.WIN, RunOutcome.LOSS), record
            assert record.steps < DEFAULT_LIMITS.run_step_limit
            assert record.bosses <= 3

    def test_two_player_smoke(self):
        record = play_run(1, RunConfig(players=2), baseline_db())
        assert record.outcome in (RunOutcome.WIN, RunOutcome.LOSS)
        assert record == play_run(1, RunConfig(players=2), baseline_db())


def rec(seed, outcome, combats=10, final_hp=0, surviving=0, reason=None):
    return RunRecord(
        seed=seed,
        outcome=outcome,
        abort_reason=reason,
        combats=combats,
        elites=2,
        bosses=1,
        final_hp=final_hp,
        surviving_heroes=surviving,
        steps=100,
    )


class TestAggregate:
    def test_win_rate_matches_counts(self):
        records = [rec(i, RunOutcome.WIN) for i in range(361)]
        records += [rec(1000 + i, RunOutcome.LOSS) for i in range(639)]
        report = aggregate(records)
        assert report.runs == 1000
        assert (report.wins, report.losses, report.aborts) == (361, 639, 0)
        assert report.win_rate == Fraction(361, 1000)

    def test_count_averages_over_all_runs(self):
        report = aggregate([
            rec(1, RunOutcome.WIN, combats=14),
            rec(2, RunOutcome.LOSS, combats=16),
        ])
        assert report.avg_combats == Fraction(15)

    def test_hp_averages_over_wins_only(self):
        records = [
            rec(1, RunOutcome.WIN, final_hp=30, surviving=1),
            rec(2, RunOutcome.WIN, final_hp=40, surviving=1),
            rec(3, RunOutcome.WIN, final_hp=50, surviving=2),
            rec(4, RunOutcome.LOSS, final_hp=0),
        ]
        report = aggregate(records)
        assert report.avg_victory_hp == Fraction(40)
        assert report.avg_surviving_heroes == Fraction(4, 3)

    def test_no_wins_means_absent_victory_stats(self):
        report = aggregate([rec(1, RunOutcome.LOSS)])
        assert report.avg_victory_hp is None
        assert report.avg_surviving_heroes is None

    def test_permutation_invariant(self):
        records = [
            rec(1, RunOutcome.WIN, final_hp=30, surviving=1),
            rec(2, RunOutcome.LOSS),
            rec(3, RunOutcome.ABORT, reason=AbortReason.STEP_LIMIT),
        ]
        assert aggregate(records) == aggregate(list(reversed(records)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])
