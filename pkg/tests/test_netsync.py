"""Session layer tests: wire codec, handshake, authority, convergence, soak."""

from __future__ import annotations

import copy
import random
from dataclasses import replace

import pytest

from mazo.combat import PhaseKind, Outcome, combat_outcome
from mazo.content import CreditsRequirement, EventChoice, EventDef
from mazo.mapgen import RoomKind
from mazo.netsync import (
    PROTOCOL_VERSION,
    Bye,
    Hello,
    HeroAction,
    HeroSummary,
    LoopbackSession,
    MalformedMessageError,
    NetError,
    NodeChoice,
    Ping,
    Pong,
    Reject,
    SessionPhase,
    SoakLimits,
    Start,
    StateUpdate,
    Welcome,
    combat_action_payload,
    decode_message,
    drive_session,
    encode_message,
    guest_handle,
    guest_hello,
    host_handle,
    host_start,
    new_guest_session,
    new_host_session,
    soak_run,
)
from mazo.persist import save_run
from mazo.run import RunConfig, SceneKind, available_moves, start_run

from test_run import tiny_db

DB = tiny_db()


def stall_db():
    """tiny_db with every event choice gated behind unreachable credits, so
    any route through an event node leaves the actor without a move."""
    base = tiny_db()
    gated = tuple(
        EventChoice(
            label_key=c.label_key,
            outcomes=c.outcomes,
            requirement=CreditsRequirement(minimum=10**9),
            card_grant=c.card_grant,
            card_remove=c.card_remove,
        )
        for c in base.events["toll"].choices
    )
    toll = EventDef(id="toll", prompt_key=base.events["toll"].prompt_key, choices=gated)
    return replace(base, events={"toll": toll})


def paired(seed: int = 1, players: int = 2, sectors: int = 1, db=None) -> LoopbackSession:
    return LoopbackSession(seed, RunConfig(sector_count=sectors, players=players), db or DB)


def fresh_lobby_host():
    host = new_host_session(DB)
    host, out = host_handle(host, Hello(PROTOCOL_VERSION, "ana", host.content_fingerprint))
    assert out == [Welcome(assigned_hero_index=1)]
    return host


def running_guest(seed: int = 1, players: int = 2):
    """Guest brought to Running purely through messages from a real host."""
    host = fresh_lobby_host()
    guest = new_guest_session(DB)
    guest, hello = guest_hello(guest, "bo")
    guest, _ = guest_handle(guest, Welcome(assigned_hero_index=1))
    host, opening = host_start(host, seed, RunConfig(sector_count=1, players=players))
    for msg in opening:
        guest, _ = guest_handle(guest, msg)
    return host, guest


SAMPLE_MESSAGES = [
    Hello(1, "ana", "ff" * 32),
    Welcome(1),
    Start(7, RunConfig(sector_count=2, players=2), "ab" * 32),
    NodeChoice("n0102"),
    HeroAction(1, "InCombat", {"kind": "PlayCard", "hand_index": 2, "target": 0}),
    StateUpdate(3, {"level_progression": 0}, {"kind": "ChoosingNode"}, [{"hp": 70}]),
    HeroSummary(1, 44, 70, 12),
    Reject("no such node"),
    Bye("done"),
    Ping(),
    Pong(),
]


class TestWireCodec:
    @pytest.mark.parametrize("msg", SAMPLE_MESSAGES, ids=lambda m: type(m).__name__)
    def test_round_trip(self, msg):
        decoded, rest = decode_message(encode_message(msg))
        assert decoded == msg
        assert rest == b""

    def test_length_prefixed_shape(self):
        assert encode_message(Ping()) == b'15:{"type":"Ping"}'

    def test_concatenated_stream_decodes_in_order(self):
        data = encode_message(Ping()) + encode_message(Bye("x"))
        first, rest = decode_message(data)
        second, tail = decode_message(rest)
        assert first == Ping()
        assert second == Bye("x")
        assert tail == b""

    @pytest.mark.parametrize(
        "data",
        [
            b"",
            b"{}",
            b":",
            b"abc:{}",
            b"015:" + b'{"type":"Ping"}',
            b"99:" + b'{"type":"Ping"}',
            b'16:{"type":"Ping"}x',
            b'4:true',
            b'17:{"type":"Branch"}',
            b'26:{"reason":1,"type":"Bye"}',
            b'28:{"extra":1,"type":"Ping"}'[:2] + b'8:{"extra":1,"type":"Ping"}',
        ],
    )
    def test_malformed_bytes_rejected(self, data):
        with pytest.raises(MalformedMessageError):
            decode_message(data)

    def test_missing_field_rejected(self):
        with pytest.raises(MalformedMessageError):
            decode_message(b'14:{"type":"Bye"}')

    def test_bool_where_int_rejected(self):
        data = encode_message(Welcome(1)).replace(b":1,", b":true,")
        blob = str(len(data.split(b":", 1)[1])).encode() + b":" + data.split(b":", 1)[1]
        with pytest.raises(MalformedMessageError):
            decode_message(blob)

    def test_start_config_field_set_is_strict(self):
        msg = encode_message(Start(1, RunConfig(), "aa"))
        tampered = msg.replace(b'"map_width"', b'"map_girth"')
        with pytest.raises(MalformedMessageError):
            decode_message(tampered)

    def test_hero_action_payload_must_be_object(self):
        body = b'{"hero_index":0,"payload":3,"scene_kind":"AtShop","type":"HeroAction"}'
        with pytest.raises(MalformedMessageError):
            decode_message(str(len(body)).encode() + b":" + body)


class TestHandshake:
    def test_hello_yields_welcome_and_lobby(self):
        host = new_host_session(DB)
        host, out = host_handle(host, Hello(PROTOCOL_VERSION, "ana", host.content_fingerprint))
        assert out == [Welcome(assigned_hero_index=1)]
        assert host.phase is SessionPhase.LOBBY
        assert host.peer_name == "ana"

    def test_version_mismatch_is_bye(self):
        host = new_host_session(DB)
        host, out = host_handle(host, Hello(99, "ana", host.content_fingerprint))
        assert isinstance(out[0], Bye)
        assert host.phase is SessionPhase.ENDED

    def test_content_mismatch_is_bye(self):
        host = new_host_session(DB)
        host, out = host_handle(host, Hello(PROTOCOL_VERSION, "ana", "00" * 32))
        assert isinstance(out[0], Bye)
        assert host.phase is SessionPhase.ENDED

    def test_second_hello_is_protocol_violation(self):
        host = fresh_lobby_host()
        host, out = host_handle(host, Hello(PROTOCOL_VERSION, "eve", host.content_fingerprint))
        assert isinstance(out[0], Bye)

    def test_guest_stores_assigned_index(self):
        guest = new_guest_session(DB)
        guest, out = guest_handle(guest, Welcome(assigned_hero_index=1))
        assert out == []
        assert guest.assigned_hero_index == 1
        assert guest.phase is SessionPhase.LOBBY

    def test_ping_pong_both_roles(self):
        host = new_host_session(DB)
        guest = new_guest_session(DB)
        assert host_handle(host, Ping())[1] == [Pong()]
        assert guest_handle(guest, Ping())[1] == [Pong()]
        assert host_handle(host, Pong())[1] == []
        assert guest_handle(guest, Pong())[1] == []

    def test_bye_ends_and_everything_after_is_ignored(self):
        host = fresh_lobby_host()
        host, out = host_handle(host, Bye("leaving"))
        assert out == []
        assert host.phase is SessionPhase.ENDED
        host, out = host_handle(host, Hello(PROTOCOL_VERSION, "x", host.content_fingerprint))
        assert out == []

    def test_hero_action_in_lobby_is_protocol_violation(self):
        host = fresh_lobby_host()
        host, out = host_handle(host, HeroAction(0, "AtShop", {"kind": "ShopLeave"}))
        assert isinstance(out[0], Bye)
        assert host.phase is SessionPhase.ENDED

    def test_guest_hello_requires_fresh_guest(self):
        with pytest.raises(NetError):
            guest_hello(new_host_session(DB), "ana")
        guest = new_guest_session(DB)
        guest, _ = guest_handle(guest, Welcome(assigned_hero_index=1))
        with pytest.raises(NetError):
            guest_hello(guest, "bo")

    def test_role_mismatch_raises(self):
        with pytest.raises(NetError):
            host_handle(new_guest_session(DB), Ping())
        with pytest.raises(NetError):
            guest_handle(new_host_session(DB), Ping())


class TestStartFlow:
    def test_host_start_broadcasts_start_and_first_snapshot(self):
        host = fresh_lobby_host()
        host, out = host_start(host, 5, RunConfig(sector_count=1, players=2))
        assert isinstance(out[0], Start)
        assert out[0].seed == 5
        assert out[0].content_hash == host.content_fingerprint
        assert isinstance(out[1], StateUpdate)
        assert out[1].sequence == 1
        assert host.phase is SessionPhase.RUNNING
        assert host.last_seen_sequence == 1

    def test_host_start_needs_lobby(self):
        with pytest.raises(NetError):
            host_start(new_host_session(DB), 1, RunConfig())
        host = fresh_lobby_host()
        host, _ = host_start(host, 1, RunConfig(players=2))
        with pytest.raises(NetError):
            host_start(host, 2, RunConfig(players=2))

    def test_guest_builds_matching_map_from_start(self):
        host, guest = running_guest(seed=9)
        assert guest.phase is SessionPhase.RUNNING
        assert guest.run.party.map == host.run.party.map
        oracle = start_run(9, RunConfig(sector_count=1, players=2), DB)
        assert guest.run.party.map == oracle.party.map

    def test_guest_rejects_content_mismatch_at_start(self):
        guest = new_guest_session(DB)
        guest, _ = guest_handle(guest, Welcome(assigned_hero_index=1))
        bad = Start(1, RunConfig(players=2), "00" * 32)
        guest, out = guest_handle(guest, bad)
        assert isinstance(out[0], Bye)
        assert guest.phase is SessionPhase.ENDED

    def test_guest_start_before_welcome_is_violation(self):
        guest = new_guest_session(DB)
        guest, out = guest_handle(guest, Start(1, RunConfig(players=2), guest.content_fingerprint))
        assert isinstance(out[0], Bye)

    def test_first_snapshot_converges(self):
        host, guest = running_guest(seed=2)
        assert guest.run.party == host.run.party
        assert guest.run.scene == host.run.scene
        assert guest.run.heroes == host.run.heroes


def tick_to_combat(session: LoopbackSession, budget: int = 600) -> None:
    for _ in range(budget):
        if session.host.run.scene.kind is SceneKind.IN_COMBAT:
            return
        session.tick()
        assert not session.finished
    raise AssertionError("no combat reached within budget")


class TestHostMutations:
    def test_node_choice_applies_and_bumps_sequence(self):
        s = paired(seed=1)
        target = available_moves(s.host.run)[0]
        before = s.host.last_seen_sequence
        s.host, out = host_handle(s.host, NodeChoice(target))
        update = out[0]
        assert isinstance(update, StateUpdate)
        assert update.sequence == before + 1
        assert s.host.run.party.current_node == target

    def test_illegal_node_is_rejected_without_change(self):
        s = paired(seed=1)
        frozen = save_run(s.host.run)
        seq = s.host.last_seen_sequence
        s.host, out = host_handle(s.host, NodeChoice("n9999"))
        assert out and isinstance(out[0], Reject)
        assert save_run(s.host.run) == frozen
        assert s.host.last_seen_sequence == seq
        assert s.host.phase is SessionPhase.RUNNING

    def test_two_valid_actions_have_consecutive_sequences(self):
        s = paired(seed=1)
        base = s.host.last_seen_sequence
        assert s._host_act() == 1
        assert s.host.last_seen_sequence == base + 1
        assert s._host_act() == 1
        assert s.host.last_seen_sequence == base + 2
        updates = [decode_message(raw)[0] for raw in s.to_guest]
        sequences = [m.sequence for m in updates if isinstance(m, StateUpdate)]
        assert sequences == [base + 1, base + 2]

    def test_action_for_wrong_scene_is_rejected(self):
        s = paired(seed=1)
        frozen = save_run(s.host.run)
        s.host, out = host_handle(s.host, HeroAction(0, "AtShop", {"kind": "ShopLeave"}))
        assert isinstance(out[0], Reject)
        assert save_run(s.host.run) == frozen

    def test_hero_index_out_of_range_is_rejected(self):
        s = paired(seed=1)
        tick_to_combat(s)
        kind = s.host.run.scene.kind.value
        payload = {"kind": "PlayCard", "hand_index": 0, "target": 0}
        for bad in (-1, 2, 9):
            s.host, out = host_handle(s.host, HeroAction(bad, kind, payload))
            assert isinstance(out[0], Reject)

    def test_illegal_hand_index_is_rejected(self):
        s = paired(seed=1)
        tick_to_combat(s)
        combat = s.host.run.scene.combat
        hero = combat.phase.hero_index
        frozen = save_run(s.host.run)
        payload = {"kind": "PlayCard", "hand_index": 99, "target": 0}
        s.host, out = host_handle(s.host, HeroAction(hero, "InCombat", payload))
        assert isinstance(out[0], Reject)
        assert save_run(s.host.run) == frozen

    def test_snapshots_always_sit_at_decision_points(self):
        s = paired(seed=4)
        for _ in range(3000):
            s.tick()
            run = s.host.run
            if run.scene.kind is SceneKind.IN_COMBAT:
                assert run.scene.combat.phase.kind is PhaseKind.HERO_TURN
                assert combat_outcome(run.scene.combat) is Outcome.ONGOING
            if s.finished:
                break
        assert s.finished

    def test_hero_summary_stored_for_display(self):
        s = paired(seed=1)
        summary = HeroSummary(1, 44, 70, 12)
        s.host, out = host_handle(s.host, summary)
        assert out == []
        assert s.host.peer_summary == summary

    def test_mid_combat_play_leaves_persistent_heroes_alone(self):
        # seed 1 offers a combat entry and deals gem (non-lethal) first;
        # playing it must not touch anyone's persistent state
        s = paired(seed=1)
        mine = copy.deepcopy(s.host.run.heroes[0])
        other = copy.deepcopy(s.host.run.heroes[1])
        combat_node = next(
            m
            for m in available_moves(s.host.run)
            if s.host.run.party.map.node(m).kind is RoomKind.COMBAT
        )
        s.host, _ = host_handle(s.host, NodeChoice(combat_node))
        combat = s.host.run.scene.combat
        assert combat.phase.hero_index == 0
        gem_index = combat.heroes[0].hand.index("gem")
        payload = {"kind": "PlayCard", "hand_index": gem_index, "target": None}
        s.host, out = host_handle(s.host, HeroAction(0, "InCombat", payload))
        assert isinstance(out[0], StateUpdate)
        assert s.host.run.scene.kind is SceneKind.IN_COMBAT
        assert s.host.run.heroes[1] == other
        assert s.host.run.heroes[0] == mine


class TestGuestFiltering:
    def test_stale_sequence_dropped_silently(self):
        host, guest = running_guest(seed=1)
        host, out = host_handle(host, NodeChoice(available_moves(host.run)[0]))
        update = out[0]
        guest, _ = guest_handle(guest, update)
        assert guest.last_seen_sequence == update.sequence
        frozen = save_run(guest.run)
        for stale in (update.sequence, update.sequence - 1):
            guest, out = guest_handle(guest, replace(update, sequence=stale))
            assert out == []
        assert guest.stale_dropped == 2
        assert save_run(guest.run) == frozen

    def test_applied_sequences_strictly_increase(self):
        host, guest = running_guest(seed=1)
        host, out = host_handle(host, NodeChoice(available_moves(host.run)[0]))
        update = out[0]
        applied = [1]
        for seq in (5, 2, 7, 7, 6, 9):
            before = guest.last_seen_sequence
            guest, _ = guest_handle(guest, replace(update, sequence=seq))
            if guest.last_seen_sequence != before:
                applied.append(seq)
        assert applied == sorted(set(applied))
        assert applied == [1, 5, 7, 9]

    def test_own_change_emits_hero_summary(self):
        host, guest = running_guest(seed=1)
        host, out = host_handle(host, NodeChoice(available_moves(host.run)[0]))
        update = out[0]
        doc = copy.deepcopy(update.heroes)
        doc[1]["credits"] += 13
        richer = StateUpdate(update.sequence, update.party, update.scene, doc)
        guest, outbound = guest_handle(guest, richer)
        assert outbound == [HeroSummary(1, doc[1]["hp"], doc[1]["max_hp"], doc[1]["credits"])]

    def test_unchanged_hero_emits_nothing(self):
        host, guest = running_guest(seed=1)
        host, out = host_handle(host, NodeChoice(available_moves(host.run)[0]))
        guest, outbound = guest_handle(guest, out[0])
        assert outbound == []

    def test_malformed_snapshot_is_bye(self):
        host, guest = running_guest(seed=1)
        bad = StateUpdate(9, {"level_progression": 0}, {"kind": "ChoosingNode"}, [])
        guest, out = guest_handle(guest, bad)
        assert isinstance(out[0], Bye)
        assert guest.phase is SessionPhase.ENDED

    def test_dangling_id_in_snapshot_is_bye(self):
        host, guest = running_guest(seed=1)
        host, out = host_handle(host, NodeChoice(available_moves(host.run)[0]))
        update = out[0]
        doc = copy.deepcopy(update.heroes)
        doc[1]["deck"][0] = "ghost"
        guest, out = guest_handle(guest, StateUpdate(update.sequence, update.party, update.scene, doc))
        assert isinstance(out[0], Bye)

    def test_host_only_messages_at_guest_are_violations(self):
        _, guest = running_guest(seed=1)
        for msg in (NodeChoice("n0"), HeroAction(1, "AtShop", {}), Hello(1, "x", "y")):
            fresh = running_guest(seed=1)[1]
            fresh, out = guest_handle(fresh, msg)
            assert isinstance(out[0], Bye)

    def test_reject_is_recorded_not_fatal(self):
        _, guest = running_guest(seed=1)
        guest, out = guest_handle(guest, Reject("no"))
        assert out == []
        assert guest.last_reject == "no"
        assert guest.phase is SessionPhase.RUNNING


class TestConvergence:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_quiescent_points_agree_everywhere(self, seed):
        s = paired(seed=seed)
        checks = 0
        for _ in range(6000):
            s.deliver()
            if s.quiescent:
                assert s.guest.run.party == s.host.run.party
                assert s.guest.run.scene == s.host.run.scene
                assert s.guest.run.heroes == s.host.run.heroes
                checks += 1
                if s.finished:
                    break
            s.act()
        assert s.finished
        assert checks > 10
        assert s.guest.run.finished

    def test_lockstep_sessions_are_identical(self):
        a = paired(seed=6)
        b = paired(seed=6)
        for _ in range(400):
            a.tick()
            b.tick()
            assert save_run(a.host.run) == save_run(b.host.run)
            if a.finished and a.quiescent:
                break
        assert save_run(a.guest.run) == save_run(b.guest.run)


class TestSoak:
    def test_generous_budget_completes_everything(self):
        report = soak_run([1, 2, 3], RunConfig(sector_count=1, players=2), DB)
        assert report.completed == 3
        assert report.stalls == 0
        assert report.progress_timeouts == 0
        assert report.first_stall_seed is None

    def test_tiny_budget_times_out_every_seed(self):
        limits = SoakLimits(idle_limit_ticks=5, budget_ticks=1)
        report = soak_run([1, 2, 3, 4, 5], RunConfig(sector_count=1, players=2), DB, limits=limits)
        assert report.progress_timeouts == 5
        assert report.stalls == 0
        assert report.completed == 0

    def test_idle_limit_beyond_budget_cannot_stall(self):
        limits = SoakLimits(idle_limit_ticks=100, budget_ticks=20)
        report = soak_run([1, 2], RunConfig(sector_count=1, players=2), DB, limits=limits)
        assert report.stalls == 0

    def test_soak_is_deterministic(self):
        config = RunConfig(sector_count=1, players=2)
        first = soak_run([1, 2], config, DB)
        second = soak_run([1, 2], config, DB)
        assert first == second

    def test_nonpositive_limits_rejected(self):
        with pytest.raises(ValueError):
            soak_run([1], RunConfig(players=2), DB, limits=SoakLimits(0, 10))
        with pytest.raises(ValueError):
            soak_run([1], RunConfig(players=2), DB, limits=SoakLimits(10, 0))

    def test_unreachable_event_choices_stall_and_are_reported(self):
        db = stall_db()
        config = RunConfig(sector_count=1, players=2)
        limits = SoakLimits(idle_limit_ticks=8, budget_ticks=5000)
        seeds = list(range(1, 41))
        report = soak_run(seeds, config, db, limits=limits)
        assert report.completed + report.stalls + report.progress_timeouts == len(seeds)
        assert report.progress_timeouts == 0
        assert report.stalls >= 1
        verdict = drive_session(LoopbackSession(report.first_stall_seed, config, db), limits)
        assert verdict == "stall"
        clean = soak_run([report.first_stall_seed], config, DB, limits=limits)
        assert clean.stalls == 0


class TestAuthority:
    def test_fuzzed_messages_never_move_host_state(self):
        s = paired(seed=3)
        for _ in range(40):
            s.tick()
        host = s.host
        frozen = save_run(host.run)
        rng = random.Random(17)
        scene_kinds = [k.value for k in SceneKind]
        rejects = 0
        for _ in range(150):
            roll = rng.randrange(3)
            if roll == 0:
                msg = NodeChoice("n%04d" % rng.randrange(10000))
            elif roll == 1:
                # hero index 2+ is always out of range in a 2-player run
                msg = HeroAction(
                    rng.randrange(2, 9),
                    rng.choice(scene_kinds),
                    {"kind": rng.choice(["PlayCard", "ShopBuy", "Nope", ""])},
                )
            else:
                msg = HeroAction(
                    rng.randrange(0, 2),
                    rng.choice(scene_kinds),
                    {"weird": rng.randrange(100)},
                )
            host, out = host_handle(host, msg)
            rejects += sum(1 for m in out if isinstance(m, Reject))
            assert save_run(host.run) == frozen
        assert rejects > 0
        assert host.phase is SessionPhase.RUNNING

    def test_out_of_phase_messages_end_but_never_mutate(self):
        s = paired(seed=3)
        for _ in range(10):
            s.tick()
        host = s.host
        frozen = save_run(host.run)
        host, out = host_handle(host, Welcome(assigned_hero_index=1))
        assert isinstance(out[0], Bye)
        assert host.phase is SessionPhase.ENDED
        for msg in (NodeChoice("n0000"), Ping(), StateUpdate(99, {}, {}, [])):
            host, out = host_handle(host, msg)
            assert out == []
        assert save_run(host.run) == frozen

    def test_wire_garbage_dies_at_decode(self):
        rng = random.Random(23)
        for _ in range(60):
            blob = bytes(rng.randrange(256) for _ in range(rng.randrange(1, 40)))
            with pytest.raises(MalformedMessageError):
                decode_message(blob)
