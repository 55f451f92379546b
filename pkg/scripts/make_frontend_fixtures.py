"""Regenerate the webclient test fixtures under frontend/tests/fixtures/.

The browser client talks to the engine only through its wire formats, so
its tests run against recorded traffic: frame-codec vectors for the
pairing grammar and one captured host session for the guest protocol.

The session tape scripts a short two-player run: the guest picks the
opening map node, both heroes fight the first combat to victory, and the
victory payout changes the guest hero's credits so the snapshot-summary
reply fires.  Hero turns follow a policy the client test can mirror from
its own view model: play the first affordable single-target damage card
at the first living enemy, otherwise end the turn.

Rerun this script whenever the wire formats or the baseline pack change.
"""

from __future__ import annotations

import base64
import hashlib
import json
import random
import sys
import zlib
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mazo.baseline import baseline_db
from mazo.canonical import canonical_bytes
from mazo.combat import ActionKind, CombatAction
from mazo.content import lookup_card
from mazo.netsync import (
    PROTOCOL_VERSION,
    Hello,
    HeroAction,
    HeroSummary,
    NodeChoice,
    Ping,
    Pong,
    combat_action_payload,
    encode_message,
    host_handle,
    host_start,
    new_host_session,
)
from mazo.pairing import encode_payload
from mazo.run import RunConfig, available_moves

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"

SESSION_SEED = 17
GUEST_HERO = 1
MAX_COMBAT_STEPS = 60


def b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def pairing_vectors() -> dict:
    rng = random.Random(0xF1D0)
    cases = [
        ("empty", b""),
        ("tiny", b"hi"),
        ("offer_doc", canonical_bytes(
            {
                "kind": "offer",
                "session": "c3f1a9d2",
                "candidates": [
                    {"addr": f"192.0.2.{i}", "port": 40000 + i, "token": rng.randbytes(24).hex()}
                    for i in range(6)
                ],
            }
        )),
        ("random_2000", rng.randbytes(2000)),
        ("repetitive_2000", b"offer" * 400),
        ("random_1500", rng.randbytes(1500)),
    ]
    payloads = []
    for name, payload in cases:
        payloads.append(
            {
                "name": name,
                "payload_b64": b64(payload),
                "raw_frames": encode_payload(payload, compress=False),
                "z_frames": encode_payload(payload, compress=True),
            }
        )
    crc_cases = [b"", b"hi", b"The quick brown fox jumps over the lazy dog", bytes(range(256))]
    crcs = [
        {"payload_b64": b64(data), "crc_hex": f"{zlib.crc32(data) & 0xFFFFFFFF:08x}"}
        for data in crc_cases
    ]
    return {"crc_vectors": crcs, "payloads": payloads}


def scripted_action(db, combat: dict) -> HeroAction:
    """The combat policy both sides of the tape follow; the client test
    recomputes the same choice from its rendered tiles."""
    hero_index = combat["phase"]["hero_index"]
    hero = combat["heroes"][hero_index]
    living = [i for i, e in enumerate(combat["enemies"]) if e["combatant"]["hp"] > 0]
    for hand_index, card_id in enumerate(hero["hand"]):
        card = lookup_card(db, card_id)
        if card.cost > hero["energy"]:
            continue
        if any(e.target.value == "SingleEnemy" for e in card.effects):
            action = CombatAction.play_card(hand_index, living[0])
            return HeroAction(hero_index, "InCombat", combat_action_payload(action))
    return HeroAction(hero_index, "InCombat", combat_action_payload(CombatAction(ActionKind.END_TURN)))


def seq_row(update) -> dict:
    scene = update.scene
    combat = scene.get("combat")
    row = {
        "sequence": update.sequence,
        "scene_kind": scene["kind"],
        "current_node": update.party["current_node"],
        "visited_path": update.party["visited_path"],
        "heroes": update.heroes,
    }
    if combat:
        own = combat["heroes"][GUEST_HERO]
        row["phase_hero"] = combat["phase"]["hero_index"]
        row["enemy_def_ids"] = [e["def_id"] for e in combat["enemies"]]
        row["living_enemies"] = sum(1 for e in combat["enemies"] if e["combatant"]["hp"] > 0)
        row["own_hand"] = own["hand"]
        row["own_energy"] = own["energy"]
    if scene["kind"] == "ChoosingReward":
        row["card_offers"] = scene["card_offers"]
        row["reward_tier"] = scene["reward_tier"]
        row["resolved"] = scene["resolved"]
    return row


def wire_session() -> dict:
    db = baseline_db()
    host = new_host_session(db)
    fingerprint = host.content_fingerprint

    pack_file = (ROOT / "content" / "baseline.pack.json").read_bytes()
    assert pack_file.endswith(b"\n")
    assert hashlib.sha256(pack_file[:-1]).hexdigest() == fingerprint

    hello = Hello(PROTOCOL_VERSION, "guest", fingerprint)
    host, replies = host_handle(host, hello)
    assert [type(m).__name__ for m in replies] == ["Welcome"]
    welcome = replies[0]

    config = RunConfig(players=2)
    host, started = host_start(host, SESSION_SEED, config)
    assert [type(m).__name__ for m in started] == ["Start", "StateUpdate"]
    start_msg, update1 = started

    pick = available_moves(host.run)[0]
    choice = NodeChoice(pick)
    host, replies = host_handle(host, choice)
    assert [type(m).__name__ for m in replies] == ["StateUpdate"]
    update2 = replies[0]
    assert update2.scene["kind"] == "InCombat"
    assert update2.scene["combat"]["phase"]["hero_index"] == 0

    own_before = update1.heroes[GUEST_HERO]

    steps = []
    last_update = update2
    for _ in range(MAX_COMBAT_STEPS):
        if last_update.scene["kind"] != "InCombat":
            break
        action = scripted_action(db, last_update.scene["combat"])
        host, replies = host_handle(host, action)
        assert [type(m).__name__ for m in replies] == ["StateUpdate"], replies
        last_update = replies[0]
        step = {
            "by": "guest" if action.hero_index == GUEST_HERO else "host",
            "update_b64": b64(encode_message(last_update)),
            "after": seq_row(last_update),
        }
        if action.hero_index == GUEST_HERO:
            step["outbound_b64"] = b64(encode_message(action))
            step["payload"] = action.payload
        steps.append(step)
    else:
        raise AssertionError("combat did not finish inside the step budget")

    assert last_update.scene["kind"] == "ChoosingReward"
    own_after = last_update.heroes[GUEST_HERO]
    assert (own_after["hp"], own_after["max_hp"], own_after["credits"]) != (
        own_before["hp"],
        own_before["max_hp"],
        own_before["credits"],
    ), "victory payout should have changed the guest hero's stats"
    summary = HeroSummary(
        GUEST_HERO, own_after["hp"], own_after["max_hp"], own_after["credits"]
    )

    bad_choice = NodeChoice("ghost")
    host, replies = host_handle(host, bad_choice)
    assert [type(m).__name__ for m in replies] == ["Reject"]
    reject = replies[0]

    return {
        "content_hash": fingerprint,
        "seed": SESSION_SEED,
        "config": {
            "sector_count": config.sector_count,
            "players": config.players,
            "layers_per_sector": config.layers_per_sector,
            "map_width": config.map_width,
        },
        "assigned_hero_index": welcome.assigned_hero_index,
        "picked_node": pick,
        "reject_reason": reject.reason,
        "map": update1.party["map"],
        "per_seq": [seq_row(update1), seq_row(update2)],
        "combat_steps": steps,
        "final": seq_row(last_update),
        "outbound_b64": {
            "hello": b64(encode_message(hello)),
            "node_choice": b64(encode_message(choice)),
            "hero_summary": b64(encode_message(summary)),
            "bad_choice": b64(encode_message(bad_choice)),
            "pong": b64(encode_message(Pong())),
        },
        "tape_b64": {
            "after_hello": b64(b"".join(encode_message(m) for m in (welcome, start_msg, update1))),
            "after_choice": b64(encode_message(update2)),
            "noise": b64(encode_message(reject) + encode_message(update1) + encode_message(Ping())),
        },
    }


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    docs = {
        "pairing_vectors.json": pairing_vectors(),
        "wire_session.json": wire_session(),
    }
    for name, doc in docs.items():
        path = FIXTURES / name
        path.write_bytes(json.dumps(doc, indent=1, sort_keys=True).encode() + b"\n")
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
