"""Host-authoritative two-player session over an ordered reliable channel.

The host holds the only authoritative run.  The guest sends hero actions
for its assigned hero; the host applies them through the regular run
operations and broadcasts a full party/scene/hero snapshot after every
successful mutation.  Guests render from snapshots and never mutate party
state locally, so convergence is just structural equality against the
host's state whenever the channel is quiet.

Messages are length-prefixed canonical text (``<len>:<doc>``), the same
canonical encoding save documents use.  The transport underneath is
assumed ordered and reliable; an in-memory queue pair stands in for it
when soaking, and loss or reordering is out of contract.

Enemy turns and combat resolution belong to nobody's hand, so the host
advances them eagerly after each applied action: every broadcast snapshot
shows either a hero's decision point or a finished run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .actor import (
    DEFAULT_WEIGHTS,
    NoProgressionError,
    PolicyWeights,
    ProgressionDecision,
    ProgressionKind,
    choose_combat_action,
    choose_progression,
)
from .canonical import canonical_bytes, parse_canonical
from .combat import ActionKind, CombatAction, CombatError, Outcome, PhaseKind, combat_outcome
from .content import ContentDb, UnknownIdError, content_hash, serialize_content
from .persist import (
    MalformedSaveError,
    hero_from_dict,
    hero_to_dict,
    party_from_dict,
    party_to_dict,
    scene_from_dict,
    scene_to_dict,
)
from .run import (
    RunConfig,
    RunError,
    RunState,
    SceneKind,
    advance_enemy_phase,
    combat_action,
    enter_node,
    event_choice,
    resolve_combat_end,
    resolve_reward,
    rest_choice,
    shop_buy,
    shop_leave,
    start_run,
)

PROTOCOL_VERSION = 1


class NetError(Exception):
    """Base class for session failures."""


class MalformedMessageError(NetError):
    """Bytes or a document that does not parse as a wire message."""


class SessionRole(Enum):
    HOST = "Host"
    GUEST = "Guest"


class SessionPhase(Enum):
    AWAITING_HELLO = "AwaitingHello"
    LOBBY = "Lobby"
    RUNNING = "Running"
    ENDED = "Ended"


# ---------------------------------------------------------------------------
# Wire messages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hello:
    protocol_version: int
    display_name: str
    content_hash: str


@dataclass(frozen=True)
class Welcome:
    assigned_hero_index: int


@dataclass(frozen=True)
class Start:
    seed: int
    config: RunConfig
    content_hash: str


@dataclass(frozen=True)
class NodeChoice:
    node_id: str


@dataclass(frozen=True)
class HeroAction:
    hero_index: int
    scene_kind: str
    payload: dict


@dataclass(frozen=True)
class StateUpdate:
    sequence: int
    party: dict
    scene: dict
    heroes: list


@dataclass(frozen=True)
class HeroSummary:
    hero_index: int
    hp: int
    max_hp: int
    credits: int


@dataclass(frozen=True)
class Reject:
    reason: str


@dataclass(frozen=True)
class Bye:
    reason: str


@dataclass(frozen=True)
class Ping:
    pass


@dataclass(frozen=True)
class Pong:
    pass


WireMessage = Union[
    Hello, Welcome, Start, NodeChoice, HeroAction, StateUpdate, HeroSummary, Reject, Bye, Ping, Pong
]


# ---------------------------------------------------------------------------
# Wire codec
# ---------------------------------------------------------------------------


def _w_int(value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedMessageError(f"expected integer, got {value!r}")
    return value


def _w_str(value) -> str:
    if not isinstance(value, str):
        raise MalformedMessageError(f"expected string, got {value!r}")
    return value


def _w_dict(value) -> dict:
    if not isinstance(value, dict):
        raise MalformedMessageError(f"expected object, got {value!r}")
    return value


def _w_list(value) -> list:
    if not isinstance(value, list):
        raise MalformedMessageError(f"expected array, got {value!r}")
    return value


def message_to_dict(msg: WireMessage) -> dict:
    if isinstance(msg, Hello):
        return {
            "type": "Hello",
            "protocol_version": msg.protocol_version,
            "display_name": msg.display_name,
            "content_hash": msg.content_hash,
        }
    if isinstance(msg, Welcome):
        return {"type": "Welcome", "assigned_hero_index": msg.assigned_hero_index}
    if isinstance(msg, Start):
        return {
            "type": "Start",
            "seed": msg.seed,
            "config": {
                "sector_count": msg.config.sector_count,
                "players": msg.config.players,
                "layers_per_sector": msg.config.layers_per_sector,
                "map_width": msg.config.map_width,
            },
            "content_hash": msg.content_hash,
        }
    if isinstance(msg, NodeChoice):
        return {"type": "NodeChoice", "node_id": msg.node_id}
    if isinstance(msg, HeroAction):
        return {
            "type": "HeroAction",
            "hero_index": msg.hero_index,
            "scene_kind": msg.scene_kind,
            "payload": msg.payload,
        }
    if isinstance(msg, StateUpdate):
        return {
            "type": "StateUpdate",
            "sequence": msg.sequence,
            "party": msg.party,
            "scene": msg.scene,
            "heroes": msg.heroes,
        }
    if isinstance(msg, HeroSummary):
        return {
            "type": "HeroSummary",
            "hero_index": msg.hero_index,
            "hp": msg.hp,
            "max_hp": msg.max_hp,
            "credits": msg.credits,
        }
    if isinstance(msg, Reject):
        return {"type": "Reject", "reason": msg.reason}
    if isinstance(msg, Bye):
        return {"type": "Bye", "reason": msg.reason}
    if isinstance(msg, Ping):
        return {"type": "Ping"}
    if isinstance(msg, Pong):
        return {"type": "Pong"}
    raise TypeError(f"not a wire message: {msg!r}")


_FIELDS = {
    "Hello": {"protocol_version", "display_name", "content_hash"},
    "Welcome": {"assigned_hero_index"},
    "Start": {"seed", "config", "content_hash"},
    "NodeChoice": {"node_id"},
    "HeroAction": {"hero_index", "scene_kind", "payload"},
    "StateUpdate": {"sequence", "party", "scene", "heroes"},
    "HeroSummary": {"hero_index", "hp", "max_hp", "credits"},
    "Reject": {"reason"},
    "Bye": {"reason"},
    "Ping": set(),
    "Pong": set(),
}

_CONFIG_FIELDS = {"sector_count", "players", "layers_per_sector", "map_width"}


def message_from_dict(doc) -> WireMessage:
    if not isinstance(doc, dict) or not isinstance(doc.get("type"), str):
        raise MalformedMessageError("message must be an object with a type")
    kind = doc["type"]
    fields = _FIELDS.get(kind)
    if fields is None:
        raise MalformedMessageError(f"unknown message type {kind!r}")
    if set(doc) != fields | {"type"}:
        raise MalformedMessageError(f"{kind} message has the wrong field set")
    if kind == "Hello":
        return Hello(
            protocol_version=_w_int(doc["protocol_version"]),
            display_name=_w_str(doc["display_name"]),
            content_hash=_w_str(doc["content_hash"]),
        )
    if kind == "Welcome":
        return Welcome(assigned_hero_index=_w_int(doc["assigned_hero_index"]))
    if kind == "Start":
        raw = _w_dict(doc["config"])
        if set(raw) != _CONFIG_FIELDS:
            raise MalformedMessageError("Start config has the wrong field set")
        config = RunConfig(
            sector_count=_w_int(raw["sector_count"]),
            players=_w_int(raw["players"]),
            layers_per_sector=_w_int(raw["layers_per_sector"]),
            map_width=_w_int(raw["map_width"]),
        )
        return Start(seed=_w_int(doc["seed"]), config=config, content_hash=_w_str(doc["content_hash"]))
    if kind == "NodeChoice":
        return NodeChoice(node_id=_w_str(doc["node_id"]))
    if kind == "HeroAction":
        return HeroAction(
            hero_index=_w_int(doc["hero_index"]),
            scene_kind=_w_str(doc["scene_kind"]),
            payload=_w_dict(doc["payload"]),
        )
    if kind == "StateUpdate":
        return StateUpdate(
            sequence=_w_int(doc["sequence"]),
            party=_w_dict(doc["party"]),
            scene=_w_dict(doc["scene"]),
            heroes=[_w_dict(h) for h in _w_list(doc["heroes"])],
        )
    if kind == "HeroSummary":
        return HeroSummary(
            hero_index=_w_int(doc["hero_index"]),
            hp=_w_int(doc["hp"]),
            max_hp=_w_int(doc["max_hp"]),
            credits=_w_int(doc["credits"]),
        )
    if kind == "Reject":
        return Reject(reason=_w_str(doc["reason"]))
    if kind == "Bye":
        return Bye(reason=_w_str(doc["reason"]))
    if kind == "Ping":
        return Ping()
    return Pong()


def encode_message(msg: WireMessage) -> bytes:
    body = canonical_bytes(message_to_dict(msg))
    return str(len(body)).encode("ascii") + b":" + body


def decode_message(data: bytes) -> tuple[WireMessage, bytes]:
    """Decode one length-prefixed message, returning the unconsumed tail."""
    sep = data.find(b":")
    if sep < 1:
        raise MalformedMessageError("missing length prefix")
    prefix = data[:sep]
    if not prefix.isdigit():
        raise MalformedMessageError("length prefix must be decimal digits")
    if len(prefix) > 1 and prefix.startswith(b"0"):
        raise MalformedMessageError("length prefix has a leading zero")
    length = int(prefix)
    body = data[sep + 1 : sep + 1 + length]
    if len(body) < length:
        raise MalformedMessageError("truncated message body")
    try:
        doc = parse_canonical(body)
    except ValueError as exc:
        raise MalformedMessageError(f"unreadable message body: {exc}") from exc
    return message_from_dict(doc), data[sep + 1 + length :]


# ---------------------------------------------------------------------------
# Session state
# ---------------------------------------------------------------------------


@dataclass
class SessionState:
    role: SessionRole
    phase: SessionPhase
    assigned_hero_index: int
    content_fingerprint: str
    db: ContentDb = field(compare=False, repr=False)
    run: Optional[RunState] = None
    last_seen_sequence: int = 0
    peer_name: str = ""
    peer_summary: Optional[HeroSummary] = None
    last_reject: str = ""
    stale_dropped: int = 0


def new_host_session(db: ContentDb) -> SessionState:
    return SessionState(
        role=SessionRole.HOST,
        phase=SessionPhase.AWAITING_HELLO,
        assigned_hero_index=0,
        content_fingerprint=content_hash(serialize_content(db)),
        db=db,
    )


def new_guest_session(db: ContentDb) -> SessionState:
    return SessionState(
        role=SessionRole.GUEST,
        phase=SessionPhase.AWAITING_HELLO,
        assigned_hero_index=-1,
        content_fingerprint=content_hash(serialize_content(db)),
        db=db,
    )


def guest_hello(session: SessionState, display_name: str) -> tuple[SessionState, list[WireMessage]]:
    if session.role is not SessionRole.GUEST:
        raise NetError("only a guest sends Hello")
    if session.phase is not SessionPhase.AWAITING_HELLO:
        raise NetError(f"cannot send Hello in phase {session.phase.value}")
    return session, [Hello(PROTOCOL_VERSION, display_name, session.content_fingerprint)]


# ---------------------------------------------------------------------------
# Payload codecs for hero actions
# ---------------------------------------------------------------------------


def combat_action_payload(action: CombatAction) -> dict:
    return {"kind": action.kind.value, "hand_index": action.hand_index, "target": action.target}


def _combat_action_from_payload(payload: dict) -> CombatAction:
    if set(payload) != {"kind", "hand_index", "target"}:
        raise MalformedMessageError("combat payload has the wrong field set")
    kind = ActionKind(_w_str(payload["kind"]))
    target = payload["target"]
    return CombatAction(
        kind=kind,
        hand_index=_w_int(payload["hand_index"]),
        target=None if target is None else _w_int(target),
    )


def progression_action(decision: ProgressionDecision, scene_kind: SceneKind) -> HeroAction:
    """Wrap a non-node progression decision as a hero action message."""
    kind = decision.kind
    if kind is ProgressionKind.TAKE_REWARD:
        payload = {"kind": kind.value, "choice": decision.choice}
    elif kind is ProgressionKind.SHOP_BUY:
        payload = {"kind": kind.value, "item_index": decision.item_index}
    elif kind is ProgressionKind.SHOP_LEAVE:
        payload = {"kind": kind.value}
    elif kind is ProgressionKind.REST:
        payload = {"kind": kind.value, "choice": decision.choice}
    elif kind is ProgressionKind.EVENT:
        payload = {"kind": kind.value, "choice_index": decision.choice_index}
    else:
        raise NetError("node choices travel as NodeChoice, not HeroAction")
    return HeroAction(hero_index=decision.hero_index, scene_kind=scene_kind.value, payload=payload)


def _apply_hero_action(run: RunState, msg: HeroAction) -> RunState:
    if not 0 <= msg.hero_index < len(run.heroes):
        raise RunError(f"hero index {msg.hero_index} out of range")
    if msg.scene_kind != run.scene.kind.value:
        raise RunError(f"action for scene {msg.scene_kind}, run is at {run.scene.kind.value}")
    if run.scene.kind is SceneKind.IN_COMBAT:
        return combat_action(run, msg.hero_index, _combat_action_from_payload(msg.payload))
    payload = msg.payload
    kind = _w_str(payload.get("kind", ""))
    if kind == ProgressionKind.TAKE_REWARD.value:
        return resolve_reward(run, msg.hero_index, _w_str(payload["choice"]))
    if kind == ProgressionKind.SHOP_BUY.value:
        return shop_buy(run, msg.hero_index, _w_int(payload["item_index"]))
    if kind == ProgressionKind.SHOP_LEAVE.value:
        return shop_leave(run, msg.hero_index)
    if kind == ProgressionKind.REST.value:
        return rest_choice(run, msg.hero_index, _w_str(payload["choice"]))
    if kind == ProgressionKind.EVENT.value:
        return event_choice(run, msg.hero_index, _w_int(payload["choice_index"]))
    raise RunError(f"unknown action kind {kind!r}")


def _advance_combat(run: RunState) -> RunState:
    # enemy phases and combat resolution are nobody's hand to play, so the
    # host rolls them forward until a hero decision point (or the end)
    while run.scene.kind is SceneKind.IN_COMBAT:
        combat = run.scene.combat
        if combat_outcome(combat) is not Outcome.ONGOING:
            return resolve_combat_end(run)
        if combat.phase.kind is PhaseKind.ENEMY_TURN:
            run = advance_enemy_phase(run)
            continue
        break
    return run


# ---------------------------------------------------------------------------
# Host
# ---------------------------------------------------------------------------


def _snapshot(session: SessionState) -> StateUpdate:
    run = session.run
    return StateUpdate(
        sequence=session.last_seen_sequence,
        party=party_to_dict(run.party),
        scene=scene_to_dict(run.scene),
        heroes=[hero_to_dict(h) for h in run.heroes],
    )


def _end(session: SessionState, reason: str) -> tuple[SessionState, list[WireMessage]]:
    session.phase = SessionPhase.ENDED
    return session, [Bye(reason)]


def host_start(
    session: SessionState, seed: int, config: RunConfig
) -> tuple[SessionState, list[WireMessage]]:
    """Local host command: begin the run and broadcast Start plus the first
    snapshot."""
    if session.role is not SessionRole.HOST:
        raise NetError("only the host starts a session")
    if session.phase is not SessionPhase.LOBBY:
        raise NetError(f"cannot start in phase {session.phase.value}")
    session.run = start_run(seed, config, session.db)
    session.phase = SessionPhase.RUNNING
    session.last_seen_sequence = 1
    start = Start(seed=seed, config=config, content_hash=session.content_fingerprint)
    return session, [start, _snapshot(session)]


def host_handle(session: SessionState, msg: WireMessage) -> tuple[SessionState, list[WireMessage]]:
    """Apply one incoming message to the host session.

    Illegal game actions are answered with Reject and leave every piece of
    state untouched; protocol violations end the session with Bye.
    """
    if session.role is not SessionRole.HOST:
        raise NetError("host_handle needs a host session")
    if session.phase is SessionPhase.ENDED:
        return session, []
    if isinstance(msg, Bye):
        session.phase = SessionPhase.ENDED
        return session, []
    if isinstance(msg, Ping):
        return session, [Pong()]
    if isinstance(msg, Pong):
        return session, []

    if isinstance(msg, Hello):
        if session.phase is not SessionPhase.AWAITING_HELLO:
            return _end(session, "protocol violation: unexpected Hello")
        if msg.protocol_version != PROTOCOL_VERSION:
            return _end(session, f"unsupported protocol version {msg.protocol_version}")
        if msg.content_hash != session.content_fingerprint:
            return _end(session, "content mismatch")
        session.phase = SessionPhase.LOBBY
        session.peer_name = msg.display_name
        return session, [Welcome(assigned_hero_index=1)]

    if isinstance(msg, HeroSummary):
        if session.phase is not SessionPhase.RUNNING:
            return _end(session, "protocol violation: HeroSummary outside a run")
        session.peer_summary = msg
        return session, []

    if isinstance(msg, (NodeChoice, HeroAction)):
        if session.phase is not SessionPhase.RUNNING:
            return _end(session, f"protocol violation: {type(msg).__name__} outside a run")
        try:
            if isinstance(msg, NodeChoice):
                new_run = enter_node(session.run, msg.node_id)
            else:
                new_run = _apply_hero_action(session.run, msg)
            new_run = _advance_combat(new_run)
        except (RunError, CombatError, UnknownIdError, MalformedMessageError) as exc:
            return session, [Reject(str(exc))]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            return session, [Reject(f"malformed action: {exc}")]
        session.run = new_run
        session.last_seen_sequence += 1
        return session, [_snapshot(session)]

    return _end(session, f"protocol violation: unexpected {type(msg).__name__}")


# ---------------------------------------------------------------------------
# Guest
# ---------------------------------------------------------------------------


def guest_handle(session: SessionState, msg: WireMessage) -> tuple[SessionState, list[WireMessage]]:
    """Apply one incoming message to the guest session.

    Stale snapshots (sequence not beyond the last applied one) are dropped
    and counted; fresher ones replace party, scene, and heroes wholesale.
    """
    if session.role is not SessionRole.GUEST:
        raise NetError("guest_handle needs a guest session")
    if session.phase is SessionPhase.ENDED:
        return session, []
    if isinstance(msg, Bye):
        session.phase = SessionPhase.ENDED
        return session, []
    if isinstance(msg, Ping):
        return session, [Pong()]
    if isinstance(msg, Pong):
        return session, []
    if isinstance(msg, Reject):
        session.last_reject = msg.reason
        return session, []

    if isinstance(msg, Welcome):
        if session.phase is not SessionPhase.AWAITING_HELLO:
            return _end(session, "protocol violation: unexpected Welcome")
        session.assigned_hero_index = msg.assigned_hero_index
        session.phase = SessionPhase.LOBBY
        return session, []

    if isinstance(msg, Start):
        if session.phase is not SessionPhase.LOBBY:
            return _end(session, "protocol violation: unexpected Start")
        if msg.content_hash != session.content_fingerprint:
            return _end(session, "content mismatch")
        try:
            session.run = start_run(msg.seed, msg.config, session.db)
        except RunError as exc:
            return _end(session, f"invalid start: {exc}")
        session.phase = SessionPhase.RUNNING
        session.last_seen_sequence = 0
        return session, []

    if isinstance(msg, StateUpdate):
        if session.phase is not SessionPhase.RUNNING:
            return _end(session, "protocol violation: StateUpdate outside a run")
        if msg.sequence <= session.last_seen_sequence:
            session.stale_dropped += 1
            return session, []
        try:
            party = party_from_dict(msg.party)
            scene = scene_from_dict(msg.scene, session.db)
            heroes = [hero_from_dict(h, session.db) for h in msg.heroes]
        except (MalformedSaveError, UnknownIdError) as exc:
            return _end(session, f"malformed snapshot: {exc}")
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            return _end(session, f"malformed snapshot: {exc}")
        own = session.assigned_hero_index
        before = None
        if 0 <= own < len(session.run.heroes):
            mine = session.run.heroes[own]
            before = (mine.hp, mine.max_hp, mine.credits)
        session.run.party = party
        session.run.scene = scene
        session.run.heroes = heroes
        session.last_seen_sequence = msg.sequence
        outbound: list[WireMessage] = []
        if 0 <= own < len(heroes):
            mine = heroes[own]
            if (mine.hp, mine.max_hp, mine.credits) != before:
                outbound.append(HeroSummary(own, mine.hp, mine.max_hp, mine.credits))
        return session, outbound

    return _end(session, f"protocol violation: unexpected {type(msg).__name__}")


# ---------------------------------------------------------------------------
# Deterministic two-session loopback
# ---------------------------------------------------------------------------


class LoopbackSession:
    """A host and a guest joined by in-memory ordered queues.

    One tick delivers the messages queued at its start, then lets the host
    act, then the guest, each steered by the actor policy for its own
    hero.  Everything crosses the queues wire-encoded, so ticking a
    session exercises the full codec path.  All steps are deterministic.
    """

    def __init__(
        self,
        seed: int,
        config: RunConfig,
        db: ContentDb,
        weights: PolicyWeights = DEFAULT_WEIGHTS,
        guest_name: str = "guest",
    ):
        self.weights = weights
        self.host = new_host_session(db)
        self.guest = new_guest_session(db)
        self.to_host: list[bytes] = []
        self.to_guest: list[bytes] = []
        self._guest_acted_seq = 0
        self.guest, hello = guest_hello(self.guest, guest_name)
        self._queue_to_host(hello)
        self._pump()
        self.host, opening = host_start(self.host, seed, config)
        self._queue_to_guest(opening)
        self._pump()

    # -- plumbing ----------------------------------------------------------

    def _queue_to_host(self, messages: list[WireMessage]) -> None:
        self.to_host.extend(encode_message(m) for m in messages)

    def _queue_to_guest(self, messages: list[WireMessage]) -> None:
        self.to_guest.extend(encode_message(m) for m in messages)

    def _deliver_once(self) -> None:
        inbound_host, self.to_host = self.to_host, []
        inbound_guest, self.to_guest = self.to_guest, []
        for raw in inbound_host:
            msg, rest = decode_message(raw)
            if rest:
                raise MalformedMessageError("queue entries hold exactly one message")
            self.host, out = host_handle(self.host, msg)
            self._queue_to_guest(out)
        for raw in inbound_guest:
            msg, rest = decode_message(raw)
            if rest:
                raise MalformedMessageError("queue entries hold exactly one message")
            self.guest, out = guest_handle(self.guest, msg)
            self._queue_to_host(out)

    def _pump(self) -> None:
        while self.to_host or self.to_guest:
            self._deliver_once()

    # -- acting ------------------------------------------------------------

    def _decide(self, run: RunState, hero_index: int) -> Optional[WireMessage]:
        scene = run.scene
        if scene.kind is SceneKind.IN_COMBAT:
            combat = scene.combat
            if combat.phase.kind is PhaseKind.HERO_TURN and combat.phase.hero_index == hero_index:
                action = choose_combat_action(combat, hero_index, self.weights)
                return HeroAction(hero_index, scene.kind.value, combat_action_payload(action))
            return None
        try:
            decision = choose_progression(run)
        except NoProgressionError:
            return None
        if decision.kind is ProgressionKind.ENTER_NODE:
            # the route is the host's call; guests only watch it happen
            return NodeChoice(decision.node_id) if hero_index == 0 else None
        if decision.hero_index != hero_index:
            return None
        return progression_action(decision, scene.kind)

    def _host_act(self) -> int:
        run = self.host.run
        if run is None or run.finished or self.host.phase is not SessionPhase.RUNNING:
            return 0
        msg = self._decide(run, 0)
        if msg is None:
            return 0
        self.host, out = host_handle(self.host, msg)
        self._queue_to_guest(out)
        return 1

    def _guest_act(self) -> int:
        run = self.guest.run
        if run is None or run.finished or self.guest.phase is not SessionPhase.RUNNING:
            return 0
        if self.guest.last_seen_sequence == self._guest_acted_seq:
            return 0
        msg = self._decide(run, self.guest.assigned_hero_index)
        if msg is None:
            return 0
        self._guest_acted_seq = self.guest.last_seen_sequence
        self._queue_to_host([msg])
        return 1

    def deliver(self) -> None:
        """First half of a tick: hand over everything queued at its start."""
        self._deliver_once()

    def act(self) -> int:
        """Second half of a tick: host acts, then guest; returns actions
        produced.  Between deliver() and act(), `quiescent` means every
        message has been processed and nothing is in flight, which is when
        guest and host snapshots must agree."""
        return self._host_act() + self._guest_act()

    def tick(self) -> int:
        """Deliver pending messages, let each side act; returns actions
        produced."""
        self.deliver()
        return self.act()

    # -- observation -------------------------------------------------------

    @property
    def quiescent(self) -> bool:
        return not self.to_host and not self.to_guest

    @property
    def finished(self) -> bool:
        return self.host.run is not None and self.host.run.finished


# ---------------------------------------------------------------------------
# Soak
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SoakLimits:
    idle_limit_ticks: int
    budget_ticks: int


DEFAULT_SOAK_LIMITS = SoakLimits(idle_limit_ticks=50, budget_ticks=200_000)


@dataclass(frozen=True)
class SoakReport:
    completed: int
    stalls: int
    progress_timeouts: int
    first_stall_seed: Optional[int]


def drive_session(session: LoopbackSession, limits: SoakLimits) -> str:
    """Tick one loopback session to a verdict: "completed" when the host
    run finishes, "stall" after idle_limit_ticks without an action, or
    "progress_timeout" when the budget runs out first."""
    idle = 0
    for _ in range(limits.budget_ticks):
        actions = session.tick()
        idle = 0 if actions else idle + 1
        if session.finished:
            return "completed"
        if idle >= limits.idle_limit_ticks:
            return "stall"
    return "progress_timeout"


def soak_run(
    seeds: list[int],
    config: RunConfig,
    db: ContentDb,
    weights: PolicyWeights = DEFAULT_WEIGHTS,
    limits: SoakLimits = DEFAULT_SOAK_LIMITS,
) -> SoakReport:
    """Drive a host/guest pair per seed and bucket every outcome; nothing
    raises, every failure is a report category."""
    if limits.idle_limit_ticks < 1 or limits.budget_ticks < 1:
        raise ValueError("soak limits must be positive")
    completed = stalls = timeouts = 0
    first_stall: Optional[int] = None
    for seed in seeds:
        verdict = drive_session(LoopbackSession(seed, config, db, weights), limits)
        if verdict == "completed":
            completed += 1
        elif verdict == "stall":
            stalls += 1
            if first_stall is None:
                first_stall = seed
        else:
            timeouts += 1
    return SoakReport(
        completed=completed,
        stalls=stalls,
        progress_timeouts=timeouts,
        first_stall_seed=first_stall,
    )
