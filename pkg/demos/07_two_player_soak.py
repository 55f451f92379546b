"""
Two peers, one authoritative run
================================

A host and a guest play a whole run over in-memory queues: the guest
submits actions for its hero, the host applies them and streams back
numbered snapshots.  Soak mode drives many such sessions and buckets how
each one ended.
"""

from mazo.baseline import baseline_db
from mazo.netsync import DEFAULT_SOAK_LIMITS, LoopbackSession, SoakLimits, soak_run
from mazo.run import RunConfig

db = baseline_db()
config = RunConfig(players=2)

session = LoopbackSession(seed=3, config=config, db=db)
print("after handshake: host", session.host.phase.value,
      "/ guest", session.guest.phase.value,
      "as hero", session.guest.assigned_hero_index)

ticks = 0
while not session.finished:
    session.deliver()
    if session.quiescent:
        # nothing in flight: the guest's picture matches the host's
        assert session.guest.run.party == session.host.run.party
    session.act()
    ticks += 1
print(f"run finished in {ticks} ticks, "
      f"snapshots seen {session.guest.last_seen_sequence}, "
      f"stale dropped {session.guest.stale_dropped}")

# the soak harness plays five seeds and reports verdict counts
print()
print("soak, generous budget:", soak_run(list(range(1, 6)), config, db))
print("soak, budget of one  :", soak_run(
    list(range(1, 6)), config, db,
    limits=SoakLimits(idle_limit_ticks=DEFAULT_SOAK_LIMITS.idle_limit_ticks, budget_ticks=1)))
