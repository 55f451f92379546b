"""
Batch probes: playing a hundred seeds and reading the report
============================================================
"""

from mazo.actor import aggregate, play_run
from mazo.baseline import baseline_db
from mazo.cli import _actor_text
from mazo.run import RunConfig

db = baseline_db()

# the same probe the mazo-actor command runs, here as a library call
records = [play_run(seed, RunConfig(players=1), db) for seed in range(1, 101)]
report = aggregate(records)
print("single player, seeds 1-100")
print(_actor_text(report))
print()

# two heroes share the fights, which shows up immediately in the numbers
duo = aggregate([play_run(seed, RunConfig(players=2), db) for seed in range(1, 101)])
print("two players, seeds 1-100")
print(_actor_text(duo))
print()

# per-seed records stay available for anything the report does not cover
longest = max(records, key=lambda r: r.steps)
print(f"longest run: seed {longest.seed}, {longest.steps} steps, {longest.outcome.value}")
