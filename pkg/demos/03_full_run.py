"""
A whole run on autopilot
========================

The bundled policy plays a complete run from one seed, and playing the
same seed again reproduces it bit for bit.
"""

from mazo.actor import play_run
from mazo.baseline import baseline_db
from mazo.run import RunConfig

db = baseline_db()
record = play_run(seed=7, config=RunConfig(players=1), db=db)

print("seed          :", record.seed)
print("outcome       :", record.outcome.value)
print("combats       :", record.combats)
print("elites        :", record.elites)
print("bosses        :", record.bosses)
print("final hp      :", record.final_hp)
print("heroes alive  :", record.surviving_heroes)
print("steps taken   :", record.steps)

# determinism is the whole point: the replay is equal, field for field
replay = play_run(seed=7, config=RunConfig(players=1), db=db)
print("replay equal  :", replay == record)

# a different seed is a different story
other = play_run(seed=8, config=RunConfig(players=1), db=db)
print("seed 8 outcome:", other.outcome.value, f"({other.combats} combats)")
