"""
Saving mid-run and picking up where you left off
================================================

Saves are canonical JSON documents.  Loading one restores the run,
including every random stream position, so a resumed run and an
uninterrupted one are the same run.
"""

import json

from mazo.actor import apply_progression, choose_progression, play_run_traced
from mazo.baseline import baseline_db
from mazo.persist import load_run, save_run
from mazo.run import RunConfig, start_run

db = baseline_db()
run = start_run(seed=5, config=RunConfig(players=1), db=db)

blob = save_run(run)
doc = json.loads(blob)
print("save size:", len(blob), "bytes, version", doc["version"])
print("state keys:", ", ".join(sorted(doc["state"])))
hero = doc["state"]["heroes"][0]
print("hero hp:", hero["hp"], "/ credits:", hero["credits"])

# the save is canonical: saving a loaded save is byte-identical
restored = load_run(blob, db)
print("round trip byte-equal:", save_run(restored) == blob)

# streams are part of the state, so the restored run and the original
# make the same choices from here on
print("restored equals original:", restored == run)
run = apply_progression(run, choose_progression(run))
restored = apply_progression(restored, choose_progression(restored))
print("one move later, still equal:", restored == run)
print("scene now:", run.scene.kind.value)

# for the whole story at once: the autoplay driver returns the final
# state, and its save equals the save of any identically-seeded replay
record, final = play_run_traced(seed=5, config=RunConfig(players=1), db=db)
print("uninterrupted run:", record.outcome.value,
      f"after {record.steps} steps, hp {record.final_hp}")
replay_record, replay_final = play_run_traced(seed=5, config=RunConfig(players=1), db=db)
print("replay save byte-equal:", save_run(final) == save_run(replay_final))
