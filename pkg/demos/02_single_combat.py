"""
One combat, turn by turn
========================

Walks into the first fight of a seeded run and plays a couple of hands,
printing what a client would render: hands, energy, enemy intents, and
the three axes that scale everything.
"""

from mazo.baseline import baseline_db
from mazo.combat import CombatAction, Outcome, PhaseKind, combat_outcome, legal_actions
from mazo.content import lookup_card, lookup_enemy
from mazo.mapgen import RoomKind
from mazo.run import RunConfig, SceneKind, advance_enemy_phase, available_moves, combat_action, enter_node, start_run

db = baseline_db()
run = start_run(seed=11, config=RunConfig(players=1), db=db)

# the first layer of the first sector is always plain combat
first = available_moves(run)[0]
assert run.party.map.node(first).kind is RoomKind.COMBAT
run = enter_node(run, first)
assert run.scene.kind is SceneKind.IN_COMBAT


def show(state):
    hero = state.heroes[0]
    axes = hero.combatant.axes
    print(f"  turn {state.turn_number}, energy {hero.energy}, "
          f"hp {hero.combatant.hp}/{hero.combatant.max_hp}, "
          f"shield {hero.combatant.shield}, "
          f"axes F{axes.focus:+d} R{axes.rhythm:+d} M{axes.momentum:+d}")
    print("  hand:", ", ".join(
        f"{card}({lookup_card(db, card).cost})" for card in hero.hand))
    for i, enemy in enumerate(state.enemies):
        if not enemy.combatant.alive:
            print(f"  enemy {i} {enemy.def_id}: down")
            continue
        spec = lookup_enemy(db, enemy.def_id)
        intent = spec.intent_cycle[enemy.cycle_pos % len(spec.intent_cycle)]
        print(f"  enemy {i} {enemy.def_id}: hp {enemy.combatant.hp}, "
              f"next {intent.kind.value} {intent.magnitude}")


while combat_outcome(run.scene.combat) is Outcome.ONGOING:
    combat = run.scene.combat
    if combat.phase.kind is PhaseKind.ENEMY_TURN:
        print("enemy turn")
        run = advance_enemy_phase(run)
        continue
    print("hero turn")
    show(combat)
    # play the first affordable card at the first living enemy, else pass
    moves = legal_actions(combat, 0)
    plays = [m for m in moves if m.hand_index >= 0]
    choice = plays[0] if plays else CombatAction.end_turn()
    if plays:
        print(f"  -> play {combat.heroes[0].hand[choice.hand_index]}")
    else:
        print("  -> end turn")
    run = combat_action(run, 0, choice)

print("outcome:", combat_outcome(run.scene.combat).value)
