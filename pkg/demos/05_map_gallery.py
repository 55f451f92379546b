"""
Map gallery: layered sector graphs from a seed
==============================================

Three seeds, rendered layer by layer.  Every map is a DAG: edges only run
to the next layer, each sector funnels into its one boss, and the boss
bridges into the next sector.
"""

from mazo.mapgen import RoomKind, generate_map, validate_map
from mazo.run import RunConfig

GLYPH = {
    RoomKind.COMBAT: "C",
    RoomKind.ELITE: "E",
    RoomKind.SHOP: "S",
    RoomKind.REST: "R",
    RoomKind.EVENT: "?",
    RoomKind.TREASURE: "T",
    RoomKind.BOSS: "B",
}

config = RunConfig()
for seed in (1, 2, 3):
    graph = generate_map(seed, config)
    print(f"seed {seed}: {len(graph.nodes)} rooms, "
          f"{len(graph.edges)} corridors, "
          f"violations {validate_map(graph, config)}")
    for sector in range(config.sector_count):
        rows = []
        for layer in range(config.layers_per_sector + 1):
            kinds = [GLYPH[n.kind] for n in graph.nodes
                     if n.sector == sector and n.layer == layer]
            rows.append(" ".join(kinds))
        print(f"  sector {sector}: " + " | ".join(rows))
    print()

print("legend: C combat, E elite, S shop, R rest, ? event, T treasure, B boss")
