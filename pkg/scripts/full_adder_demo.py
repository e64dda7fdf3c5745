"""Compile the bundled full-adder LUT netlist in both modes and print the traces."""

from pathlib import Path

from magicmap.aig import from_raw
from magicmap.lut_mapper import luts_from_raw
from magicmap.netlist_io import parse_blif
from magicmap.pipeline import FlowConfig, compile_luts
from magicmap.scheduler import emit_trace

raw = parse_blif((Path(__file__).resolve().parent.parent / "benchmarks" / "full_adder.blif").read_text())
luts, ref = luts_from_raw(raw), from_raw(raw)

for mode in ("said-baseline", "hipe"):
    res = compile_luts(luts, ref, FlowConfig(mode=mode, grid=(32, 32)))
    logic = sum(1 for c in res.schedule.cycles if c[0].kind.startswith("NOR"))
    print(f"== {mode}: {res.stats.cycles} cycles ({logic} logic, {res.stats.cycles - logic} copy), "
          f"{res.stats.mems} memristors, verified={res.verdict.passed}")
    for tile in sorted(res.placement.tiles.values(), key=lambda t: (t.level, t.rows[0])):
        print(f"   S{tile.level} sid={tile.sid} rows {tile.rows[0]}-{tile.rows[1]}"
              f"{' flipped' if tile.flipped else ''}{' shares ' + str(tile.shared) if tile.shared else ''}")
    print(emit_trace(res.schedule, res.placement))
