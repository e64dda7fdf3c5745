"""Write the generated benchmark netlists to benchmarks/*.blif."""

from pathlib import Path

from magicmap.benchgen import BENCHMARKS
from magicmap.netlist_io import emit_blif

out = Path(__file__).resolve().parent.parent / "benchmarks"
out.mkdir(exist_ok=True)
for name, make in BENCHMARKS.items():
    (out / f"{name}.blif").write_text(emit_blif(make()))
    print(out / f"{name}.blif")
