"""k sweep over the generated benchmarks: cycles/mems per mode and the Pareto front per benchmark."""

import argparse
import time

from magicmap.aig import from_raw
from magicmap.analytics import BitletParams, load_params, model_throughput_energy, pareto_sweep
from magicmap.benchgen import BENCHMARKS
from magicmap.pipeline import FlowConfig, compile_luts, synthesize

ap = argparse.ArgumentParser()
ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 7, 10])
ap.add_argument("--bench", nargs="+", default=list(BENCHMARKS))
ap.add_argument("--bitlet-config")
args = ap.parse_args()
params = load_params(args.bitlet_config) if args.bitlet_config else BitletParams()

print(f"{'bench':<11}{'k':>3}{'said':>12}{'hipe':>12}{'speedup':>9}  verified")
for name in args.bench:
    aig = from_raw(BENCHMARKS[name]())
    fronts = {"hipe": [], "said-baseline": []}
    for k in args.k:
        t0 = time.perf_counter()
        luts = synthesize(aig, k)
        res = {m: compile_luts(luts, aig, FlowConfig(mode=m), k) for m in fronts}
        for m, r in res.items():
            fronts[m].append((k, r.stats))
        s, h = res["said-baseline"].stats, res["hipe"].stats
        ok = all(r.verdict.passed and not r.violations for r in res.values())
        print(f"{name:<11}{k:>3}{f'{s.cycles}/{s.mems}':>12}{f'{h.cycles}/{h.mems}':>12}"
              f"{s.cycles / h.cycles:>9.2f}  {ok} ({time.perf_counter() - t0:.2f}s)")
    for m, pts in fronts.items():
        front = pareto_sweep(pts)
        best_k, best = front[0]
        model = model_throughput_energy(best, params)
        print(f"  pareto [{m}]: " + ", ".join(f"k={k} ({st.cycles},{st.mems})" for k, st in front)
              + f"; fastest k={best_k}: {model.pim_throughput / model.cpu_throughput:.3g}x cpu throughput")
