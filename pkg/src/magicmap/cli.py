"""Command-line driver: compile netlists to MAGIC crossbar programs and summarise them."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import analytics
from .aig import Aig, from_raw
from .benchgen import BENCHMARKS
from .lut_mapper import LutNetlist, luts_from_raw, lut_netlist_to_raw
from .netlist_io import NetlistError, emit_blif, mapping_report, parse_aiger_ascii, parse_blif
from .pipeline import CompileResult, FlowConfig, compile_luts, synthesize
from .placer import CapacityError
from .scheduler import emit_trace

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAPACITY, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> Tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        rows, cols = int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError("expected ROWSxCOLS, e.g. 1024x1024") from None
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError("grid dimensions must be positive")
    return rows, cols


def _k(text: str) -> int:
    k = int(text)
    if not 2 <= k <= 10:
        raise argparse.ArgumentTypeError("k must lie in [2, 10]")
    return k


def _verify(text: str) -> str:
    if text in ("exhaustive", "off", "auto"):
        return text
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected exhaustive, off or a vector count") from None
    if n < 1:
        raise argparse.ArgumentTypeError("vector count must be positive")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="magicmap", description=__doc__)
    p.add_argument("inputs", nargs="+", help="BLIF or ASCII AIGER files, or bench:NAME for a generated benchmark")
    p.add_argument("--k", type=_k, action="append", help="LUT size; repeat for a sweep (default 2 3 7 10)")
    p.add_argument("--mode", choices=["hipe", "said-baseline", "both"], default="both")
    p.add_argument("--grid", type=_grid, default=(1024, 1024), metavar="RxC")
    p.add_argument("--verify", type=_verify, default="auto",
                   help="exhaustive, off, or a random vector count (default: exhaustive up to 12 inputs, else 1000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", type=Path, help="write all mapping reports as one JSON document")
    p.add_argument("--bitlet-config", type=Path, help="key = value file with throughput/energy parameters")
    p.add_argument("--emit-blif", type=Path, help="directory for the mapped LUT netlists")
    p.add_argument("--emit-trace", type=Path, help="directory for per-cycle micro-op traces")
    p.add_argument("--lut-netlist", action="store_true",
                   help="treat BLIF inputs as finished LUT netlists (one LUT per .names, no synthesis)")
    p.add_argument("--no-balance", action="store_true", help="skip AND balancing and SOP-balanced cut ranking")
    p.add_argument("--no-share", action="store_true", help="disable shared alignment routing in hipe mode")
    p.add_argument("--charge-init", action="store_true", help="charge one INIT cycle before every cycle")
    return p


def _load(source: str, as_luts: bool) -> Tuple[str, Aig, Optional[LutNetlist]]:
    if source.startswith("bench:"):
        name = source[len("bench:"):]
        if name not in BENCHMARKS:
            raise NetlistError("syntax", f"unknown benchmark {name!r}; known: {', '.join(BENCHMARKS)}")
        raw = BENCHMARKS[name]()
        return name, from_raw(raw), luts_from_raw(raw) if as_luts else None
    path = Path(source)
    text = path.read_text()
    if text.lstrip().startswith("aag"):
        if as_luts:
            raise NetlistError("syntax", "--lut-netlist needs BLIF input")
        return path.stem, parse_aiger_ascii(text), None
    raw = parse_blif(text)
    return path.stem, from_raw(raw), luts_from_raw(raw) if as_luts else None


def _summary(rows: List[Tuple[str, Optional[int], dict]], pareto: dict, model_lines: List[str]) -> str:
    modes = sorted({m for _, _, d in rows for m in d}, key=lambda m: m != "said-baseline")
    head = f"{'benchmark':<14}{'k':>4}" + "".join(f"{m + ' cycles':>22}{m + ' mems':>20}" for m in modes)
    if len(modes) == 2:
        head += f"{'speedup':>10}{'area-saving':>13}"
    out = [head]
    for name, k, d in rows:
        line = f"{name:<14}{'-' if k is None else k:>4}"
        for m in modes:
            st = d[m].stats
            line += f"{st.cycles:>22}{st.mems:>20}"
        if len(modes) == 2:
            b, h = d["said-baseline"].stats, d["hipe"].stats
            line += f"{b.cycles / h.cycles:>10.2f}{b.mems / h.mems:>13.2f}"
        out.append(line)
    for (name, mode), front in sorted(pareto.items()):
        pts = ", ".join(f"k={k}: ({s.cycles}, {s.mems})" for k, s in front)
        out.append(f"pareto {name} [{mode}]: {pts}")
    out.extend(model_lines)
    return "\n".join(out) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    ks = args.k or [2, 3, 7, 10]
    modes = ["said-baseline", "hipe"] if args.mode == "both" else [args.mode]
    base = FlowConfig(grid=args.grid, balance=not args.no_balance, sop_balance=not args.no_balance,
                      share=not args.no_share, charge_init=args.charge_init, verify=args.verify, seed=args.seed)
    params = None
    if args.bitlet_config is not None:
        try:
            params = analytics.load_params(args.bitlet_config)
        except (OSError, ValueError) as e:
            print(f"error: bitlet config: {e}", file=sys.stderr)
            return EXIT_USAGE

    rows: List[Tuple[str, Optional[int], dict]] = []
    reports = []
    failed = False
    for source in args.inputs:
        try:
            name, aig, fixed = _load(source, args.lut_netlist)
        except OSError as e:
            print(f"input-error: {source}: {e.strerror or e}", file=sys.stderr)
            return EXIT_PARSE
        except NetlistError as e:
            print(f"parse error in {source}: {e}", file=sys.stderr)
            return EXIT_PARSE
        for k in ([None] if fixed is not None else ks):
            luts = fixed if fixed is not None else synthesize(aig, k, base)
            per_mode = {}
            for mode in modes:
                cfg = replace(base, mode=mode)
                try:
                    res = compile_luts(luts, aig, cfg, k)
                except CapacityError as e:
                    print(f"{name} k={k} {mode}: {e}", file=sys.stderr)
                    return EXIT_CAPACITY
                if res.violations:
                    print(f"{name} k={k} {mode}: illegal schedule: {res.violations[0]}", file=sys.stderr)
                    return EXIT_VERIFY
                if res.verdict is not None and not res.verdict.passed:
                    ins, want, got = res.verdict.counterexample
                    print(f"{name} k={k} {mode}: verification FAILED on inputs {ins}: "
                          f"expected {want}, got {got}", file=sys.stderr)
                    failed = True
                per_mode[mode] = res
                reports.append(mapping_report(res, name))
                tag = f"{name}" + ("" if k is None else f"_k{k}") + f"_{mode}"
                if args.emit_trace is not None:
                    args.emit_trace.mkdir(parents=True, exist_ok=True)
                    (args.emit_trace / f"{tag}.trace").write_text(emit_trace(res.schedule, res.placement))
            if args.emit_blif is not None:
                args.emit_blif.mkdir(parents=True, exist_ok=True)
                tag = name + ("" if k is None else f"_k{k}")
                (args.emit_blif / f"{tag}.blif").write_text(emit_blif(lut_netlist_to_raw(luts, tag)))
            rows.append((name, k, per_mode))
    if failed:
        return EXIT_VERIFY

    pareto = {}
    for mode in modes:
        by_name = {}
        for name, k, d in rows:
            if k is not None:
                by_name.setdefault(name, []).append((k, d[mode].stats))
        for name, pts in by_name.items():
            if len(pts) > 1:
                pareto[(name, mode)] = analytics.pareto_sweep(pts)
    model_lines = []
    if params is not None:
        for name, k, d in rows:
            for mode, res in d.items():
                m = analytics.model_throughput_energy(res.stats, params, res.schedule.op_count())
                model_lines.append(
                    f"model {name} k={k} [{mode}]: pim {m.pim_throughput:.4g}/s {m.pim_energy:.4g} J, "
                    f"cpu {m.cpu_throughput:.4g}/s {m.cpu_energy:.4g} J")
    sys.stdout.write(_summary(rows, pareto, model_lines))
    if args.report is not None:
        doc = {"reports": reports,
               "pareto": {f"{n}|{m}": [[k, s.cycles, s.mems] for k, s in f] for (n, m), f in sorted(pareto.items())}}
        args.report.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
