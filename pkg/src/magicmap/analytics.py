"""Pareto selection over k and a first-order PIM vs CPU throughput/energy model.

The model follows the usual limiting-factor argument: the crossbar is bound
by its cycle count and op count, the CPU by the bits it moves to and from
memory. All parameter values are user configuration; the defaults below are
round illustrative numbers, not measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import List, Sequence, Tuple

from .scheduler import Stats


@dataclass(frozen=True)
class BitletParams:
    pim_cycle_time: float = 10e-9          # seconds per crossbar cycle
    pim_energy_per_op: float = 1e-13       # joules per MAGIC op
    arrays_in_parallel: int = 1024
    cpu_bandwidth: float = 1e11            # bits per second
    cpu_energy_per_bit: float = 1e-11      # joules per transferred bit
    io_bits: int = 64                      # bits moved per evaluation

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be strictly positive")


def load_params(path: str | Path, base: BitletParams = BitletParams()) -> BitletParams:
    """Read ``key = value`` lines; '#' starts a comment. Unknown keys are an error."""
    kinds = {f.name: f.type for f in fields(BitletParams)}
    vals = {f.name: getattr(base, f.name) for f in fields(BitletParams)}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in kinds:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        vals[key] = int(float(value)) if kinds[key] in (int, "int") else float(value)
    return BitletParams(**vals)


@dataclass(frozen=True)
class ModelResult:
    pim_throughput: float     # evaluations per second
    cpu_throughput: float
    pim_energy: float         # joules per evaluation batch
    cpu_energy: float


def model_throughput_energy(stats: Stats, params: BitletParams, total_ops: int | None = None) -> ModelResult:
    """``total_ops`` defaults to the cycle count (one op per cycle) when unknown."""
    if stats.cycles <= 0:
        raise ValueError("a schedule needs at least one cycle")
    ops = stats.cycles if total_ops is None else total_ops
    return ModelResult(
        pim_throughput=params.arrays_in_parallel / (stats.cycles * params.pim_cycle_time),
        cpu_throughput=params.cpu_bandwidth / params.io_bits,
        pim_energy=ops * params.pim_energy_per_op,
        cpu_energy=params.io_bits * params.cpu_energy_per_bit,
    )


def dominates(a: Stats, b: Stats) -> bool:
    return a.cycles <= b.cycles and a.mems <= b.mems and (a.cycles, a.mems) != (b.cycles, b.mems)


def pareto_sweep(results: Sequence[Tuple[int, Stats]]) -> List[Tuple[int, Stats]]:
    """Non-dominated (k, stats) points sorted by cycles; equal points are all kept."""
    if not results:
        raise ValueError("need at least one result")
    pts = sorted(results, key=lambda r: (r[1].cycles, r[1].mems, r[0]))
    front: List[Tuple[int, Stats]] = []
    best_mems = None
    for k, st in pts:
        if best_mems is None or st.mems < best_mems:
            front.append((k, st))
            best_mems = st.mems
        elif st.mems == best_mems and (st.cycles, st.mems) == (front[-1][1].cycles, front[-1][1].mems):
            front.append((k, st))
    return front
