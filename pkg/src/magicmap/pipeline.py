"""End-to-end compilation: netlist -> LUTs -> supergates -> crossbar program."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .aig import Aig, and_balance
from .crossbar_sim import Verdict, verify_equivalence
from .lut_mapper import LutNetlist, map_luts
from .placer import DEFAULT_GRID, Placement, place_supergates, route_alignment, share_align_memristors
from .scheduler import Schedule, Stats, build_schedule, check_legality, count_stats
from .supergate import NonNetlist, build_non, refine_cascades


@dataclass
class FlowConfig:
    mode: str = "hipe"
    grid: Tuple[int, int] = DEFAULT_GRID
    balance: bool = True          # AND-balance the AIG before mapping
    sop_balance: bool = True      # rank cuts by SOP-balanced depth
    cut_limit: int = 8
    share: bool = True            # hipe only: shared alignment routing
    charge_init: bool = False
    verify: str = "auto"          # "auto", "exhaustive", "off" or a vector count
    seed: int = 0
    exhaustive_limit: int = 12


@dataclass
class CompileResult:
    mode: str
    k: Optional[int]
    luts: LutNetlist
    non: NonNetlist
    placement: Placement
    schedule: Schedule
    stats: Stats
    verdict: Optional[Verdict] = None
    violations: list = field(default_factory=list)


def synthesize(aig: Aig, k: int, cfg: FlowConfig = FlowConfig()) -> LutNetlist:
    src = and_balance(aig) if cfg.balance else aig
    return map_luts(src, k, cfg.cut_limit, use_sop_balance=cfg.sop_balance)


def translate(luts: LutNetlist, mode: str) -> NonNetlist:
    non = build_non(luts)
    return refine_cascades(non) if mode == "hipe" else non


def _schedule_cost(cfg: FlowConfig):
    def cost(pl: Placement):
        s = build_schedule(pl, charge_init=cfg.charge_init)
        return len(s), pl.mems()
    return cost


def map_to_crossbar(luts: LutNetlist, cfg: FlowConfig = FlowConfig()) -> Tuple[NonNetlist, Placement, Schedule]:
    non = translate(luts, cfg.mode)
    pl = place_supergates(non, cfg.grid, cfg.mode)
    if cfg.mode == "hipe" and cfg.share:
        pl = share_align_memristors(pl, non, cost=_schedule_cost(cfg))
    else:
        pl = route_alignment(pl, non, share=False)
    sched = build_schedule(pl, non, charge_init=cfg.charge_init)
    return non, pl, sched


def verification_depth(cfg: FlowConfig, pi_count: int):
    if cfg.verify == "off":
        return None
    if cfg.verify == "auto":
        return "exhaustive" if pi_count <= cfg.exhaustive_limit else 1000
    if cfg.verify == "exhaustive":
        return "exhaustive"
    return int(cfg.verify)


def compile_luts(luts: LutNetlist, reference: Aig, cfg: FlowConfig = FlowConfig(),
                 k: Optional[int] = None) -> CompileResult:
    non, pl, sched = map_to_crossbar(luts, cfg)
    res = CompileResult(cfg.mode, k, luts, non, pl, sched, count_stats(sched, pl))
    res.violations = check_legality(sched, pl)
    depth = verification_depth(cfg, reference.pi_count)
    if depth is not None:
        res.verdict = verify_equivalence(sched, pl.loads, pl.po_cells, reference, depth,
                                         seed=cfg.seed, consts=dict(non.consts))
    return res


def compile_aig(aig: Aig, k: int, cfg: FlowConfig = FlowConfig()) -> CompileResult:
    return compile_luts(synthesize(aig, k, cfg), aig, cfg, k)
