"""Tile placement of supergates on a crossbar and routing of alignment copies.

Coordinates are ``(row, col)``. Column band 0 holds one column per primary
input or constant; band ``l`` holds the level-``l`` tiles. A tile's term ``t``
sits on one row: its literal cells are in the band's input columns and its
term output in the band's last column. The outer NOR and the optional final
NOT run down that last column.

Every cell is written at most once, so a cell holds one signal for the whole
evaluation. Cell polarity ``True`` means the cell holds the signal itself,
``False`` its complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .supergate import NonNetlist, Supergate

Cell = Tuple[int, int]
DEFAULT_GRID = (1024, 1024)
MODES = ("hipe", "said-baseline")


class CapacityError(ValueError):
    def __init__(self, level: int, message: str):
        self.kind = "capacity-exceeded"
        self.level = level
        super().__init__(f"capacity-exceeded: level {level}: {message}")


@dataclass(frozen=True)
class CellRole:
    role: str                      # input-copy, term-output, gate-output, aux, free
    signal: int = -1
    polarity: Optional[bool] = None
    birth: Optional[int] = None
    death: Optional[int] = None


FREE = CellRole("free")


@dataclass(frozen=True)
class Tile:
    sid: int
    level: int
    origin: int
    flipped: bool
    terms: Tuple[Tuple[Tuple[int, bool], ...], ...]   # in row order
    literal_cells: Tuple[Tuple[Cell, ...], ...]       # parallel to terms
    term_cells: Tuple[Cell, ...]
    gate_cell: Cell                                   # outer NOR output, polarity gate_polarity
    final_cell: Optional[Cell] = None                 # its complement when the NOT is kept
    shared: Optional[Cell] = None                     # producer output reused as a literal
    gate_polarity: bool = False

    @property
    def rows(self) -> Tuple[int, int]:
        rs = [c[0] for c in self.term_cells] + [self.gate_cell[0]]
        if self.final_cell is not None:
            rs.append(self.final_cell[0])
        return min(rs), max(rs)


@dataclass(frozen=True)
class Copy:
    src: Cell
    dst: Cell


@dataclass
class Placement:
    grid_rows: int
    grid_cols: int
    mode: str
    tiles: Dict[int, Tile]
    band_start: Dict[int, int]          # level -> first column; level 0 is the source band
    source_cols: Dict[int, int]         # PI / constant signal -> its band-0 column
    cells: Dict[Cell, CellRole] = field(default_factory=dict)
    loads: Dict[Cell, int] = field(default_factory=dict)      # cell -> source signal loaded before cycle 1
    copies: List[Copy] = field(default_factory=list)
    alignment_aux: Dict[int, List[Cell]] = field(default_factory=dict)
    po_cells: List[Cell] = field(default_factory=list)
    routed: bool = False
    shared_routing: bool = False

    def role(self, cell: Cell) -> CellRole:
        return self.cells.get(cell, FREE)

    def is_free(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.grid_rows and 0 <= c < self.grid_cols and cell not in self.cells

    def mems(self) -> int:
        return sum(1 for r in self.cells.values() if r.role != "free")

    def clone(self) -> "Placement":
        return Placement(self.grid_rows, self.grid_cols, self.mode, dict(self.tiles),
                         dict(self.band_start), dict(self.source_cols), dict(self.cells),
                         dict(self.loads), list(self.copies),
                         {k: list(v) for k, v in self.alignment_aux.items()},
                         list(self.po_cells), self.routed, self.shared_routing)


def sort_supergates(level: Sequence[Supergate]) -> List[Supergate]:
    """Largest first; equal sizes keep creation order."""
    return sorted(level, key=lambda g: (-g.size, g.sid))


def flip_supergates(level: Sequence[Tuple[Supergate, bool]], l: int) -> List[Tuple[Supergate, bool]]:
    """Toggle the vertical orientation of every tile on odd levels."""
    if l % 2 == 1:
        return [(g, not flipped) for g, flipped in level]
    return list(level)


def _extent(g: Supergate) -> int:
    return g.size + 1 + int(g.emit_final_not)


def _tile_at(g: Supergate, terms, origin: int, flipped: bool, in_cols: Dict[int, int],
             out_col: int, shared: Optional[Cell] = None) -> Tile:
    d = -1 if flipped else 1
    rows = [origin + d * t for t in range(len(terms))]
    lits = []
    for t, term in enumerate(terms):
        cells = []
        for j, (s, _) in enumerate(term):
            if shared is not None and t == 0 and j == 0:
                cells.append(shared)
            else:
                cells.append((rows[t], in_cols[s]))
        lits.append(tuple(cells))
    gate = (origin + d * len(terms), out_col)
    final = (origin + d * (len(terms) + 1), out_col) if g.emit_final_not else None
    return Tile(g.sid, g.level, origin, flipped, tuple(terms), tuple(lits),
                tuple((r, out_col) for r in rows), gate, final, shared, g.gate_polarity)


def _tile_cells(tile: Tile) -> List[Cell]:
    cells = [c for row in tile.literal_cells for c in row if c != tile.shared]
    cells += list(tile.term_cells) + [tile.gate_cell]
    if tile.final_cell is not None:
        cells.append(tile.final_cell)
    return cells


def _bands(net: NonNetlist) -> Tuple[Dict[int, int], Dict[int, int], Dict[int, int]]:
    sources = list(range(net.pi_count)) + [s for s, _ in net.consts]
    source_cols = {s: i for i, s in enumerate(sources)}
    band_start = {0: 0}
    out_col = {}
    col = len(sources)
    for l in range(1, net.depth + 1):
        gates = net.level(l)
        width = max((len(g.inputs) for g in gates), default=0) + 1
        band_start[l] = col
        out_col[l] = col + width - 1
        col += width
    return band_start, out_col, source_cols


def _claim(pl: Placement, tile: Tile) -> None:
    for c in tile.literal_cells:
        for cell in c:
            if cell != tile.shared:
                pl.cells[cell] = CellRole("input-copy", -1)
    for t, cell in enumerate(tile.term_cells):
        pl.cells[cell] = CellRole("term-output", tile.sid)
    pl.cells[tile.gate_cell] = CellRole("gate-output", tile.sid, tile.gate_polarity)
    if tile.final_cell is not None:
        pl.cells[tile.final_cell] = CellRole("gate-output", tile.sid, not tile.gate_polarity)


def _fits(pl: Placement, tile: Tile) -> bool:
    cells = _tile_cells(tile)
    return len(set(cells)) == len(cells) and all(pl.is_free(c) for c in cells)


def _stored(tile: Tile, polarity: bool) -> Optional[Cell]:
    return tile.gate_cell if polarity == tile.gate_polarity else tile.final_cell


def place_supergates(net: NonNetlist, grid: Tuple[int, int] = DEFAULT_GRID,
                     mode: str = "hipe") -> Placement:
    """Place every supergate as a tile; alignment copies are added by the router."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    rows, cols = grid
    band_start, out_col, source_cols = _bands(net)
    pl = Placement(rows, cols, mode, {}, band_start, source_cols)
    if net.supergates and out_col[net.depth] >= cols:
        raise CapacityError(net.depth, f"needs {out_col[net.depth] + 1} columns, grid has {cols}")
    if len(source_cols) > cols:
        raise CapacityError(0, "more sources than columns")
    for l in range(1, net.depth + 1):
        per_level = sum(g.size for g in net.level(l))
        if per_level > rows:
            raise CapacityError(l, f"{per_level} terms exceed {rows} rows")

    def in_cols_of(g: Supergate) -> Dict[int, int]:
        return {s: band_start[g.level] + j for j, s in enumerate(g.inputs)}

    if mode == "said-baseline":
        _place_said(pl, net, in_cols_of, out_col)
    else:
        _place_hipe(pl, net, in_cols_of, out_col)
    return pl


def _place_said(pl, net, in_cols_of, out_col) -> None:
    height = max((_extent(g) for g in net.supergates), default=0)
    slots: Dict[Tuple[int, int], Supergate] = {}
    for l in range(1, net.depth + 1):
        for g in sort_supergates(net.level(l)):
            y = 0
            while True:
                if (l, y) not in slots:
                    below = slots.get((l - 1, y))
                    if l == 1 or below is None or g.size < below.size:
                        break
                y += 1
            tile = _tile_at(g, g.terms, y * height, False, in_cols_of(g), out_col[l])
            if max(c[0] for c in _tile_cells(tile)) >= pl.grid_rows:
                raise CapacityError(l, f"supergate {g.sid} falls below row {pl.grid_rows}")
            slots[(l, y)] = g
            pl.tiles[g.sid] = tile
            _claim(pl, tile)


def _first_free(pl: Placement, g: Supergate, terms, flipped: bool, in_cols, oc) -> Tile:
    start = _extent(g) - 1 if flipped else 0
    for origin in range(start, pl.grid_rows):
        tile = _tile_at(g, terms, origin, flipped, in_cols, oc)
        if _fits(pl, tile):
            return tile
    raise CapacityError(g.level, f"no free rows for supergate {g.sid}")


def _place_hipe(pl, net, in_cols_of, out_col) -> None:
    for l in range(1, net.depth + 1):
        oriented = flip_supergates([(g, False) for g in sort_supergates(net.level(l))], l)
        prev = sorted((pl.tiles[g.sid] for g in net.level(l - 1)), key=lambda t: t.rows[0]) if l > 1 else []
        used_outputs = set()
        leftovers = []
        for g, flipped in oriented:
            tile = None
            for p in prev:
                for t_idx, term in enumerate(g.terms):
                    hit = next((j for j, (s, pos) in enumerate(term) if s == p.sid), None)
                    if hit is None:
                        continue
                    # the literal needs the complement of what a positive literal names
                    cell = _stored(p, not term[hit][1])
                    if cell is None or cell in used_outputs:
                        continue
                    lead = (term[hit],) + term[:hit] + term[hit + 1:]
                    terms = (lead,) + g.terms[:t_idx] + g.terms[t_idx + 1:]
                    cand = _tile_at(g, terms, cell[0], flipped, in_cols_of(g), out_col[l], shared=cell)
                    if _fits(pl, cand):
                        tile = cand
                        used_outputs.add(cell)
                        break
                if tile is not None:
                    break
            if tile is None:
                leftovers.append((g, flipped))
                continue
            pl.tiles[g.sid] = tile
            _claim(pl, tile)
        for g, flipped in leftovers:
            tile = _first_free(pl, g, g.terms, flipped, in_cols_of(g), out_col[l])
            pl.tiles[g.sid] = tile
            _claim(pl, tile)


# ---------------------------------------------------------------- routing

def _collinear(a: Cell, b: Cell) -> bool:
    return a[0] == b[0] or a[1] == b[1]


class _Router:
    def __init__(self, pl: Placement, net: NonNetlist, share: bool):
        self.pl = pl
        self.share = share
        self.sources = set(pl.source_cols)
        self.holders: Dict[int, List[Tuple[Cell, bool]]] = {}
        for tile in pl.tiles.values():
            hs = [(tile.gate_cell, tile.gate_polarity)]
            if tile.final_cell is not None:
                hs.append((tile.final_cell, not tile.gate_polarity))
            self.holders[tile.sid] = hs
        self.base = {s: list(h) for s, h in self.holders.items()}
        self.first_col = len(pl.source_cols)

    def _put(self, cell: Cell, role: str, s: int, pol: bool) -> None:
        self.pl.cells[cell] = CellRole(role, s, pol)
        if self.share or s in self.sources:
            self.holders.setdefault(s, []).append((cell, pol))

    def _load(self, cell: Cell, s: int, role: str = "input-copy") -> None:
        self.pl.loads[cell] = s
        self._put(cell, role, s, True)

    def _copy(self, src: Cell, dst: Cell, role: str, s: int, pol: bool) -> None:
        self.pl.copies.append(Copy(src, dst))
        self._put(dst, role, s, pol)
        if role == "aux":
            self.pl.alignment_aux.setdefault(s, []).append(dst)

    def _candidates(self, s: int) -> List[Tuple[Cell, bool]]:
        if self.share or s in self.sources:
            return self.holders.get(s, [])
        return self.base.get(s, [])

    def fill(self, dst: Cell, s: int, q: bool, role: str = "input-copy") -> None:
        """Make ``dst`` hold signal ``s`` with polarity ``q``."""
        pl = self.pl
        if s in self.sources:
            if q:
                self._load(dst, s, role)
                return
            # taps stay in the source column so copies into one literal column align
            src = (dst[0], pl.source_cols[s])
            if src == dst:
                src = self._free_on_column(dst[1], dst[0])
            if pl.role(src).role == "free":
                self._load(src, s)
            elif pl.loads.get(src) != s:
                raise CapacityError(0, f"tap cell {src} is taken")
            self._copy(src, dst, role, s, q)
            return
        hs = self._candidates(s)
        for c, p in hs:
            if p != q and _collinear(c, dst):
                self._copy(c, dst, role, s, q)
                return
        for c, p in hs:
            if p == q:
                for corner in ((c[0], dst[1]), (dst[0], c[1])):
                    if self._aux_free(corner):
                        self._copy(c, corner, "aux", s, not q)
                        self._copy(corner, dst, role, s, q)
                        return
        for c, p in hs:
            if p != q and self._detour(c, dst, s, q, role):
                return
        for c, p in hs:
            if p == q:
                # one extra NOT next to the holder, then an odd detour from there
                for a0 in self._free_near(c):
                    self.pl.cells[a0] = CellRole("aux", s, not q)
                    if self._detour(a0, dst, s, q, role, dry=True):
                        del self.pl.cells[a0]
                        self._copy(c, a0, "aux", s, not q)
                        self._detour(a0, dst, s, q, role)
                        return
                    del self.pl.cells[a0]
        raise CapacityError(-1, f"cannot route signal {s} to {dst}")

    def _detour(self, src: Cell, dst: Cell, s: int, q: bool, role: str, dry: bool = False) -> bool:
        """Three NOT copies through two free cells; the source holds the opposite polarity."""
        pl = self.pl
        paths = []
        for x in range(pl.grid_cols):
            if x not in (src[1], dst[1]):
                paths.append(((src[0], x), (dst[0], x)))
        for y in range(pl.grid_rows):
            if y not in (src[0], dst[0]):
                paths.append(((y, src[1]), (y, dst[1])))
        for a1, a2 in paths:
            if a1 != a2 and self._aux_free(a1) and self._aux_free(a2):
                if not dry:
                    self._copy(src, a1, "aux", s, q)
                    self._copy(a1, a2, "aux", s, not q)
                    self._copy(a2, dst, role, s, q)
                return True
        return False

    def _free_near(self, c: Cell):
        pl = self.pl
        for x in range(pl.grid_cols):
            if self._aux_free((c[0], x)):
                yield (c[0], x)
        for y in range(pl.grid_rows):
            if self._aux_free((y, c[1])):
                yield (y, c[1])

    def _aux_free(self, cell: Cell) -> bool:
        return cell[1] >= self.first_col and self.pl.is_free(cell)

    def _free_on_column(self, col: int, row: int) -> Cell:
        for r in range(self.pl.grid_rows):
            if r != row and self.pl.is_free((r, col)):
                return (r, col)
        raise CapacityError(0, f"column {col} is full")


def route_alignment(pl: Placement, net: NonNetlist, share: bool) -> Placement:
    """Fill every literal cell, giving each its polarity through NOT copies.

    Without sharing, supergate outputs are copied only from the producing tile
    and every copy chain gets its own auxiliary cell. With sharing, any cell
    already holding a signal (auxiliary cells and filled literals included)
    may serve as the source.
    """
    if pl.routed:
        raise ValueError("placement is already routed")
    out = pl.clone()
    router = _Router(out, net, share)
    order = sorted(out.tiles.values(), key=lambda t: (t.level, t.rows[0], t.sid))
    for tile in order:
        for term, cells in zip(tile.terms, tile.literal_cells):
            for (s, positive), cell in zip(term, cells):
                if cell == tile.shared:
                    continue
                router.fill(cell, s, not positive)
    _route_outputs(out, net, router)
    # a source that nothing reads still occupies a home cell
    for s, col in out.source_cols.items():
        if not any(v == s for v in out.loads.values()):
            router._load(router._free_on_column(col, -1), s)
    out.routed = True
    out.shared_routing = share
    return out


def _route_outputs(pl: Placement, net: NonNetlist, router: _Router) -> None:
    for s, compl in net.po_refs:
        want = not compl
        hit = next((c for c, p in router.holders.get(s, []) if p == want), None)
        if hit is None and s in pl.source_cols:
            if want:
                hit = router._free_on_column(pl.source_cols[s], -1)
                router._load(hit, s)
            else:
                held = [c for c, p in router.holders.get(s, []) if p]
                home = held[0] if held else None
                if home is None:
                    home = router._free_on_column(pl.source_cols[s], -1)
                    router._load(home, s)
                hit = router._free_on_column(home[1], home[0])
                router._copy(home, hit, "aux", s, False)
        if hit is None:
            raise ValueError(f"output signal {s} has no cell with the needed polarity")
        pl.po_cells.append(hit)


def share_align_memristors(pl: Placement, net: NonNetlist, cost=None) -> Placement:
    """Route alignment copies through shared holders, keeping the unshared routing if it is cheaper.

    ``cost`` maps a routed placement to a comparable tuple; the default is
    (copy count, memristor count). The pipeline passes the scheduled
    (cycles, mems) so the result never regresses on either.
    """
    if cost is None:
        cost = lambda p: (len(p.copies), p.mems())  # noqa: E731
    shared = route_alignment(pl, net, share=True)
    plain = route_alignment(pl, net, share=False)
    cs, cp = cost(shared), cost(plain)
    if all(a <= b for a, b in zip(cs, cp)):
        return shared
    return plain
