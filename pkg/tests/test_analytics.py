import pytest
from hypothesis import given, settings, strategies as st

from magicmap.analytics import BitletParams, dominates, load_params, model_throughput_energy, pareto_sweep
from magicmap.scheduler import Stats


def test_pareto_examples():
    pts = [(2, Stats(10, 30)), (3, Stats(8, 40)), (7, Stats(12, 50))]
    assert pareto_sweep(pts) == [(3, Stats(8, 40)), (2, Stats(10, 30))]
    assert pareto_sweep([(5, Stats(3, 3))]) == [(5, Stats(3, 3))]
    chain = [(k, Stats(k, k)) for k in range(2, 8)]
    assert pareto_sweep(chain) == [(2, Stats(2, 2))]
    assert pareto_sweep([(2, Stats(4, 4)), (3, Stats(4, 4))]) == [(2, Stats(4, 4)), (3, Stats(4, 4))]
    with pytest.raises(ValueError):
        pareto_sweep([])


points = st.lists(st.tuples(st.integers(2, 10), st.builds(Stats, st.integers(1, 40), st.integers(1, 40))),
                  min_size=1, max_size=15)


@settings(max_examples=200, deadline=None)
@given(points)
def test_pareto_matches_brute_force(pts):
    front = pareto_sweep(pts)
    for k, s in front:
        assert not any(dominates(q, s) for _, q in pts)
    for k, s in pts:
        if (k, s) not in front:
            assert any(dominates(q, s) for _, q in front)
    assert [s.cycles for _, s in front] == sorted(s.cycles for _, s in front)


def test_model_formulas():
    p = BitletParams(pim_cycle_time=1e-8, pim_energy_per_op=2e-13, arrays_in_parallel=100,
                     cpu_bandwidth=1e10, cpu_energy_per_bit=1e-11, io_bits=10)
    m = model_throughput_energy(Stats(50, 7), p, total_ops=400)
    assert m.pim_throughput == pytest.approx(100 / (50 * 1e-8))
    assert m.pim_energy == pytest.approx(400 * 2e-13)
    assert m.cpu_throughput == pytest.approx(1e9)
    assert m.cpu_energy == pytest.approx(1e-10)
    assert model_throughput_energy(Stats(100, 7), p, 400).pim_throughput == pytest.approx(m.pim_throughput / 2)
    wide = model_throughput_energy(Stats(50, 7), BitletParams(1e-8, 2e-13, 100, 1e10, 1e-11, 20), 400)
    assert wide.cpu_throughput == pytest.approx(m.cpu_throughput / 2)
    assert wide.cpu_energy == pytest.approx(2 * m.cpu_energy)
    # without an op count, one op per cycle
    assert model_throughput_energy(Stats(50, 7), p).pim_energy == pytest.approx(50 * 2e-13)
    with pytest.raises(ValueError):
        model_throughput_energy(Stats(0, 1), p)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**5), st.integers(1, 10**5), st.integers(1, 10**6))
def test_model_monotone(c1, c2, ops):
    p = BitletParams()
    lo, hi = sorted((c1, c2))
    a, b = (model_throughput_energy(Stats(c, 1), p, ops) for c in (lo, hi))
    if lo < hi:
        assert a.pim_throughput > b.pim_throughput
    assert model_throughput_energy(Stats(lo, 1), p, ops + 1).pim_energy > a.pim_energy


@pytest.mark.parametrize("field", ["pim_cycle_time", "io_bits", "arrays_in_parallel"])
def test_params_must_be_positive(field):
    with pytest.raises(ValueError):
        BitletParams(**{field: 0})


def test_load_params(tmp_path):
    cfg = tmp_path / "bitlet.cfg"
    cfg.write_text("# example\npim_cycle_time = 5e-9\n\nio_bits = 128  # PI + PO bits\n")
    p = load_params(cfg)
    assert p.pim_cycle_time == 5e-9 and p.io_bits == 128 and isinstance(p.io_bits, int)
    assert p.cpu_bandwidth == BitletParams().cpu_bandwidth
    cfg.write_text("turbo = 1\n")
    with pytest.raises(ValueError, match="unknown key"):
        load_params(cfg)
    cfg.write_text("io_bits 12\n")
    with pytest.raises(ValueError):
        load_params(cfg)
