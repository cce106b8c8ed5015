import math

import numpy as np
import pytest

import figure_data as fig
from bestpair.ahlwb import AuxStrategy, IterateTrace, equalize, pair_estimate, run
from bestpair.config import EXPERIMENT_A, EXPERIMENT_B
from bestpair.errors import InputError, StateError
from bestpair.geometry import Polyhedron
from bestpair.schedule import SweepSchedule

A = Polyhedron.from_rows(EXPERIMENT_A)
B = Polyhedron.from_rows(EXPERIMENT_B)
A0 = (8.0, -13.0)
A_STAR = np.array([-6.0, -5.0])
B_STAR = np.array([4.0, 5.0])
FIG = 5e-4

# Geometric lengths up to about 1.1**100, then held: long runs stay affordable.
CAPPED = SweepSchedule("table", values=tuple(math.floor(1.1**k) for k in range(100)))


@pytest.fixture(scope="module")
def fixed():
    return run(A, B, A0, aux="fixed-anchor", num_sweeps=50)


@pytest.fixture(scope="module")
def warm():
    return run(A, B, A0, aux="warm-start", num_sweeps=50)


def test_fixed_anchor_figure(fixed):
    assert [i for i, _ in fixed.a_points] == list(range(0, 51, 2))
    assert [i for i, _ in fixed.b_points] == list(range(1, 50, 2))
    np.testing.assert_allclose(fixed.a_array(), fig.A_FIXED, atol=FIG, rtol=0)
    np.testing.assert_allclose(fixed.b_array(), fig.B_FIXED, atol=FIG, rtol=0)


def test_warm_start_figure(warm):
    np.testing.assert_allclose(warm.a_array(), fig.A_WARM, atol=FIG, rtol=0)
    np.testing.assert_allclose(warm.b_array(), fig.B_WARM, atol=FIG, rtol=0)
    np.testing.assert_allclose(warm.a_points[2][1], [-1.625, -7.05], atol=FIG)
    np.testing.assert_allclose(warm.a_points[5][1], [-4.9679, -2.074], atol=FIG)


def test_strategies_agree_at_the_end(fixed, warm):
    fa, fb, _ = pair_estimate(fixed)
    wa, wb, _ = pair_estimate(warm)
    assert np.linalg.norm(fa - wa) <= 1e-3
    assert np.linalg.norm(fb - wb) <= 1e-3


def test_pair_estimate(fixed):
    a, b, dist = pair_estimate(fixed)
    np.testing.assert_allclose(a, [-5.8257, -4.9922], atol=FIG)
    np.testing.assert_allclose(b, [3.6354, 4.8438], atol=FIG)
    assert dist == pytest.approx(np.linalg.norm(a - b))
    assert dist == pytest.approx(13.652, abs=5e-3)


def test_single_sweep():
    tr = run(A, B, A0, num_sweeps=1)
    assert len(tr.a_points) == 1 and len(tr.b_points) == 1
    np.testing.assert_allclose(tr.b_points[0][1], [4.6, -6.2], atol=1e-12)
    a, b, dist = pair_estimate(tr)
    np.testing.assert_array_equal(a, A0)
    assert dist == pytest.approx(np.linalg.norm(np.array(A0) - [4.6, -6.2]))


def test_sweep_metadata(fixed):
    assert fixed.num_sweeps == 50
    assert [s.length for s in fixed.sweeps[:10]] == [1, 1, 1, 1, 1, 1, 1, 1, 2, 2]
    assert [s.target for s in fixed.sweeps[:4]] == ["B", "A", "B", "A"]
    assert all(np.isfinite(p).all() for _, p in fixed.a_points + fixed.b_points)


def test_convergence_trend():
    early = run(A, B, A0, num_sweeps=25)
    late = run(A, B, A0, num_sweeps=200)
    ea, eb, _ = pair_estimate(early)
    la, lb, _ = pair_estimate(late)
    assert np.linalg.norm(la - A_STAR) < np.linalg.norm(ea - A_STAR)
    assert np.linalg.norm(lb - B_STAR) < np.linalg.norm(eb - B_STAR)


def test_boundedness_experiment():
    tr = run(A, B, A0, ss=CAPPED, num_sweeps=500)
    data_norm = max(np.abs(A.normals).max(), np.abs(A.offsets).max(),
                    np.abs(B.normals).max(), np.abs(B.offsets).max(), np.linalg.norm(A0))
    biggest = max(np.linalg.norm(p) for _, p in tr.a_points + tr.b_points)
    assert biggest <= 10 * data_norm


@pytest.mark.parametrize("seed", range(20))
def test_boundedness_random(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 2
    # two disjoint polyhedra around separated centres, each with 3..5 members
    polys = []
    for centre in (np.full(d, -4.0), np.full(d, 4.0)):
        n = int(rng.integers(3, 6))
        C = rng.normal(size=(n, d))
        off = C @ centre + rng.uniform(0.5, 2.0, size=n)
        polys.append(Polyhedron.from_rows([(tuple(c), float(o)) for c, o in zip(C, off)]))
    P, Q = polys
    a0 = rng.normal(size=d) * 10
    tr = run(P, Q, a0, ss=CAPPED, num_sweeps=500, aux=AuxStrategy(("fixed-anchor", "warm-start")[seed % 2]))
    data_norm = max(np.abs(P.normals).max(), np.abs(P.offsets).max(), np.abs(Q.normals).max(),
                    np.abs(Q.offsets).max(), np.linalg.norm(a0))
    biggest = max(np.linalg.norm(p) for _, p in tr.a_points + tr.b_points)
    assert biggest <= 10 * data_norm


def test_determinism():
    t1 = run(A, B, A0, aux="warm-start", num_sweeps=60)
    t2 = run(A, B, A0, aux="warm-start", num_sweeps=60)
    assert t1.identical(t2)
    t3 = run(A, B, A0, aux="fixed-anchor", num_sweeps=60)
    assert not t1.identical(t3)


def test_equalize_pads_at_end():
    short = Polyhedron.from_rows(EXPERIMENT_A[:2])
    P, Q = equalize(short, B)
    assert len(P) == len(Q) == 4
    assert not P[1].trivial and P[2].trivial and P[3].trivial


def test_unequal_lengths_run():
    short = Polyhedron.from_rows(EXPERIMENT_A[:2])
    tr = run(short, B, A0, num_sweeps=10)
    assert tr.num_sweeps == 10


def test_stop_tolerance():
    tr = run(A, B, A0, num_sweeps=200, stop_tol=1e-1)
    assert tr.num_sweeps < 200


def test_errors():
    with pytest.raises(InputError):
        run(A, B, A0, num_sweeps=0)
    with pytest.raises(InputError):
        run(A, Polyhedron.from_rows([((1, 0, 0), 1)]), A0)
    with pytest.raises(ValueError):
        run(A, B, A0, aux="sideways")
    with pytest.raises(StateError):
        pair_estimate(IterateTrace(a_points=[(0, np.array(A0))]))
