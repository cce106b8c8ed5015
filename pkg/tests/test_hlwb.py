import numpy as np
import pytest
from hypothesis import given, strategies as st

from bestpair.config import EXPERIMENT_A, EXPERIMENT_B
from bestpair.errors import InputError
from bestpair.geometry import HalfSpace, Polyhedron
from bestpair.hlwb import ControlSequence, hlwb_project, q_step, sweep
from bestpair.oracle import exact_project
from bestpair.schedule import LambdaSchedule

A = Polyhedron.from_rows(EXPERIMENT_A)
B = Polyhedron.from_rows(EXPERIMENT_B)
A0 = np.array([8.0, -13.0])
FIG = 5e-4

ONE = LambdaSchedule("constant", value=1.0)
TINY = LambdaSchedule("table", values=(1e-300,))


@st.composite
def instances(draw):
    """A random polyhedron with 1..6 members in 1..4 dimensions plus anchor and two starts."""
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    d = int(rng.integers(1, 5))
    n = int(rng.integers(1, 7))
    C = rng.normal(size=(n, d))
    off = rng.normal(size=n) * 3
    P = Polyhedron.from_rows([(tuple(c), float(o)) for c, o in zip(C, off)])
    pts = rng.normal(size=(4, d)) * 10
    steps = int(rng.integers(0, 60))
    offset = int(rng.integers(-3, 4))
    return P, pts, steps, offset


class TestExamples:
    def test_first_b_iterate(self):
        np.testing.assert_allclose(q_step(B, A0, A0, 1), [4.6, -6.2], atol=1e-12)

    def test_lambda_one_returns_anchor(self):
        np.testing.assert_array_equal(q_step(B, A0, [1.0, 2.0], 3, ONE), A0)

    def test_lambda_zero_inside_returns_current(self):
        inside = np.array([5.0, 5.0])  # inside every member of B
        np.testing.assert_array_equal(q_step(B, A0, inside, 1, TINY), inside)

    def test_two_step_sweep(self):
        end = sweep(B, [-2.2266, -8.4844], A0, 2).endpoint
        np.testing.assert_allclose(end, [0.4953, 0.8625], atol=FIG)

    def test_zero_length_sweep(self):
        np.testing.assert_array_equal(sweep(B, [1, 1], [3, 4], 0).endpoint, [3, 4])

    def test_single_step_toward_a(self):
        end = sweep(A, [0.75, -4.5], [0.3, -9.6], 1).endpoint
        np.testing.assert_allclose(end, [-1.625, -7.05], atol=FIG)

    def test_anchor_inside_stays_put(self):
        inside = np.array([5.0, 6.0])
        res = sweep(B, inside, inside, 50, record=True)
        for q in res.inner_trace:
            np.testing.assert_allclose(q, inside, atol=1e-12)

    def test_single_halfspace_target(self):
        h = Polyhedron((HalfSpace((1, 0), -4),))
        p, iters = hlwb_project(h, A0, max_iters=10**4)
        assert iters == 10**4
        assert np.linalg.norm(p - [-4, -13]) < 1e-2

    def test_project_onto_b(self):
        exact = exact_project(B, A0)
        errs = [np.linalg.norm(hlwb_project(B, A0, max_iters=n)[0] - exact)
                for n in (10**2, 10**3, 10**4, 10**5)]
        assert all(b <= a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 5e-2


class TestControl:
    def test_default_starts_at_second_member(self):
        res = sweep(B, A0, A0, 6, record=True)
        assert res.projections_used == [1, 2, 3, 0, 1, 2]
        assert len(res.inner_trace) == 7
        np.testing.assert_array_equal(res.inner_trace[0], A0)

    def test_offset_minus_one(self):
        res = sweep(B, A0, A0, 4, ctrl=-1, record=True)
        assert res.projections_used == [0, 1, 2, 3]
        assert ControlSequence(4, -1).position(1) == 0

    def test_bad_control(self):
        with pytest.raises(InputError):
            sweep(B, A0, A0, 3, ctrl=ControlSequence(3))
        with pytest.raises(InputError):
            ControlSequence(0)
        with pytest.raises(InputError):
            q_step(B, A0, A0, 0)
        with pytest.raises(InputError):
            sweep(B, A0, A0, -1)

    def test_recorded_matches_kernel(self):
        for n in (1, 7, 40, 333):
            fast = sweep(B, [-3, -1], A0, n).endpoint
            slow = sweep(B, [-3, -1], A0, n, record=True).endpoint
            np.testing.assert_allclose(fast, slow, rtol=1e-12, atol=1e-12)

    def test_relaxed_schedule_path(self):
        s = LambdaSchedule("constant", value=0.2)
        fast = sweep(B, [-3, -1], A0, 25, s).endpoint
        slow = sweep(B, [-3, -1], A0, 25, s, record=True).endpoint
        np.testing.assert_allclose(fast, slow, rtol=1e-13, atol=1e-13)


class TestProperties:
    @given(instances())
    def test_start_sensitivity_bound(self, inst):
        P, pts, n, offset = inst
        a, x, y = pts[0], pts[1], pts[2]
        qx = sweep(P, a, x, n, ctrl=offset).endpoint
        qy = sweep(P, a, y, n, ctrl=offset).endpoint
        bound = np.linalg.norm(x - y) * (1.0 / (n + 1))  # prod of n/(n+1) telescopes
        assert np.linalg.norm(qx - qy) <= bound + 1e-9

    @given(instances())
    def test_joint_lipschitz_bound(self, inst):
        P, pts, n, offset = inst
        a, b, x, y = pts
        qa = sweep(P, a, x, n, ctrl=offset).endpoint
        qb = sweep(P, b, y, n, ctrl=offset).endpoint
        assert np.linalg.norm(qa - qb) <= np.linalg.norm(a - b) + np.linalg.norm(x - y) + 1e-9

    @given(instances())
    def test_deterministic(self, inst):
        P, pts, n, offset = inst
        r1 = sweep(P, pts[0], pts[1], n, ctrl=offset).endpoint
        r2 = sweep(P, pts[0], pts[1], n, ctrl=offset).endpoint
        assert np.array_equal(r1, r2)
