import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bestpair.errors import InputError, InvalidConstraintError
from bestpair.geometry import (HalfSpace, Polyhedron, as_point, contains, max_violation,
                               project_halfspace, project_hyperplane, residual)
from bestpair.config import EXPERIMENT_A

coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def halfspaces(draw, dim=None):
    d = dim or draw(st.integers(1, 4))
    normal = draw(st.lists(st.floats(-10, 10, allow_nan=False), min_size=d, max_size=d)
                  .filter(lambda v: math.sqrt(sum(x * x for x in v)) > 1e-3))
    return HalfSpace(tuple(normal), draw(coord))


@st.composite
def halfspace_and_points(draw, count=1):
    h = draw(halfspaces())
    pts = [np.array(draw(st.lists(coord, min_size=h.dim, max_size=h.dim))) for _ in range(count)]
    return (h, *pts)


A = Polyhedron.from_rows(EXPERIMENT_A)


class TestExamples:
    def test_residual(self):
        assert residual(HalfSpace((1, 0), -4), [8, -13]) == 12
        assert residual(HalfSpace((1, 0), -4), [-4, -13]) == 0
        assert residual(HalfSpace((4, -3), 17), [8, -13]) == 54

    def test_project_halfspace(self):
        np.testing.assert_array_equal(project_halfspace(HalfSpace((1, 0), -4), [-5, -13]), [-5, -13])
        np.testing.assert_allclose(project_halfspace(HalfSpace((1, -2), 0), [8, -13]), [1.2, 0.6],
                                   atol=1e-12)
        np.testing.assert_allclose(project_halfspace(HalfSpace((-1, -4), -24), [8, -13]), [12, 3],
                                   atol=1e-12)

    def test_project_hyperplane(self):
        h = HalfSpace((0, 1), -5)
        np.testing.assert_array_equal(project_hyperplane(h, [3, -5]), [3, -5])
        np.testing.assert_array_equal(project_hyperplane(h, [3, 0]), [3, -5])
        np.testing.assert_allclose(project_hyperplane(HalfSpace((1, -2), 0), [8, -13]), [1.2, 0.6],
                                   atol=1e-12)

    def test_hyperplane_projects_interior_points_too(self):
        np.testing.assert_array_equal(project_hyperplane(HalfSpace((0, 1), -5), [3, -9]), [3, -5])

    def test_contains(self):
        assert contains(A, [-6, -5], 1e-9)
        assert not contains(A, [0, 0], 1e-9)
        whole = Polyhedron((HalfSpace.whole_space(2),))
        assert contains(whole, [1e6, -1e6])
        assert max_violation(A, [0, 0]) == pytest.approx(17 - 6)  # x + y <= -11 is the worst


class TestConstruction:
    def test_zero_normal_rejected(self):
        with pytest.raises(InvalidConstraintError):
            HalfSpace((0, 0), 1)

    def test_trivial_must_be_zero(self):
        with pytest.raises(InputError):
            HalfSpace((1, 0), 0, trivial=True)

    def test_trivial_projection_is_identity(self):
        h = HalfSpace.whole_space(3)
        np.testing.assert_array_equal(project_halfspace(h, [1, 2, 3]), [1, 2, 3])
        with pytest.raises(InvalidConstraintError):
            project_hyperplane(h, [1, 2, 3])

    def test_non_finite(self):
        with pytest.raises(InputError):
            HalfSpace((math.inf, 0), 1)
        with pytest.raises(InputError):
            as_point([0, math.nan])

    def test_polyhedron_checks(self):
        with pytest.raises(InputError):
            Polyhedron(())
        with pytest.raises(InputError):
            Polyhedron((HalfSpace((1, 0), 0), HalfSpace((1, 0, 0), 0)))

    def test_order_preserved_and_padding(self):
        p = A.padded(6)
        assert len(p) == 6
        assert [h.normal for h in p][:4] == [h.normal for h in A]
        assert p[4].trivial and p[5].trivial
        assert p.to_list() == A.to_list()
        with pytest.raises(InputError):
            A.padded(2)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            residual(HalfSpace((1, 0), 0), [1, 2, 3])
        with pytest.raises(InputError):
            contains(A, [1, 2, 3])

    def test_normals_read_only(self):
        with pytest.raises(ValueError):
            A.normals[0, 0] = 5.0

    def test_normal_is_not_rescaled(self):
        h = HalfSpace((3, 4), 10)
        assert h.normal == (3.0, 4.0)
        np.testing.assert_allclose(project_halfspace(h, [3, 4]), [1.2, 1.6], atol=1e-12)


class TestProperties:
    @given(halfspace_and_points())
    def test_idempotence(self, data):
        h, x = data
        p = project_halfspace(h, x)
        q = project_halfspace(h, p)
        assert np.allclose(q, p, rtol=4e-16, atol=1e-12 * max(1.0, np.linalg.norm(p)))

    @given(halfspace_and_points())
    def test_feasibility(self, data):
        h, x = data
        p = project_halfspace(h, x)
        assert residual(h, p) <= 1e-12 * max(1.0, np.linalg.norm(x)) * max(1.0, np.linalg.norm(h.c))

    @given(halfspace_and_points(count=2))
    def test_nonexpansive(self, data):
        h, x, y = data
        d = np.linalg.norm(project_halfspace(h, x) - project_halfspace(h, y))
        assert d <= np.linalg.norm(x - y) + 1e-12 * max(1.0, np.linalg.norm(x), np.linalg.norm(y))

    @given(halfspace_and_points(count=2))
    def test_variational(self, data):
        h, x, y = data
        y = project_halfspace(h, y)  # a point of h
        p = project_halfspace(h, x)
        scale = max(1.0, np.linalg.norm(x), np.linalg.norm(y)) ** 2
        assert float((x - p) @ (y - p)) <= 1e-9 * scale

    @given(halfspace_and_points())
    def test_displacement_along_normal(self, data):
        h, x = data
        r = residual(h, x)
        if r <= 1e-6 * max(1.0, np.linalg.norm(x)):
            return
        v = x - project_halfspace(h, x)
        cos = float(v @ h.c) / (np.linalg.norm(v) * np.linalg.norm(h.c))
        assert cos == pytest.approx(1.0, abs=1e-12)
