import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realform.errors import DegenerateFrame, RepeatedEigenvalues
from realform.projlin import (
    ProjPoint,
    canonical_matrix,
    check_matrix,
    eig,
    frame_from_points,
    homography,
    matrices_proportional,
    proj_dist,
    proj_eq,
)

from conftest import pp, random_invertible


class TestProjPoint:
    def test_canonical_scaling(self):
        p = pp(2, 2j)
        assert np.allclose(p.coords, [1, 1j])

    def test_tie_breaks_to_lowest_index(self):
        p = pp(3j, -3)
        assert p.coords[0] == 1

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            pp(0, 0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            pp(np.nan, 1)


class TestProjEq:
    def test_scalar_multiple(self):
        assert proj_eq(pp(2, 2j), pp(1, 1j), 1e-12)

    def test_distinct_points(self):
        assert not proj_eq(pp(1, 0), pp(0, 1), 1e-6)

    def test_complex_scale(self):
        # oracle: (1+i) * [1, 1-i] = [1+i, 2]
        lhs = (1 + 1j) * np.array([1, 1 - 1j])
        assert np.allclose(lhs, [1 + 1j, 2])
        assert proj_eq(pp(1 + 1j, 2), pp(1, 1 - 1j), 1e-12)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_proj_dist_scale_invariant(self, seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        s = complex(rng.normal(), rng.normal())
        if abs(s) < 1e-3 or np.linalg.norm(v) < 1e-3:
            return
        assert proj_dist(ProjPoint(v), ProjPoint(s * v)) < 1e-10


class TestEig:
    def test_diagonal_elliptic(self):
        es = eig(np.array([[1 + 1j, 0], [0, 1 - 1j]]))
        assert set(np.round(es.eigenvalues, 12)) == {1 + 1j, 1 - 1j}
        dirs = {tuple(np.round(d.coords, 12)) for d in es.directions}
        assert dirs == {(1, 0), (0, 1)}

    def test_worked_hyperbolic_matrix(self):
        # the printed representative is twice the one with spectrum {1, -2}
        es = eig(np.array([[3j - 1, 3j - 3], [-3j - 3, -3j - 1]]))
        ratio = es.eigenvalues[0] / es.eigenvalues[1]
        assert abs(ratio - (1 / -2)) < 1e-12
        assert proj_dist(es.directions[0], pp(-1, 1)) < 1e-12
        assert proj_dist(es.directions[1], pp(-1j, 1)) < 1e-12

    def test_repeated_eigenvalues(self):
        with pytest.raises(RepeatedEigenvalues):
            eig(np.eye(2))

    def test_deterministic_order(self):
        m = np.array([[0, -2.0], [2.0, 0]])  # eigenvalues +-2i
        es1, es2 = eig(m), eig(m.copy())
        assert np.array_equal(es1.eigenvalues, es2.eigenvalues)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_conjugation_preserves_spectrum(self, seed):
        rng = np.random.default_rng(seed)
        d = np.diag([1.0, 2.0, -1.5])
        v = random_invertible(rng, 3, complex_=False)
        g = random_invertible(rng, 3)
        m = v @ d @ np.linalg.inv(v)
        es1 = eig(m)
        es2 = eig(g @ m @ np.linalg.inv(g))
        assert np.allclose(np.sort(es1.eigenvalues), np.sort(es2.eigenvalues), atol=1e-8)
        for lam, d1 in zip(es1.eigenvalues, es1.directions):
            j = int(np.argmin(np.abs(es2.eigenvalues - lam)))
            moved = ProjPoint(g @ d1.coords)
            assert proj_dist(moved, es2.directions[j]) < 1e-7


class TestFrames:
    def test_standard_frame(self):
        f = frame_from_points([pp(1, 0), pp(0, 1), pp(1, 1)])
        assert np.allclose(f.basis, np.eye(2))

    def test_worked_hyperbolic_frame(self):
        f = frame_from_points([pp(-1, 1), pp(-1j, 1), pp(1, 1)])
        assert np.allclose(f.basis[:, 0], [1j, -1j])
        assert np.allclose(f.basis[:, 1], [1 - 1j, 1 + 1j])

    def test_worked_elliptic_frame(self):
        f = frame_from_points([pp(1, 0), pp(0, 1), pp(-1j, 3)])
        # canonical representative of [-i, 3] is [-i/3, 1]
        assert np.allclose(f.basis[:, 0] * 3, [-1j, 0])
        assert np.allclose(f.basis[:, 1] * 3, [0, 3])

    def test_degenerate_frame(self):
        with pytest.raises(DegenerateFrame):
            frame_from_points([pp(1, 0), pp(2, 0), pp(1, 1)])

    def test_sum_is_last_point(self, rng):
        for _ in range(20):
            pts = [ProjPoint(rng.normal(size=3) + 1j * rng.normal(size=3)) for _ in range(4)]
            try:
                f = frame_from_points(pts)
            except DegenerateFrame:
                continue
            total = ProjPoint(f.basis.sum(axis=1))
            assert proj_dist(total, pts[3]) < 1e-8


class TestHomography:
    def test_identity(self):
        f = frame_from_points([pp(1, 0), pp(0, 1), pp(1, 1)])
        g = homography(f, f)
        assert matrices_proportional(np.eye(2), g, 1e-12)

    def test_diagonal_target(self):
        src = frame_from_points([pp(1, 0), pp(0, 1), pp(1, 1)])
        dst = frame_from_points([pp(1, 0), pp(0, 1), pp(1j, 1)])
        g = homography(src, dst)
        # verified directly: image of each basis direction
        assert proj_dist(ProjPoint(g @ [1, 0]), pp(1, 0)) < 1e-12
        assert proj_dist(ProjPoint(g @ [0, 1]), pp(0, 1)) < 1e-12
        assert proj_dist(ProjPoint(g @ [1, 1]), pp(1j, 1)) < 1e-12
        assert matrices_proportional(np.diag([1j, 1]), g, 1e-12)

    def test_swap(self):
        src = frame_from_points([pp(1, 0), pp(0, 1), pp(1, 1)])
        dst = frame_from_points([pp(0, 1), pp(1, 0), pp(1, 1)])
        g = homography(src, dst)
        assert proj_dist(ProjPoint(g @ [1, 0]), pp(0, 1)) < 1e-12

    def test_composition(self, rng):
        def random_frame():
            while True:
                try:
                    return frame_from_points(
                        [ProjPoint(rng.normal(size=3) + 1j * rng.normal(size=3)) for _ in range(4)]
                    )
                except DegenerateFrame:
                    continue

        f, g, h = random_frame(), random_frame(), random_frame()
        a = homography(f, g)
        b = homography(g, h)
        c = homography(f, h)
        assert matrices_proportional(c, b @ a, 1e-8)


def test_check_matrix_rejects_singular():
    with pytest.raises(ValueError):
        check_matrix(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_canonical_matrix_largest_entry_one():
    g = canonical_matrix(np.array([[2j, 1], [0.5, -1]]))
    assert abs(np.abs(g).max() - 1) < 1e-12


def test_frame_round_trip_up_to_common_scale(rng):
    # basis -> (points + sum) -> frame recovers the basis up to one scalar
    b = random_invertible(rng, 3)
    pts = [ProjPoint(b[:, j]) for j in range(3)] + [ProjPoint(b.sum(axis=1))]
    f = frame_from_points(pts)
    coeffs = np.linalg.solve(b, f.basis)
    off_diag = coeffs - np.diag(np.diag(coeffs))
    assert np.max(np.abs(off_diag)) < 1e-9
    diag = np.diag(coeffs)
    assert np.max(np.abs(diag - diag[0])) < 1e-9 * max(1, abs(diag[0]))
