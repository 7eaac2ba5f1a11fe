import numpy as np
import pytest

from beqpt.bipartite import haar_unitary, realign, singular_values
from beqpt.diagnostics import ccnr_value
from beqpt.filtering import (
    AnnihilatedState,
    FilterPair,
    filter_analysis,
    identity_filters,
    local_filter,
    werner_filters,
)
from beqpt.states import (
    filtered_werner_closed_form,
    random_density_matrix,
    werner_v,
)


class TestFilterPair:
    def test_contraction_enforced(self):
        with pytest.raises(ValueError, match="contraction"):
            FilterPair(2.0 * np.eye(2), np.eye(2))
        with pytest.raises(ValueError, match="contraction"):
            FilterPair(np.eye(2), 1.1 * np.eye(2))

    def test_rectangular_rejected(self):
        with pytest.raises(ValueError):
            FilterPair(np.ones((2, 3)), np.eye(3))

    def test_werner_filters_structure(self):
        for d in (3, 4, 5):
            pair = werner_filters(d)
            assert np.linalg.matrix_rank(pair.A) == 2
            assert np.linalg.matrix_rank(pair.B) == 2
            # A^dag A and B^dag B project onto the first two basis vectors
            proj = np.zeros((d, d))
            proj[0, 0] = proj[1, 1] = 1.0
            assert np.allclose(pair.A.conj().T @ pair.A, proj)
            assert np.allclose(pair.B.conj().T @ pair.B, proj)

    def test_werner_filters_entries_d4(self):
        pair = werner_filters(4)
        a = np.zeros((4, 4))
        a[0, 0] = 1.0
        a[1, 1] = -1.0
        assert np.array_equal(pair.A, a.astype(complex))
        nz = np.argwhere(pair.B != 0)
        assert sorted(map(tuple, nz)) == [(0, 1), (1, 0)]

    def test_requires_d_at_least_3(self):
        with pytest.raises(ValueError):
            werner_filters(2)


class TestLocalFilter:
    def test_identity_filters_do_nothing(self, rng):
        rho = random_density_matrix(3, 3, rng)
        out = local_filter(rho, identity_filters(3))
        assert np.abs(out.mat - rho.mat).max() <= 1e-14

    def test_unitary_filters_preserve_ccnr(self, rng):
        rho = random_density_matrix(3, 3, rng)
        pair = FilterPair(haar_unitary(3, rng), haar_unitary(3, rng))
        assert abs(ccnr_value(local_filter(rho, pair)) - ccnr_value(rho)) <= 1e-9

    @pytest.mark.parametrize("d", (3, 4, 5))
    @pytest.mark.parametrize("v", (0.0, 0.25, 0.5, 0.75, 1.0))
    def test_werner_filtering_matches_closed_form(self, d, v):
        direct = local_filter(werner_v(d, v), werner_filters(d))
        closed = filtered_werner_closed_form(d, v)
        assert np.abs(direct.mat - closed.mat).max() <= 1e-12

    def test_filtered_werner_never_faithful(self):
        for d in (3, 4, 5):
            for v in (0.0, 0.5, 1.0):
                s = singular_values(realign(local_filter(werner_v(d, v), werner_filters(d))))
                assert s[-1] < 1e-12 * s[0]

    def test_annihilation(self, rng):
        # the filtered Werner state lives on the first two local levels;
        # a projector onto the complement kills it
        rho = filtered_werner_closed_form(4, 0.3)
        a = np.zeros((4, 4))
        a[2, 2] = a[3, 3] = 1.0
        with pytest.raises(AnnihilatedState):
            local_filter(rho, FilterPair(a, a))

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            local_filter(random_density_matrix(3, 3, rng), identity_filters(4))


class TestFilterAnalysis:
    def test_werner_v0_d4(self):
        out = filter_analysis(werner_v(4, 0.0), werner_filters(4))
        assert out.before.ccnr_value == pytest.approx(1.5, abs=1e-9)
        assert out.after.ccnr_value == pytest.approx(2.0, abs=1e-9)
        assert out.ccnr_increased
        assert out.faithfulness_lost

    def test_werner_v05_rank_collapse(self):
        out = filter_analysis(werner_v(4, 0.5), werner_filters(4))
        assert out.after.schmidt_rank <= 16
        assert not out.after.faithful

    def test_identity_filters_change_nothing(self, rng):
        rho = random_density_matrix(3, 3, rng)
        out = filter_analysis(rho, identity_filters(3))
        assert out.before.ccnr_value == pytest.approx(out.after.ccnr_value, abs=1e-12)
        assert not out.ccnr_increased
        assert not out.faithfulness_lost
