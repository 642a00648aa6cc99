import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monomial_secants.oracles import principal_ideal_piece
from monomial_secants.ring import FieldConfig, HomogeneousPoly, multiply, power_product, task_rng
from monomial_secants.scan import partitions
from monomial_secants.terracini import (
    MonomialSpec,
    RankAnomalyError,
    SecantReport,
    SubspaceBasis,
    ambient_dim,
    expected_secant_dim,
    sample_point,
    secant_dim,
    specialized_secant_dim,
    subspace_equal,
    sum_span,
    tangent_space_basis,
)
import monomial_secants.terracini as terracini


def all_specs(d_max, d_min=1, r_min=1):
    return [spec for d in range(d_min, d_max + 1) for r in range(r_min, d + 1) for spec in partitions(d, r)]


class TestMonomialSpec:
    def test_canonical_order(self):
        assert MonomialSpec((1, 2)).exps == (2, 1)
        assert MonomialSpec((1, 2)) == MonomialSpec((2, 1))

    def test_parse_and_str(self):
        spec = MonomialSpec.parse("1,3,2")
        assert str(spec) == "3,2,1" and spec.r == 3 and spec.d == 6
        assert spec.pretty() == "Z1^3*Z2^2*Z3"

    @pytest.mark.parametrize("bad", [(), (2, 0), (-1, 3)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            MonomialSpec(bad)


class TestSamplePoint:
    def test_two_one(self):
        pt = sample_point((2, 1), 3, task_rng(0))
        L1, L2 = pt.forms
        assert pt.F.d == 3
        assert [g.d for g in pt.generators] == [2, 2]
        assert pt.generators[0] == multiply(L1.as_poly(), L2.as_poly())
        assert pt.generators[1] == multiply(L1.as_poly(), L1.as_poly())

    def test_generators_are_pair_products(self):
        pt = sample_point((1, 1, 1), 3, task_rng(1))
        L = [f.as_poly() for f in pt.forms]
        assert list(pt.generators) == [L[1] * L[2], L[0] * L[2], L[0] * L[1]]

    def test_generators_times_form_give_F(self):
        pt = sample_point((3, 2, 1), 4, task_rng(2))
        for L, g in zip(pt.forms, pt.generators):
            assert multiply(g, L) == pt.F

    def test_support(self):
        pt = sample_point((2, 1), 4, task_rng(3), support={0, 1})
        for poly in (pt.F, *pt.generators, *(f.as_poly() for f in pt.forms)):
            assert all(e[2] == e[3] == 0 for e in poly.to_dict())

    def test_support_too_small(self):
        with pytest.raises(ValueError):
            sample_point((2, 1), 4, task_rng(3), support={0})


class TestTangentSpace:
    def test_binary_two_one(self):
        assert tangent_space_basis(sample_point((2, 1), 2, task_rng(0))).rank == 3

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_generic_rank(self, n):
        for spec in all_specs(6):
            pt = sample_point(spec, n, task_rng(n, *spec.exps))
            assert tangent_space_basis(pt).rank == spec.r * (n - 1) + 1, spec

    @pytest.mark.parametrize("spec", all_specs(8, d_min=2, r_min=2))
    def test_binary_is_principal(self, spec):
        pt = sample_point(spec, 2, task_rng(9, *spec.exps))
        h = power_product(pt.forms, [e - 1 for e in spec.exps])
        T = tangent_space_basis(pt)
        assert subspace_equal(T, principal_ideal_piece(h, spec.d))
        assert T.rank == spec.r + 1

    def test_rows_are_rref(self):
        T = tangent_space_basis(sample_point((2, 2, 1), 3, task_rng(4)))
        pivots = [int(np.flatnonzero(row)[0]) for row in T.rows]
        assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
        assert all(T.rows[i, c] == 1 for i, c in enumerate(pivots))
        assert all(np.count_nonzero(T.rows[:, c]) == 1 for c in pivots)


class TestSumSpan:
    def test_single_and_idempotent(self):
        A = tangent_space_basis(sample_point((2, 1), 3, task_rng(0)))
        assert subspace_equal(sum_span([A]), A)
        assert subspace_equal(sum_span([A, A]), A)

    def test_exceptional_pair(self):
        rng = task_rng(5)
        bases = [tangent_space_basis(sample_point((2, 1), 3, rng)) for _ in range(2)]
        assert sum_span(bases).rank == 9

    def test_mismatch(self):
        A = tangent_space_basis(sample_point((2, 1), 3, task_rng(0)))
        B = tangent_space_basis(sample_point((2, 1), 4, task_rng(0)))
        with pytest.raises(ValueError):
            sum_span([A, B])


class TestDimensions:
    def test_ambient(self):
        assert ambient_dim(3, 3) == 9
        assert all(ambient_dim(2, d) == d for d in range(1, 12))
        assert ambient_dim(4, 7) == 119

    def test_expected(self):
        assert expected_secant_dim(3, (2, 1), 2) == 9
        for d in range(3, 9):
            for r in range(2, d + 1):
                for spec in partitions(d, r):
                    for s in range(1, 6):
                        assert expected_secant_dim(2, spec, s) == min(s * r + s - 1, d)
        for n in range(2, 6):
            assert expected_secant_dim(n, (3, 1, 1), 1) == 3 * (n - 1)

    def test_exceptional_case(self):
        rep = secant_dim(3, (2, 1), 2)
        assert (rep.computed_dim, rep.expected_dim, rep.defect) == (8, 9, 1)

    def test_binary(self):
        assert secant_dim(2, (3, 2), 2).computed_dim == 5

    def test_four_variables(self):
        rep = secant_dim(4, (2, 1), 2)
        assert (rep.computed_dim, rep.defect) == (13, 0)

    def test_reproducible(self):
        cfg = FieldConfig(seed=17)
        assert secant_dim(3, (2, 2, 1), 3, 2, cfg) == secant_dim(3, (2, 2, 1), 3, 2, cfg)

    def test_permutation_invariant(self):
        assert secant_dim(3, (1, 2, 2), 2) == secant_dim(3, (2, 1, 2), 2) == secant_dim(3, "2,2,1", 2)

    def test_monotone_in_s(self):
        for n, spec in [(3, (2, 1)), (3, (3, 1)), (4, (2, 2)), (2, (4, 1))]:
            dims = [secant_dim(n, spec, s).computed_dim for s in range(1, 8)]
            assert dims == sorted(dims)
            assert all(
                secant_dim(n, spec, s).computed_dim <= expected_secant_dim(n, spec, s) for s in range(1, 8)
            )

    def test_anomaly_is_raised(self, monkeypatch):
        monkeypatch.setattr(terracini, "expected_secant_dim", lambda n, spec, s: 0)
        with pytest.raises(RankAnomalyError):
            secant_dim(3, (2, 1), 1)

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            secant_dim(3, (2, 1), 1, trials=0)

    def test_report_dict_roundtrip(self):
        rep = secant_dim(3, (2, 1), 2)
        d = rep.to_dict()
        assert list(d) == ["n", "spec", "s", "computed_dim", "expected_dim", "defect", "trials", "prime", "seed"]
        assert d["spec"] == [2, 1]
        assert SecantReport.from_dict(d) == rep


class TestSpecialized:
    def test_two_variable_blocks(self):
        rep = specialized_secant_dim(4, (2, 2), 2, [(1, (0, 1)), (1, (2, 3))])
        assert rep.computed_dim == 13

    def test_three_variable_blocks(self):
        rep = specialized_secant_dim(6, (2, 2), 4, [(2, (0, 1, 2)), (2, (3, 4, 5))])
        assert rep.computed_dim == 43

    def test_trivial_block_matches_unspecialized(self):
        for n, spec in [(3, (2, 1)), (4, (3, 2, 1))]:
            a = specialized_secant_dim(n, spec, 1, [(1, tuple(range(n)))])
            assert a == secant_dim(n, spec, 1)

    @pytest.mark.parametrize(
        "blocks",
        [
            [(1, (0, 1)), (1, (1, 2))],  # overlap
            [(1, (0,)), (1, (2, 3))],  # too small
            [(1, (0, 1))],  # wrong point count
            [(1, (0, 1)), (1, (3, 4))],  # out of range
        ],
    )
    def test_bad_blocks(self, blocks):
        with pytest.raises(ValueError):
            specialized_secant_dim(4, (2, 2), 2, blocks)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.sampled_from(all_specs(5, d_min=3, r_min=2)), st.integers(1, 4),
       st.integers(0, 2**32 - 1))
def test_dimension_bounds(n, spec, s, seed):
    rep = secant_dim(n, spec, s, trials=1, cfg=FieldConfig(seed=seed))
    assert 0 <= rep.defect
    assert rep.computed_dim <= ambient_dim(n, spec.d)
    assert rep.expected_dim == rep.computed_dim + rep.defect


def test_subspace_span_of_zero_vectors():
    B = SubspaceBasis.span(2, 3, np.zeros((2, 4)), 7)
    assert B.rank == 0
    assert principal_ideal_piece(HomogeneousPoly.zero(2, 1, 7), 3).rank == 0
