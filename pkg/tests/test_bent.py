import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affdist.bent import (
    BentSpec,
    PreQuasifield,
    construct_mm,
    construct_ps,
    construct_qf,
    coordinate_projection,
    expected_bent_distance,
    field_quasifield,
    format_quasifield,
    is_vectorial_bent,
    load_quasifield,
    parse_quasifield,
    save_quasifield,
    star_divide,
    trace_projection,
    twisted_quasifield,
    validate_prequasifield,
)
from affdist.gf2 import BitMatrix, FieldSpec
from affdist.vbf import VBF, nonlinearity, vbf_from_power, walsh_table


def quasifields(m):
    spec = FieldSpec(m)
    qs = [field_quasifield(spec)]
    qs += [twisted_quasifield(spec, k) for k in range(1, m) if np.gcd(k, m) == 1]
    return qs


def all_three(q, spec):
    return [construct_mm(spec), construct_ps(q, spec), construct_qf(q, spec)]


class TestQuasifield:
    @pytest.mark.parametrize("m", range(1, 7))
    def test_bundled_are_valid(self, m):
        for q in quasifields(m):
            assert validate_prequasifield(q) is None, q.name

    def test_twist_requires_coprime(self):
        with pytest.raises(ValueError):
            twisted_quasifield(FieldSpec(4), 2)

    def test_axiom1_violation(self):
        star = field_quasifield(FieldSpec(3)).star.copy()
        star[1, 0] = 1
        v = validate_prequasifield(PreQuasifield(3, star))
        assert v.axiom == 1 and v.witness == (1, 0)

    def test_axiom2_violation(self):
        star = field_quasifield(FieldSpec(3)).star.copy()
        # swapping two entries of a row keeps it a permutation but breaks additivity
        star[2, [3, 5]] = star[2, [5, 3]]
        v = validate_prequasifield(PreQuasifield(3, star))
        assert v.axiom == 2 and v.witness[0] == 2

    def test_axiom3_violation(self):
        # a linear but singular left multiplication: a star b = a * (b with top bit cleared)
        spec = FieldSpec(3)
        star = np.array([[spec.mul(a, b & 3) for b in range(8)] for a in range(8)])
        v = validate_prequasifield(PreQuasifield(3, star))
        assert v.axiom == 3

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            PreQuasifield(2, np.zeros((4, 3), dtype=int))

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_star_divide(self, m):
        spec = FieldSpec(m)
        for q in quasifields(m):
            div = q.division_table()
            for y in range(1 << m):
                for a in range(1 << m):
                    assert star_divide(q, a, 0) == 0
                    if y:
                        assert star_divide(q, q(a, y), y) == a
                        assert div[q(a, y), y] == a
            if q.name.startswith("GF") and "twisted" not in q.name:
                assert all(star_divide(q, x, y) == spec.mul(x, spec.inv(y)) for x in range(1 << m) for y in range(1, 1 << m))

    @pytest.mark.parametrize("m", range(2, 7))
    def test_twisted_difference_map_is_bijective(self, m):
        for q in quasifields(m)[1:]:
            star = q.star
            for y1 in range(1 << m):
                for y2 in range(y1 + 1, 1 << m):
                    assert len(np.unique(star[y1] ^ star[y2])) == 1 << m

    def test_file_roundtrip(self, tmp_path):
        q = twisted_quasifield(FieldSpec(3))
        save_quasifield(q, tmp_path / "q.txt")
        assert np.array_equal(load_quasifield(tmp_path / "q.txt").star, q.star)
        assert np.array_equal(parse_quasifield(format_quasifield(q)).star, q.star)

    @pytest.mark.parametrize("text", ["", "2 2\n", "1\n0 0\n", "1\n0 0\n0\n"])
    def test_malformed_file(self, text):
        with pytest.raises(ValueError):
            parse_quasifield(text)


class TestSpecValidation:
    def test_unbalanced_gamma(self):
        with pytest.raises(ValueError, match="balanced"):
            BentSpec(2, 1, gamma=[0, 0, 0, 1])

    def test_tau_not_surjective(self):
        with pytest.raises(ValueError, match="surjective"):
            BentSpec(3, 2, tau=BitMatrix(3, 2, (1, 1, 0)))

    def test_sigma_pi_not_invertible(self):
        with pytest.raises(ValueError, match="sigma is not invertible"):
            BentSpec(2, 1, sigma=[0, 0, 1, 2])
        with pytest.raises(ValueError, match="pi is not invertible"):
            BentSpec(2, 1, pi=[0, 1, 1, 2])

    def test_h_range(self):
        with pytest.raises(ValueError):
            BentSpec(2, 1, h=[0, 2, 0, 0])

    def test_t_range(self):
        with pytest.raises(ValueError):
            BentSpec(2, 3)

    def test_ps_needs_gamma(self):
        with pytest.raises(ValueError):
            construct_ps(field_quasifield(FieldSpec(2)), BentSpec(2, 1))

    def test_trace_projection_surjective(self):
        for m in range(1, 7):
            spec = FieldSpec(m)
            for t in range(1, m + 1):
                assert trace_projection(spec, t).rank() == t


class TestConstructions:
    @given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m))), st.integers(0, 2**32))
    def test_random_specs_are_bent(self, mt, seed):
        m, t = mt
        spec = BentSpec.random(m, t, np.random.default_rng(seed))
        for q in quasifields(m):
            for f in all_three(q, spec):
                assert is_vectorial_bent(f)
                assert nonlinearity(f) == (1 << (2 * m - 1)) - (1 << (m - 1))

    def test_mm_boolean_example(self):
        spec = FieldSpec(2)
        f = construct_mm(BentSpec(2, 1, tau=trace_projection(spec, 1)))
        assert f.n == 4 and f.m == 1 and is_vectorial_bent(f)

    def test_mm_field_product(self):
        f = construct_mm(BentSpec(3, 3, tau=BitMatrix.identity(3)))
        mt = FieldSpec(3).mul_table()
        assert all(f(x + 8 * y) == mt[x, y] for x in range(8) for y in range(8))
        W = walsh_table(f).values
        assert (np.abs(W[1:]) == 8).all()

    @given(st.integers(0, 2**32))
    def test_zero_row_is_h(self, seed):
        spec = BentSpec.random(3, 2, np.random.default_rng(seed))
        q = twisted_quasifield(FieldSpec(3))
        for f in (construct_mm(spec), construct_qf(q, spec)):
            assert [f(8 * y) for y in range(8)] == spec.h.tolist()
        assert construct_ps(q, spec)(0) == spec.gamma[0]

    def test_ps_small_example(self):
        spec = FieldSpec(2)
        gamma = [spec.trace(a) for a in range(4)]
        f = construct_ps(field_quasifield(spec), BentSpec(2, 1, gamma=gamma))
        assert is_vectorial_bent(f) and nonlinearity(f) == 6

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_ps_preimage_count(self, m):
        rng = np.random.default_rng(m)
        for t in range(1, m + 1):
            for q in quasifields(m):
                spec = BentSpec.random(m, t, rng)
                f = construct_ps(q, spec)
                expect = 2 * (1 << m) - 1 + ((1 << (m - t)) - 1) * ((1 << m) - 1)
                assert int(np.sum(f.table == f(0))) == expect

    @given(st.integers(0, 2**32))
    def test_qf_three_components_bent(self, seed):
        rng = np.random.default_rng(seed)
        spec = BentSpec.random(3, 2, rng)
        f = construct_qf(field_quasifield(FieldSpec(3)), spec)
        W = walsh_table(f).values
        assert (np.abs(W[1:]) == 8).all()

    @given(st.integers(0, 2**32))
    def test_qf_field_reduces_to_mm(self, seed):
        rng = np.random.default_rng(seed)
        m, t = 3, 2
        fs = FieldSpec(m)
        h = rng.integers(0, 1 << t, size=1 << m)
        tau = trace_projection(fs, t)
        qf = construct_qf(field_quasifield(fs), BentSpec(m, t, tau=tau, h=h))
        mm = construct_mm(BentSpec(m, t, tau=tau, h=h))
        assert qf == mm

    def test_expected_distance(self):
        assert expected_bent_distance(2, 2) == 9
        assert expected_bent_distance(2, 1) == 6
        assert expected_bent_distance(3, 2) == 42


class TestIsBent:
    def test_affine_not_bent(self):
        f = VBF(4, 2, [(x & 3) ^ 1 for x in range(16)])
        assert not is_vectorial_bent(f)

    def test_cube_not_bent(self):
        assert not is_vectorial_bent(vbf_from_power(FieldSpec(6), 3))

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            is_vectorial_bent(vbf_from_power(FieldSpec(5), 3))

    def test_coordinate_projection(self):
        P = coordinate_projection(4, 2)
        assert [P.vecmul(x) for x in range(16)] == [x & 3 for x in range(16)]
