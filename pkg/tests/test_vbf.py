import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affdist.gf2 import AffineMap, BitMatrix, FieldSpec, random_affine_permutation
from affdist.sidon import is_sidon
from affdist.vbf import (
    VBF,
    component,
    differential_spectrum,
    format_truth_table,
    graph_of,
    is_apn,
    load_truth_table,
    nonlinearity,
    parse_truth_table,
    save_truth_table,
    vbf_from_polynomial,
    vbf_from_power,
    walsh_table,
)


def popcount_parity(v):
    return bin(int(v)).count("1") & 1


def walsh_direct(f, a, b):
    return sum((-1) ** (popcount_parity(b & int(f.table[x])) ^ popcount_parity(a & x)) for x in range(1 << f.n))


def random_vbf(draw_seed, n, m):
    rng = np.random.default_rng(draw_seed)
    return VBF(n, m, rng.integers(0, 1 << m, size=1 << n))


def power(n, d):
    return vbf_from_power(FieldSpec(n), d)


class TestWalsh:
    @given(st.integers(0, 2**32), st.integers(1, 5), st.integers(1, 4))
    def test_matches_direct_sum(self, seed, n, m):
        f = random_vbf(seed, n, m)
        W = walsh_table(f)
        for a in range(1 << n):
            for b in range(1 << m):
                assert W[a, b] == walsh_direct(f, a, b)

    @pytest.mark.parametrize("n,d", [(5, 3), (6, 3), (7, 5), (8, 57), (8, 9), (6, 11)])
    def test_parseval(self, n, d):
        W = walsh_table(power(n, d)).values
        assert (np.sum(W.astype(np.int64) ** 2, axis=1) == 1 << (2 * n)).all()

    def test_cube_over_gf8(self):
        f = power(3, 3)
        W = walsh_table(f).values
        assert set(np.unique(W[1:]).tolist()) <= {-4, 0, 4}
        assert nonlinearity(f) == 2

    def test_affine_has_nl_zero(self):
        A = random_affine_permutation(5, np.random.default_rng(3))
        assert nonlinearity(VBF(5, 5, A.table())) == 0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_nonlinearity_by_exhaustive_distance(self, n):
        # nl = min over nonzero b and affine Boolean g of the Hamming distance of b.f to g
        rng = np.random.default_rng(n)
        xs = np.arange(1 << n)
        affine_bool = [
            np.array([popcount_parity(a & x) ^ c for x in xs]) for a in range(1 << n) for c in (0, 1)
        ]
        for _ in range(10):
            f = VBF(n, n, rng.integers(0, 1 << n, size=1 << n))
            best = min(
                int(np.sum(component(f, b).table != g)) for b in range(1, 1 << n) for g in affine_bool
            )
            assert nonlinearity(f) == best

    def test_component_is_trace_of_scaled_power(self):
        # with the trace pairing, Tr(v x^d) is a component of x^d under some linear relabelling
        spec = FieldSpec(5)
        f = power(5, 3)
        comps = {tuple(component(f, b).table) for b in range(1, 32)}
        traces = {tuple(spec.trace(spec.mul(v, int(f.table[x]))) for x in range(32)) for v in range(1, 32)}
        assert comps == traces


class TestDifferential:
    def test_examples(self):
        assert differential_spectrum(power(3, 3)).delta_max == 2
        lin = VBF(4, 4, AffineMap(BitMatrix.identity(4), 0).table())
        assert differential_spectrum(lin).delta_max == 16
        assert is_apn(power(5, 3)) and is_apn(power(6, 3))
        assert not is_apn(power(4, 7))

    @given(st.integers(0, 2**32), st.integers(1, 6))
    def test_delta_even_and_rows_sum(self, seed, n):
        ds = differential_spectrum(random_vbf(seed, n, n))
        assert ds.delta_max % 2 == 0
        assert (ds.table.sum(axis=1) == 1 << n).all()

    def test_apn_requires_square(self):
        with pytest.raises(ValueError):
            is_apn(VBF(3, 2, np.zeros(8, dtype=int)))


def affine_equivalent(f, rng):
    A1 = random_affine_permutation(f.n, rng)
    A2 = random_affine_permutation(f.m, rng)
    L3 = BitMatrix(f.n, f.m, tuple(int(r) for r in rng.integers(0, 1 << f.m, size=f.n)))
    A3 = AffineMap(L3, int(rng.integers(0, 1 << f.m)))
    tab = A2.table()[f.table[A1.table()]] ^ A3.table()
    return VBF(f.n, f.m, tab)


class TestInvariance:
    @given(st.integers(0, 2**32))
    def test_extended_affine_equivalence(self, seed):
        rng = np.random.default_rng(seed)
        for f in (power(5, 3), power(6, 5), random_vbf(seed, 5, 5)):
            g = affine_equivalent(f, rng)
            assert differential_spectrum(f).delta_max == differential_spectrum(g).delta_max
            assert nonlinearity(f) == nonlinearity(g)
            wf = np.sort(np.abs(walsh_table(f).values[1:]).ravel())
            wg = np.sort(np.abs(walsh_table(g).values[1:]).ravel())
            assert (wf == wg).all()


class TestGraph:
    @given(st.integers(0, 2**32), st.integers(1, 5))
    def test_apn_iff_graph_sidon(self, seed, n):
        f = random_vbf(seed, n, n)
        assert is_apn(f) == is_sidon(graph_of(f).points)

    @pytest.mark.parametrize("n,d", [(4, 3), (5, 3), (5, 30), (6, 3), (7, 126)])
    def test_apn_graphs(self, n, d):
        f = power(n, d)
        assert is_apn(f) == is_sidon(graph_of(f, homogenize=False).points)

    def test_x14_graph_without_origin(self):
        f = power(4, 14)
        assert not is_apn(f)
        pts = [p for x, p in enumerate(graph_of(f, homogenize=False).points) if x != 0]
        assert is_sidon(pts)

    def test_homogenized_dimension(self):
        s = graph_of(power(4, 3))
        assert s.dim == 9 and all(p >> 8 == 1 for p in s.points)


class TestIO:
    @given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6))
    def test_roundtrip(self, seed, n, m):
        f = random_vbf(seed, n, m)
        assert parse_truth_table(format_truth_table(f)) == f

    def test_file_roundtrip(self, tmp_path):
        f = vbf_from_polynomial(FieldSpec(6), [(1, 3), (1, 10), (7, 24)])
        save_truth_table(f, tmp_path / "kim.tt")
        assert load_truth_table(tmp_path / "kim.tt") == f

    @pytest.mark.parametrize(
        "text", ["", "3\n", "2 2\n0\n1\n2\n", "2 2\n0\n1\n2\nzz\n", "2 2\n0\n1\n2\n4\n"]
    )
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_truth_table(text)

    def test_polynomial_sum(self):
        spec = FieldSpec(4)
        f = vbf_from_polynomial(spec, [(1, 3), (1, 5)])
        for x in range(16):
            assert f(x) == spec.pow(x, 3) ^ spec.pow(x, 5)


def test_is_affine():
    assert VBF(3, 3, np.arange(8) ^ 5).is_affine()
    assert not power(3, 3).is_affine()
    for bits in itertools.product([0, 1], repeat=4):
        g = VBF(2, 1, list(bits))
        expect = (bits[0] ^ bits[1] ^ bits[2] ^ bits[3]) == 0
        assert g.is_affine() == expect
