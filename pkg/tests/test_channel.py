import numpy as np
import pytest

from solvcirc.channel import (BoundaryChannel, apply_channel, check_cptp,
                              kraus_from_lpdo, kraus_from_mps,
                              kraus_from_two_site)
from solvcirc.linalg import dagger, kron, make_rng, max_abs, partial_trace
from solvcirc.mps import (Lpdo, MpsTensor, ghz_cluster_family,
                          product_state_mps, random_left_canonical,
                          random_lpdo, two_site_from_pair)


def random_joint_density(chi, q, l_r, rng):
    d = chi * q ** l_r
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = x @ dagger(x)
    return rho / np.trace(rho).real


class TestKrausFromMps:
    def test_reset_channel(self):
        ch = kraus_from_mps(product_state_mps([1, 0]))
        rng = make_rng(0)
        rho = random_joint_density(1, 2, 2, rng)
        out = apply_channel(ch, rho)
        # boundary site becomes |0><0|, remainder is the traced input
        rest = partial_trace(rho, [2, 2], [1])
        proj0 = np.zeros((2, 2), dtype=complex)
        proj0[0, 0] = 1
        assert max_abs(out - kron(proj0, rest)) < 1e-12

    def test_ghz_cluster_q4_shapes(self):
        ch = kraus_from_mps(ghz_cluster_family(0.5, 4))
        assert len(ch.kraus) == 16
        assert all(k.shape == (8, 8) for k in ch.kraus)

    def test_cptp(self):
        rng = make_rng(1)
        for mps in (product_state_mps([1, 0]),
                    ghz_cluster_family(np.pi / 8, 4),
                    random_left_canonical(3, 2, rng)):
            assert check_cptp(kraus_from_mps(mps)) < 1e-12

    def test_rejects_non_canonical(self):
        bad = MpsTensor(2, 1, np.array([[[2.0]], [[0.0]]]))
        with pytest.raises(ValueError):
            kraus_from_mps(bad)


class TestKrausFromTwoSite:
    def test_cptp(self):
        rng = make_rng(2)
        cell = two_site_from_pair(random_left_canonical(2, 3, rng),
                                  random_left_canonical(2, 3, rng))
        assert check_cptp(kraus_from_two_site(cell)) < 1e-12

    def test_equal_tensors_reduce_to_pair_products(self):
        t = ghz_cluster_family(np.pi / 4, 2)
        cell = two_site_from_pair(t, t)
        ch_cell = kraus_from_two_site(cell)
        ch_pure = kraus_from_mps(t)
        for a, b in zip(ch_cell.kraus, ch_pure.kraus):
            assert max_abs(a - b) < 1e-14

    def test_kraus_shape(self):
        rng = make_rng(3)
        cell = two_site_from_pair(random_left_canonical(2, 2, rng),
                                  random_left_canonical(2, 2, rng))
        ch = kraus_from_two_site(cell)
        assert all(k.shape == (4, 4) for k in ch.kraus)


class TestKrausFromLpdo:
    def test_d1_reduces_to_pure(self):
        t = ghz_cluster_family(np.pi / 4, 2)
        l = Lpdo(2, 2, 1, t.mats[:, None])
        ch_l = kraus_from_lpdo(l)
        ch_p = kraus_from_mps(t)
        assert len(ch_l.kraus) == len(ch_p.kraus)
        for a, b in zip(ch_l.kraus, ch_p.kraus):
            assert max_abs(a - b) < 1e-14

    def test_counts_and_cptp(self):
        l = random_lpdo(2, 2, 2, make_rng(4))
        ch = kraus_from_lpdo(l)
        assert len(ch.kraus) == 16
        assert all(k.shape == (4, 4) for k in ch.kraus)
        assert check_cptp(ch) < 1e-12


class TestCheckCptp:
    def test_scaled_kraus(self):
        ch = kraus_from_mps(product_state_mps([1, 0]))
        scaled = BoundaryChannel(ch.chi, ch.q, [2 * k for k in ch.kraus])
        assert abs(check_cptp(scaled) - 3.0) < 1e-12

    def test_empty_list(self):
        assert check_cptp(BoundaryChannel(1, 2, [])) == 1.0


class TestApplyChannel:
    def test_trace_preserved(self):
        rng = make_rng(5)
        ch = kraus_from_mps(ghz_cluster_family(0.4, 2))
        rho = random_joint_density(2, 2, 3, rng)
        out = apply_channel(ch, rho)
        assert abs(np.trace(out) - np.trace(rho)) < 1e-12

    def test_positivity_preserved(self):
        rng = make_rng(6)
        ch = kraus_from_mps(ghz_cluster_family(0.3, 4))
        rho = random_joint_density(2, 4, 2, rng)
        out = apply_channel(ch, rho)
        assert np.linalg.eigvalsh((out + dagger(out)) / 2).min() > -1e-10

    def test_matches_dense_embedding(self):
        rng = make_rng(7)
        ch = kraus_from_mps(ghz_cluster_family(np.pi / 4, 2))
        rho = random_joint_density(2, 2, 3, rng)
        out = apply_channel(ch, rho)
        dense = sum(kron(k, np.eye(4)) @ rho @ dagger(kron(k, np.eye(4)))
                    for k in ch.kraus)
        assert max_abs(out - dense) < 1e-13

    def test_commutes_with_disjoint_unitary(self):
        from solvcirc.linalg import haar_unitary
        rng = make_rng(8)
        ch = kraus_from_mps(ghz_cluster_family(np.pi / 4, 2))
        rho = random_joint_density(2, 2, 4, rng)
        for pad_left in (1, 2):  # unitary on site 1 and on site 2
            v = haar_unitary(2, rng)
            emb = kron(np.eye(2 * 2 ** pad_left), v, np.eye(2 ** (3 - pad_left)))
            a = apply_channel(ch, emb @ rho @ dagger(emb))
            b = emb @ apply_channel(ch, rho) @ dagger(emb)
            assert max_abs(a - b) < 1e-12

    def test_dimension_mismatch(self):
        ch = kraus_from_mps(product_state_mps([1, 0]))
        with pytest.raises(ValueError):
            apply_channel(ch, np.eye(3))
