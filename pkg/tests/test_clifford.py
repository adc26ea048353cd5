import itertools

import numpy as np
import pytest

from causalreg import clifford as cl

CASES = [(d, rep) for d, reps in cl.REPRESENTATIONS.items() for rep in reps]


def sig(d):
    return cl.MetricSignature.minkowski(d)


def test_metric_signature_validation():
    assert sig(4).diag == (1, -1, -1, -1)
    with pytest.raises(ValueError):
        cl.MetricSignature(3, (1, -1, -1))
    with pytest.raises(ValueError):
        cl.MetricSignature(2, (-1, 1))


@pytest.mark.parametrize("d,rep", CASES)
def test_clifford_relation_exact(d, rep):
    s = sig(d)
    for m, n in itertools.product(range(d), repeat=2):
        ac = cl.anticommutator(cl.gamma(s, m, rep), cl.gamma(s, n, rep))
        assert np.array_equal(ac, 2 * s.g[m, n] * np.eye(d))


@pytest.mark.parametrize("d,rep", CASES)
def test_all_structural_identities_vanish_exactly(d, rep):
    defects = cl.clifford_defects(sig(d), rep)
    assert all(v == 0 for v in defects.values()), defects


def test_small_examples():
    s2, s4 = sig(2), sig(4)
    assert not cl.anticommutator(cl.gamma(s2, 0), cl.gamma(s2, 1)).any()
    assert np.array_equal(cl.gamma(s2, 0) @ cl.gamma(s2, 0), np.eye(2))
    assert np.array_equal(cl.gamma(s4, 1) @ cl.gamma(s4, 1), -np.eye(4))
    assert cl.trace_product([cl.identity(s4)]) == 4
    assert cl.trace_product([cl.gamma5(s4)]) == 0


def test_gamma_index_out_of_range():
    with pytest.raises(IndexError):
        cl.gamma(sig(2), 2)


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[2])
def test_gamma5_2d_is_product_of_gammas(rep):
    s = sig(2)
    prod = cl.gamma5(s, rep) @ cl.gamma(s, 0, rep) @ cl.gamma(s, 1, rep)
    assert np.array_equal(prod, prod[0, 0] * np.eye(2))
    assert prod[0, 0] != 0


@pytest.mark.parametrize("d,rep", CASES)
def test_sigma_antisymmetric(d, rep):
    s = sig(d)
    assert not cl.sigma(s, 0, 0, rep).any()
    assert not (cl.sigma(s, 0, 1, rep) + cl.sigma(s, 1, 0, rep)).any()


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[2])
def test_trace_gamma_gamma_2d(rep):
    s = sig(2)
    for m, n in itertools.product(range(2), repeat=2):
        assert cl.trace_product([cl.gamma(s, m, rep), cl.gamma(s, n, rep)]) == 2 * s.g[m, n]


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[4])
def test_trace_g5_gamma_gamma_vanishes(rep):
    s = sig(4)
    g5 = cl.gamma5(s, rep)
    for m, n in itertools.product(range(4), repeat=2):
        assert cl.trace_product([g5, cl.gamma(s, m, rep), cl.gamma(s, n, rep)]) == 0


def test_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        cl.trace_product([np.eye(2), np.eye(4)])


def test_trace_cyclic(rng):
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert abs(cl.trace_product([a, b]) - cl.trace_product([b, a])) < 1e-13


@pytest.mark.parametrize("d,rep", CASES)
def test_chirality_commutator(d, rep):
    s = sig(d)
    assert cl.chirality_commutator_check(s, (1, 1), rep) == 0
    assert cl.chirality_commutator_check(s, (-1, -1), rep) == 0


def test_mixed_chirality_commutator_nonzero():
    assert cl.chirality_commutator_check(sig(4), (1, -1)) == 4.0


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[2])
def test_duality_identity_and_sign_flip(rep):
    plus = cl.duality_identity_2d(cl.LeviCivita(2, 1), rep)
    minus = cl.duality_identity_2d(cl.LeviCivita(2, -1), rep)
    assert plus.defect == 0 and minus.defect == 0
    assert plus.per_index == (0.0, 0.0)
    assert minus.sign == -plus.sign


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[2])
def test_g5_sigma_trace_2d_constant(rep):
    assert cl.gamma5_sigma_trace_2d(rep) == 2j


@pytest.mark.parametrize("rep", cl.REPRESENTATIONS[4])
def test_g5_sigma_sigma_proportional_to_epsilon(rep):
    assert cl.epsilon_proportionality_defect(rep) < 1e-13
    assert cl.gamma5_sigma_sigma_constant(rep) == 4j
    flipped = cl.gamma5_sigma_sigma_constant(rep, cl.LeviCivita(4, -1))
    assert flipped == -4j


def test_levi_civita():
    eps = cl.LeviCivita(4)
    assert eps.upper(0, 1, 2, 3) == 1
    assert eps.upper(1, 0, 2, 3) == -1
    assert eps.upper(0, 0, 2, 3) == 0
    assert eps.lower(0, 1, 2, 3) == -1
    t = eps.tensor()
    assert np.array_equal(t, -np.swapaxes(t, 0, 1))


@pytest.mark.parametrize("d,rep", CASES)
def test_euclidean_gammas(d, rep):
    s = sig(d)
    for m, n in itertools.product(range(1, d + 1), repeat=2):
        a, b = cl.euclidean_gamma(s, m, rep), cl.euclidean_gamma(s, n, rep)
        assert np.array_equal(cl.anticommutator(a, b), 2 * (m == n) * np.eye(d))
        assert np.array_equal(a, a.conj().T)


def test_matrices_are_read_only():
    g = cl.gamma(sig(2), 0)
    with pytest.raises(ValueError):
        g[0, 0] = 5
