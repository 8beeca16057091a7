import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qedmagic.magic import (
    LOG_16_7,
    haar_states,
    m2,
    magic_value,
    max_magic_bound,
    pauli_expectations,
    sre,
    xi2,
    xi_p,
)
from qedmagic.qlinalg import ContractError
from qedmagic.stabilizers import CLIFFORD_GATES, H1Q, S1Q, catalog_matrix, pauli_strings

finite = st.floats(-1.0, 1.0, allow_nan=False)
coeffs = st.lists(st.tuples(finite, finite), min_size=4, max_size=4).filter(
    lambda cs: sum(a * a + b * b for a, b in cs) > 1e-3
)


def _state(cs):
    v = np.array([complex(a, b) for a, b in cs])
    return v / np.linalg.norm(v)


def test_stabilizer_states_have_zero_magic():
    assert np.allclose(m2(catalog_matrix()), 0.0, atol=1e-12)
    assert np.allclose(xi2(catalog_matrix()), 1.0)


def test_t_state():
    t = np.array([1, np.exp(0.25j * np.pi)]) / np.sqrt(2)
    assert math.isclose(sre(t), math.log(4 / 3), rel_tol=1e-12)
    v = magic_value(np.kron(t, [1, 0]))
    assert math.isclose(v.m2, math.log(4 / 3), rel_tol=1e-12)
    assert math.isclose(v.xi2, 0.75, rel_tol=1e-12)


def test_pauli_distribution(rng):
    # xi_P = <P>^2 / d is a probability distribution and Xi_2 = d sum xi_P^2
    psi = haar_states(rng, 1)[0]
    probs = [xi_p(psi, p) for p in pauli_strings(2)]
    assert math.isclose(sum(probs), 1.0, rel_tol=1e-12)
    assert math.isclose(4 * sum(q * q for q in probs), xi2(psi), rel_tol=1e-12)


def test_expectations_sum_rule(rng):
    # sum_P <P>^2 = d for any pure state
    e = pauli_expectations(haar_states(rng, 50))
    assert np.allclose(np.sum(e**2, axis=-1), 4.0)


def test_bounds():
    assert math.isclose(max_magic_bound(4, kind="sic_bound"), math.log(5 / 2))
    assert math.isclose(max_magic_bound(4), LOG_16_7)
    assert math.isclose(max_magic_bound(2, kind="sic_bound"), math.log(3 / 2))
    with pytest.raises(ContractError):
        max_magic_bound(3)
    with pytest.raises(ContractError):
        max_magic_bound(4, kind="nope")


def test_sre_contracts():
    with pytest.raises(ContractError):
        sre([1, 0, 0, 0], alpha=1)
    with pytest.raises(ContractError):
        sre([1, 1, 0, 0])
    with pytest.raises(ContractError):
        xi2(np.ones(3))


def test_sre_never_prints_negative_zero():
    assert math.copysign(1.0, sre([1, 0, 0, 0])) == 1.0
    assert math.copysign(1.0, magic_value([1, 0, 0, 0]).m2) == 1.0


def test_haar_sample_stays_below_the_bound(rng):
    values = m2(haar_states(rng, 20000))
    assert values.min() >= -1e-12
    assert values.max() < LOG_16_7


@settings(max_examples=200, deadline=None)
@given(coeffs, st.floats(0, 2 * math.pi))
def test_global_phase_invariance(cs, phase):
    psi = _state(cs)
    assert math.isclose(sre(psi), sre(np.exp(1j * phase) * psi), abs_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(coeffs, st.lists(st.sampled_from(sorted(CLIFFORD_GATES)), max_size=12))
def test_clifford_invariance(cs, gates):
    psi = _state(cs)
    phi = psi
    for g in gates:
        phi = CLIFFORD_GATES[g] @ phi
    assert math.isclose(sre(psi), sre(phi), abs_tol=1e-10)


@settings(max_examples=200, deadline=None)
@given(coeffs)
def test_range(cs):
    value = sre(_state(cs))
    assert -1e-12 <= value <= LOG_16_7 + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.tuples(finite, finite, finite, finite).filter(lambda c: sum(x * x for x in c) > 1e-3))
def test_product_states_are_additive(c):
    a = np.array([complex(c[0], c[1]), 1.0])
    b = np.array([complex(c[2], c[3]), 1.0])
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    assert math.isclose(sre(np.kron(a, b)), sre(a) + sre(b), abs_tol=1e-10)


def test_local_clifford_single_qubit(rng):
    psi = haar_states(rng, 1, dim=2)[0]
    for u in (H1Q, S1Q, H1Q @ S1Q):
        assert math.isclose(sre(psi), sre(u @ psi), abs_tol=1e-12)
