import numpy as np
import pytest

from qedmagic.qlinalg import (
    ContractError,
    VanishingState,
    as_cmat,
    as_cvec,
    expectation,
    normalize,
    tensor,
)

X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])


def test_vector_shapes():
    assert as_cvec([1, 0]).dtype == complex
    assert as_cvec(np.ones((2, 2))).shape == (4,)
    for bad in ([1, 2, 3], [1] * 8, []):
        with pytest.raises(ContractError):
            as_cvec(bad)
    with pytest.raises(ContractError):
        as_cvec([1, np.nan])


def test_matrix_shapes():
    assert as_cmat(np.eye(4)).shape == (4, 4)
    with pytest.raises(ContractError):
        as_cmat(np.eye(3))
    with pytest.raises(ContractError):
        as_cmat(np.ones((2, 4)))
    with pytest.raises(ContractError):
        as_cmat([[np.inf, 0], [0, 1]])


def test_tensor_puts_particle_one_on_the_left():
    # Z on particle 1: |uu>, |ud> get +1 and |du>, |dd> get -1
    assert np.allclose(np.diag(tensor(Z, np.eye(2))), [1, 1, -1, -1])
    assert np.allclose(np.diag(tensor(np.eye(2), Z)), [1, -1, 1, -1])
    # X on particle 1 maps |ud> (index 1) to |dd> (index 3)
    assert tensor(X, np.eye(2))[3, 1] == 1
    with pytest.raises(ContractError):
        tensor(np.eye(4), X)


def test_normalize():
    v = normalize([3, 4j])
    assert np.isclose(np.linalg.norm(v), 1.0)
    assert np.allclose(v, [0.6, 0.8j])
    with pytest.raises(VanishingState):
        normalize([0, 0, 0, 0])
    with pytest.raises(VanishingState):
        normalize([1e-7, 0], scale=1.0)
    # the same vector is fine relative to a small scale
    assert np.isclose(abs(normalize([1e-7, 0], scale=1e-16)[0]), 1.0)


def test_expectation():
    plus = np.array([1, 1]) / np.sqrt(2)
    assert np.isclose(expectation(plus, X), 1.0)
    assert np.isclose(expectation(plus, Z), 0.0)
    with pytest.raises(ContractError):
        expectation([1, 1], X)
    with pytest.raises(ContractError):
        expectation(plus, np.eye(4))
