import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pertsemi import Algebra, PertMatrix, TensorElement, identity_element, realize, sample_member
from pertsemi import io
from pertsemi.matalg import embed_quaternion


def test_dumps_uses_17_significant_digits():
    assert io.dumps(0.1) == "0.10000000000000001"
    assert io.dumps(0.0) == "0.0"
    assert io.dumps(-2.0) == "-2.0"
    assert io.dumps(1e-20) == "9.9999999999999995e-21"
    assert io.dumps({"a": [1, True, None, "x"]}) == '{"a":[1,true,null,"x"]}'


def test_dumps_rejects_non_finite():
    with pytest.raises(ValueError):
        io.dumps(float("nan"))
    with pytest.raises(TypeError):
        io.dumps(object())


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_dumps_round_trips_floats(x):
    assert json.loads(io.dumps(x)) == x


def test_matrix_format():
    m = np.array([[1 + 2j, 3], [0, -1j]])
    doc = io.matrix_to_json(m)
    assert doc == [[[1.0, 2.0], [3.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]]
    assert np.array_equal(io.matrix_from_json(doc), m)
    assert np.array_equal(io.matrix_from_json([[1, [0, 1]], [2.5, 0]]), [[1, 1j], [2.5, 0]])


@pytest.mark.parametrize("bad", [[], [[]], [[1, 2], [3]], [["a"]], [[[1, 2, 3]]], {"x": 1}])
def test_bad_matrices(bad):
    with pytest.raises(io.ValidationError):
        io.matrix_from_json(bad)


def test_quaternion_entries():
    m = io.quaternion_matrix_from_json([[[1, 2, 3, 4]]])
    assert np.array_equal(m, embed_quaternion([1, 2, 3, 4]))
    with pytest.raises(io.ValidationError):
        io.quaternion_matrix_from_json([[[1, 2]]])


def test_tensor_round_trip():
    e = identity_element(Algebra.parse("M2(R)+H"))
    back = io.tensor_from_json(json.loads(io.dumps(io.tensor_to_json(e))))
    assert back.algebra == e.algebra
    assert np.array_equal(back.left, e.left) and np.array_equal(back.right, e.right)


def test_pert_matrix_round_trip_is_exact():
    m = sample_member(Algebra.parse("M2(H)"), 4)
    back = io.pert_matrix_from_json(json.loads(io.dumps(io.pert_matrix_to_json(m))))
    assert np.array_equal(back.mat, m.mat)


def test_quaternionic_tensor_input():
    doc = {
        "v": 1,
        "algebra": [{"field": "H", "n": 1}],
        "terms": [{"a": [[[1, 0, 0, 0]]], "b": [[[0, 0, 1, 0]]]}],
    }
    e = io.tensor_from_json(doc)
    assert np.array_equal(e.right[0], [[0, 1], [-1, 0]])
    doc["algebra"] = [{"field": "C", "n": 1}]
    with pytest.raises(io.ValidationError):
        io.tensor_from_json(doc)


@pytest.mark.parametrize(
    "doc",
    [
        {"algebra": [{"field": "C", "n": 1}], "terms": [{"a": [[1]], "b": [[1]]}]},
        {"v": 2, "algebra": [{"field": "C", "n": 1}], "terms": [{"a": [[1]], "b": [[1]]}]},
        {"v": 1, "algebra": [{"field": "X", "n": 1}], "terms": [{"a": [[1]], "b": [[1]]}]},
        {"v": 1, "algebra": [{"field": "C", "n": 0}], "terms": [{"a": [[1]], "b": [[1]]}]},
        {"v": 1, "algebra": [{"field": "C", "n": 1}], "terms": []},
        {"v": 1, "algebra": [{"field": "C", "n": 2}], "terms": [{"a": [[1]], "b": [[1]]}]},
        {"v": 1, "algebra": [{"field": "R", "n": 1}], "terms": [{"a": [[[0, 1]]], "b": [[1]]}]},
    ],
)
def test_invalid_tensors(doc):
    with pytest.raises(io.ValidationError):
        io.tensor_from_json(doc)


def test_invalid_pert_matrix():
    with pytest.raises(io.ValidationError):
        io.pert_matrix_from_json({"v": 1, "algebra": [{"field": "C", "n": 2}], "mat": [[1]]})


def test_element_dispatch():
    one = identity_element(Algebra.parse("M2(C)"))
    assert isinstance(io.element_from_json(io.tensor_to_json(one)), TensorElement)
    assert isinstance(io.element_from_json(io.pert_matrix_to_json(realize(one))), PertMatrix)
    with pytest.raises(io.ValidationError):
        io.element_from_json({"v": 1})


def test_algebra_formats():
    assert io.algebra_from_json("M2(R)+H") == Algebra.parse("M2(R)+H")
    assert io.algebra_from_json([{"field": "H", "n": 2}]) == Algebra.matrix("H", 2)
    with pytest.raises(io.ValidationError):
        io.algebra_from_json("M2(Q)")


def test_dirac_formats():
    assert np.array_equal(io.dirac_from_json({"v": 1, "D": [[1, 0], [0, 2]]}), np.diag([1, 2]))
    assert np.array_equal(io.dirac_from_json([[1]]), [[1]])
    with pytest.raises(io.ValidationError):
        io.dirac_from_json({"D": [[1]]})
