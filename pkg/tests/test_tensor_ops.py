"""Forward semantics of the tensor primitives."""

import numpy as np
import pytest

from drivealign.diffcore import Tensor, ops
from drivealign.diffcore.tensor import NonFiniteError
from drivealign.errors import ContractError, DegenerateInputError, DimensionError


def test_linear_identity_weight():
    x = Tensor([[1.0, 2.0]])
    w = Tensor([[1.0, 0.0], [0.0, 1.0]])
    b = Tensor([0.0, 0.0])
    y = ops.linear(x, w, b)
    assert np.allclose(y.data, [[1.0, 2.0]])


def test_linear_hand_arithmetic():
    y = ops.linear(Tensor([[1.0, 2.0]]), Tensor([[3.0], [4.0]]), Tensor([5.0]))
    assert np.allclose(y.data, [[16.0]])  # 1*3 + 2*4 + 5


def test_linear_paper_scale_flat_projection():
    s = 256 * 3 * 5
    rng = np.random.default_rng(0)
    x = Tensor(rng.normal(size=(2, s)))
    w = Tensor(rng.normal(size=(s, 64)) * 0.01)
    b = Tensor(np.zeros(64))
    assert ops.linear(x, w, b).shape == (2, 64)


def test_linear_shape_mismatch_names_shapes():
    with pytest.raises(DimensionError) as e:
        ops.linear(Tensor([[1.0, 2.0]]), Tensor([[1.0], [1.0], [1.0]]), Tensor([0.0]))
    assert "(1, 2)" in str(e.value) and "(3, 1)" in str(e.value)


def test_conv2d_output_extents_from_stride():
    x = Tensor(np.zeros((1, 256, 12, 20)))
    k = Tensor(np.zeros((256, 256, 3, 3)))
    assert ops.conv2d(x, k, stride=2, pad=1).shape == (1, 256, 6, 10)
    x2 = Tensor(np.zeros((1, 256, 6, 10)))
    assert ops.conv2d(x2, k, stride=2, pad=1).shape == (1, 256, 3, 5)


def test_conv2d_center_full_overlap_sum():
    x = Tensor(np.ones((1, 1, 3, 3)))
    k = Tensor(np.ones((1, 1, 3, 3)))
    y = ops.conv2d(x, k, stride=1, pad=1)
    assert y.shape == (1, 1, 3, 3)
    assert y.data[0, 0, 1, 1] == pytest.approx(9.0)


def test_conv2d_rejects_bad_stride_and_pad():
    x = Tensor(np.zeros((1, 1, 4, 4)))
    k = Tensor(np.zeros((1, 1, 3, 3)))
    with pytest.raises(ContractError):
        ops.conv2d(x, k, stride=3, pad=1)
    with pytest.raises(ContractError):
        ops.conv2d(x, k, stride=1, pad=2)


def test_conv2d_nonpositive_extent_errors():
    x = Tensor(np.zeros((1, 1, 2, 2)))
    k = Tensor(np.zeros((1, 1, 3, 3)))
    with pytest.raises(DimensionError):
        ops.conv2d(x, k, stride=1, pad=0)


def test_conv3d_view_fuse_collapses_view_axis():
    x = Tensor(np.zeros((2, 256, 6, 12, 20)))
    k = Tensor(np.zeros((256, 256, 6, 1, 1)))
    assert ops.conv3d_view_fuse(x, k).shape == (2, 256, 1, 12, 20)


def test_conv3d_view_fuse_average_kernel_is_view_mean():
    rng = np.random.default_rng(1)
    x = Tensor(rng.normal(size=(1, 3, 4, 2, 2)))
    k = np.zeros((3, 3, 4, 1, 1))
    for c in range(3):
        k[c, c, :, 0, 0] = 0.25
    y = ops.conv3d_view_fuse(x, Tensor(k))
    assert np.allclose(y.data[:, :, 0], x.data.mean(axis=2))


def test_conv3d_view_fuse_identity_single_view():
    rng = np.random.default_rng(2)
    x = Tensor(rng.normal(size=(1, 3, 1, 2, 2)))
    k = np.zeros((3, 3, 1, 1, 1))
    for c in range(3):
        k[c, c, 0, 0, 0] = 1.0
    y = ops.conv3d_view_fuse(x, Tensor(k))
    assert np.allclose(y.data, x.data)


def test_conv3d_view_fuse_view_mismatch():
    x = Tensor(np.zeros((1, 3, 4, 2, 2)))
    k = Tensor(np.zeros((3, 3, 5, 1, 1)))
    with pytest.raises(DimensionError):
        ops.conv3d_view_fuse(x, k)


def test_layernorm_constant_row():
    y = ops.layernorm(Tensor([[1.0, 1.0, 1.0, 1.0]]), Tensor(np.ones(4)), Tensor(np.zeros(4)))
    assert np.allclose(y.data, 0.0, atol=1e-2)


def test_layernorm_two_point_row():
    y = ops.layernorm(Tensor([[1.0, 3.0]]), Tensor(np.ones(2)), Tensor(np.zeros(2)), eps=1e-12)
    assert np.allclose(y.data, [[-1.0, 1.0]], atol=1e-5)


def test_layernorm_gamma_zero_collapse():
    y = ops.layernorm(Tensor([[2.0, 7.0]]), Tensor(np.zeros(2)), Tensor([5.0, 5.0]))
    assert np.allclose(y.data, [[5.0, 5.0]])


def test_relu():
    y = ops.relu(Tensor([-1.0, 0.0, 2.0]))
    assert np.allclose(y.data, [0.0, 0.0, 2.0])


def test_reshape_flattens_feature_map():
    x = Tensor(np.arange(1 * 256 * 3 * 5, dtype=float).reshape(1, 256, 3, 5))
    y = ops.reshape(x, (1, 3840))
    assert y.shape == (1, 3840)
    assert np.array_equal(y.data.reshape(-1), x.data.reshape(-1))


def test_reshape_count_mismatch():
    with pytest.raises(DimensionError):
        ops.reshape(Tensor(np.zeros((2, 3))), (7,))


def test_concat_token_axis():
    a = Tensor(np.zeros((2, 8, 32)))
    m = Tensor(np.zeros((2, 8, 32)))
    assert ops.concat([a, m], axis=1).shape == (2, 16, 32)


def test_concat_extent_mismatch():
    with pytest.raises(DimensionError):
        ops.concat([Tensor(np.zeros((2, 3))), Tensor(np.zeros((3, 3)))], axis=1)


def test_cosine_similarity_examples():
    v = Tensor([1.0, 2.0, 3.0])
    assert ops.cosine_similarity(v, Tensor([1.0, 2.0, 3.0])).item() == pytest.approx(1.0)
    assert ops.cosine_similarity(Tensor([1.0, 0.0]), Tensor([0.0, 1.0])).item() == pytest.approx(0.0)
    c = ops.cosine_similarity(Tensor([1.0, 2.0, 3.0]), Tensor([4.0, 5.0, 6.0])).item()
    assert c == pytest.approx(32.0 / (np.sqrt(14.0) * np.sqrt(77.0)), abs=1e-9)
    assert c == pytest.approx(0.97463, abs=1e-5)


def test_cosine_similarity_zero_norm_raises():
    with pytest.raises(DegenerateInputError):
        ops.cosine_similarity(Tensor([0.0, 0.0]), Tensor([1.0, 0.0]))


def test_non_finite_op_result_raises():
    with pytest.raises(NonFiniteError):
        ops.log(Tensor([0.0]))


def test_non_finite_init_raises():
    with pytest.raises(NonFiniteError):
        Tensor([float("nan")])


def test_softmax_rows_sum_to_one():
    rng = np.random.default_rng(3)
    x = Tensor(rng.normal(size=(4, 7)))
    s = ops.softmax(x, axis=-1)
    assert np.allclose(s.data.sum(axis=-1), 1.0, atol=1e-12)


def test_cumsum_forward():
    x = Tensor([[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]])
    y = ops.cumsum(x, axis=1)
    assert np.allclose(y.data, [[1.0, 2.0, 3.0], [1.0, 3.0, 6.0]])
