"""Property tests for shape algebra and data-preserving structural ops."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from drivealign.diffcore import Tensor, ops
from drivealign.errors import DimensionError


@settings(max_examples=60, deadline=None)
@given(
    h=st.integers(1, 32), w=st.integers(1, 32),
    stride=st.sampled_from([1, 2]), pad=st.sampled_from([0, 1]),
)
def test_conv2d_extent_formula(h, w, stride, pad):
    h2 = (h + 2 * pad - 3) // stride + 1
    w2 = (w + 2 * pad - 3) // stride + 1
    x = Tensor(np.zeros((1, 2, h, w)))
    k = Tensor(np.zeros((3, 2, 3, 3)))
    if h2 <= 0 or w2 <= 0:
        try:
            ops.conv2d(x, k, stride=stride, pad=pad)
            assert False, "expected DimensionError"
        except DimensionError:
            return
    else:
        assert ops.conv2d(x, k, stride=stride, pad=pad).shape == (1, 3, h2, w2)


@settings(max_examples=40, deadline=None)
@given(
    a=st.integers(1, 6), b=st.integers(1, 6), c=st.integers(1, 6),
    seed=st.integers(0, 10_000),
)
def test_reshape_preserves_flat_data(a, b, c, seed):
    rng = np.random.default_rng(seed)
    x = Tensor(rng.normal(size=(a, b, c)))
    y = ops.reshape(x, (a * b * c,))
    z = ops.reshape(y, (a, b, c))
    assert np.array_equal(z.data, x.data)
    assert np.array_equal(y.data, x.data.reshape(-1))


@settings(max_examples=40, deadline=None)
@given(
    rows=st.integers(1, 5),
    c1=st.integers(1, 5), c2=st.integers(1, 5),
    seed=st.integers(0, 10_000),
)
def test_concat_slice_roundtrip(rows, c1, c2, seed):
    rng = np.random.default_rng(seed)
    a = Tensor(rng.normal(size=(rows, c1)))
    b = Tensor(rng.normal(size=(rows, c2)))
    cat = ops.concat([a, b], axis=1)
    assert cat.shape == (rows, c1 + c2)
    back_a = ops.slice_axis(cat, 1, 0, c1)
    back_b = ops.slice_axis(cat, 1, c1, c2)
    assert np.array_equal(back_a.data, a.data)
    assert np.array_equal(back_b.data, b.data)
