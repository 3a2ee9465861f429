"""Differentiable primitives: the op set needed by the stack and projectors.

No general broadcasting framework is attempted; elementwise ops accept numpy
broadcasting and un-broadcast gradients, everything else is strict about
shapes and raises ``DimensionError`` naming the offending extents.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ContractError, DegenerateInputError, DimensionError
from .tensor import Tensor

__all__ = [
    "add", "sub", "mul", "div", "power", "exp", "log", "sqrt", "relu",
    "reshape", "transpose", "concat", "slice_axis", "take", "sum_", "mean",
    "cumsum", "matmul", "linear", "conv2d", "conv3d_view_fuse", "layernorm",
    "softmax", "cosine_similarity", "dot",
]


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


# -- elementwise ---------------------------------------------------------------


def add(a: Tensor, b: Tensor) -> Tensor:
    data = a.data + b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g, b.shape))

    return Tensor._from_op(data, (a, b), bw, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    data = a.data - b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(-g, b.shape))

    return Tensor._from_op(data, (a, b), bw, "sub")


def mul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data * b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * a.data, b.shape))

    return Tensor._from_op(data, (a, b), bw, "mul")


def div(a: Tensor, b: Tensor) -> Tensor:
    data = a.data / b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g / b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(-g * a.data / (b.data * b.data), b.shape))

    return Tensor._from_op(data, (a, b), bw, "div")


def power(a: Tensor, exponent: float) -> Tensor:
    e = float(exponent)
    data = a.data ** e

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * e * a.data ** (e - 1.0))

    return Tensor._from_op(data, (a,), bw, "power")


def exp(a: Tensor) -> Tensor:
    data = np.exp(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * data)

    return Tensor._from_op(data, (a,), bw, "exp")


def log(a: Tensor) -> Tensor:
    data = np.log(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g / a.data)

    return Tensor._from_op(data, (a,), bw, "log")


def sqrt(a: Tensor) -> Tensor:
    data = np.sqrt(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * 0.5 / data)

    return Tensor._from_op(data, (a,), bw, "sqrt")


def relu(a: Tensor) -> Tensor:
    data = np.maximum(a.data, 0.0)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * (a.data > 0.0))

    return Tensor._from_op(data, (a,), bw, "relu")


# -- structural ----------------------------------------------------------------


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    shape = tuple(int(s) for s in shape)
    n_new = int(np.prod(shape)) if shape else 1
    if n_new != a.size:
        raise DimensionError(f"reshape {a.shape} -> {shape}: element count {a.size} != {n_new}")
    data = a.data.reshape(shape)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g.reshape(a.shape))

    return Tensor._from_op(data, (a,), bw, "reshape")


def transpose(a: Tensor, axes: tuple[int, ...]) -> Tensor:
    data = np.ascontiguousarray(a.data.transpose(axes))
    inv = tuple(np.argsort(axes))

    def bw(g):
        if a.requires_grad:
            a._accumulate(g.transpose(inv))

    return Tensor._from_op(data, (a,), bw, "transpose")


def concat(tensors: Sequence[Tensor], axis: int) -> Tensor:
    if not tensors:
        raise ContractError("concat of zero tensors")
    ref = tensors[0].shape
    for t in tensors[1:]:
        if len(t.shape) != len(ref) or any(
            s != r for i, (s, r) in enumerate(zip(t.shape, ref)) if i != axis % len(ref)
        ):
            raise DimensionError(f"concat extent mismatch: {ref} vs {t.shape} on axis {axis}")
    data = np.concatenate([t.data for t in tensors], axis=axis)
    offsets = np.cumsum([0] + [t.shape[axis] for t in tensors])

    def bw(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                idx = [slice(None)] * g.ndim
                idx[axis] = slice(lo, hi)
                t._accumulate(g[tuple(idx)])

    return Tensor._from_op(data, tuple(tensors), bw, "concat")


def slice_axis(a: Tensor, axis: int, start: int, length: int) -> Tensor:
    if start < 0 or start + length > a.shape[axis]:
        raise DimensionError(f"slice [{start}:{start + length}] outside extent {a.shape[axis]}")
    idx = [slice(None)] * a.data.ndim
    idx[axis] = slice(start, start + length)
    idx = tuple(idx)
    data = a.data[idx].copy()

    def bw(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            full[idx] = g
            a._accumulate(full)

    return Tensor._from_op(data, (a,), bw, "slice")


def take(a: Tensor, indices, axis: int = 0) -> Tensor:
    idx = np.asarray(indices, dtype=np.intp)
    data = np.take(a.data, idx, axis=axis)

    def bw(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            np.add.at(full, (slice(None),) * axis + (idx,), g)
            a._accumulate(full)

    return Tensor._from_op(data, (a,), bw, "take")


def sum_(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    data = a.data.sum(axis=axis, keepdims=keepdims)

    def bw(g):
        if not a.requires_grad:
            return
        if axis is None:
            a._accumulate(np.broadcast_to(g, a.shape).copy() if keepdims
                          else np.full(a.shape, float(g.reshape(()))))
        else:
            gg = g if keepdims else np.expand_dims(g, axis)
            a._accumulate(np.broadcast_to(gg, a.shape).copy())

    return Tensor._from_op(np.asarray(data), (a,), bw, "sum")


def mean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    if axis is None:
        n = a.size
    elif isinstance(axis, tuple):
        n = int(np.prod([a.shape[ax] for ax in axis]))
    else:
        n = a.shape[axis]
    return mul(sum_(a, axis=axis, keepdims=keepdims), Tensor(1.0 / n))


def cumsum(a: Tensor, axis: int) -> Tensor:
    data = np.cumsum(a.data, axis=axis)

    def bw(g):
        if a.requires_grad:
            a._accumulate(np.flip(np.cumsum(np.flip(g, axis=axis), axis=axis), axis=axis))

    return Tensor._from_op(data, (a,), bw, "cumsum")


# -- linear algebra ------------------------------------------------------------


def matmul(a: Tensor, b: Tensor) -> Tensor:
    an, bn = a.data.ndim, b.data.ndim
    if an == 2 and bn == 2:
        if a.shape[1] != b.shape[0]:
            raise DimensionError(f"matmul {a.shape} @ {b.shape}: inner extents differ")
        data = a.data @ b.data

        def bw(g):
            if a.requires_grad:
                a._accumulate(g @ b.data.T)
            if b.requires_grad:
                b._accumulate(a.data.T @ g)

    elif an == 3 and bn == 3:
        if a.shape[0] != b.shape[0] or a.shape[2] != b.shape[1]:
            raise DimensionError(f"matmul {a.shape} @ {b.shape}: batch or inner extents differ")
        data = a.data @ b.data

        def bw(g):
            if a.requires_grad:
                a._accumulate(g @ b.data.transpose(0, 2, 1))
            if b.requires_grad:
                b._accumulate(a.data.transpose(0, 2, 1) @ g)

    elif an == 3 and bn == 2:
        if a.shape[2] != b.shape[0]:
            raise DimensionError(f"matmul {a.shape} @ {b.shape}: inner extents differ")
        data = a.data @ b.data

        def bw(g):
            if a.requires_grad:
                a._accumulate(g @ b.data.T)
            if b.requires_grad:
                b._accumulate(a.data.reshape(-1, a.shape[2]).T @ g.reshape(-1, g.shape[2]))

    else:
        raise DimensionError(f"matmul unsupported ranks {an} and {bn}")
    return Tensor._from_op(data, (a, b), bw, "matmul")


def dot(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape or a.data.ndim != 1:
        raise DimensionError(f"dot requires equal 1-D shapes, got {a.shape} and {b.shape}")
    return sum_(mul(a, b))


def linear(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """y[i, j] = sum_k x[i, k] w[k, j] + b[j]."""
    if x.data.ndim != 2 or w.data.ndim != 2 or x.shape[1] != w.shape[0]:
        raise DimensionError(f"linear: x {x.shape} incompatible with w {w.shape}")
    if b.data.ndim != 1 or b.shape[0] != w.shape[1]:
        raise DimensionError(f"linear: bias {b.shape} incompatible with w {w.shape}")
    return add(matmul(x, w), b)


# -- convolutions ---------------------------------------------------------------


def conv2d(x: Tensor, kernel: Tensor, stride: int, pad: int) -> Tensor:
    """3x3 cross-correlation over B x C x H x W input."""
    if x.data.ndim != 4 or kernel.data.ndim != 4:
        raise DimensionError(f"conv2d ranks: x {x.shape}, kernel {kernel.shape}")
    bsz, cin, h, w = x.shape
    cout, kc, kh, kw = kernel.shape
    if (kh, kw) != (3, 3):
        raise ContractError(f"conv2d supports 3x3 kernels only, got {kh}x{kw}")
    if stride not in (1, 2):
        raise ContractError(f"conv2d stride must be 1 or 2, got {stride}")
    if pad not in (0, 1):
        raise ContractError(f"conv2d pad must be 0 or 1, got {pad}")
    if kc != cin:
        raise DimensionError(f"conv2d channels: input {x.shape} vs kernel {kernel.shape}")
    h2 = (h + 2 * pad - 3) // stride + 1
    w2 = (w + 2 * pad - 3) // stride + 1
    if h2 <= 0 or w2 <= 0:
        raise DimensionError(f"conv2d output extent non-positive for input {x.shape}")

    xp = np.pad(x.data, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x.data
    win = sliding_window_view(xp, (3, 3), axis=(2, 3))[:, :, ::stride, ::stride]
    # win: B x C x H2 x W2 x 3 x 3
    cols = np.ascontiguousarray(win.transpose(0, 2, 3, 1, 4, 5)).reshape(bsz * h2 * w2, cin * 9)
    kmat = kernel.data.reshape(cout, cin * 9)
    out = (cols @ kmat.T).reshape(bsz, h2, w2, cout).transpose(0, 3, 1, 2)

    def bw(g):
        gmat = np.ascontiguousarray(g.transpose(0, 2, 3, 1)).reshape(bsz * h2 * w2, cout)
        if kernel.requires_grad:
            kernel._accumulate((gmat.T @ cols).reshape(kernel.shape))
        if x.requires_grad:
            t = np.tensordot(g, kernel.data, axes=([1], [0]))  # B,H2,W2,C,3,3
            dxp = np.zeros_like(xp)
            for i in range(3):
                for j in range(3):
                    dxp[:, :, i:i + stride * h2:stride, j:j + stride * w2:stride] += \
                        t[..., i, j].transpose(0, 3, 1, 2)
            if pad:
                dxp = dxp[:, :, pad:-pad, pad:-pad]
            x._accumulate(dxp)

    return Tensor._from_op(np.ascontiguousarray(out), (x, kernel), bw, "conv2d")


def conv3d_view_fuse(x: Tensor, kernel: Tensor) -> Tensor:
    """Collapse the view axis: B x C x V x H x W -> B x C' x 1 x H x W with a V x 1 x 1 kernel."""
    if x.data.ndim != 5 or kernel.data.ndim != 5:
        raise DimensionError(f"conv3d_view_fuse ranks: x {x.shape}, kernel {kernel.shape}")
    bsz, cin, views, h, w = x.shape
    cout, kc, kv, k1, k2 = kernel.shape
    if (k1, k2) != (1, 1) or kc != cin or kv != views:
        raise DimensionError(
            f"conv3d_view_fuse: kernel {kernel.shape} incompatible with input {x.shape}")
    kern = kernel.data.reshape(cout, cin, views)
    out = np.einsum("bcvhw,ocv->bohw", x.data, kern, optimize=True)[:, :, None, :, :]

    def bw(g):
        gsq = g[:, :, 0, :, :]
        if kernel.requires_grad:
            kernel._accumulate(
                np.einsum("bohw,bcvhw->ocv", gsq, x.data, optimize=True).reshape(kernel.shape))
        if x.requires_grad:
            x._accumulate(np.einsum("bohw,ocv->bcvhw", gsq, kern, optimize=True))

    return Tensor._from_op(np.ascontiguousarray(out), (x, kernel), bw, "conv3d_view_fuse")


# -- normalization and similarity ------------------------------------------------


def layernorm(x: Tensor, gamma: Tensor, beta: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize each row of B x D to zero mean, unit variance, then scale and shift."""
    if x.data.ndim != 2:
        raise DimensionError(f"layernorm expects B x D input, got {x.shape}")
    d = x.shape[1]
    if d == 0:
        raise DimensionError("layernorm on zero-width rows")
    if gamma.shape != (d,) or beta.shape != (d,):
        raise DimensionError(f"layernorm affine shapes {gamma.shape}/{beta.shape} != ({d},)")
    if eps <= 0:
        raise ContractError(f"layernorm eps must be positive, got {eps}")
    mu = mean(x, axis=1, keepdims=True)
    centered = sub(x, mu)
    var = mean(mul(centered, centered), axis=1, keepdims=True)
    normed = div(centered, sqrt(add(var, Tensor(eps))))
    return add(mul(normed, gamma), beta)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    shift = Tensor(np.max(x.data, axis=axis, keepdims=True))
    e = exp(sub(x, shift))
    return div(e, sum_(e, axis=axis % x.data.ndim, keepdims=True))


def cosine_similarity(a: Tensor, b: Tensor) -> Tensor:
    """(a . b) / (|a| |b|) for 1-D tensors of equal length."""
    if a.data.ndim != 1 or b.data.ndim != 1 or a.shape != b.shape:
        raise DimensionError(f"cosine_similarity shapes {a.shape} and {b.shape}")
    na = float(np.linalg.norm(a.data))
    nb = float(np.linalg.norm(b.data))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("cosine_similarity of a zero-norm vector")
    num = dot(a, b)
    den = mul(sqrt(dot(a, a)), sqrt(dot(b, b)))
    return div(num, den)
