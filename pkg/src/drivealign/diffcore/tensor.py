"""Reverse-mode autodiff on dense float64 arrays.

A ``Tensor`` wraps a C-contiguous float64 ndarray. Operations (see ``ops``)
link result tensors to their inputs, forming an implicit acyclic compute
graph; ``backward`` walks it in reverse topological order and accumulates
gradients into every tensor that requires them. Values are treated as
immutable once produced; only the optimizer mutates parameter data in place.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from ..errors import ContractError, DriveAlignError


class NonFiniteError(DriveAlignError, ArithmeticError):
    """An operation produced NaN or Inf."""


def _as_f64(data) -> np.ndarray:
    arr = np.ascontiguousarray(data, dtype=np.float64)
    return arr


class Tensor:
    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        self.data = _as_f64(data)
        if not np.isfinite(self.data).all():
            raise NonFiniteError(f"tensor {name or ''} initialized with non-finite entries")
        self.requires_grad = bool(requires_grad)
        self.grad: np.ndarray | None = None
        self._parents: tuple[Tensor, ...] = ()
        self._backward: Callable[[np.ndarray], None] | None = None
        self.name = name

    # -- graph construction -------------------------------------------------

    @staticmethod
    def _from_op(data: np.ndarray, parents: tuple["Tensor", ...],
                 backward_fn: Callable[[np.ndarray], None], op: str) -> "Tensor":
        if not np.isfinite(data).all():
            raise NonFiniteError(f"non-finite result in op '{op}'")
        out = Tensor.__new__(Tensor)
        out.data = np.ascontiguousarray(data)
        out.requires_grad = any(p.requires_grad for p in parents)
        out.grad = None
        out.name = None
        if out.requires_grad:
            out._parents = parents
            out._backward = backward_fn
        else:
            out._parents = ()
            out._backward = None
        return out

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    # -- basics --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise ContractError(f"item() on tensor of shape {self.shape}")
        return float(self.data.reshape(()))

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy())

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # -- operators (implementations live in ops.py) --------------------------

    def __add__(self, other):
        from . import ops
        return ops.add(self, _wrap(other))

    def __radd__(self, other):
        from . import ops
        return ops.add(_wrap(other), self)

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, _wrap(other))

    def __rsub__(self, other):
        from . import ops
        return ops.sub(_wrap(other), self)

    def __mul__(self, other):
        from . import ops
        return ops.mul(self, _wrap(other))

    def __rmul__(self, other):
        from . import ops
        return ops.mul(_wrap(other), self)

    def __truediv__(self, other):
        from . import ops
        return ops.div(self, _wrap(other))

    def __rtruediv__(self, other):
        from . import ops
        return ops.div(_wrap(other), self)

    def __neg__(self):
        from . import ops
        return ops.mul(self, Tensor(-1.0))

    def __pow__(self, exponent: float):
        from . import ops
        return ops.power(self, exponent)

    def reshape(self, *shape):
        from . import ops
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return ops.reshape(self, shape)

    def sum(self, axis=None, keepdims=False):
        from . import ops
        return ops.sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        from . import ops
        return ops.mean(self, axis=axis, keepdims=keepdims)

    def backward(self, params: Sequence["Tensor"] | None = None) -> None:
        backward(self, params)


def _wrap(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def topo_order(output: Tensor) -> list[Tensor]:
    """Tensors reachable from ``output``, parents before consumers."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(output, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if id(p) not in seen:
                stack.append((p, False))
    return order


def backward(output: Tensor, params: Sequence[Tensor] | None = None) -> None:
    """Populate ``grad`` on every requires-grad tensor reachable from ``output``.

    ``output`` must be scalar. Tensors listed in ``params`` that do not lie on
    any path to ``output`` receive exact zero gradients rather than ``None``.
    """
    if output.data.size != 1:
        raise ContractError(f"backward requires a scalar output, got shape {output.shape}")
    order = topo_order(output)
    output._accumulate(np.ones_like(output.data))
    for node in reversed(order):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)
    if params is not None:
        for p in params:
            if p.grad is None:
                p.grad = np.zeros_like(p.data)
