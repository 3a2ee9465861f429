"""Dense float64 tensors with reverse-mode differentiation and an AdamW optimizer."""

from .tensor import Tensor, backward, topo_order, NonFiniteError
from . import ops
from .optim import AdamW

__all__ = ["Tensor", "backward", "topo_order", "NonFiniteError", "ops", "AdamW"]
