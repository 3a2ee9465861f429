"""AdamW with decoupled weight decay over named parameter tensors."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionError, TrainingDivergenceError
from .tensor import Tensor


class AdamW:
    """Deterministic AdamW; parameters are (name, tensor) pairs mutated in place."""

    def __init__(self, params: list[tuple[str, Tensor]], lr: float = 1e-3,
                 betas: tuple[float, float] = (0.9, 0.999), eps: float = 1e-8,
                 weight_decay: float = 0.01):
        if lr <= 0:
            raise ValueError(f"learning rate must be positive, got {lr}")
        if weight_decay < 0:
            raise ValueError(f"weight decay must be non-negative, got {weight_decay}")
        self.params = list(params)
        self.lr = float(lr)
        self.betas = (float(betas[0]), float(betas[1]))
        self.eps = float(eps)
        self.weight_decay = float(weight_decay)
        self.step_count = 0
        self.m = {name: np.zeros_like(p.data) for name, p in self.params}
        self.v = {name: np.zeros_like(p.data) for name, p in self.params}

    def zero_grad(self) -> None:
        for _, p in self.params:
            p.grad = None

    def step(self) -> None:
        b1, b2 = self.betas
        self.step_count += 1
        t = self.step_count
        bc1 = 1.0 - b1 ** t
        bc2 = 1.0 - b2 ** t
        for name, p in self.params:
            g = p.grad if p.grad is not None else np.zeros_like(p.data)
            if g.shape != p.data.shape:
                raise DimensionError(f"gradient shape {g.shape} != parameter '{name}' {p.data.shape}")
            if not np.isfinite(g).all():
                raise TrainingDivergenceError(f"non-finite gradient for parameter '{name}'")
            if self.weight_decay:
                p.data *= 1.0 - self.lr * self.weight_decay
            m = self.m[name]
            v = self.v[name]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p.data -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)

    # -- resume support ---------------------------------------------------------

    def state_arrays(self) -> list[tuple[str, np.ndarray]]:
        out: list[tuple[str, np.ndarray]] = []
        for name, _ in self.params:
            out.append((f"m.{name}", self.m[name]))
            out.append((f"v.{name}", self.v[name]))
        return out

    def load_state_arrays(self, arrays: dict[str, np.ndarray], step_count: int) -> None:
        for name, p in self.params:
            m = arrays[f"m.{name}"]
            v = arrays[f"v.{name}"]
            if m.shape != p.data.shape or v.shape != p.data.shape:
                raise DimensionError(f"optimizer state shape mismatch for '{name}'")
            self.m[name] = m.astype(np.float64).copy()
            self.v[name] = v.astype(np.float64).copy()
        self.step_count = int(step_count)
