"""Adam optimizer over a name -> Tensor map."""

from collections.abc import Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from readsift.core.errors import ShapeError
from readsift.nn.tensor import Tensor


class AdamConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    lr: float = Field(1e-3, gt=0.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)


class Adam:
    """Adam with bias-corrected moments; state is keyed by parameter name."""

    def __init__(self, params: Mapping[str, Tensor], config: AdamConfig | None = None) -> None:
        self.params = dict(params)
        self.config = config or AdamConfig()
        self.t = 0
        self.m: dict[str, np.ndarray] = {name: np.zeros_like(p.data) for name, p in self.params.items()}
        self.v: dict[str, np.ndarray] = {name: np.zeros_like(p.data) for name, p in self.params.items()}

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.zero_grad()

    def step(self) -> None:
        cfg = self.config
        self.t += 1
        correction1 = 1.0 - cfg.beta1**self.t
        correction2 = 1.0 - cfg.beta2**self.t
        for name, p in self.params.items():
            grad = p.grad if p.grad is not None else np.zeros_like(p.data)
            m, v = self.m[name], self.v[name]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * grad
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * grad * grad
            p.data -= cfg.lr * (m / correction1) / (np.sqrt(v / correction2) + cfg.eps)

    def state(self) -> tuple[int, dict[str, np.ndarray], dict[str, np.ndarray]]:
        return self.t, {n: a.copy() for n, a in self.m.items()}, {n: a.copy() for n, a in self.v.items()}

    def load_state(self, t: int, m: Mapping[str, np.ndarray], v: Mapping[str, np.ndarray]) -> None:
        for name, p in self.params.items():
            if name not in m or name not in v:
                raise ShapeError(f"optimizer state is missing '{name}'")
            if m[name].shape != p.shape or v[name].shape != p.shape:
                raise ShapeError(f"optimizer state of '{name}'", p.shape, m[name].shape)
            self.m[name] = np.array(m[name], dtype=np.float64)
            self.v[name] = np.array(v[name], dtype=np.float64)
        self.t = t
