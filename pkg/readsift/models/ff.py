"""Supervised feed-forward convolutional classifier (labeled data only)."""

from typing import Any

import numpy as np

from readsift.models.base import Network, as_batch, conv_trunk
from readsift.nn import functional as F
from readsift.nn import layers as nn
from readsift.nn.tensor import Tensor


class FFClassifier(Network):
    """conv 5/16 -> pool -> conv 3/32 -> pool -> conv 3/64 -> fc 256 -> fc K."""

    kind = "ff"

    def _build(self, rng: np.random.Generator) -> None:
        cfg = self.cfg
        self.net = nn.Sequential(
            [
                *conv_trunk(self.params, "ff", rng),
                nn.Dense(self.params, "ff.fc1", cfg.flat_size, 256, rng),
                nn.ReLU(),
                nn.Dense(self.params, "ff.fc2", 256, cfg.n_classes, rng),
            ]
        )

    def _check(self) -> None:
        self.net.check((1, self.cfg.length), (self.cfg.n_classes,))

    def logits(self, x: Any, training: bool = False) -> Tensor:
        return self.net(as_batch(x), training)

    def predict_proba(self, x: Any) -> np.ndarray:
        return F.softmax(self.logits(x)).data
