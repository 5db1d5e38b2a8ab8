"""
Stacked variational models.

M1 is a convolutional VAE over signals; its posterior means ``z1`` are the
features M2 works on. M2 is the semi-supervised model over ``(z1, y)``:
an encoder ``q(z2 | z1, y)``, a decoder ``p(z1 | z2, y)`` and a classifier
``q(y | z1)``. The class enters encoder and decoder by concatenating its
one-hot vector.
"""

from typing import Any

import numpy as np

from readsift.models.base import Network, as_batch, conv_trunk
from readsift.nn import functional as F
from readsift.nn import layers as nn
from readsift.nn.tensor import Tensor

_HIDDEN = 64


class M1(Network):
    """Convolutional VAE: signal -> (mu, logvar) of z1 -> Bernoulli means of the signal."""

    kind = "m1"

    def _build(self, rng: np.random.Generator) -> None:
        cfg = self.cfg
        p = self.params
        self.encoder = nn.Sequential(
            [
                *conv_trunk(p, "m1.encoder", rng),
                nn.Dense(p, "m1.encoder.fc1", cfg.flat_size, 256, rng),
                nn.ReLU(),
            ]
        )
        self.mu_head = nn.Dense(p, "m1.encoder.mu", 256, cfg.z1_dim, rng)
        self.logvar_head = nn.Dense(p, "m1.encoder.logvar", 256, cfg.z1_dim, rng)
        # the last transpose convolution feeds the output dense layer directly
        self.decoder = nn.Sequential(
            [
                nn.Dense(p, "m1.decoder.fc1", cfg.z1_dim, cfg.flat_size, rng),
                nn.ReLU(),
                nn.Reshape((64, cfg.pooled_length)),
                nn.ConvTranspose1d(p, "m1.decoder.deconv1", 64, 32, 3, rng),
                nn.ReLU(),
                nn.Upsample(2),
                nn.ConvTranspose1d(p, "m1.decoder.deconv2", 32, 16, 3, rng),
                nn.ReLU(),
                nn.Upsample(2),
                nn.ConvTranspose1d(p, "m1.decoder.deconv3", 16, 1, 5, rng),
                nn.Flatten(),
                nn.Dense(p, "m1.decoder.fc2", cfg.length, cfg.length, rng),
                nn.Sigmoid(),
            ]
        )

    def _check(self) -> None:
        cfg = self.cfg
        hidden = self.encoder.output_shape((1, cfg.length))
        self.mu_head.output_shape(hidden)
        self.logvar_head.output_shape(hidden)
        self.decoder.check((cfg.z1_dim,), (cfg.length,))

    def encode(self, x: Any, training: bool = False) -> tuple[Tensor, Tensor]:
        hidden = self.encoder(as_batch(x), training)
        return self.mu_head(hidden), F.clamp(self.logvar_head(hidden), *F.LOGVAR_CLAMP)

    def decode(self, z: Tensor, training: bool = False) -> Tensor:
        return self.decoder(z, training)

    def features(self, x: Any) -> np.ndarray:
        """Posterior means ``z1``, ``[B, z1_dim]``."""
        return self.encode(x)[0].data


class M2(Network):
    """Semi-supervised model over M1 features."""

    kind = "m2"

    def _build(self, rng: np.random.Generator) -> None:
        cfg = self.cfg
        p = self.params
        k = cfg.n_classes
        self.encoder = nn.Sequential(
            [
                nn.Dense(p, "m2.encoder.fc1", cfg.z1_dim + k, _HIDDEN, rng),
                nn.ReLU(),
                nn.Dense(p, "m2.encoder.fc2", _HIDDEN, _HIDDEN, rng),
                nn.ReLU(),
            ]
        )
        self.mu_head = nn.Dense(p, "m2.encoder.mu", _HIDDEN, cfg.z2_dim, rng)
        self.logvar_head = nn.Dense(p, "m2.encoder.logvar", _HIDDEN, cfg.z2_dim, rng)
        self.decoder = nn.Sequential(
            [
                nn.Dense(p, "m2.decoder.fc1", cfg.z2_dim + k, _HIDDEN, rng),
                nn.ReLU(),
                nn.Dense(p, "m2.decoder.fc2", _HIDDEN, _HIDDEN, rng),
                nn.ReLU(),
                nn.Dense(p, "m2.decoder.fc3", _HIDDEN, cfg.z1_dim, rng),
            ]
        )
        self.classifier = nn.Sequential(
            [
                nn.Dense(p, "m2.classifier.fc1", cfg.z1_dim, _HIDDEN, rng),
                nn.ReLU(),
                nn.Dense(p, "m2.classifier.fc2", _HIDDEN, _HIDDEN, rng),
                nn.ReLU(),
                nn.Dense(p, "m2.classifier.fc3", _HIDDEN, k, rng),
            ]
        )

    def _check(self) -> None:
        cfg = self.cfg
        k = cfg.n_classes
        self.encoder.check((cfg.z1_dim + k,), (_HIDDEN,))
        self.decoder.check((cfg.z2_dim + k,), (cfg.z1_dim,))
        self.classifier.check((cfg.z1_dim,), (k,))

    @property
    def encoder_input_dim(self) -> int:
        return self.encoder.layers[0].n_in  # type: ignore[attr-defined]

    def encode(self, z1: Any, y: np.ndarray) -> tuple[Tensor, Tensor]:
        hidden = self.encoder(F.concat([z1, Tensor(y)], axis=-1))
        return self.mu_head(hidden), F.clamp(self.logvar_head(hidden), *F.LOGVAR_CLAMP)

    def decode(self, z2: Tensor, y: np.ndarray) -> Tensor:
        return self.decoder(F.concat([z2, Tensor(y)], axis=-1))

    def class_logits(self, z1: Any) -> Tensor:
        return self.classifier(z1 if isinstance(z1, Tensor) else Tensor(z1))

    def predict_proba(self, z1: Any) -> np.ndarray:
        return F.softmax(self.class_logits(z1)).data


class StackedM1M2(Network):
    """M1 feature extractor plus M2 classifier sharing one parameter set."""

    kind = "m1m2"

    def _build(self, rng: np.random.Generator) -> None:
        self.m1 = M1(self.cfg, self.params)
        self.m2 = M2(self.cfg, self.params)

    def _check(self) -> None:
        """Both halves verify themselves on construction."""

    def count_parameters(self) -> int:
        return self.m1.count_parameters() + self.m2.count_parameters()

    def predict_proba(self, x: Any) -> np.ndarray:
        return self.m2.predict_proba(self.m1.features(x))
