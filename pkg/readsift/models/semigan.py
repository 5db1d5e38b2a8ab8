"""
Semi-supervised GAN.

The discriminator doubles as the classifier: it emits K class logits plus
one "fake" logit. Both players use batch normalization, so a batch of at
least two is needed in training mode.
"""

from typing import Any

import numpy as np

from readsift.models.base import Network, as_batch
from readsift.nn import functional as F
from readsift.nn import layers as nn
from readsift.nn.tensor import Tensor


class SemiGAN(Network):
    """Generator ``z -> signal`` and a K+1-way discriminator."""

    kind = "semigan"

    def _build(self, rng: np.random.Generator) -> None:
        cfg = self.cfg
        p = self.params
        pooled = cfg.pooled_length
        self.generator = nn.Sequential(
            [
                nn.Dense(p, "semigan.gen.fc1", cfg.z_gan_dim, cfg.flat_size, rng),
                nn.BatchNorm(p, "semigan.gen.bn1", cfg.flat_size),
                nn.ReLU(),
                nn.Reshape((64, pooled)),
                nn.ConvTranspose1d(p, "semigan.gen.deconv1", 64, 32, 3, rng),
                nn.BatchNorm(p, "semigan.gen.bn2", 32),
                nn.ReLU(),
                nn.Upsample(2),
                nn.BatchNorm(p, "semigan.gen.bn3", 32),
                nn.ConvTranspose1d(p, "semigan.gen.deconv2", 32, 16, 3, rng),
                nn.BatchNorm(p, "semigan.gen.bn4", 16),
                nn.ReLU(),
                nn.Upsample(2),
                nn.BatchNorm(p, "semigan.gen.bn5", 16),
                nn.ConvTranspose1d(p, "semigan.gen.deconv3", 16, 1, 5, rng),
                nn.Flatten(),
                nn.Dense(p, "semigan.gen.fc2", cfg.length, cfg.length, rng),
                nn.Sigmoid(),
            ]
        )
        self.disc_body = nn.Sequential(
            [
                nn.Conv1d(p, "semigan.disc.conv1", 1, 16, 5, rng),
                nn.BatchNorm(p, "semigan.disc.bn1", 16),
                nn.LeakyReLU(0.2),
                nn.MaxPool(),
                nn.BatchNorm(p, "semigan.disc.bn2", 16),
                nn.Conv1d(p, "semigan.disc.conv2", 16, 32, 3, rng),
                nn.BatchNorm(p, "semigan.disc.bn3", 32),
                nn.LeakyReLU(0.2),
                nn.MaxPool(),
                nn.BatchNorm(p, "semigan.disc.bn4", 32),
                nn.Flatten(),
                nn.Dense(p, "semigan.disc.fc1", 32 * pooled, 256, rng),
                nn.BatchNorm(p, "semigan.disc.bn5", 256),
                nn.LeakyReLU(0.2),
                nn.Dense(p, "semigan.disc.fc2", 256, 1024, rng),
                nn.LeakyReLU(0.2),
            ]
        )
        self.disc_head = nn.Dense(p, "semigan.disc.fc3", 1024, cfg.n_classes + 1, rng)

    def _check(self) -> None:
        cfg = self.cfg
        self.generator.check((cfg.z_gan_dim,), (cfg.length,))
        self.disc_body.check((1, cfg.length), (1024,))
        self.disc_head.output_shape((1024,))

    @property
    def fake_index(self) -> int:
        return self.cfg.n_classes

    def generator_params(self) -> dict[str, Tensor]:
        return self.params.select("semigan.gen.")

    def discriminator_params(self) -> dict[str, Tensor]:
        return self.params.select("semigan.disc.")

    def sample_noise(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal((n, self.cfg.z_gan_dim))

    def generate(self, z: Any, training: bool = False) -> Tensor:
        return self.generator(z if isinstance(z, Tensor) else Tensor(z), training)

    def disc_logits(self, x: Any, training: bool = False) -> Tensor:
        """``[B, K + 1]`` logits; the last column is the fake logit."""
        return self.disc_head(self.disc_body(as_batch(x), training))

    def features(self, x: Any) -> np.ndarray:
        """Penultimate discriminator activations, ``[B, 1024]``."""
        return self.disc_body(as_batch(x)).data

    def predict_proba(self, x: Any) -> np.ndarray:
        """Class probabilities with the fake component dropped and the rest renormalized."""
        logits = self.disc_logits(x)
        return F.softmax(F.slice_columns(logits, 0, self.cfg.n_classes)).data
