"""Unsupervised convolutional VAE (M1) and its feature extractor."""

from typing import Optional

import numpy as np

from readsift.core.errors import DataError
from readsift.models.m1m2 import M1
from readsift.nn import functional as F
from readsift.nn.tensor import Tape
from readsift.training.base import BaseTrainer, EpochRecord, TrainResult
from readsift.training.data import LabeledSet, UnlabeledSet, batches


def extract_z1(model: M1, x: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Posterior means of ``q(z1 | x)``; deterministic."""
    if len(x) == 0:
        return np.zeros((0, model.cfg.z1_dim))
    return np.concatenate([model.features(x[i : i + batch_size]) for i in range(0, len(x), batch_size)])


class M1Trainer(BaseTrainer):
    """Maximizes the ELBO with one reparameterized sample per example."""

    kind = "m1"

    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        """Labels are ignored; M1 trains on every signal it is given."""
        x = labeled.x if unlabeled is None or len(unlabeled) == 0 else np.concatenate([labeled.x, unlabeled.x])
        return self.fit_signals(x)

    def fit_signals(self, x: np.ndarray, model: Optional[M1] = None) -> TrainResult:
        cfg = self.config
        if len(x) < 2:
            raise DataError(f"M1 needs at least 2 signals, got {len(x)}")
        model = model or M1(self.model_config)
        optimizer = self._adam(model.params.select("m1."))
        self._resume(model, {"adam": optimizer})
        epochs = cfg.m1_epochs if cfg.m1_epochs is not None else cfg.epochs

        for epoch in range(1, epochs + 1):
            totals = {"recon": 0.0, "kl": 0.0}
            for idx in batches(len(x), cfg.batch_size, self.rng):
                optimizer.zero_grad()
                with Tape() as tape:
                    mu, logvar = model.encode(x[idx], training=True)
                    z = F.sample_gaussian(mu, logvar, self.rng)
                    recon = F.bernoulli_nll(model.decode(z, training=True), x[idx])
                    kl = F.kl_diag_gaussian(mu, logvar)
                    loss = recon + kl
                self._guard(epoch, recon=recon.item(), kl=kl.item())
                tape.backward(loss)
                optimizer.step()
                totals["recon"] += recon.item() * len(idx)
                totals["kl"] += kl.item() * len(idx)

            recon_mean, kl_mean = totals["recon"] / len(x), totals["kl"] / len(x)
            losses = {"recon": recon_mean, "kl": kl_mean, "elbo": -(recon_mean + kl_mean)}
            self._finish_epoch(model, EpochRecord(epoch, losses))

        return self._result(model, {"adam": optimizer}, None)
