"""
Semi-supervised GAN training.

With class logits ``l_1..l_K`` and fake logit ``l_f`` the discriminator loss is

    CE over l_1..l_K on labeled real       (supervised)
  + lse(l) - lse(l_1..l_K) on unlabeled real   (-log(1 - p_fake))
  + lse(l) - l_f on generated               (-log p_fake)

and the generator minimizes ``lse(l) - lse(l_1..l_K)`` on its own samples.
The two players alternate one update each.
"""

from typing import Optional

import numpy as np

from readsift.core.errors import DataError
from readsift.models.semigan import SemiGAN
from readsift.nn import functional as F
from readsift.nn.tensor import Tape, Tensor
from readsift.training.base import BaseTrainer, EpochRecord, TrainResult
from readsift.training.data import Cycler, LabeledSet, UnlabeledSet, batches, check_disjoint, onehot, split_validation


def real_loss(model: SemiGAN, logits: Tensor) -> Tensor:
    """Mean ``-log(1 - p_fake)``."""
    k = model.cfg.n_classes
    return F.mean(F.logsumexp(logits) - F.logsumexp(F.slice_columns(logits, 0, k)))


def fake_loss(model: SemiGAN, logits: Tensor) -> Tensor:
    """Mean ``-log p_fake``."""
    k = model.cfg.n_classes
    return F.mean(F.logsumexp(logits) - F.reshape(F.slice_columns(logits, k, k + 1), (logits.shape[0],)))


def supervised_loss(model: SemiGAN, logits: Tensor, y: np.ndarray) -> Tensor:
    k = model.cfg.n_classes
    return F.softmax_cross_entropy(F.slice_columns(logits, 0, k), onehot(y, k))


class SemiGANTrainer(BaseTrainer):
    kind = "semigan"

    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        cfg = self.config
        if unlabeled is not None:
            check_disjoint(labeled, unlabeled)
        train, val = split_validation(labeled, cfg.val_fraction, self.rng)
        if len(train) < 2:
            raise DataError(f"semi-GAN needs at least 2 labeled training examples, got {len(train)}")
        # with no unlabeled pool the labeled signals stand in for it
        pool = unlabeled.x if unlabeled is not None and len(unlabeled) >= 2 else train.x

        model = SemiGAN(self.model_config)
        d_opt = self._adam(model.discriminator_params())
        g_opt = self._adam(model.generator_params())
        self._resume(model, {"discriminator": d_opt, "generator": g_opt})
        labeled_batches = Cycler(len(train), cfg.batch_size, self.rng)

        for epoch in range(1, cfg.epochs + 1):
            sums = {"d_supervised": 0.0, "d_unlabeled": 0.0, "d_fake": 0.0, "generator": 0.0}
            steps = batches(len(pool), cfg.batch_size, self.rng)
            for u_idx in steps:
                l_idx = labeled_batches.next()
                n = len(u_idx)

                model.params.zero_grad()
                with Tape() as tape:
                    sup = supervised_loss(model, model.disc_logits(train.x[l_idx], training=True), train.y[l_idx])
                    unl = real_loss(model, model.disc_logits(pool[u_idx], training=True))
                    fake = model.generate(model.sample_noise(n, self.rng), training=True)
                    fak = fake_loss(model, model.disc_logits(fake, training=True))
                    d_loss = sup + unl + fak
                self._guard(epoch, d_supervised=sup.item(), d_unlabeled=unl.item(), d_fake=fak.item())
                tape.backward(d_loss)
                d_opt.step()

                model.params.zero_grad()
                with Tape() as tape:
                    fake = model.generate(model.sample_noise(n, self.rng), training=True)
                    g_loss = real_loss(model, model.disc_logits(fake, training=True))
                self._guard(epoch, generator=g_loss.item())
                tape.backward(g_loss)
                g_opt.step()

                sums["d_supervised"] += sup.item()
                sums["d_unlabeled"] += unl.item()
                sums["d_fake"] += fak.item()
                sums["generator"] += g_loss.item()

            losses = {name: value / len(steps) for name, value in sums.items()}
            self._finish_epoch(model, EpochRecord(epoch, losses, self._validate(model.predict_proba, val)))

        best = self._restore_best(model)
        return self._result(model, {"discriminator": d_opt, "generator": g_opt}, best)
