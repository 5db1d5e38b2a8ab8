"""Supervised baseline: the convolutional classifier on labeled data only."""

from typing import Optional

import numpy as np

from readsift.models.ff import FFClassifier
from readsift.nn import functional as F
from readsift.nn.tensor import Tape
from readsift.training.base import BaseTrainer, EpochRecord, TrainResult
from readsift.training.data import LabeledSet, UnlabeledSet, batches, onehot, split_validation


class FFTrainer(BaseTrainer):
    kind = "ff"

    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        cfg = self.config
        model = FFClassifier(self.model_config)
        optimizer = self._adam(dict(model.params.items()))
        self._resume(model, {"adam": optimizer})
        train, val = split_validation(labeled, cfg.val_fraction, self.rng)
        k = self.model_config.n_classes

        for epoch in range(1, cfg.epochs + 1):
            losses = []
            for idx in batches(len(train), cfg.batch_size, self.rng):
                optimizer.zero_grad()
                with Tape() as tape:
                    loss = F.softmax_cross_entropy(model.logits(train.x[idx], training=True), onehot(train.y[idx], k))
                self._guard(epoch, cross_entropy=loss.item())
                tape.backward(loss)
                optimizer.step()
                losses.append(loss.item())

            record = EpochRecord(epoch, {"cross_entropy": float(np.mean(losses))}, self._validate(model.predict_proba, val))
            self._finish_epoch(model, record)

        best = self._restore_best(model)
        return self._result(model, {"adam": optimizer}, best)
