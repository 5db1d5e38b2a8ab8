"""
Semi-supervised M2 over M1 features, and the stacked M1+M2 procedure.

Per labeled example the bound is

    L(z1, y) = -log p(z1 | z2, y) + KL(q(z2 | z1, y) || N(0, I)) - log p(y)

with a unit-variance Gaussian likelihood and a uniform class prior. An
unlabeled example sums the labeled bound over classes weighted by
``q(y | z1)`` and subtracts the entropy of ``q(y | z1)``. Labeled examples
also pay ``alpha * cross_entropy(q(y | z1), y)`` with
``alpha = alpha_scale * (N_labeled + N_unlabeled) / N_labeled``.
"""

import logging
from typing import Optional, TypeVar

import numpy as np

from readsift.core.errors import DataError
from readsift.models.m1m2 import M2, StackedM1M2
from readsift.nn import functional as F
from readsift.nn.tensor import Tape, Tensor
from readsift.training.base import BaseTrainer, EpochRecord, TrainResult
from readsift.training.data import (
    Cycler,
    LabeledSet,
    UnlabeledSet,
    batches,
    check_disjoint,
    onehot,
    split_validation,
)
from readsift.training.m1 import M1Trainer, extract_z1

logger = logging.getLogger(__name__)

StageT = TypeVar("StageT", bound=BaseTrainer)


def labeled_bound(model: M2, z1: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> Tensor:
    """Per-example ``L(z1, y)`` for one-hot ``y``, shape ``[B]``."""
    mu, logvar = model.encode(z1, y)
    z2 = F.sample_gaussian(mu, logvar, rng)
    recon = F.gaussian_nll(model.decode(z2, y), z1, reduction="none")
    kl = F.kl_diag_gaussian(mu, logvar, reduction="none")
    return recon + kl + float(np.log(model.cfg.n_classes))


def unlabeled_bound(model: M2, z1: np.ndarray, rng: np.random.Generator) -> Tensor:
    """Per-example ``sum_y q(y|z1) L(z1, y) - H(q(y|z1))``, shape ``[B]``."""
    k = model.cfg.n_classes
    per_class = [
        F.reshape(labeled_bound(model, z1, onehot(np.full(len(z1), c), k), rng), (len(z1), 1)) for c in range(k)
    ]
    bounds = F.concat(per_class, axis=-1)
    logits = model.class_logits(z1)
    q = F.softmax(logits)
    return F.sum(q * bounds, axis=-1) + F.sum(q * F.log_softmax(logits), axis=-1)


class M2Trainer(BaseTrainer):
    kind = "m2"

    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        """Inputs are M1 features (``x`` holds z1 vectors, not signals)."""
        train, val = split_validation(labeled, self.config.val_fraction, self.rng)
        return self.fit_features(train, unlabeled, val)

    def fit_features(
        self,
        train: LabeledSet,
        unlabeled: Optional[UnlabeledSet],
        val: Optional[LabeledSet],
        model: Optional[M2] = None,
    ) -> TrainResult:
        cfg = self.config
        if len(train) == 0:
            raise DataError("M2 needs at least one labeled example")
        model = model or M2(self.model_config)
        optimizer = self._adam(model.params.select("m2."))
        self._resume(model, {"adam": optimizer})
        k = self.model_config.n_classes
        n_unlabeled = 0 if unlabeled is None else len(unlabeled)
        alpha = cfg.alpha_scale * (len(train) + n_unlabeled) / len(train)
        logger.debug("M2 classification weight alpha=%.4g", alpha)

        labeled_batches = Cycler(len(train), cfg.batch_size, self.rng)
        for epoch in range(1, cfg.epochs + 1):
            sums = {"labeled": 0.0, "unlabeled": 0.0, "classification": 0.0, "total": 0.0}
            if n_unlabeled:
                steps: list[np.ndarray | None] = list(batches(n_unlabeled, cfg.batch_size, self.rng))
            else:
                steps = [None] * -(-len(train) // cfg.batch_size)
            for u_idx in steps:
                l_idx = labeled_batches.next()
                z1_l, y_l = train.x[l_idx], onehot(train.y[l_idx], k)
                optimizer.zero_grad()
                with Tape() as tape:
                    lab = F.mean(labeled_bound(model, z1_l, y_l, self.rng))
                    ce = F.softmax_cross_entropy(model.class_logits(z1_l), y_l)
                    loss = lab + alpha * ce
                    unl = None
                    if u_idx is not None:
                        assert unlabeled is not None
                        unl = F.mean(unlabeled_bound(model, unlabeled.x[u_idx], self.rng))
                        loss = loss + unl
                parts = {"labeled": lab.item(), "classification": ce.item(), "total": loss.item()}
                if unl is not None:
                    parts["unlabeled"] = unl.item()
                self._guard(epoch, **parts)
                tape.backward(loss)
                optimizer.step()
                for name, value in parts.items():
                    sums[name] += value

            losses = {name: value / len(steps) for name, value in sums.items() if n_unlabeled or name != "unlabeled"}
            self._finish_epoch(model, EpochRecord(epoch, losses, self._validate(model.predict_proba, val)))

        best = self._restore_best(model)
        return self._result(model, {"adam": optimizer}, best)


class M1M2Trainer(BaseTrainer):
    """M1 on every signal, then M2 on its features; one combined checkpoint."""

    kind = "m1m2"

    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        if unlabeled is not None:
            check_disjoint(labeled, unlabeled)
        cfg = self.config
        model = StackedM1M2(self.model_config)
        self._resume(model, {})
        train, val = split_validation(labeled, cfg.val_fraction, self.rng)

        m1_trainer = self._stage(M1Trainer, "m1", 0)
        m1_x = train.x if unlabeled is None or len(unlabeled) == 0 else np.concatenate([train.x, unlabeled.x])
        m1_result = m1_trainer.fit_signals(m1_x, model.m1)

        def features(s: LabeledSet) -> LabeledSet:
            return LabeledSet(s.ids, extract_z1(model.m1, s.x), s.y)

        z_unlabeled = None if unlabeled is None else UnlabeledSet(unlabeled.ids, extract_z1(model.m1, unlabeled.x))
        m2_trainer = self._stage(M2Trainer, "m2", len(m1_result.log))
        m2_result = m2_trainer.fit_features(
            features(train), z_unlabeled, None if val is None else features(val), model.m2
        )

        optimizers = {"m1": m1_trainer.optimizers["adam"], "m2": m2_trainer.optimizers["adam"]}
        return self._result(model, optimizers, m2_result.best_epoch)

    def _stage(self, trainer_class: type[StageT], stage: str, offset: int) -> StageT:
        """A sub-trainer sharing this trainer's generator; its epochs land in this log, prefixed."""

        def relay(record: EpochRecord) -> None:
            prefixed = EpochRecord(
                offset + record.epoch,
                {f"{stage}.{name}": value for name, value in record.losses.items()},
                record.val_macro_f,
            )
            self.log.add(prefixed)
            if self.on_epoch:
                self.on_epoch(prefixed)

        trainer = trainer_class(self.config, self.model_config, relay)
        trainer.rng = self.rng
        if self.resume is not None:
            # weights were loaded once for the whole stack; stages only restore their moments
            trainer.resume = self.resume
            trainer._resume_weights = False
            trainer._resume_labels = {"adam": stage}
        return trainer
