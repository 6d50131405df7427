"""Denoising-autoencoder training of one masked layer, and data projection.

Training minimizes the reconstruction loss of clean inputs from corrupted
copies (clean -> corrupt -> encode -> decode) with minibatch Adam.  A trained
layer projects data two ways: real-valued activation probabilities for the
next layer's weight training, and a 0.5-thresholded binary view for the next
layer's structure learning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import nn
from .data import BinaryDataset, Dataset, DiscretizationPolicy, discretize
from .errors import DomainError
from .receptive_field import ConnectivityMask

MASKING = "masking"
GAUSSIAN_ADDITIVE = "gaussian-additive"


@dataclass(frozen=True)
class CorruptionConfig:
    """Input corruption: zero-masking with probability rate, or additive
    Gaussian noise with standard deviation rate."""

    kind: str = MASKING
    rate: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.kind == MASKING:
            if not 0.0 <= self.rate <= 1.0:
                raise ValueError(f"masking rate must be in [0, 1], got {self.rate}")
        elif self.kind == GAUSSIAN_ADDITIVE:
            if not (math.isfinite(self.rate) and self.rate >= 0.0):
                raise ValueError(f"noise std must be finite and >= 0, got {self.rate}")
        else:
            raise ValueError(f"unknown corruption kind {self.kind!r}")


@dataclass(frozen=True)
class DaeHyper:
    epochs: int = 30
    batch_size: int = 128
    step_size: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    loss_family: str = "auto"
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.loss_family not in ("auto",) + nn.FAMILIES:
            raise ValueError(f"unknown loss family {self.loss_family!r}")


@dataclass
class TwoLayerModel:
    """A trained visible<->hidden pair: the masked layer plus its training log."""

    layer: nn.MaskedLayer
    loss_family: str
    training_log: list[float]

    def save_training_log(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("epoch,mean_loss\n")
            for i, loss in enumerate(self.training_log, start=1):
                fh.write(f"{i},{repr(loss)}\n")


def corrupt(x: np.ndarray, c: CorruptionConfig, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw one corrupted copy of a batch."""
    rng = rng if rng is not None else np.random.default_rng(c.seed)
    x = np.asarray(x, dtype=np.float64)
    if c.kind == MASKING:
        return x * (rng.random(x.shape) >= c.rate)
    return x + rng.normal(0.0, c.rate, size=x.shape)


def resolve_family(values: np.ndarray, requested: str) -> str:
    """'auto' picks bernoulli for data inside [0, 1], gaussian otherwise."""
    if requested != "auto":
        return requested
    lo, hi = float(values.min()), float(values.max())
    return nn.BERNOULLI if 0.0 <= lo and hi <= 1.0 else nn.GAUSSIAN


def train_dae(mask: ConnectivityMask, d: Dataset, c: CorruptionConfig, h: DaeHyper) -> TwoLayerModel:
    """Train one masked layer as a denoising autoencoder on d.values.

    All randomness (init, epoch shuffles, corruption draws) comes from a
    single generator seeded with h.seed, so runs are exactly repeatable.
    training_log records the sample-weighted mean batch loss per epoch.
    """
    if mask.visible_count != d.n_features:
        raise ValueError(
            f"mask width {mask.visible_count} != data width {d.n_features}"
        )
    family = resolve_family(d.values, h.loss_family)
    if family == nn.BERNOULLI and ((d.values < 0).any() or (d.values > 1).any()):
        raise DomainError("bernoulli family needs data in [0, 1]")
    rng = np.random.default_rng(h.seed)
    layer = nn.init_masked_layer(mask.a, rng, activation="sigmoid")
    adam = nn.Adam(h.step_size, h.beta1, h.beta2, h.eps)
    params = {
        "weights": layer.weights,
        "bias_hidden": layer.bias_hidden,
        "bias_visible": layer.bias_visible,
    }
    masks = {"weights": layer.mask}
    n = d.n_samples
    log = []
    for _ in range(h.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, h.batch_size):
            batch = d.values[order[start : start + h.batch_size]]
            x_tilde = corrupt(batch, c, rng)
            loss, grads = nn.dae_gradients(layer, batch, x_tilde, family)
            adam.step(params, grads, masks)
            total += loss * batch.shape[0]
        log.append(total / n)
    return TwoLayerModel(layer=layer, loss_family=family, training_log=log)


def project(m: TwoLayerModel, d: Dataset) -> tuple[Dataset, BinaryDataset]:
    """Map data through the trained encoder.

    Returns (probabilities, binary): sigmoid activations as a real dataset of
    width H, and their strict > 0.5 threshold for structure learning.  Labels
    ride along; feature names do not (hidden units are anonymous).
    """
    if d.n_features != m.layer.visible_count:
        raise ValueError(
            f"data width {d.n_features} != layer width {m.layer.visible_count}"
        )
    pre = nn.encoder_preactivation(m.layer, d.values)
    probs = Dataset(nn.sigmoid(pre), feature_names=None, labels=d.labels)
    return probs, discretize(probs, DiscretizationPolicy.fixed(0.5))


def derive_hyper(h: DaeHyper, seed: int) -> DaeHyper:
    """The same hyperparameters with a different seed."""
    return replace(h, seed=seed)
