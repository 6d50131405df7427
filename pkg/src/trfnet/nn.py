"""Minimal dense/masked neural network machinery on numpy, double precision.

Everything the training loops need lives here: masked linear layers with
hard-zero connectivity, a tied-transpose decoder, stable Bernoulli/Gaussian
reconstruction losses, softmax and multi-task sigmoid classification losses
with exact analytic gradients, Adam, and inverted dropout.

Masked weights satisfy (1 - A) o W = 0 at all times: initialization draws
only inside the mask and every optimizer step re-applies it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BERNOULLI = "bernoulli"
GAUSSIAN = "gaussian"
FAMILIES = (BERNOULLI, GAUSSIAN)


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Overflow-safe logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def identity(z: np.ndarray) -> np.ndarray:
    return z


_ACTIVATIONS = {"sigmoid": sigmoid, "relu": relu, "identity": identity}


def activation_fn(name: str):
    try:
        return _ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}") from None


def activation_grad(name: str, pre: np.ndarray, out: np.ndarray) -> np.ndarray:
    """d activation / d preactivation, from whichever of (pre, out) is cheaper."""
    if name == "sigmoid":
        return out * (1.0 - out)
    if name == "relu":
        return (pre > 0).astype(np.float64)
    if name == "identity":
        return np.ones_like(pre)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class MaskedLayer:
    """One sparse layer: H x V connectivity mask, weights, and two biases.

    bias_hidden feeds the encoder direction (V -> H); bias_visible feeds the
    tied-transpose decoder direction (H -> V).  The two directions share W.
    """

    mask: np.ndarray
    weights: np.ndarray
    bias_hidden: np.ndarray
    bias_visible: np.ndarray
    activation: str = "sigmoid"

    @property
    def hidden_count(self) -> int:
        return self.weights.shape[0]

    @property
    def visible_count(self) -> int:
        return self.weights.shape[1]

    def masked_weights(self) -> np.ndarray:
        return self.mask * self.weights

    def apply_mask(self) -> None:
        self.weights *= self.mask


def init_masked_layer(mask: np.ndarray, rng: np.random.Generator, activation: str = "sigmoid") -> MaskedLayer:
    """Uniform +-sqrt(6 / (fan_in + fan_out)) init with per-row fan-in.

    fan_in of row i is its mask row's nonzero count (the unit's true input
    width); fan_out is taken as the hidden width.  Entries outside the mask
    are exactly zero.
    """
    m = np.asarray(mask, dtype=np.float64)
    h, v = m.shape
    fan_in = m.sum(axis=1)
    limit = np.sqrt(6.0 / (fan_in + h))
    w = rng.uniform(-1.0, 1.0, size=(h, v)) * limit[:, None]
    w *= m
    return MaskedLayer(
        mask=m,
        weights=w,
        bias_hidden=np.zeros(h),
        bias_visible=np.zeros(v),
        activation=activation,
    )


@dataclass
class DenseLayer:
    """Fully connected O x I layer; the classifier head emits raw logits."""

    weights: np.ndarray
    bias: np.ndarray
    activation: str = "identity"

    @property
    def out_count(self) -> int:
        return self.weights.shape[0]

    @property
    def in_count(self) -> int:
        return self.weights.shape[1]


def init_dense_layer(out_count: int, in_count: int, rng: np.random.Generator, activation: str = "identity") -> DenseLayer:
    limit = np.sqrt(6.0 / (in_count + out_count))
    w = rng.uniform(-limit, limit, size=(out_count, in_count))
    return DenseLayer(weights=w, bias=np.zeros(out_count), activation=activation)


def _check_width(x: np.ndarray, width: int, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != width:
        raise ValueError(f"{what}: expected a batch of width {width}, got shape {x.shape}")
    return x


def encoder_preactivation(layer: MaskedLayer, x: np.ndarray) -> np.ndarray:
    x = _check_width(x, layer.visible_count, "encoder input")
    return x @ layer.masked_weights().T + layer.bias_hidden


def masked_forward(layer: MaskedLayer, x: np.ndarray) -> np.ndarray:
    """Encoder direction: activation((A o W) x + bias_hidden)."""
    return activation_fn(layer.activation)(encoder_preactivation(layer, x))


def decoder_preactivation(layer: MaskedLayer, h: np.ndarray) -> np.ndarray:
    h = _check_width(h, layer.hidden_count, "decoder input")
    return h @ layer.masked_weights() + layer.bias_visible


def decoder_forward(layer: MaskedLayer, h: np.ndarray, family: str) -> np.ndarray:
    """Decoder direction through the transposed masked weights.

    Bernoulli returns activation probabilities; Gaussian returns the mean.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    z = decoder_preactivation(layer, h)
    return sigmoid(z) if family == BERNOULLI else z


def reconstruction_loss(x: np.ndarray, z_pre: np.ndarray, family: str) -> float:
    """Batch-mean reconstruction loss against pre-activation decoder output.

    Bernoulli: per-sample summed cross-entropy in the stable logit form, so
    any finite z is safe.  Gaussian: per-sample 0.5 * squared error.
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z_pre, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"shape mismatch: x {x.shape} vs z {z.shape}")
    if family == BERNOULLI:
        if (x < 0).any() or (x > 1).any():
            raise DomainError("bernoulli loss needs targets in [0, 1]")
        elem = np.maximum(z, 0.0) - x * z + np.log1p(np.exp(-np.abs(z)))
        return float(elem.sum(axis=1).mean())
    if family == GAUSSIAN:
        return float((0.5 * (x - z) ** 2).sum(axis=1).mean())
    raise ValueError(f"unknown family {family!r}")


def dae_gradients(layer: MaskedLayer, x_clean: np.ndarray, x_tilde: np.ndarray, family: str):
    """Loss and exact gradients of the tied denoising autoencoder.

    Forward is corrupt -> sigmoid encoder -> tied-transpose decoder ->
    reconstruction loss against the clean batch.  Weight gradients sum the
    encoder and decoder contributions and are masked.
    """
    x_clean = np.asarray(x_clean, dtype=np.float64)
    we = layer.masked_weights()
    a_pre = x_tilde @ we.T + layer.bias_hidden
    h = sigmoid(a_pre)
    z = h @ we + layer.bias_visible
    loss = reconstruction_loss(x_clean, z, family)

    b = x_clean.shape[0]
    if family == BERNOULLI:
        dz = (sigmoid(z) - x_clean) / b
    else:
        dz = (z - x_clean) / b
    dh = dz @ we.T
    da = dh * h * (1.0 - h)
    dw = (da.T @ x_tilde + h.T @ dz) * layer.mask
    grads = {
        "weights": dw,
        "bias_hidden": da.sum(axis=0),
        "bias_visible": dz.sum(axis=0),
    }
    return loss, grads


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy of integer labels; returns (loss, dlogits)."""
    z = np.asarray(logits, dtype=np.float64)
    y = np.asarray(labels)
    shifted = z - z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_norm
    b = z.shape[0]
    loss = -float(log_probs[np.arange(b), y].mean())
    dlogits = np.exp(log_probs)
    dlogits[np.arange(b), y] -= 1.0
    return loss, dlogits / b


def multitask_sigmoid_loss(logits: np.ndarray, targets: np.ndarray):
    """Per-task binary cross-entropy over observed entries; -1 marks missing.

    The loss averages over observed (sample, task) pairs and missing entries
    get exactly zero gradient.
    """
    z = np.asarray(logits, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    observed = t >= 0
    count = int(observed.sum())
    if count == 0:
        raise ValueError("no observed labels in batch")
    t_safe = np.where(observed, t, 0.0)
    elem = np.maximum(z, 0.0) - t_safe * z + np.log1p(np.exp(-np.abs(z)))
    loss = float((elem * observed).sum() / count)
    dlogits = (sigmoid(z) - t_safe) * observed / count
    return loss, dlogits


class Adam:
    """Standard bias-corrected Adam over a named-parameter dict.

    step() mutates the parameter arrays in place; parameters listed in
    ``masks`` are multiplied by their mask after every update so forbidden
    entries stay exactly zero.  A non-finite gradient aborts the step before
    any state changes.
    """

    def __init__(self, step_size: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.step_size = step_size
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.moments: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray], masks: dict[str, np.ndarray] | None = None) -> None:
        for name, g in grads.items():
            if not np.isfinite(g).all():
                raise FloatingPointError(f"non-finite gradient for {name!r}; step aborted")
            if g.shape != params[name].shape:
                raise ValueError(f"gradient shape {g.shape} != parameter shape {params[name].shape} for {name!r}")
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for name, p in params.items():
            g = grads[name]
            if name not in self.moments:
                self.moments[name] = (np.zeros_like(p), np.zeros_like(p))
            m, v = self.moments[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.step_size * (m / c1) / (np.sqrt(v / c2) + self.eps)
            if masks and name in masks and masks[name] is not None:
                p *= masks[name]


def dropout(x: np.ndarray, rate: float, rng: np.random.Generator, training: bool = True):
    """Inverted dropout; returns (output, scale) with output = x * scale.

    The scale array re-multiplies gradients on the way back.  In eval mode or
    at rate 0 the transform is the identity.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    x = np.asarray(x, dtype=np.float64)
    if not training or rate == 0.0:
        return x, np.ones_like(x)
    keep = rng.random(x.shape) >= rate
    scale = keep / (1.0 - rate)
    return x * scale, scale


def stack_forward(
    layers: list[MaskedLayer],
    head: DenseLayer,
    x: np.ndarray,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
    training: bool = False,
):
    """Forward through masked hidden layers then the dense head.

    Returns (logits, caches); caches feed stack_backward.  Dropout applies to
    each hidden layer's post-activation output during training only.
    """
    caches = []
    out = np.asarray(x, dtype=np.float64)
    for layer in layers:
        pre = encoder_preactivation(layer, out)
        act = activation_fn(layer.activation)(pre)
        dropped, scale = dropout(act, dropout_rate, rng, training) if training else (act, None)
        caches.append({"x": out, "pre": pre, "act": act, "scale": scale})
        out = dropped
    logits = out @ head.weights.T + head.bias
    caches.append({"x": out})
    return logits, caches


def stack_backward(layers: list[MaskedLayer], head: DenseLayer, caches, dlogits: np.ndarray):
    """Exact gradients for stack_forward; returns {'head': ..., 'layers': [...]}."""
    head_in = caches[-1]["x"]
    grads_head = {"weights": dlogits.T @ head_in, "bias": dlogits.sum(axis=0)}
    dx = dlogits @ head.weights
    grads_layers = []
    for layer, cache in zip(reversed(layers), reversed(caches[:-1])):
        if cache["scale"] is not None:
            dx = dx * cache["scale"]
        dpre = dx * activation_grad(layer.activation, cache["pre"], cache["act"])
        grads_layers.append(
            {"weights": (dpre.T @ cache["x"]) * layer.mask, "bias_hidden": dpre.sum(axis=0)}
        )
        dx = dpre @ layer.masked_weights()
    grads_layers.reverse()
    return {"head": grads_head, "layers": grads_layers}


def hidden_representation(layers: list[MaskedLayer], x: np.ndarray) -> np.ndarray:
    """Eval-mode forward through the hidden stack only (no dropout, no head)."""
    out = np.asarray(x, dtype=np.float64)
    for layer in layers:
        out = masked_forward(layer, out)
    return out
