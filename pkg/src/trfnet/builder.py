"""End-to-end construction, fine-tuning, evaluation, and model persistence.

Layers are built one at a time: learn a dependency tree on the current
(binary view of the) data, carve it into receptive fields, train the masked
layer as a denoising autoencoder, then project the data through it - the
binary projection feeds the next tree, the probability projection feeds the
next autoencoder.  The stacked network gets a dense classifier head and is
fine-tuned with backpropagation under the frozen masks.

Per-layer seeds are master_seed + layer_index; the head uses
master_seed + depth.
"""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import nn
from .dae import CorruptionConfig, DaeHyper, train_dae, project
from .data import Dataset, DiscretizationPolicy, discretize
from .errors import EmptyStructureError, ModelFormatError
from .receptive_field import ReceptiveFieldPlan, build_masks
from .tree import chow_liu_from_binary

SOFTMAX = "softmax"
MULTITASK = "multitask"

MODEL_MAGIC = "trfnet-model v1"
REPORT_MAGIC = "trfnet-report v1"


def _per_layer(value, depth: int, what: str) -> tuple[int, ...]:
    if isinstance(value, (int, np.integer)):
        return (int(value),) * depth
    out = tuple(int(x) for x in value)
    if len(out) != depth:
        raise ValueError(f"{what}: need {depth} per-layer values, got {len(out)}")
    return out


@dataclass(frozen=True)
class BuildConfig:
    """Structure and training knobs for one stacked build.

    radius and stride may be single ints (reused at every layer) or
    per-layer sequences of length depth.
    """

    radius: int | tuple[int, ...] = 2
    stride: int | tuple[int, ...] = 2
    depth: int = 1
    global_fraction: float = 0.1
    policy: DiscretizationPolicy = field(default_factory=DiscretizationPolicy.median)
    dae: DaeHyper = field(default_factory=DaeHyper)
    corruption: CorruptionConfig = field(default_factory=CorruptionConfig)
    seed: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "radius", _per_layer(self.radius, self.depth, "radius"))
        object.__setattr__(self, "stride", _per_layer(self.stride, self.depth, "stride"))
        if not 0.0 <= self.global_fraction <= 1.0:
            raise ValueError(f"global_fraction must be in [0, 1], got {self.global_fraction}")


@dataclass
class TrfNetwork:
    """A stack of masked layers with an optional dense classifier head."""

    layers: list[nn.MaskedLayer]
    plans: list[ReceptiveFieldPlan | None]
    head: nn.DenseLayer | None = None
    head_mode: str = SOFTMAX
    config: BuildConfig | None = None
    training_logs: list[list[float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.layers:
            raise ValueError("network needs at least one layer")
        if len(self.plans) != len(self.layers):
            raise ValueError("need one plan slot per layer")
        for k in range(1, len(self.layers)):
            if self.layers[k].visible_count != self.layers[k - 1].hidden_count:
                raise ValueError(
                    f"layer {k} expects width {self.layers[k].visible_count} but gets "
                    f"{self.layers[k - 1].hidden_count}"
                )
        if self.head is not None and self.head.in_count != self.top_width:
            raise ValueError("head width does not match the top layer")

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def input_width(self) -> int:
        return self.layers[0].visible_count

    @property
    def top_width(self) -> int:
        return self.layers[-1].hidden_count

    def mask_violation(self) -> float:
        """Largest |weight| sitting outside a mask; must be exactly 0."""
        return max(
            float(np.abs((1.0 - l.mask) * l.weights).max()) for l in self.layers
        )

    def hidden_sparsity(self) -> float:
        """Existing hidden connections over the fully connected count."""
        nnz = sum(int(l.mask.sum()) for l in self.layers)
        dense = sum(l.mask.size for l in self.layers)
        return nnz / dense

    def parameter_count(self) -> int:
        """Masked hidden weights plus hidden biases plus the head, if any."""
        count = sum(int(l.mask.sum()) + l.hidden_count for l in self.layers)
        if self.head is not None:
            count += self.head.weights.size + self.head.bias.size
        return count


@dataclass
class EvalReport:
    """Classification quality plus size metrics for one model.

    In multi-task mode auc_per_task holds one entry per task, with -1.0
    marking tasks whose test labels contained only one class; such tasks
    are excluded from auc_mean.
    """

    parameter_count: int
    sparsity: float
    accuracy: float | None = None
    auc_per_task: tuple[float, ...] | None = None
    auc_mean: float | None = None
    effective_sparsity: float | None = None
    wall_clock: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not -1e-12 <= self.sparsity <= 1.0 + 1e-12:
            raise ValueError(f"sparsity must be in [0, 1], got {self.sparsity}")

    def score(self) -> float:
        """The headline metric: accuracy, or mean AUC in multi-task mode."""
        if self.accuracy is not None:
            return self.accuracy
        assert self.auc_mean is not None
        return self.auc_mean


def build_trf_net(d: Dataset, cfg: BuildConfig) -> TrfNetwork:
    """Run the layer-wise structure learning and pretraining loop."""
    layers: list[nn.MaskedLayer] = []
    plans: list[ReceptiveFieldPlan | None] = []
    logs: list[list[float]] = []
    current = d
    binary = discretize(d, cfg.policy)
    for k in range(cfg.depth):
        seed_k = cfg.seed + k
        tree = chow_liu_from_binary(binary)
        try:
            plan, mask = build_masks(
                tree, cfg.radius[k], cfg.stride[k], cfg.global_fraction, seed_k
            )
        except EmptyStructureError as e:
            raise EmptyStructureError(f"layer {k}: {e}") from None
        model = train_dae(mask, current, cfg.corruption, replace(cfg.dae, seed=seed_k))
        layers.append(model.layer)
        plans.append(plan)
        logs.append(model.training_log)
        if k + 1 < cfg.depth:
            if model.layer.hidden_count < 2:
                raise EmptyStructureError(
                    f"layer {k} narrowed to {model.layer.hidden_count} unit(s); cannot stack"
                )
            current, binary = project(model, current)
    return TrfNetwork(layers=layers, plans=plans, config=cfg, training_logs=logs)


def attach_head(net: TrfNetwork, classes: int, mode: str = SOFTMAX, seed: int | None = None) -> TrfNetwork:
    """Put a fresh dense classifier on top; replaces any existing head.

    softmax mode wants classes >= 2 mutually exclusive labels; multitask
    mode wants classes >= 1 independent binary tasks.
    """
    if mode not in (SOFTMAX, MULTITASK):
        raise ValueError(f"unknown head mode {mode!r}")
    minimum = 2 if mode == SOFTMAX else 1
    if classes < minimum:
        raise ValueError(f"need at least {minimum} outputs for {mode}, got {classes}")
    if seed is None:
        seed = (net.config.seed + net.depth) if net.config is not None else net.depth
    net.head = nn.init_dense_layer(classes, net.top_width, np.random.default_rng(seed))
    net.head_mode = mode
    return net


@dataclass(frozen=True)
class FinetuneHyper:
    epochs: int = 100
    batch_size: int = 128
    step_size: float = 1e-3
    dropout_rate: float = 0.5
    patience: int = 5
    activation: str = "relu"
    reinit: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or self.patience < 1:
            raise ValueError("epochs, batch_size, and patience must be >= 1")


def _check_labels(d: Dataset, mode: str, what: str):
    if d.labels is None:
        raise ValueError(f"{what}: labeled data required")
    if mode == SOFTMAX and d.labels.ndim != 1:
        raise ValueError(f"{what}: softmax head needs a 1-D label vector")
    if mode == MULTITASK and d.labels.ndim != 2:
        raise ValueError(f"{what}: multitask head needs an N x C label matrix")


def _named_params(net: TrfNetwork):
    params, masks = {}, {}
    for i, layer in enumerate(net.layers):
        params[f"w{i}"] = layer.weights
        params[f"bh{i}"] = layer.bias_hidden
        masks[f"w{i}"] = layer.mask
    params["head_w"] = net.head.weights
    params["head_b"] = net.head.bias
    return params, masks


def _batch_loss_grads(net: TrfNetwork, x, y, hyper, rng):
    logits, caches = nn.stack_forward(
        net.layers, net.head, x, dropout_rate=hyper.dropout_rate, rng=rng, training=True
    )
    if net.head_mode == SOFTMAX:
        loss, dlogits = nn.softmax_cross_entropy(logits, y)
    else:
        loss, dlogits = nn.multitask_sigmoid_loss(logits, y)
    g = nn.stack_backward(net.layers, net.head, caches, dlogits)
    grads = {"head_w": g["head"]["weights"], "head_b": g["head"]["bias"]}
    for i, gl in enumerate(g["layers"]):
        grads[f"w{i}"] = gl["weights"]
        grads[f"bh{i}"] = gl["bias_hidden"]
    return loss, grads


def finetune(
    net: TrfNetwork,
    train: Dataset,
    valid: Dataset | None,
    hyper: FinetuneHyper,
    penalty_grads=None,
):
    """Backpropagation training of the whole stack under frozen masks.

    Hidden activations are switched to hyper.activation (the pretrained
    weights are kept unless hyper.reinit), dropout applies to hidden layers
    during training, and early stopping tracks the validation score with the
    given patience.  The returned report is computed from the best-validation
    snapshot on the validation set (on the training set when valid is None).

    penalty_grads, when given, is called with the network before each step
    and must return extra gradient terms keyed like the parameter dict; the
    L1 baseline hooks in through it.
    """
    if net.head is None:
        raise ValueError("attach a head before finetuning")
    _check_labels(train, net.head_mode, "train")
    if valid is not None:
        _check_labels(valid, net.head_mode, "valid")
    t0 = time.perf_counter()
    rng = np.random.default_rng(hyper.seed)
    for layer in net.layers:
        layer.activation = hyper.activation
    if hyper.reinit:
        for layer in net.layers:
            fresh = nn.init_masked_layer(layer.mask, rng, activation=hyper.activation)
            layer.weights[...] = fresh.weights
            layer.bias_hidden[...] = 0.0
            layer.bias_visible[...] = 0.0
    params, masks = _named_params(net)
    adam = nn.Adam(hyper.step_size)
    n = train.n_samples
    best_score, best_state, since_best = -np.inf, None, 0
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for start in range(0, n, hyper.batch_size):
            idx = order[start : start + hyper.batch_size]
            _, grads = _batch_loss_grads(net, train.values[idx], train.labels[idx], hyper, rng)
            if penalty_grads is not None:
                for name, extra in penalty_grads(net).items():
                    grads[name] = grads[name] + extra
            adam.step(params, grads, masks)
        gate = valid if valid is not None else train
        score = _score_dataset(net, gate)
        if score > best_score:
            best_score = score
            best_state = {k: v.copy() for k, v in params.items()}
            since_best = 0
        else:
            since_best += 1
            if since_best >= hyper.patience:
                break
    if best_state is not None:
        for k, v in params.items():
            v[...] = best_state[k]
    train_seconds = time.perf_counter() - t0
    report = evaluate(net, valid if valid is not None else train)
    report.wall_clock["finetune"] = train_seconds
    return net, report


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=np.float64)
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def binary_auc(scores: np.ndarray, targets: np.ndarray) -> float:
    """Area under the ROC curve by the rank-sum statistic, ties averaged."""
    targets = np.asarray(targets)
    n_pos = int((targets == 1).sum())
    n_neg = int((targets == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = _average_ranks(np.asarray(scores, dtype=np.float64))
    pos_rank_sum = float(ranks[targets == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _logits(net: TrfNetwork, values: np.ndarray) -> np.ndarray:
    logits, _ = nn.stack_forward(net.layers, net.head, values, training=False)
    return logits


def _score_dataset(net: TrfNetwork, d: Dataset) -> float:
    logits = _logits(net, d.values)
    if net.head_mode == SOFTMAX:
        return float((logits.argmax(axis=1) == d.labels).mean())
    aucs = _multitask_aucs(logits, d.labels)
    scored = [a for a in aucs if a is not None]
    return float(np.mean(scored)) if scored else 0.0


def _multitask_aucs(logits: np.ndarray, labels: np.ndarray):
    aucs = []
    for task in range(labels.shape[1]):
        observed = labels[:, task] >= 0
        y = labels[observed, task]
        if (y == 1).sum() == 0 or (y == 0).sum() == 0:
            aucs.append(None)
            continue
        aucs.append(binary_auc(logits[observed, task], y))
    return aucs


def evaluate(net: TrfNetwork, test: Dataset) -> EvalReport:
    """Accuracy (softmax) or per-task AUCs (multitask) plus size metrics."""
    if net.head is None:
        raise ValueError("attach a head before evaluating")
    _check_labels(test, net.head_mode, "test")
    t0 = time.perf_counter()
    logits = _logits(net, test.values)
    if net.head_mode == SOFTMAX:
        accuracy = float((logits.argmax(axis=1) == test.labels).mean())
        auc_list, auc_mean = None, None
    else:
        accuracy = None
        aucs = _multitask_aucs(logits, test.labels)
        scored = [a for a in aucs if a is not None]
        auc_list = tuple(-1.0 if a is None else a for a in aucs)
        auc_mean = float(np.mean(scored)) if scored else None
    return EvalReport(
        parameter_count=net.parameter_count(),
        sparsity=net.hidden_sparsity(),
        accuracy=accuracy,
        auc_per_task=auc_list,
        auc_mean=auc_mean,
        wall_clock={"evaluate": time.perf_counter() - t0},
    )


# ---------------------------------------------------------------------------
# report files: line oriented "key value", no timings so reruns are identical
# ---------------------------------------------------------------------------


def report_to_text(r: EvalReport, name: str = "model") -> str:
    lines = [REPORT_MAGIC, f"name {name}"]
    if r.accuracy is not None:
        lines.append(f"accuracy {r.accuracy!r}")
    if r.auc_mean is not None:
        lines.append(f"auc_mean {r.auc_mean!r}")
    if r.auc_per_task is not None:
        lines.append("auc_per_task " + ",".join(repr(a) for a in r.auc_per_task))
    lines.append(f"parameter_count {r.parameter_count}")
    lines.append(f"sparsity {r.sparsity!r}")
    if r.effective_sparsity is not None:
        lines.append(f"effective_sparsity {r.effective_sparsity!r}")
    return "\n".join(lines) + "\n"


def report_from_text(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != REPORT_MAGIC:
        raise ModelFormatError("not a report file")
    fields_: dict[str, str] = {}
    for ln in lines[1:]:
        key, _, value = ln.partition(" ")
        fields_[key] = value
    name = fields_.get("name", "model")
    report = EvalReport(
        parameter_count=int(fields_["parameter_count"]),
        sparsity=float(fields_["sparsity"]),
        accuracy=float(fields_["accuracy"]) if "accuracy" in fields_ else None,
        auc_per_task=(
            tuple(float(x) for x in fields_["auc_per_task"].split(","))
            if "auc_per_task" in fields_
            else None
        ),
        auc_mean=float(fields_["auc_mean"]) if "auc_mean" in fields_ else None,
        effective_sparsity=(
            float(fields_["effective_sparsity"]) if "effective_sparsity" in fields_ else None
        ),
    )
    return name, report


def save_report(r: EvalReport, path, name: str = "model") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_text(r, name))


def load_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return report_from_text(fh.read())


# ---------------------------------------------------------------------------
# model files: versioned self-describing text, exact float round trip
# ---------------------------------------------------------------------------


def _floats(xs) -> str:
    return " ".join(repr(float(x)) for x in xs)


def _config_lines(cfg: BuildConfig) -> list[str]:
    pol = cfg.policy
    pol_s = pol.kind if pol.threshold is None else f"{pol.kind} {pol.threshold!r}"
    d = cfg.dae
    return [
        "config begin",
        "radius " + ",".join(str(r) for r in cfg.radius),
        "stride " + ",".join(str(s) for s in cfg.stride),
        f"depth {cfg.depth}",
        f"global_fraction {cfg.global_fraction!r}",
        f"policy {pol_s}",
        f"dae {d.epochs} {d.batch_size} {d.step_size!r} {d.beta1!r} {d.beta2!r} {d.eps!r} {d.loss_family} {d.seed}",
        f"corruption {cfg.corruption.kind} {cfg.corruption.rate!r} {cfg.corruption.seed}",
        f"seed {cfg.seed}",
        "config end",
    ]


def _parse_config(lines: list[str]) -> BuildConfig:
    vals: dict[str, str] = {}
    for ln in lines:
        key, _, rest = ln.partition(" ")
        vals[key] = rest
    pol_parts = vals["policy"].split(" ")
    policy = DiscretizationPolicy(
        pol_parts[0], float(pol_parts[1]) if len(pol_parts) > 1 else None
    )
    dp = vals["dae"].split(" ")
    dae = DaeHyper(
        epochs=int(dp[0]),
        batch_size=int(dp[1]),
        step_size=float(dp[2]),
        beta1=float(dp[3]),
        beta2=float(dp[4]),
        eps=float(dp[5]),
        loss_family=dp[6],
        seed=int(dp[7]),
    )
    cp = vals["corruption"].split(" ")
    corruption = CorruptionConfig(kind=cp[0], rate=float(cp[1]), seed=int(cp[2]))
    return BuildConfig(
        radius=tuple(int(x) for x in vals["radius"].split(",")),
        stride=tuple(int(x) for x in vals["stride"].split(",")),
        depth=int(vals["depth"]),
        global_fraction=float(vals["global_fraction"]),
        policy=policy,
        dae=dae,
        corruption=corruption,
        seed=int(vals["seed"]),
    )


def save(net: TrfNetwork, path) -> None:
    """Write the canonical text serialization; see load for the inverse.

    The same network always produces the same bytes, and weights round-trip
    exactly via repr.
    """
    out = [MODEL_MAGIC, f"head_mode {net.head_mode}"]
    if net.config is not None:
        out.extend(_config_lines(net.config))
    else:
        out.append("config none")
    out.append(f"layers {net.depth}")
    for k, layer in enumerate(net.layers):
        h, v = layer.mask.shape
        out.append(f"layer {k} {h} {v} {layer.activation}")
        plan = net.plans[k]
        if plan is None:
            out.append("plan none")
        else:
            out.append(f"plan {plan.radius} {plan.stride} {plan.global_count}")
            out.append("centers " + " ".join(str(c) for c in plan.centers))
            for i, members in enumerate(plan.fields):
                out.append(f"field {i} " + " ".join(str(m) for m in members))
        for i in range(h):
            row = layer.mask[i]
            if row.all():
                out.append(f"maskrow {i} dense")
            else:
                out.append(f"maskrow {i} sparse " + " ".join(str(j) for j in np.flatnonzero(row)))
            out.append(f"w {i} " + _floats(layer.weights[i][row.astype(bool)]))
        out.append("bh " + _floats(layer.bias_hidden))
        out.append("bv " + _floats(layer.bias_visible))
    if net.head is None:
        out.append("head none")
    else:
        o, i = net.head.weights.shape
        out.append(f"head {o} {i} {net.head.activation}")
        for r in range(o):
            out.append(f"hw {r} " + _floats(net.head.weights[r]))
        out.append("hb " + _floats(net.head.bias))
    out.append("end trfnet-model")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


class _Reader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def next(self, expect_prefix: str | None = None) -> str:
        if self.pos >= len(self.lines):
            raise ModelFormatError("file truncated")
        ln = self.lines[self.pos]
        self.pos += 1
        if expect_prefix is not None and not ln.startswith(expect_prefix):
            raise ModelFormatError(f"expected {expect_prefix!r}, found {ln[:40]!r}")
        return ln


def load(path) -> TrfNetwork:
    """Parse a model file written by save; raises ModelFormatError on damage."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rd = _Reader(lines)
    try:
        if rd.next() != MODEL_MAGIC:
            raise ModelFormatError("not a model file, or unsupported version")
        head_mode = rd.next("head_mode ").split(" ")[1]
        first = rd.next()
        config = None
        if first == "config begin":
            cfg_lines = []
            while True:
                ln = rd.next()
                if ln == "config end":
                    break
                cfg_lines.append(ln)
            config = _parse_config(cfg_lines)
        elif first != "config none":
            raise ModelFormatError("missing config section")
        n_layers = int(rd.next("layers ").split(" ")[1])
        layers, plans = [], []
        for k in range(n_layers):
            parts = rd.next(f"layer {k} ").split(" ")
            h, v, activation = int(parts[2]), int(parts[3]), parts[4]
            plan_ln = rd.next("plan")
            if plan_ln == "plan none":
                plan = None
            else:
                _, r_s, s_s, g_s = plan_ln.split(" ")
                centers = tuple(int(x) for x in rd.next("centers").split(" ")[1:] if x)
                fields_ = []
                for i in range(len(centers)):
                    toks = rd.next(f"field {i}").split(" ")[2:]
                    fields_.append(tuple(int(x) for x in toks if x))
                plan = ReceptiveFieldPlan(
                    radius=int(r_s),
                    stride=int(s_s),
                    centers=centers,
                    fields=tuple(fields_),
                    global_count=int(g_s),
                )
            mask = np.zeros((h, v), dtype=np.float64)
            weights = np.zeros((h, v), dtype=np.float64)
            for i in range(h):
                mtoks = rd.next(f"maskrow {i} ").split(" ")
                if mtoks[2] == "dense":
                    cols = np.arange(v)
                else:
                    cols = np.array([int(x) for x in mtoks[3:] if x], dtype=np.int64)
                mask[i, cols] = 1.0
                wtoks = rd.next(f"w {i}").split(" ")[2:]
                wvals = np.array([float(x) for x in wtoks if x], dtype=np.float64)
                if wvals.size != cols.size:
                    raise ModelFormatError(f"layer {k} row {i}: weight count mismatch")
                weights[i, cols] = wvals
            bh = np.array([float(x) for x in rd.next("bh").split(" ")[1:] if x])
            bv = np.array([float(x) for x in rd.next("bv").split(" ")[1:] if x])
            if bh.size != h or bv.size != v:
                raise ModelFormatError(f"layer {k}: bias length mismatch")
            layers.append(
                nn.MaskedLayer(
                    mask=mask, weights=weights, bias_hidden=bh, bias_visible=bv,
                    activation=activation,
                )
            )
            plans.append(plan)
        head_ln = rd.next("head")
        head = None
        if head_ln != "head none":
            _, o_s, i_s, act = head_ln.split(" ")
            o, i_w = int(o_s), int(i_s)
            hw = np.zeros((o, i_w), dtype=np.float64)
            for r in range(o):
                toks = rd.next(f"hw {r}").split(" ")[2:]
                vals = np.array([float(x) for x in toks if x], dtype=np.float64)
                if vals.size != i_w:
                    raise ModelFormatError(f"head row {r}: weight count mismatch")
                hw[r] = vals
            hb = np.array([float(x) for x in rd.next("hb").split(" ")[1:] if x])
            if hb.size != o:
                raise ModelFormatError("head bias length mismatch")
            head = nn.DenseLayer(weights=hw, bias=hb, activation=act)
        rd.next("end trfnet-model")
    except (ValueError, IndexError) as e:
        if isinstance(e, ModelFormatError):
            raise
        raise ModelFormatError(f"corrupted model file: {e}") from None
    return TrfNetwork(
        layers=layers, plans=plans, head=head, head_mode=head_mode, config=config
    )


def clone(net: TrfNetwork) -> TrfNetwork:
    """Deep copy; training one copy never touches the other."""
    return copy.deepcopy(net)
