"""Command-line front end.

Subcommands mirror the pipeline: tree, build, finetune, eval, baseline,
inspect, compare.  Every run writes a JSON manifest next to its primary
output recording the flags, seeds, input digests, output paths, and
timings.  Exit codes: 0 success, 1 runtime failure, 2 usage error.

Set TRFNET_THREADS to cap the BLAS thread count for a run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time


class CliError(Exception):
    """Runtime failure with a user-facing message (exit code 1)."""


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(primary_output, command, args, inputs, outputs, timings, seeds):
    manifest = {
        "command": command,
        "flags": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        "seeds": seeds,
        "inputs": {str(p): f"sha256:{_sha256(p)}" for p in inputs},
        "outputs": [str(p) for p in outputs],
        "timings": timings,
    }
    path = str(primary_output) + ".manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _add_data_flags(p: argparse.ArgumentParser):
    p.add_argument("--data", help="dense CSV input")
    p.add_argument("--labels", action="store_true", help="dense CSV has a label column")
    p.add_argument("--bow", help="sparse bag-of-words document file")
    p.add_argument("--vocab", help="vocabulary file for --bow")


def _load_data(args, need_labels=False):
    from .data import load_dense_csv, load_sparse_bow

    if args.bow is not None:
        if args.vocab is None:
            raise CliError("--bow requires --vocab")
        d = load_sparse_bow(args.bow, args.vocab)
        inputs = [args.bow, args.vocab]
    elif args.data is not None:
        d = load_dense_csv(args.data, has_labels=args.labels or need_labels)
        inputs = [args.data]
    else:
        raise CliError("no input: pass --data FILE or --bow FILE --vocab FILE")
    if need_labels and d.labels is None:
        raise CliError("this command needs labeled data")
    return d, inputs


def _parse_policy(spec: str | None, default):
    from .data import DiscretizationPolicy

    if spec is None:
        return default
    if spec == "median":
        return DiscretizationPolicy.median()
    if spec == "binary":
        return DiscretizationPolicy.already_binary()
    if spec.startswith("fixed:"):
        return DiscretizationPolicy.fixed(float(spec.split(":", 1)[1]))
    raise CliError(f"--policy: expected median, binary, or fixed:T, got {spec!r}")


def _default_policy(args, d):
    import numpy as np

    from .data import DiscretizationPolicy

    # presence/absence for bag-of-words counts; dense data keeps {0,1}
    # matrices as-is and median-splits anything real-valued
    if args.bow is not None:
        return DiscretizationPolicy.fixed(0.0)
    if np.isin(d.values, (0.0, 1.0)).all():
        return DiscretizationPolicy.already_binary()
    return DiscretizationPolicy.median()


def _parse_corruption(spec: str, seed: int):
    from .dae import CorruptionConfig

    kind, _, rate = spec.partition(":")
    if kind not in ("masking", "gaussian"):
        raise CliError(f"--corruption: expected masking:RATE or gaussian:STD, got {spec!r}")
    kind = "masking" if kind == "masking" else "gaussian-additive"
    try:
        return CorruptionConfig(kind=kind, rate=float(rate), seed=seed)
    except ValueError as e:
        raise CliError(f"--corruption: {e}") from None


def _parse_int_list(spec: str, flag: str):
    try:
        values = tuple(int(x) for x in spec.split(","))
    except ValueError:
        raise CliError(f"{flag}: expected an int or comma-separated ints, got {spec!r}") from None
    return values[0] if len(values) == 1 else values


def _split_labeled(d, args):
    from .data import split

    train, valid, test = split(d, args.train_frac, args.valid_frac, args.split_seed)
    if train is None:
        raise CliError("--train-frac: training split is empty")
    return train, valid, test


def _add_split_flags(p):
    p.add_argument("--train-frac", type=float, default=0.7)
    p.add_argument("--valid-frac", type=float, default=0.15)
    p.add_argument("--split-seed", type=int, default=0)


# ---------------------------------------------------------------- commands


def cmd_tree(args) -> int:
    from .data import discretize
    from .stats import mi_matrix
    from .tree import max_spanning_tree, to_dot

    t0 = time.perf_counter()
    d, inputs = _load_data(args)
    policy = _parse_policy(args.policy, _default_policy(args, d))
    mi = mi_matrix(discretize(d, policy))
    tree = max_spanning_tree(mi)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(to_dot(tree, d.feature_names))
    edges_path = args.out + ".edges.txt"
    names = d.feature_names or tuple(str(i) for i in range(d.n_features))
    ranked = sorted(tree.edges, key=lambda e: (-e[2], e[0], e[1]))[: args.top_edges]
    with open(edges_path, "w", encoding="utf-8") as fh:
        fh.write("rank\tmi\tnode_u\tnode_v\n")
        for rank, (u, v, w) in enumerate(ranked, start=1):
            fh.write(f"{rank}\t{w:.6f}\t{names[u]}\t{names[v]}\n")
    _write_manifest(
        args.out, "tree", args, inputs, [args.out, edges_path],
        {"total": time.perf_counter() - t0}, {},
    )
    return 0


def cmd_build(args) -> int:
    from . import builder
    from .dae import DaeHyper

    t0 = time.perf_counter()
    d, inputs = _load_data(args)
    cfg = builder.BuildConfig(
        radius=_parse_int_list(args.radius, "--radius"),
        stride=_parse_int_list(args.stride, "--stride"),
        depth=args.depth,
        global_fraction=args.globals_fraction,
        policy=_parse_policy(args.policy, _default_policy(args, d)),
        dae=DaeHyper(
            epochs=args.epochs,
            batch_size=args.batch,
            step_size=args.step,
            loss_family=args.family,
            seed=args.seed,
        ),
        corruption=_parse_corruption(args.corruption, args.seed),
        seed=args.seed,
    )
    from .errors import DomainError

    try:
        net = builder.build_trf_net(d, cfg)
    except DomainError as e:
        raise CliError(f"--family: {e}") from None
    builder.save(net, args.out)
    log_path = args.out + ".train_log.csv"
    with open(log_path, "w", encoding="utf-8") as fh:
        fh.write("layer,epoch,mean_loss\n")
        for k, log in enumerate(net.training_logs):
            for epoch, loss in enumerate(log, start=1):
                fh.write(f"{k},{epoch},{loss!r}\n")
    _write_manifest(
        args.out, "build", args, inputs, [args.out, log_path],
        {"total": time.perf_counter() - t0}, {"seed": args.seed},
    )
    return 0


def cmd_finetune(args) -> int:
    from . import builder

    t0 = time.perf_counter()
    d, inputs = _load_data(args, need_labels=True)
    inputs = [args.model] + inputs
    net = builder.load(args.model)
    train, valid, _ = _split_labeled(d, args)
    if net.head is None:
        classes = d.labels.shape[1] if d.labels.ndim == 2 else int(d.labels.max()) + 1
        mode = builder.MULTITASK if d.labels.ndim == 2 else builder.SOFTMAX
        builder.attach_head(net, classes, mode=mode)
    hyper = builder.FinetuneHyper(
        epochs=args.epochs,
        batch_size=args.batch,
        step_size=args.step,
        dropout_rate=args.dropout,
        patience=args.patience,
        activation=args.activation,
        reinit=args.reinit,
        seed=args.seed,
    )
    net, report = builder.finetune(net, train, valid, hyper)
    builder.save(net, args.out)
    report_path = args.report or (args.out + ".report")
    builder.save_report(report, report_path, name=args.name)
    _write_manifest(
        args.out, "finetune", args, inputs, [args.out, report_path],
        {"total": time.perf_counter() - t0, **report.wall_clock},
        {"seed": args.seed, "split_seed": args.split_seed},
    )
    return 0


def cmd_eval(args) -> int:
    from . import builder

    t0 = time.perf_counter()
    d, inputs = _load_data(args, need_labels=True)
    inputs = [args.model] + inputs
    net = builder.load(args.model)
    report = builder.evaluate(net, d)
    builder.save_report(report, args.report, name=args.name)
    _write_manifest(
        args.report, "eval", args, inputs, [args.report],
        {"total": time.perf_counter() - t0}, {},
    )
    return 0


def cmd_baseline(args) -> int:
    from . import baselines, builder

    t0 = time.perf_counter()
    d, inputs = _load_data(args, need_labels=True)
    train, valid, test = _split_labeled(d, args)
    cfg = baselines.DenseNetConfig(
        hidden_widths=_parse_widths(args.widths),
        dropout_rate=args.dropout,
        epochs=args.epochs,
        batch_size=args.batch,
        step_size=args.step,
        patience=args.patience,
        seed=args.seed,
    )
    effective = None
    if args.kind == "dense":
        net, report = baselines.train_dense(train, cfg, valid)
    elif args.kind == "l1":
        net, report = baselines.train_l1(train, cfg, args.strength, valid)
        effective = report.effective_sparsity
    else:
        if args.model is not None:
            base = builder.load(args.model)
            inputs.append(args.model)
        else:
            base, _ = baselines.train_dense(train, cfg, valid)
        hyper = baselines.hyper_from_config(cfg)
        net, report = baselines.prune_and_retrain(base, args.keep, train, hyper, valid)
    if test is not None:
        report = builder.evaluate(net, test)
        report.effective_sparsity = effective
    builder.save(net, args.out)
    report_path = args.report or (args.out + ".report")
    builder.save_report(report, report_path, name=args.name or args.kind)
    _write_manifest(
        args.out, "baseline", args, inputs, [args.out, report_path],
        {"total": time.perf_counter() - t0, **report.wall_clock},
        {"seed": args.seed, "split_seed": args.split_seed},
    )
    return 0


def _parse_widths(spec: str):
    try:
        return tuple(int(x) for x in spec.split(","))
    except ValueError:
        raise CliError(f"--widths: expected comma-separated ints, got {spec!r}") from None


def cmd_inspect(args) -> int:
    import warnings

    from . import builder
    from .errors import DegenerateUnitWarning
    from .interpret import load_embeddings, top_correlated_features, unit_interpretability

    t0 = time.perf_counter()
    d, inputs = _load_data(args)
    inputs = [args.model] + inputs
    net = builder.load(args.model)
    emb = None
    if args.embeddings:
        emb = load_embeddings(args.embeddings)
        inputs.append(args.embeddings)
    names = d.feature_names or tuple(str(j) for j in range(d.n_features))
    lines = []
    unit_scores = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateUnitWarning)
        for unit in range(net.top_width):
            top = top_correlated_features(net, d, unit, args.top)
            shown = " ".join(f"{names[j]}({r:+.3f})" for j, r in top)
            line = f"unit {unit}\t{shown}"
            if emb is not None:
                score = unit_interpretability([names[j] for j, _ in top], emb)
                if score is not None:
                    unit_scores.append(score)
                line += f"\tscore {'-' if score is None else repr(score)}"
            lines.append(line)
    if emb is not None and unit_scores:
        mean = sum(unit_scores) / len(unit_scores)
        lines.append(f"model_interpretability {mean!r}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_manifest(
        args.out, "inspect", args, inputs, [args.out],
        {"total": time.perf_counter() - t0}, {},
    )
    return 0


def cmd_compare(args) -> int:
    from .builder import load_report

    rows = []
    for path in args.reports:
        name, r = load_report(path)
        score = r.accuracy if r.accuracy is not None else r.auc_mean
        rows.append(
            (
                name,
                "-" if score is None else f"{score:.4f}",
                str(r.parameter_count),
                f"{100 * r.sparsity:.2f}%",
                "-" if r.effective_sparsity is None else f"{100 * r.effective_sparsity:.2f}%",
            )
        )
    header = ("model", "accuracy/auc", "params", "sparsity", "eff.sparsity")
    widths = [max(len(header[c]), *(len(row[c]) for row in rows)) for c in range(5)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    table = "\n".join([fmt.format(*header)] + [fmt.format(*row) for row in rows]) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(table)
        _write_manifest(args.out, "compare", args, list(args.reports), [args.out], {}, {})
    else:
        sys.stdout.write(table)
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trfnet",
        description="Learn sparse feedforward networks from feature dependency trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tree", help="learn a dependency tree and export it as DOT")
    _add_data_flags(p)
    p.add_argument("--policy", help="median | binary | fixed:T")
    p.add_argument("--out", required=True, help="DOT output path")
    p.add_argument("--top-edges", type=int, default=20)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("build", help="learn structure and pretrain a stacked network")
    _add_data_flags(p)
    p.add_argument("--radius", default="2", help="per-layer int or comma list")
    p.add_argument("--stride", default="2", help="per-layer int or comma list")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--globals", dest="globals_fraction", type=float, default=0.1)
    p.add_argument("--policy", help="median | binary | fixed:T")
    p.add_argument("--family", default="auto", help="auto | bernoulli | gaussian")
    p.add_argument("--corruption", default="masking:0.2", help="masking:RATE | gaussian:STD")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model output path")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("finetune", help="attach a head and train with backpropagation")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    _add_split_flags(p)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--activation", default="relu")
    p.add_argument("--reinit", action="store_true", help="discard pretrained weights")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("--report", help="report path (default: OUT.report)")
    p.add_argument("--name", default="trf", help="row name used by compare")
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("eval", help="evaluate a trained model on labeled data")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--report", required=True)
    p.add_argument("--name", default="model")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("baseline", help="train a comparison model")
    p.add_argument("kind", choices=("dense", "prune", "l1"))
    _add_data_flags(p)
    _add_split_flags(p)
    p.add_argument("--widths", default="64", help="hidden widths, comma separated")
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--keep", type=float, default=0.1, help="prune: fraction of weights kept")
    p.add_argument("--strength", type=float, default=1e-5, help="l1: penalty strength")
    p.add_argument("--model", help="prune: existing dense model to start from")
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="report path (default: OUT.report)")
    p.add_argument("--name", help="row name used by compare (default: the kind)")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("inspect", help="describe top-layer units by correlated features")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--embeddings", help="embedding table for coherence scores")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("compare", help="align report files into one table")
    p.add_argument("reports", nargs="+")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e.filename}: file not found", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
