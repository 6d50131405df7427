#!/usr/bin/env python3
"""Desk-scale comparison on the synthetic news fixture.

Trains a structure-learned sparse network, a dense baseline, a magnitude-
pruned baseline, and an L1-regularized baseline on the same split, then
prints one aligned table (accuracy, parameter count, sparsity).
"""

import argparse
import time

from trfnet.baselines import DenseNetConfig, hyper_from_config, prune_and_retrain, train_dense, train_l1
from trfnet.builder import (
    BuildConfig,
    FinetuneHyper,
    attach_head,
    build_trf_net,
    evaluate,
    finetune,
    report_to_text,
)
from trfnet.dae import CorruptionConfig, DaeHyper
from trfnet.data import DiscretizationPolicy, split
from trfnet.synth import news_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--confusion", type=float, default=0.025)
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--stride", type=int, default=3)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--globals", dest="globals_fraction", type=float, default=0.1)
    ap.add_argument("--widths", default="256", help="dense baseline hidden widths")
    ap.add_argument("--keep", type=float, default=0.1, help="pruning keep fraction")
    ap.add_argument("--strength", type=float, default=1e-5, help="L1 strength")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    corpus = news_corpus(confusion=args.confusion, seed=args.seed)
    train, valid, test = split(corpus, 0.7, 0.15, seed=args.seed)
    classes = int(corpus.labels.max()) + 1
    rows = []

    t0 = time.perf_counter()
    cfg = BuildConfig(
        radius=args.radius,
        stride=args.stride,
        depth=args.depth,
        global_fraction=args.globals_fraction,
        policy=DiscretizationPolicy.fixed(0.0),
        dae=DaeHyper(epochs=12, batch_size=128, seed=args.seed),
        corruption=CorruptionConfig("masking", 0.2),
        seed=args.seed,
    )
    net = build_trf_net(train, cfg)
    t_structure = time.perf_counter() - t0
    attach_head(net, classes)
    net, _ = finetune(net, train, valid, FinetuneHyper(epochs=100, patience=15, seed=args.seed))
    rows.append(("trf-net", evaluate(net, test)))
    print(f"[trf-net] structure {t_structure:.1f}s, widths "
          f"{[layer.hidden_count for layer in net.layers]}")

    dense_cfg = DenseNetConfig(
        hidden_widths=tuple(int(w) for w in args.widths.split(",")),
        epochs=100,
        patience=15,
        seed=args.seed,
    )
    dense_net, _ = train_dense(train, dense_cfg, valid)
    rows.append(("dense-fnn", evaluate(dense_net, test)))

    pruned, _ = prune_and_retrain(dense_net, args.keep, train, hyper_from_config(dense_cfg), valid)
    rows.append((f"pruned@{args.keep}", evaluate(pruned, test)))

    l1_net, l1_report = train_l1(train, dense_cfg, args.strength, valid)
    report = evaluate(l1_net, test)
    report.effective_sparsity = l1_report.effective_sparsity
    rows.append((f"l1@{args.strength}", report))

    print()
    header = f"{'model':<14} {'accuracy':>9} {'params':>9} {'sparsity':>9} {'eff.sp':>8}"
    print(header)
    print("-" * len(header))
    for name, r in rows:
        eff = "-" if r.effective_sparsity is None else f"{100 * r.effective_sparsity:.1f}%"
        print(
            f"{name:<14} {r.score():>9.4f} {r.parameter_count:>9} "
            f"{100 * r.sparsity:>8.2f}% {eff:>8}"
        )
    print()
    for name, r in rows:
        print(f"--- {name} ---\n{report_to_text(r, name)}", end="")


if __name__ == "__main__":
    main()
