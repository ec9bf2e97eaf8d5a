"""Monte Carlo of the whole link over a binary symmetric channel.

For each flip probability and cascade, encrypts random plaintext blocks,
passes every frame row through the channel (raw bits or Walsh rows) and
counts plaintext values that come back wrong or fail to decode.

    python scripts/channel_sweep.py --pe 0,0.001,0.01,0.05 --trials 20
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from crosslayer.bundle import SignalingConfig, make_bundle
from crosslayer.errors import CrossLayerError
from crosslayer.pipeline import decrypt_pipeline, encrypt_pipeline
from crosslayer.presets import cascade_by_name
from crosslayer.signaling import ChannelModel


@dataclass
class SweepConfig:
    pe: list
    cascades: list
    modes: list
    trials: int = 20
    block_size: int = 8
    seed: int = 0


def run(cfg: SweepConfig, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["cascade", "mode", "pe", "values", "wrong", "failed_blocks", "value_error_rate"])
    for name in cfg.cascades:
        for mode in cfg.modes:
            kb = make_bundle(cascade=cascade_by_name(name, cfg.seed),
                             signaling=SignalingConfig(mode=mode))
            rng = np.random.default_rng(cfg.seed)
            plain = [rng.integers(0, kb.rsa.m, cfg.block_size).tolist()
                     for _ in range(cfg.trials)]
            frames = [encrypt_pipeline(kb, p, cfg.block_size) for p in plain]
            for pe in cfg.pe:
                wrong = failed = 0
                for t, (p, fs) in enumerate(zip(plain, frames)):
                    ch = ChannelModel(pe, seed=cfg.seed * 100003 + t) if pe > 0 else None
                    try:
                        back = decrypt_pipeline(kb, fs, ch)
                    except CrossLayerError:
                        failed += 1
                        wrong += len(p)
                        continue
                    wrong += sum(a != b for a, b in zip(p, back))
                total = cfg.trials * cfg.block_size
                w.writerow([name, mode, pe, total, wrong, failed, f"{wrong / total:.4g}"])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pe", default="0,0.001,0.01,0.05")
    ap.add_argument("--cascades", default="demo8,tab4x23,lin4x23")
    ap.add_argument("--modes", default="bits,walsh")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    run(SweepConfig([float(v) for v in args.pe.split(",")], args.cascades.split(","),
                    args.modes.split(","), args.trials, seed=args.seed))


if __name__ == "__main__":
    main()
