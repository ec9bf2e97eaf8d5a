"""Command-line front end.

Exit status: 0 on success, 1 on a domain or I/O error, 2 on a usage error.
All diagnostics go to stderr; data goes to ``--out`` or stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .analysis import PROFILES, AttackParams, CurveSpec, emit_curves, parse_grid
from .bundle import SignalingConfig, dump_bundle, load_bundle, make_bundle
from .errors import CrossLayerError
from .golden import run_golden_checks
from .pipeline import FrameSet, decrypt_pipeline, encrypt_pipeline
from .presets import CASCADE_NAMES, cascade_by_name
from .signaling import ChannelModel

__all__ = ["main", "build_parser"]


def _int_list(n: int | None = None):
    def parse(text: str) -> tuple[int, ...]:
        try:
            values = tuple(int(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a comma list of integers")
        if n is not None and len(values) != n:
            raise argparse.ArgumentTypeError(f"expected {n} values, got {len(values)}")
        return values
    return parse


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _read_plaintext(text: str) -> list[int]:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(int(line))
        except ValueError:
            raise CrossLayerError(f"line {lineno}: {line!r} is not a decimal integer",
                                  stage="input") from None
    return values


def cmd_keygen(args) -> int:
    cascade = cascade_by_name(args.cascade, args.seed)
    kb = make_bundle(args.primes, args.e, args.moduli, args.h, cascade,
                     SignalingConfig(mode=args.mode, pe=args.pe, seed=args.seed))
    _write(dump_bundle(kb), args.out)
    return 0


def cmd_encrypt(args) -> int:
    kb = load_bundle(args.key)
    frames = encrypt_pipeline(kb, _read_plaintext(_read(args.input)), args.block_size,
                              wrap=args.wrap)
    _write(frames.to_csv(), args.out)
    return 0


def cmd_decrypt(args) -> int:
    kb = load_bundle(args.key)
    frames = FrameSet.from_csv(_read(args.input))
    pe = kb.signaling.pe if args.pe is None else args.pe
    seed = kb.signaling.seed if args.seed is None else args.seed
    channel = ChannelModel(pe, seed) if pe > 0 else None
    values = decrypt_pipeline(kb, frames, channel)
    _write("".join(f"{v}\n" for v in values), args.out)
    return 0


def cmd_verify(args) -> int:
    results = run_golden_checks()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} golden checks passed")
    return 0 if not failed else 1


def cmd_analyze(args) -> int:
    if args.what == "ber":
        profiles = [PROFILES[c] for c in args.code] if args.code else list(PROFILES.values())
        spec = CurveSpec("ber", parse_grid(args.snr_db), profiles, args.exponent)
    elif args.what == "throughput":
        spec = CurveSpec("throughput", parse_grid(args.pe), rate=args.rate,
                         block_bits=args.block_bits)
    else:
        p, q = args.rsa
        spec = CurveSpec("attack", parse_grid(args.stages),
                         attack=AttackParams(args.p, args.q, args.k, 1, p, q))
    sys.stdout.write(emit_curves(spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crosslayer",
                                 description="Cross-layer RSA/RNS/lifting/cascade link.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a key bundle")
    p.add_argument("--primes", type=_int_list(2), default=(13, 37), metavar="P,Q")
    p.add_argument("--e", type=int, default=5)
    p.add_argument("--moduli", type=_int_list(), default=(107, 109, 113), metavar="A,B,C")
    p.add_argument("--h", type=_int_list(3), default=(2, 0, 0), metavar="H1,H2,H3",
                   help="lifting kernel taps")
    p.add_argument("--cascade", choices=CASCADE_NAMES, default="demo8")
    p.add_argument("--seed", type=int, default=0, help="random cascade and channel seed")
    p.add_argument("--mode", choices=("walsh", "bits"), default="walsh",
                   help="what the channel carries")
    p.add_argument("--pe", type=float, default=0.0, help="default channel flip probability")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="plaintext integers -> frame CSV")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True, help="one decimal integer per line")
    p.add_argument("--out", default=None)
    p.add_argument("--block-size", type=int, default=8)
    p.add_argument("--wrap", action="store_true",
                   help="accept values >= the RSA modulus (recovered only mod m)")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="frame CSV -> plaintext integers")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pe", type=float, default=None, help="override channel flip probability")
    p.add_argument("--seed", type=int, default=None, help="override channel seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("verify", help="run the golden vectors")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="emit analysis CSV on stdout")
    asub = p.add_subparsers(dest="what", required=True)
    a = asub.add_parser("ber", help="coded orthogonal signaling bound vs SNR")
    a.add_argument("--code", action="append", choices=sorted(PROFILES),
                   help="profile (repeatable); default both")
    a.add_argument("--snr-db", default="0:20:1", help="start:stop:step or a,b,c")
    a.add_argument("--exponent", choices=("L", "d"), default="L")
    a = asub.add_parser("throughput", help="throughput vs bit error probability")
    a.add_argument("--pe", default="0:0.01:0.001")
    a.add_argument("--rate", type=float, default=1.0)
    a.add_argument("--block-bits", type=int, default=64)
    a = asub.add_parser("attack", help="attack step counts vs cascade stages")
    a.add_argument("--stages", default="1:4:1")
    a.add_argument("--p", type=int, default=10, help="plaintext-ciphertext block count")
    a.add_argument("--q", type=int, default=2, help="state count")
    a.add_argument("--k", type=int, default=8, help="bits per symbol")
    a.add_argument("--rsa", type=_int_list(2), default=(13, 37), metavar="P,Q")
    for a in asub.choices.values():
        a.set_defaults(func=cmd_analyze)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors (2) and --help (0)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CrossLayerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
