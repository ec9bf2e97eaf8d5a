"""End-to-end protocol: RSA -> RNS -> lifting -> cascade -> channel, and back.

A message is cut into blocks of ``block_size`` values (a power of two; the
last block is zero-padded and the true length is kept in the frame header).
For every block and every modulus the residue sequence is decomposed into
detail levels ``1..t`` (finest first) plus one approximation value, stored
as level ``0``. Each symbol is one byte before the cascade.

Cascade framing depends on the key:

* rate-1, algebraically invertible cascades encrypt each
  ``(block, modulus, level)`` sequence as one stream, state reset per stream;
* any other cascade encrypts each byte as its own zero-terminated block and
  is decoded with the Viterbi decoder, so one flipped bit per symbol block is
  corrected when the code allows it.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .bundle import KeyBundle, SignalingConfig, load_bundle, make_bundle, save_bundle
from .convcrypt import (
    bits_to_symbols,
    cascade_decrypt,
    cascade_encrypt,
    symbols_to_bits,
    terminate,
)
from .errors import FrameError, LengthError
from .rns import from_residues, to_residues
from .rsa import decrypt_value, encrypt_value
from .signaling import (
    ChannelModel,
    bsc_transmit,
    channel_rng,
    demodulate_bytes,
    modulate_bytes,
    sylvester_hadamard,
)
from .subband import SubbandFrame, decompose, reconstruct
from .viterbi import cascade_decode

__all__ = [
    "KeyBundle",
    "SignalingConfig",
    "make_bundle",
    "save_bundle",
    "load_bundle",
    "FrameRow",
    "FrameSet",
    "ForwardLayers",
    "forward_layers",
    "encrypt_pipeline",
    "decrypt_pipeline",
    "transmit_bits",
]

SYMBOL_BITS = 8
FRAME_HEADER = ("message_index", "modulus", "level", "position", "symbol_bits")


@dataclass(frozen=True, order=True)
class FrameRow:
    message_index: int
    modulus: int
    level: int
    position: int
    symbol_bits: str


@dataclass
class FrameSet:
    plaintext_length: int
    block_size: int
    rows: list[FrameRow] = field(default_factory=list)

    @property
    def block_count(self) -> int:
        return -(-self.plaintext_length // self.block_size) if self.plaintext_length else 0

    @property
    def depth(self) -> int:
        return self.block_size.bit_length() - 1

    def groups(self) -> dict[tuple[int, int, int], list[FrameRow]]:
        """Rows keyed by ``(message_index, modulus, level)``, sorted by position."""
        out = defaultdict(list)
        for r in self.rows:
            out[(r.message_index, r.modulus, r.level)].append(r)
        for rows in out.values():
            rows.sort(key=lambda r: r.position)
        return dict(out)

    def check_complete(self, moduli: tuple[int, ...], row_bits: int | None = None) -> None:
        """Every block/modulus/level must be present with consecutive positions."""
        t = self.depth
        groups = self.groups()
        expected = set()
        for b in range(self.block_count):
            for m in moduli:
                for level in range(t + 1):
                    expected.add((b, m, level))
                    rows = groups.get((b, m, level))
                    want = 1 if level == 0 else 1 << (t - level)
                    if rows is None:
                        raise FrameError(f"missing frames for block {b}, modulus {m}, "
                                         f"level {level}", stage="pipeline")
                    if [r.position for r in rows] != list(range(want)):
                        raise FrameError(f"block {b}, modulus {m}, level {level}: expected "
                                         f"positions 0..{want - 1}", stage="pipeline")
                    for r in rows:
                        if row_bits is not None and len(r.symbol_bits) != row_bits:
                            raise FrameError(
                                f"block {b}, modulus {m}, level {level}, position "
                                f"{r.position}: {len(r.symbol_bits)} bits, expected {row_bits}",
                                stage="pipeline")
        extra = sorted(set(groups) - expected)
        if extra:
            raise FrameError(f"unexpected frame groups {extra[:3]}", stage="pipeline")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# frameset v1\n")
        buf.write(f"# plaintext_length={self.plaintext_length} block_size={self.block_size}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FRAME_HEADER)
        for r in self.rows:
            w.writerow([r.message_index, r.modulus, r.level, r.position, r.symbol_bits])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FrameSet":
        lines = text.splitlines()
        meta = {}
        body = []
        for lineno, line in enumerate(lines, start=1):
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        key, _, val = tok.partition("=")
                        meta[key] = val
                continue
            if line.strip():
                body.append((lineno, line))
        try:
            length, block = int(meta["plaintext_length"]), int(meta["block_size"])
        except (KeyError, ValueError):
            raise FrameError("frame header lacks plaintext_length/block_size",
                             stage="pipeline") from None
        if not body or tuple(body[0][1].split(",")) != FRAME_HEADER:
            raise FrameError(f"frame file must start with header {','.join(FRAME_HEADER)}",
                             stage="pipeline")
        rows = []
        for lineno, line in body[1:]:
            fields = next(csv.reader([line]))
            if len(fields) != 5:
                raise FrameError(f"line {lineno}: expected 5 fields", stage="pipeline")
            try:
                b, m, lv, pos = (int(v) for v in fields[:4])
            except ValueError:
                raise FrameError(f"line {lineno}: non-integer index field",
                                 stage="pipeline") from None
            bits = fields[4].strip()
            if not bits or bits.strip("01"):
                raise FrameError(f"line {lineno}: symbol_bits must be binary",
                                 stage="pipeline")
            rows.append(FrameRow(b, m, lv, pos, bits))
        return cls(length, block, rows)

    def write(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8", newline="\n")

    @classmethod
    def read(cls, path) -> "FrameSet":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"))


@dataclass
class ForwardLayers:
    """Intermediate values of the source side, for inspection and tests."""

    rsa_layer: list[int]
    frames: dict[tuple[int, int], SubbandFrame]  # (block, modulus) -> frame


def _check_block_size(block_size: int) -> int:
    if block_size < 1 or block_size & (block_size - 1):
        raise LengthError(f"block size {block_size} is not a power of two", stage="pipeline")
    return block_size.bit_length() - 1


def forward_layers(kb: KeyBundle, plaintext, block_size: int = 8,
                   wrap: bool = False) -> ForwardLayers:
    """RSA layer and per-(block, modulus) subband frames.

    ``wrap`` lets values at or above the RSA modulus through (they are
    encrypted as ``x mod m`` and cannot be recovered exactly).
    """
    _check_block_size(block_size)
    values = [int(v) for v in plaintext]
    rsa_layer = [encrypt_value(kb.rsa.public, v, wrap) for v in values]
    padded = rsa_layer + [0] * (-len(rsa_layer) % block_size)
    frames = {}
    for b in range(len(padded) // block_size):
        block = padded[b * block_size:(b + 1) * block_size]
        residues = [to_residues(kb.moduli, c).values for c in block]
        for j, m in enumerate(kb.moduli.moduli):
            frames[(b, m)] = decompose([r[j] for r in residues], kb.kernel, m)
    return ForwardLayers(rsa_layer, frames)


def _level_symbols(frame: SubbandFrame) -> list[tuple[int, tuple[int, ...]]]:
    out = [(i, d) for i, d in enumerate(frame.levels, start=1)]
    out.append((0, (frame.final_approx,)))
    return out


def _encrypt_symbols(kb: KeyBundle, symbols) -> list[str]:
    key = kb.cascade
    if key.invertible:
        bits = cascade_encrypt(key, symbols_to_bits(symbols, SYMBOL_BITS))
        return [bits[i:i + SYMBOL_BITS] for i in range(0, len(bits), SYMBOL_BITS)]
    return [cascade_encrypt(key, terminate(key, format(s, "08b"))) for s in symbols]


def _decrypt_symbols(kb: KeyBundle, rows: list[str]) -> list[int]:
    key = kb.cascade
    if key.invertible:
        return bits_to_symbols(cascade_decrypt(key, "".join(rows)), SYMBOL_BITS)
    return [int(cascade_decode(key, bits), 2) for bits in rows]


def _row_bits(kb: KeyBundle) -> int:
    key = kb.cascade
    if key.invertible:
        return SYMBOL_BITS
    return key.expansion(SYMBOL_BITS + key.tail_bits)


def encrypt_pipeline(kb: KeyBundle, plaintext, block_size: int = 8,
                     wrap: bool = False) -> FrameSet:
    """Source side. Each value must be below the RSA modulus unless ``wrap``.

    Raises:
        CrossLayerError: subclasses tagged with the failing stage
            (``rsa``, ``rns``, ``subband``, ``convcrypt``, ``pipeline``).
    """
    values = list(plaintext)
    layers = forward_layers(kb, values, block_size, wrap)
    rows = []
    for (b, m), frame in sorted(layers.frames.items()):
        for level, symbols in _level_symbols(frame):
            for pos, bits in enumerate(_encrypt_symbols(kb, symbols)):
                rows.append(FrameRow(b, m, level, pos, bits))
    return FrameSet(len(values), block_size, rows)


def transmit_bits(kb: KeyBundle, channel: ChannelModel, bits: str, lane: tuple[int, ...]) -> str:
    """Send one frame row through the channel on its own random lane.

    In ``walsh`` mode the row is padded to whole bytes, each byte is sent as a
    Walsh row of 256 chips, chips pass the channel, and the matched filter
    picks the byte back up. In ``bits`` mode the row bits pass the channel
    directly.
    """
    rng = channel_rng(channel, lane)
    if kb.signaling.mode == "bits":
        return bsc_transmit(channel, bits, rng)
    h = sylvester_hadamard(8)
    padded = bits + "0" * (-len(bits) % 8)
    chips = bsc_transmit(channel, modulate_bytes(h, padded), rng, chips=True)
    return demodulate_bytes(h, chips)[:len(bits)]


def decrypt_pipeline(kb: KeyBundle, frames: FrameSet, channel: ChannelModel | None = None
                     ) -> list[int]:
    """Destination side, optionally passing every frame row through ``channel``.

    Channel lanes are ``(message_index, modulus index, level, position)`` so
    the corruption pattern depends only on the seed and the frame layout.
    """
    moduli = kb.moduli.moduli
    _check_block_size(frames.block_size)
    frames.check_complete(moduli, _row_bits(kb))
    t = frames.depth
    groups = frames.groups()
    values = []
    for b in range(frames.block_count):
        per_modulus = []
        for j, m in enumerate(moduli):
            levels = {}
            for level in range(t + 1):
                rows = []
                for r in groups[(b, m, level)]:
                    bits = r.symbol_bits
                    if channel is not None:
                        bits = transmit_bits(kb, channel, bits, (b, j, level, r.position))
                    rows.append(bits)
                levels[level] = _decrypt_symbols(kb, rows)
            frame = SubbandFrame(m, tuple(tuple(levels[lv]) for lv in range(1, t + 1)),
                                 levels[0][0], kb.kernel)
            per_modulus.append(reconstruct(frame))
        for i in range(frames.block_size):
            c = from_residues(kb.moduli, tuple(seq[i] for seq in per_modulus))
            values.append(decrypt_value(kb.rsa.private, c))
    return values[:frames.plaintext_length]
