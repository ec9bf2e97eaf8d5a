"""Key bundle: all shared secret material for one link, plus its text format.

The file is INI-style (read with :mod:`configparser`, interpolation off)::

    [bundle]
    format_version = 1
    [rsa]
    p = 13
    q = 37
    e = 5
    d = 173
    [rns]
    moduli = 107 109 113
    [lifting]
    h = 2 0 0
    [cascade]
    name = demo8
    stages = 2
    [cascade.stage1]
    kind = linear            # or: table
    ...
    [cascade.interstage1]
    box_width = 2
    sboxes = ...
    pbox = 8 7 6 5 4 3 2 1
    [signaling]
    order = 256
    mode = walsh
    pe = 0.0
    seed = 0

Matrices, tables and S-boxes are written as rows of binary strings, one row
per continuation line, so fixtures diff cleanly.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from pathlib import Path

from .convcrypt import (
    CascadeKey,
    LinearTransducer,
    PBoxLayer,
    SBoxLayer,
    TableTransducer,
    Transducer,
    load_transducer_table,
)
from .errors import (
    BundleParseError,
    BundleVersionError,
    CrossLayerError,
    DynamicRangeError,
    KeyValidationError,
    RangeError,
)
from .rns import ModuliSet, build_moduli_set
from .rsa import RsaKeyPair, derive_keypair
from .subband import LiftingKernel

__all__ = [
    "FORMAT_VERSION",
    "SignalingConfig",
    "KeyBundle",
    "make_bundle",
    "dump_bundle",
    "parse_bundle",
    "save_bundle",
    "load_bundle",
]

FORMAT_VERSION = 1
SIGNALING_MODES = ("walsh", "bits")


@dataclass(frozen=True)
class SignalingConfig:
    """Channel defaults: ``walsh`` sends each byte as one row of ``H_order``;
    ``bits`` puts the raw frame bits on the channel."""

    order: int = 256
    mode: str = "walsh"
    pe: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in SIGNALING_MODES:
            raise RangeError(f"signaling mode {self.mode!r} not in {SIGNALING_MODES}",
                             stage="signaling")
        if self.mode == "walsh" and self.order != 256:
            raise RangeError("walsh mode carries bytes and needs order 256", stage="signaling")
        if not 0.0 <= self.pe <= 1.0:
            raise RangeError(f"pe={self.pe} outside [0, 1]", stage="signaling")


@dataclass(frozen=True)
class KeyBundle:
    rsa: RsaKeyPair
    moduli: ModuliSet
    kernel: LiftingKernel
    cascade: CascadeKey
    signaling: SignalingConfig = field(default_factory=SignalingConfig)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        big = [m for m in self.moduli.moduli if m >= 256]
        if big:
            raise KeyValidationError(f"moduli {big} do not fit one byte", stage="pipeline")
        if self.rsa.m > self.moduli.M:
            raise DynamicRangeError(
                f"RSA modulus {self.rsa.m} exceeds the RNS range M={self.moduli.M}",
                stage="pipeline")
        if 8 % self.cascade.k:
            raise KeyValidationError(
                f"cascade input width {self.cascade.k} does not divide a byte",
                stage="pipeline")


def make_bundle(primes=(13, 37), e: int = 5, moduli=(107, 109, 113), h=(2, 0, 0),
                cascade: CascadeKey | None = None,
                signaling: SignalingConfig | None = None) -> KeyBundle:
    from .presets import demo8

    return KeyBundle(derive_keypair(*primes, e), build_moduli_set(moduli),
                     LiftingKernel(tuple(h)), cascade or demo8(),
                     signaling or SignalingConfig())


# -- writing -----------------------------------------------------------------

def _block(lines) -> str:
    return "\n" + "\n".join(lines)


def _stage_section(t: Transducer) -> dict[str, str]:
    if isinstance(t, TableTransducer):
        return {"kind": "table", "k": str(t.k), "n": str(t.n),
                "initial_state": t.state_label(t.initial_state),
                "rows": _block(" ".join(r) for r in t.rows())}
    if isinstance(t, LinearTransducer):
        sec = {"kind": "linear", "k": str(t.k), "n": str(t.n), "memory": str(t.memory),
               "initial_set": str(t.initial_set),
               "sets": " ".join(str(s) for s in sorted(t.generators))}
        for s in sorted(t.generators):
            for i, mat in enumerate(t.generators[s]):
                sec[f"set{s}.g{i}"] = _block(format(r, f"0{t.n}b") for r in mat)
            sec[f"set{s}.next"] = _block(f"{lo}-{hi}:{nxt}" for lo, hi, nxt in t.transitions[s])
        return sec
    raise KeyValidationError(f"cannot serialise stage {t!r}", stage="bundle")


def dump_bundle(kb: KeyBundle) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["bundle"] = {"format_version": str(kb.format_version)}
    cp["rsa"] = {"p": str(kb.rsa.p), "q": str(kb.rsa.q), "e": str(kb.rsa.e),
                 "d": str(kb.rsa.d)}
    cp["rns"] = {"moduli": " ".join(map(str, kb.moduli.moduli))}
    cp["lifting"] = {"h": " ".join(map(str, kb.kernel.h))}
    key = kb.cascade
    cp["cascade"] = {"name": key.name, "stages": str(len(key.stages))}
    for i, stage in enumerate(key.stages, start=1):
        cp[f"cascade.stage{i}"] = _stage_section(stage)
    for i, (sbox, pbox) in enumerate(key.interstage, start=1):
        cp[f"cascade.interstage{i}"] = {
            "box_width": str(sbox.w),
            "sboxes": _block(" ".join(format(v, f"0{sbox.w}b") for v in box)
                             for box in sbox.boxes),
            "pbox": " ".join(map(str, pbox.perm)),
        }
    sig = kb.signaling
    cp["signaling"] = {"order": str(sig.order), "mode": sig.mode, "pe": repr(float(sig.pe)),
                       "seed": str(sig.seed)}
    buf = io.StringIO()
    buf.write("# crosslayer key bundle (shared secret: keep private)\n")
    cp.write(buf)
    return buf.getvalue()


def save_bundle(kb: KeyBundle, path) -> None:
    Path(path).write_text(dump_bundle(kb), encoding="utf-8", newline="\n")


# -- reading -----------------------------------------------------------------

_FIXED_FIELDS = {
    "bundle": {"format_version"},
    "rsa": {"p", "q", "e", "d"},
    "rns": {"moduli"},
    "lifting": {"h"},
    "cascade": {"name", "stages"},
    "signaling": {"order", "mode", "pe", "seed"},
}


class _Reader:
    def __init__(self, cp: configparser.ConfigParser):
        self.cp = cp

    def section(self, name: str) -> configparser.SectionProxy:
        if not self.cp.has_section(name):
            raise BundleParseError(f"missing section [{name}]", stage="bundle")
        return self.cp[name]

    def get(self, sec: str, key: str) -> str:
        s = self.section(sec)
        if key not in s:
            raise BundleParseError(f"[{sec}] missing field {key!r}", stage="bundle")
        return s[key].strip()

    def int(self, sec: str, key: str) -> int:
        raw = self.get(sec, key)
        try:
            return int(raw, 0) if raw.startswith("0x") else int(raw)
        except ValueError:
            raise BundleParseError(f"[{sec}] {key} = {raw!r} is not an integer",
                                   stage="bundle") from None

    def ints(self, sec: str, key: str) -> tuple[int, ...]:
        raw = self.get(sec, key)
        try:
            return tuple(int(v) for v in raw.replace(",", " ").split())
        except ValueError:
            raise BundleParseError(f"[{sec}] {key} = {raw!r} is not a list of integers",
                                   stage="bundle") from None

    def lines(self, sec: str, key: str) -> list[str]:
        return [ln.strip() for ln in self.get(sec, key).splitlines() if ln.strip()]

    def check_fields(self, sec: str, allowed: set[str]) -> None:
        extra = sorted(set(self.section(sec)) - allowed)
        if extra:
            raise BundleVersionError(
                f"[{sec}] has fields {extra} unknown to format v{FORMAT_VERSION}",
                stage="bundle")


def _read_binary(r: _Reader, sec: str, key: str, width: int) -> list[int]:
    out = []
    for tok in r.lines(sec, key):
        tok = tok.replace(" ", "")
        if len(tok) != width or tok.strip("01"):
            raise BundleParseError(f"[{sec}] {key}: {tok!r} is not {width} binary digits",
                                   stage="bundle")
        out.append(int(tok, 2))
    return out


def _read_stage(r: _Reader, sec: str) -> Transducer:
    kind = r.get(sec, "kind")
    k, n = r.int(sec, "k"), r.int(sec, "n")
    if kind == "table":
        r.check_fields(sec, {"kind", "k", "n", "initial_state", "rows"})
        t = load_transducer_table(ln.split() for ln in r.lines(sec, "rows"))
        initial = int(r.get(sec, "initial_state"), 2)
        if (t.k, t.n) != (k, n):
            raise BundleParseError(f"[{sec}] rows are ({t.n},{t.k}), header says ({n},{k})",
                                   stage="bundle")
        if initial != t.initial_state:
            t = TableTransducer(k, n, t.table, initial, t.state_bits)
        return t
    if kind == "linear":
        memory = r.int(sec, "memory")
        sets = r.ints(sec, "sets")
        allowed = {"kind", "k", "n", "memory", "initial_set", "sets"}
        gens, trans = {}, {}
        for s in sets:
            allowed |= {f"set{s}.g{i}" for i in range(memory + 1)} | {f"set{s}.next"}
            gens[s] = [tuple(_read_binary(r, sec, f"set{s}.g{i}", n))
                       for i in range(memory + 1)]
            ranges = []
            for tok in r.lines(sec, f"set{s}.next"):
                try:
                    span, nxt = tok.split(":")
                    lo, hi = span.split("-")
                    ranges.append((int(lo), int(hi), int(nxt)))
                except ValueError:
                    raise BundleParseError(f"[{sec}] set{s}.next: bad range {tok!r}",
                                           stage="bundle") from None
            trans[s] = ranges
        r.check_fields(sec, allowed)
        for s, mats in gens.items():
            for i, mat in enumerate(mats):
                if len(mat) != k:
                    raise BundleParseError(f"[{sec}] set{s}.g{i} needs {k} rows",
                                           stage="bundle")
        return LinearTransducer(k, n, gens, trans, r.int(sec, "initial_set"))
    raise BundleParseError(f"[{sec}] unknown stage kind {kind!r}", stage="bundle")


def parse_bundle(text: str) -> KeyBundle:
    cp = configparser.ConfigParser(interpolation=None, empty_lines_in_values=False,
                                   inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise BundleParseError(f"malformed bundle: {exc}", stage="bundle") from None
    r = _Reader(cp)
    version = r.int("bundle", "format_version")
    if version != FORMAT_VERSION:
        raise BundleVersionError(
            f"format_version {version} is not supported (expected {FORMAT_VERSION})",
            stage="bundle")
    for sec, allowed in _FIXED_FIELDS.items():
        r.check_fields(sec, allowed)
    n_stages = r.int("cascade", "stages")
    known = set(_FIXED_FIELDS) | {f"cascade.stage{i}" for i in range(1, n_stages + 1)} \
        | {f"cascade.interstage{i}" for i in range(1, n_stages)}
    unknown = sorted(set(cp.sections()) - known)
    if unknown:
        raise BundleVersionError(f"unknown sections {unknown}", stage="bundle")
    try:
        rsa = derive_keypair(r.int("rsa", "p"), r.int("rsa", "q"), r.int("rsa", "e"))
        if rsa.d != r.int("rsa", "d"):
            raise BundleParseError(f"[rsa] d does not match p, q, e (expected {rsa.d})",
                                   stage="bundle")
        moduli = build_moduli_set(r.ints("rns", "moduli"))
        kernel = LiftingKernel(r.ints("lifting", "h"))
        stages = tuple(_read_stage(r, f"cascade.stage{i}") for i in range(1, n_stages + 1))
        inter = []
        for i in range(1, n_stages):
            sec = f"cascade.interstage{i}"
            r.check_fields(sec, {"box_width", "sboxes", "pbox"})
            w = r.int(sec, "box_width")
            boxes = []
            for ln in r.lines(sec, "sboxes"):
                try:
                    boxes.append(tuple(int(v, 2) for v in ln.split()))
                except ValueError:
                    raise BundleParseError(f"[{sec}] sboxes: bad row {ln!r}",
                                           stage="bundle") from None
            inter.append((SBoxLayer(tuple(boxes), w), PBoxLayer(r.ints(sec, "pbox"))))
        cascade = CascadeKey(stages, tuple(inter), name=r.get("cascade", "name"))
        try:
            pe = float(r.get("signaling", "pe"))
        except ValueError:
            raise BundleParseError("[signaling] pe is not a number", stage="bundle") from None
        signaling = SignalingConfig(r.int("signaling", "order"), r.get("signaling", "mode"),
                                    pe, r.int("signaling", "seed"))
        return KeyBundle(rsa, moduli, kernel, cascade, signaling, version)
    except BundleParseError:
        raise
    except CrossLayerError as exc:
        raise BundleParseError(f"invalid key material: {exc}", stage="bundle") from exc


def load_bundle(path) -> KeyBundle:
    return parse_bundle(Path(path).read_text(encoding="utf-8"))
