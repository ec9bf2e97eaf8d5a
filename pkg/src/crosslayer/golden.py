"""Published worked examples, packaged as self-checking golden vectors.

``run_golden_checks`` backs the ``verify`` subcommand; the test suite asserts
the same values directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bundle import make_bundle
from .convcrypt import cascade_encrypt
from .pipeline import decrypt_pipeline, encrypt_pipeline, forward_layers
from .presets import tabulated_stage, tab4x23
from .rns import build_moduli_set, from_residues
from .viterbi import build_trellis, cascade_decode, decode_block

__all__ = [
    "DEMO_PLAINTEXT",
    "DEMO_RSA_LAYER",
    "DEMO_LEVEL1_DETAILS",
    "CRT_RESIDUES",
    "CODE_MESSAGE",
    "CODE_CODEWORD",
    "CODE_RECEIVED",
    "TRACE_FIRST_METRICS",
    "TRACE_STAGE2_INPUT",
    "FIXTURE_ARRAY",
    "FIXTURE_MODULI",
    "GoldenResult",
    "run_golden_checks",
    "signed",
]

DEMO_PLAINTEXT = (398, 453, 876, 200, 356, 165, 265, 897)
DEMO_RSA_LAYER = (151, 293, 252, 135, 304, 315, 265, 182)
DEMO_LEVEL1_DETAILS = {
    107: (-9, -48, -79, -27),
    109: (-9, -42, -75, -21),
    113: (-9, -30, -67, -9),
}
CRT_RESIDUES = (44, 42, 38)  # of 151 under 107, 109, 113

# two-stage (4,2,3) cascade, message followed by its 4-bit zero tail
CODE_MESSAGE = "10110000"
CODE_CODEWORD = "0000111101011001"
CODE_RECEIVED = "1000111101011001"  # first bit flipped
TRACE_FIRST_METRICS = (3, 1, 3, 1)
TRACE_STAGE2_INPUT = "00111110"

FIXTURE_ARRAY = (39870, 45378, 87654, 20087, 35689, 16592, 564, 276509,
                 89732, 56287, 4527, 89065, 4321, 7654, 5489, 512)
FIXTURE_MODULI = (111, 115, 119)


def signed(v: int, m: int) -> int:
    """Representative of ``v mod m`` in ``(-m/2, m/2]``."""
    v %= m
    return v - m if v > m // 2 else v


@dataclass(frozen=True)
class GoldenResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _check(name: str, got, want) -> GoldenResult:
    ok = got == want
    return GoldenResult(name, ok, f"got {got}" if ok else f"got {got}, expected {want}")


def _demo_checks() -> list[GoldenResult]:
    kb = make_bundle()
    layers = forward_layers(kb, DEMO_PLAINTEXT, wrap=True)
    out = [_check("demo rsa layer", tuple(layers.rsa_layer), DEMO_RSA_LAYER)]
    for m, want in DEMO_LEVEL1_DETAILS.items():
        got = layers.frames[(0, m)].levels[0]
        ok = got == tuple(w % m for w in want)
        out.append(GoldenResult(f"demo level-1 details mod {m}", ok,
                                f"got {got}, congruent to {want}" if ok
                                else f"got {got}, expected residues of {want}"))
    frames = encrypt_pipeline(kb, DEMO_PLAINTEXT, wrap=True)
    back = tuple(decrypt_pipeline(kb, frames))
    # values >= the RSA modulus can only come back reduced
    out.append(_check("demo round trip (mod RSA modulus)", back,
                      tuple(v % kb.rsa.m for v in DEMO_PLAINTEXT)))
    return out


def _crt_check() -> GoldenResult:
    ms = build_moduli_set((107, 109, 113))
    got = (from_residues(ms, CRT_RESIDUES), ms.M, ms.mhat, ms.T)
    return _check("crt reconstruction of 151", got,
                  (151, 1317919, (12317, 12091, 11663), (9, 68, 33)))


def _code_checks() -> list[GoldenResult]:
    key = tab4x23()
    out = [_check("code encode", cascade_encrypt(key, CODE_MESSAGE), CODE_CODEWORD)]
    out.append(_check("code decode one error",
                      cascade_decode(key, CODE_RECEIVED, strip_tail=False), CODE_MESSAGE))
    bad = []
    for i in range(len(CODE_CODEWORD)):
        flipped = CODE_CODEWORD[:i] + "10"[int(CODE_CODEWORD[i])] + CODE_CODEWORD[i + 1:]
        if cascade_decode(key, flipped, strip_tail=False) != CODE_MESSAGE:
            bad.append(i)
    out.append(GoldenResult("code all single flips", not bad,
                            "16/16 corrected" if not bad else f"failed at bits {bad}"))
    tr = build_trellis(tabulated_stage(2), "free")
    res = decode_block(tr, CODE_RECEIVED, trace=True)
    first = tuple(r.branch_metric for r in res.trace if r.step == 0)
    out.append(_check("trace first-step metrics", first, TRACE_FIRST_METRICS))
    out.append(_check("trace stage-2 input", res.inputs, TRACE_STAGE2_INPUT))
    return out


def run_golden_checks() -> list[GoldenResult]:
    return [*_demo_checks(), _crt_check(), *_code_checks()]
