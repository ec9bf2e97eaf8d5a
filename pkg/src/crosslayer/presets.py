"""Named cascade keys used by the demos, the CLI and the golden tests.

``tab4x23``
    The two-stage (4,2,3) code: fixed transition tables (shipped verbatim
    under ``data/``) joined by the worked-example S-box (XOR ``10``) and
    P-box (swap within each 2-bit symbol).
``lin4x23``
    The same shift-register structure compiled from GF(2) generator
    matrices. It matches those tables except on their irregular rows
    and has minimum distance 4 on terminated 8-bit blocks.
``demo8``
    Rate-1 (8,8,2) two-stage cascade: the printed generator matrices as
    matrix set 1, the printed S-boxes and the bit-reversal P-box.
``identity``
    One pass-through 8-bit stage.
"""

from __future__ import annotations

from importlib import resources

from .convcrypt import (
    CascadeKey,
    PBoxLayer,
    SBoxLayer,
    TableTransducer,
    compile_linear_transducer,
    load_transducer_table,
    parse_table_text,
    random_cascade,
)

__all__ = [
    "tabulated_stage",
    "tabulated_text",
    "demo_layers",
    "tab4x23",
    "lin4x23",
    "demo8_stage",
    "demo8",
    "identity_cascade",
    "cascade_by_name",
    "CASCADE_NAMES",
    "TABLE1_SBOXES",
    "TABLE2_PBOX",
    "DEMO8_G",
]

# printed generator matrices for matrix set 1 (registers: input, M1, M2)
DEMO8_G = (
    ("11000000", "01000000", "00100000", "00010000",
     "00001000", "00000100", "00000010", "00000001"),
    ("00000000",) * 8,
    ("10000000", "01100000", "00110000", "00011000",
     "00001100", "00000110", "00000010", "00000001"),
)

# Sub_{1,1} .. Sub_{1,4}, outputs listed for inputs 00, 01, 10, 11
TABLE1_SBOXES = ((0b00, 0b11, 0b10, 0b01),
                 (0b01, 0b00, 0b11, 0b10),
                 (0b10, 0b01, 0b00, 0b11),
                 (0b11, 0b10, 0b01, 0b00))

TABLE2_PBOX = (8, 7, 6, 5, 4, 3, 2, 1)


def tabulated_text(stage: int) -> str:
    return resources.files("crosslayer").joinpath(
        f"data/table_stage{stage}.txt").read_text(encoding="utf-8")


def tabulated_stage(stage: int) -> TableTransducer:
    return load_transducer_table(parse_table_text(tabulated_text(stage)))


def demo_layers() -> tuple[SBoxLayer, PBoxLayer]:
    # recovered from the worked sequences: S = x ^ 10, P swaps the two bits
    return SBoxLayer(((0b10, 0b11, 0b00, 0b01),), 2), PBoxLayer((2, 1))


def tab4x23() -> CascadeKey:
    return CascadeKey((tabulated_stage(1), tabulated_stage(2)), (demo_layers(),),
                      name="tab4x23")


def lin4x23() -> CascadeKey:
    eye = ("10", "01")
    stage1 = compile_linear_transducer([eye, eye, eye])
    stage2 = compile_linear_transducer([("1100", "0011"), ("1000", "0010"),
                                        ("1100", "0011")])
    return CascadeKey((stage1, stage2), (demo_layers(),), name="lin4x23")


def _transpose(rows: tuple[str, ...]) -> tuple[str, ...]:
    return tuple("".join(r[i] for r in rows) for i in range(len(rows)))


def demo8_stage():
    """(8,8,2) transducer with two matrix sets.

    Set 1 uses the printed matrices and keeps/switches on input bit 3
    (inputs 0-7 stay, 8-15 switch, repeating every 16). Set 2 uses the
    transposed matrices and returns to set 1 when input bit 4 is clear.
    """
    set2 = tuple(_transpose(g) for g in DEMO8_G)
    t1 = [(lo, lo + 7, 1 if lo % 16 == 0 else 2) for lo in range(0, 256, 8)]
    t2 = [(lo, lo + 15, 1 if lo % 32 == 0 else 2) for lo in range(0, 256, 16)]
    return compile_linear_transducer({1: DEMO8_G, 2: set2}, {1: t1, 2: t2})


def demo8() -> CascadeKey:
    stage = demo8_stage()
    layers = (SBoxLayer(TABLE1_SBOXES, 2), PBoxLayer(TABLE2_PBOX))
    return CascadeKey((stage, stage), (layers,), name="demo8")


def identity_cascade(width: int = 8) -> CascadeKey:
    eye = tuple("0" * i + "1" + "0" * (width - 1 - i) for i in range(width))
    return CascadeKey((compile_linear_transducer([eye]),), (), name="identity")


CASCADE_NAMES = ("demo8", "tab4x23", "lin4x23", "identity", "random")


def cascade_by_name(name: str, seed: int = 0) -> CascadeKey:
    if name == "random":
        return random_cascade(seed)
    builders = {"demo8": demo8, "tab4x23": tab4x23, "lin4x23": lin4x23,
                "identity": identity_cascade}
    try:
        return builders[name]()
    except KeyError:
        raise ValueError(f"unknown cascade {name!r}; choose from {CASCADE_NAMES}") from None
