import itertools

import pytest
from hypothesis import given, strategies as st

from crosslayer.convcrypt import (
    CascadeKey,
    PBoxLayer,
    SBoxLayer,
    cascade_decrypt,
    cascade_encrypt,
    compile_linear_transducer,
    connection_key_count,
    format_table,
    gf2_rank,
    iter_connection_keys,
    iter_pbox_keys,
    iter_sbox_keys,
    iter_transition_keys,
    load_transducer_table,
    parse_table_text,
    pbox_apply,
    pbox_bijection_count,
    pbox_key_count,
    random_cascade,
    sbox_apply,
    sbox_bijection_count,
    sbox_key_count,
    terminate,
    transition_key_count,
)
from crosslayer.errors import (
    KeyValidationError,
    LengthError,
    RequiresViterbiError,
    TableValidationError,
)
from crosslayer.presets import (
    TABLE1_SBOXES,
    tabulated_stage,
    tabulated_text,
    demo8,
    tab4x23,
    identity_cascade,
    lin4x23,
)


def test_tabulated_stages_shape():
    for stage, n in ((1, 2), (2, 4)):
        t = tabulated_stage(stage)
        assert (t.k, t.n) == (2, n)
        assert len(t.rows()) == 64
        assert len(t.states()) == 16
        assert t.flush_steps() == 2


def test_stage_one_worked_sequence():
    assert tabulated_stage(1).encode("10110000") == "10010111"


def test_tab4x23_worked_codeword():
    key = tab4x23()
    assert terminate(key, "1011") == "10110000"
    assert cascade_encrypt(key, "10110000") == "0000111101011001"
    assert key.expansion(8) == 16


def test_interstage_layers_of_worked_example():
    sbox, pbox = tab4x23().interstage[0]
    # stage-1 output 10 01 01 11 becomes stage-2 input 00 11 11 10
    got = [pbox_apply(pbox, sbox_apply(sbox, s)) for s in ("10", "01", "01", "11")]
    assert "".join(got) == "00111110"


def _label_to_registers(s):
    """Tabulated state label S1 S0 I1 I0 -> (set, r1, r2) of the linear form."""
    b = [(s >> (3 - i)) & 1 for i in range(4)]
    return (1, b[0] << 1 | b[2], b[1] << 1 | b[3])


@pytest.mark.parametrize("stage, irregular", [
    (1, {("10", "0010"), ("10", "1100"), ("11", "1100")}),
    (2, {("10", "0010"), ("10", "0011"), ("10", "1010"), ("11", "1011"),
         ("00", "1101"), ("10", "1101"), ("11", "1101"), ("10", "1110")}),
])
def test_linear_form_matches_tabulated_except_irregular_rows(stage, irregular):
    table = tabulated_stage(stage)
    lin = lin4x23().stages[stage - 1]
    back = {_label_to_registers(s): s for s in range(16)}
    differ = set()
    for s, u in itertools.product(range(16), range(4)):
        y, nxt = table.step(s, u)
        y2, nxt2 = lin.step(_label_to_registers(s), u)
        if (y, nxt) != (y2, back[nxt2]):
            differ.add((format(u, "02b"), format(s, "04b")))
    assert differ == irregular


def test_lin4x23_reproduces_worked_codeword():
    assert cascade_encrypt(lin4x23(), "10110000") == "0000111101011001"


def test_table_text_roundtrip():
    t = tabulated_stage(2)
    again = load_transducer_table(parse_table_text(format_table(t, "copy")))
    assert again == t
    assert parse_table_text(tabulated_text(1))[0] == ("00", "0000", "00", "0000")


def test_table_validation():
    rows = parse_table_text(tabulated_text(1))
    with pytest.raises(TableValidationError, match="missing row"):
        load_transducer_table(rows[:-1])
    with pytest.raises(TableValidationError, match="duplicate"):
        load_transducer_table(rows + rows[:1])
    bad = list(rows)
    bad[5] = (bad[5][0], bad[5][1], bad[5][2], "1")
    with pytest.raises(TableValidationError):
        load_transducer_table(bad)


def test_redundant_cascade_needs_viterbi():
    with pytest.raises(RequiresViterbiError):
        cascade_decrypt(tab4x23(), "0000111101011001")


def test_linear_key_validation():
    eye = ("10", "01")
    with pytest.raises(KeyValidationError, match="not covered"):
        compile_linear_transducer({1: [eye]}, {1: [(0, 2, 1)]})
    with pytest.raises(KeyValidationError, match="covered twice"):
        compile_linear_transducer({1: [eye]}, {1: [(0, 2, 1), (2, 3, 1)]})
    with pytest.raises(KeyValidationError, match="unknown set"):
        compile_linear_transducer({1: [eye]}, {1: [(0, 3, 9)]})
    with pytest.raises(KeyValidationError):
        compile_linear_transducer([("10", "011")])
    with pytest.raises(KeyValidationError, match="width chain"):
        CascadeKey((tabulated_stage(1), tabulated_stage(2)),
                   ((SBoxLayer.identity(4), PBoxLayer.identity(4)),))
    with pytest.raises(KeyValidationError):
        SBoxLayer(((0, 0, 1, 2),))
    with pytest.raises(KeyValidationError):
        PBoxLayer((1, 1, 3))


def test_singular_g0_is_not_invertible():
    t = compile_linear_transducer([("11", "11")])
    assert not t.invertible
    assert gf2_rank([0b11, 0b11]) == 1


def test_table1_sboxes_and_reversal_pbox():
    layer = SBoxLayer(TABLE1_SBOXES, 2)
    # box i maps x -> x XOR i on its 2-bit slot
    assert sbox_apply(layer, "00000000") == "00011011"
    assert pbox_apply(PBoxLayer((8, 7, 6, 5, 4, 3, 2, 1)), "10000000") == "00000001"


def test_demo8_block_roundtrip():
    key = demo8()
    assert key.rate_one and key.invertible
    data = "".join(format(v, "08b") for v in (98, 59, 28, 80, 0, 255))
    enc = cascade_encrypt(key, data)
    assert enc != data
    assert cascade_decrypt(key, enc) == data
    with pytest.raises(LengthError):
        cascade_encrypt(key, "101")


def test_identity_cascade_is_identity():
    key = identity_cascade()
    assert cascade_encrypt(key, "0110100111110000") == "0110100111110000"


@given(st.integers(0, 2**16), st.lists(st.integers(0, 255), max_size=24))
def test_random_rate_one_cascade_roundtrip(seed, symbols):
    key = random_cascade(seed)
    data = "".join(format(v, "08b") for v in symbols)
    assert cascade_decrypt(key, cascade_encrypt(key, data)) == data


@given(st.lists(st.permutations(range(4)), min_size=1, max_size=4), st.data())
def test_sbox_inverse(boxes, data):
    layer = SBoxLayer(tuple(tuple(b) for b in boxes), 2)
    v = data.draw(st.integers(0, (1 << layer.width) - 1))
    assert layer.apply(layer.apply(v), inverse=True) == v


@given(st.permutations(range(1, 9)), st.integers(0, 255))
def test_pbox_inverse_and_weight(perm, v):
    layer = PBoxLayer(tuple(perm))
    out = layer.apply(v)
    assert layer.apply(out, inverse=True) == v
    assert out.bit_count() == v.bit_count()


def test_key_space_counts_match_enumerators():
    assert connection_key_count(4, 2) == 2**8 == sum(1 for _ in iter_connection_keys(4, 2))
    assert connection_key_count(8, 2) == 2**16
    assert transition_key_count(8) == 256 == sum(1 for _ in iter_transition_keys(8))
    assert sbox_key_count(2) == 16 == sum(1 for _ in iter_sbox_keys(2))
    assert pbox_key_count(8) == 7**7
    assert pbox_key_count(5) == sum(1 for _ in iter_pbox_keys(5)) == 4**4
    assert sbox_bijection_count(2) == 24
    assert pbox_bijection_count(8) == 40320
