import itertools

import pytest
from hypothesis import given, strategies as st

from crosslayer.convcrypt import cascade_encrypt, terminate
from crosslayer.errors import DecodeFailure
from crosslayer.presets import tabulated_stage, tab4x23, lin4x23
from crosslayer.viterbi import (
    build_trellis,
    cascade_decode,
    decode_block,
    trace_to_csv,
)

CODEWORD = "0000111101011001"
RECEIVED = "1000111101011001"


def flip(bits, *idx):
    out = list(bits)
    for i in idx:
        out[i] = "10"[int(out[i])]
    return "".join(out)


def test_stage_two_trace_of_worked_example():
    tr = build_trellis(tabulated_stage(2), "free")
    res = decode_block(tr, RECEIVED, trace=True)
    first = [r for r in res.trace if r.step == 0]
    assert [r.branch_metric for r in first] == [3, 1, 3, 1]
    assert [r.output for r in first] == [0b0000, 0b0011, 0b1100, 0b1111]
    assert res.inputs == "00111110"
    assert res.agreements == 15
    csv = trace_to_csv(res.trace)
    assert csv.splitlines()[0] == "step,state,input,output,next_state,branch_metric,cumulative"
    assert csv.splitlines()[1] == "0,0000,0,0,0000,3,3"


@pytest.mark.parametrize("method", ["joint", "stagewise"])
def test_worked_example_decodes(method):
    key = tab4x23()
    assert cascade_decode(key, RECEIVED, method=method, strip_tail=False) == "10110000"
    assert cascade_decode(key, CODEWORD, method=method) == "1011"


def test_every_single_flip_of_worked_codeword_is_corrected():
    key = tab4x23()
    for i in range(16):
        assert cascade_decode(key, flip(CODEWORD, i), strip_tail=False) == "10110000", i


def test_zero_end_constraint_can_fail():
    # stage 2 of the tabulated code cannot be driven back to 0000 within the block
    tr = build_trellis(tabulated_stage(2), lambda s: False)
    with pytest.raises(DecodeFailure):
        decode_block(tr, RECEIVED)


def test_tail_forcing_resolves_clean_codeword():
    key = tab4x23()
    for msg in ("".join(p) for p in itertools.product("01", repeat=8)):
        cw = cascade_encrypt(key, terminate(key, msg))
        assert cascade_decode(key, cw) == msg


def test_lin4x23_corrects_any_single_flip():
    key = lin4x23()
    for msg in ("".join(p) for p in itertools.product("01", repeat=8)):
        cw = cascade_encrypt(key, terminate(key, msg))
        for i in range(len(cw)):
            assert cascade_decode(key, flip(cw, i)) == msg


def _dmin(key, bits):
    words = [cascade_encrypt(key, terminate(key, "".join(p)))
             for p in itertools.product("01", repeat=bits)]
    return min(sum(a != b for a, b in zip(x, y)) for x, y in itertools.combinations(words, 2))


@pytest.mark.parametrize("bits, fig, lin", [(4, 2, 4), (8, 1, 4)])
def test_block_code_distances(bits, fig, lin):
    # the irregular tabulated rows cost distance; the linear form keeps 4
    assert _dmin(tab4x23(), bits) == fig
    assert _dmin(lin4x23(), bits) == lin


@given(st.text("01", min_size=2, max_size=20).filter(lambda s: len(s) % 2 == 0),
       st.data())
def test_joint_decode_of_clean_codewords(msg, data):
    key = lin4x23()
    cw = cascade_encrypt(key, terminate(key, msg))
    assert cascade_decode(key, cw) == msg
    i = data.draw(st.integers(0, len(cw) - 1))
    # one error anywhere in a short block is within the correction radius
    if len(msg) <= 8:
        assert cascade_decode(key, flip(cw, i)) == msg
