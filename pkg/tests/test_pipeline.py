import pytest
from hypothesis import given, strategies as st

from crosslayer.bundle import SignalingConfig, make_bundle
from crosslayer.convcrypt import random_cascade
from crosslayer.errors import FrameError, LengthError, MessageTooLargeError
from crosslayer.pipeline import (
    FrameRow,
    FrameSet,
    decrypt_pipeline,
    encrypt_pipeline,
    forward_layers,
    transmit_bits,
)
from crosslayer.presets import demo8, tab4x23, identity_cascade, lin4x23
from crosslayer.signaling import ChannelModel

PLAIN = [398, 453, 376, 200, 356, 165, 265, 397]


def test_frame_layout():
    kb = make_bundle()
    fs = encrypt_pipeline(kb, PLAIN)
    assert len(fs.rows) == 3 * 8
    levels = sorted({(r.modulus, r.level, r.position) for r in fs.rows})
    assert (107, 0, 0) in levels and (107, 1, 3) in levels and (107, 3, 0) in levels
    csv = fs.to_csv().splitlines()
    assert csv[0] == "# frameset v1"
    assert csv[1] == "# plaintext_length=8 block_size=8"
    assert csv[2] == "message_index,modulus,level,position,symbol_bits"
    assert FrameSet.from_csv(fs.to_csv()) == fs


def test_identity_cascade_all_zero():
    kb = make_bundle(primes=(13, 17), moduli=(251,), cascade=identity_cascade())
    fs = encrypt_pipeline(kb, [0] * 4, block_size=4)
    assert {r.symbol_bits for r in fs.rows} == {"00000000"}
    assert decrypt_pipeline(kb, fs) == [0, 0, 0, 0]


@pytest.mark.parametrize("key", [demo8, tab4x23, lin4x23, identity_cascade,
                                 lambda: random_cascade(1)])
def test_roundtrip_clean(key):
    kb = make_bundle(cascade=key())
    assert decrypt_pipeline(kb, encrypt_pipeline(kb, PLAIN)) == PLAIN


def test_padding_and_short_blocks():
    kb = make_bundle()
    fs = encrypt_pipeline(kb, PLAIN[:5], block_size=4)
    assert fs.block_count == 2
    assert decrypt_pipeline(kb, fs) == PLAIN[:5]
    assert decrypt_pipeline(kb, encrypt_pipeline(kb, [7], block_size=1)) == [7]
    assert decrypt_pipeline(kb, encrypt_pipeline(kb, [])) == []


def test_errors_name_their_stage():
    kb = make_bundle()
    with pytest.raises(MessageTooLargeError, match=r"\[rsa\]"):
        encrypt_pipeline(kb, [481])
    with pytest.raises(LengthError, match=r"\[pipeline\]"):
        encrypt_pipeline(kb, PLAIN, block_size=6)
    fs = encrypt_pipeline(kb, PLAIN)
    with pytest.raises(FrameError, match="positions"):
        decrypt_pipeline(kb, FrameSet(8, 8, fs.rows[1:]))
    with pytest.raises(FrameError, match="missing"):
        decrypt_pipeline(kb, FrameSet(8, 8, [r for r in fs.rows if r.modulus != 109]))
    rows = list(fs.rows)
    rows[0] = FrameRow(*list(rows[0].__dict__.values())[:4], "0101")
    with pytest.raises(FrameError, match="bits"):
        decrypt_pipeline(kb, FrameSet(8, 8, rows))
    with pytest.raises(FrameError):
        FrameSet.from_csv("message_index,modulus,level,position,symbol_bits\n")


def test_wrap_recovers_only_residue():
    kb = make_bundle()
    fs = encrypt_pipeline(kb, [876, 897], wrap=True)
    assert decrypt_pipeline(kb, fs) == [876 % 481, 897 % 481]


def test_walsh_channel_absorbs_chip_noise():
    kb = make_bundle(cascade=demo8())
    fs = encrypt_pipeline(kb, PLAIN)
    assert decrypt_pipeline(kb, fs, ChannelModel(0.05, seed=2)) == PLAIN


def test_transmit_is_lane_deterministic():
    kb = make_bundle(signaling=SignalingConfig(mode="bits"))
    ch = ChannelModel(0.3, seed=1)
    a = transmit_bits(kb, ch, "0" * 64, (0, 0, 1, 2))
    assert a == transmit_bits(kb, ch, "0" * 64, (0, 0, 1, 2))
    assert a != transmit_bits(kb, ch, "0" * 64, (0, 0, 1, 3))


def _flip_one_per_row(fs, choose):
    rows = []
    for r in fs.rows:
        i = choose(len(r.symbol_bits))
        bits = r.symbol_bits[:i] + "10"[int(r.symbol_bits[i])] + r.symbol_bits[i + 1:]
        rows.append(FrameRow(r.message_index, r.modulus, r.level, r.position, bits))
    return FrameSet(fs.plaintext_length, fs.block_size, rows)


@given(st.lists(st.integers(0, 480), min_size=1, max_size=8), st.randoms())
def test_single_flip_per_block_is_corrected(values, rnd):
    kb = make_bundle(cascade=lin4x23())
    fs = encrypt_pipeline(kb, values)
    noisy = _flip_one_per_row(fs, lambda n: rnd.randrange(n))
    assert decrypt_pipeline(kb, noisy) == values


@given(st.lists(st.integers(0, 480), max_size=16), st.sampled_from([1, 2, 4, 8, 16]))
def test_end_to_end_identity(values, block):
    kb = make_bundle()
    assert decrypt_pipeline(kb, encrypt_pipeline(kb, values, block)) == values


def test_forward_layers_expose_intermediates():
    layers = forward_layers(make_bundle(), [398, 453], block_size=2)
    assert layers.rsa_layer == [151, 293]
    assert layers.frames[(0, 107)].final_approx == 151 % 107
