import math

import pytest
from hypothesis import given, strategies as st

from crosslayer.errors import CoprimalityError, DynamicRangeError, MalformedResidueError
from crosslayer.rns import ResidueVector, build_moduli_set, from_residues, to_residues


def test_crt_constants_and_spot_check():
    ms = build_moduli_set((107, 109, 113))
    assert ms.M == 1317919
    assert ms.mhat == (12317, 12091, 11663)
    assert ms.T == (9, 68, 33)
    assert to_residues(ms, 151).values == (44, 42, 38)
    assert from_residues(ms, (44, 42, 38)) == 151


def test_errors():
    with pytest.raises(CoprimalityError, match="6 and 9"):
        build_moduli_set((6, 9, 7))
    ms = build_moduli_set((3, 5))
    with pytest.raises(DynamicRangeError):
        to_residues(ms, 15)
    with pytest.raises(MalformedResidueError):
        from_residues(ms, (1,))
    with pytest.raises(MalformedResidueError):
        from_residues(ms, ResidueVector((3, 0)))


@st.composite
def coprime_sets(draw):
    moduli = []
    for _ in range(draw(st.integers(1, 5))):
        m = draw(st.integers(2, 5000).filter(lambda v: all(math.gcd(v, o) == 1 for o in moduli)))
        moduli.append(m)
    return build_moduli_set(moduli)


@given(coprime_sets(), st.data())
def test_roundtrip_random_coprime_sets(ms, data):
    x = data.draw(st.integers(0, ms.M - 1))
    r = to_residues(ms, x)
    assert from_residues(ms, r) == x
    for h, t, m in zip(ms.mhat, ms.T, ms.moduli):
        assert h * t % m == 1
