import pytest
from hypothesis import given
from hypothesis import strategies as st

from ibisdict._binary import Reader, Writer
from ibisdict.intcodes import (CorruptStreamError, DacSequence, DacVlsStore, vbyte_decode, vbyte_decode_all,
                               vbyte_encode, vbyte_encode_all)


def roundtrip(obj):
    w = Writer()
    obj.write(w)
    r = Reader(w.getvalue())
    out = type(obj).read(r)
    assert r.at_end()
    return out


@pytest.mark.parametrize("value, code", [(0, b"\x00"), (127, b"\x7f"), (128, b"\x80\x01"), (300, b"\xac\x02")])
def test_vbyte_examples(value, code):
    assert vbyte_encode(value) == code
    assert vbyte_decode(code) == (value, len(code))


@given(st.integers(0, 2**64 - 1))
def test_vbyte_roundtrip(x):
    code = vbyte_encode(x)
    assert vbyte_decode(b"junk" + code, 4) == (x, len(code))


@given(st.lists(st.integers(0, 2**40), max_size=50))
def test_vbyte_stream_roundtrip(values):
    assert vbyte_decode_all(vbyte_encode_all(values)) == values


def test_vbyte_rejects_bad_input():
    with pytest.raises(ValueError):
        vbyte_encode(-1)
    with pytest.raises(CorruptStreamError):
        vbyte_decode(b"\x80\x80")  # continuation runs off the end


# -- DAC -------------------------------------------------------------------------


def test_dac_hand_decomposition():
    dac = DacSequence.build([5, 300, 7], 7)
    assert dac.levels == 2
    assert dac.chunks[0].tolist() == [5, 44, 7]
    assert [dac.flags[0].access(i) for i in range(3)] == [0, 1, 0]
    assert dac.chunks[1].tolist() == [2]
    assert [dac.flags[1].access(0)] == [0]
    assert dac[1] == 300
    assert dac[0] == 5


def test_dac_single_level_when_small():
    dac = DacSequence.build([0, 1, 127, 64], 7)
    assert dac.levels == 1
    assert dac.flags[0].ones == 0


def test_dac_empty():
    dac = DacSequence.build([], 7)
    assert len(dac) == 0 and dac.levels == 0
    assert roundtrip(dac).tolist() == []


@given(st.sampled_from([4, 7, 8]), st.lists(st.integers(0, 2**30), max_size=200))
def test_dac_roundtrip(width, values):
    dac = DacSequence.build(values, width)
    assert dac.tolist() == values
    assert dac.total_chunks() == sum(-(-max(1, v.bit_length()) // width) for v in values)
    assert roundtrip(dac).tolist() == values


def test_dac_bounds():
    dac = DacSequence.build([1, 2])
    with pytest.raises(IndexError):
        dac[2]
    with pytest.raises(ValueError):
        DacSequence.build([-1])


# -- DAC-VLS -----------------------------------------------------------------------


def test_dacvls_hand_simulation():
    store = DacVlsStore.build([[9], [4, 4], [1]])
    assert store.values[0].tolist() == [9, 4, 1]
    assert [store.more[0].access(i) for i in range(3)] == [0, 1, 0]
    assert store.values[1].tolist() == [4]
    assert store.more[1].access(0) == 0
    assert store[1] == [4, 4]
    assert list(store.iter_sequence(1)) == [4, 4]


def test_dacvls_singletons_use_one_level():
    store = DacVlsStore.build([[3], [1], [0], [7]])
    assert len(store.values) == 1
    assert store.more[0].ones == 0
    assert all(len(store[i]) == 1 for i in range(4))


def test_dacvls_rejects_empty_sequence():
    with pytest.raises(ValueError):
        DacVlsStore.build([[1], []])


@given(st.lists(st.lists(st.integers(0, 2**20), min_size=1, max_size=12), max_size=60))
def test_dacvls_roundtrip(seqs):
    store = DacVlsStore.build(seqs)
    assert [store[i] for i in range(len(seqs))] == seqs
    again = roundtrip(store)
    assert [again[i] for i in range(len(seqs))] == seqs


def test_dacvls_iteration_can_stop_early():
    store = DacVlsStore.build([[1, 2, 3, 4]])
    it = store.iter_sequence(0)
    assert next(it) == 1
    it.close()
