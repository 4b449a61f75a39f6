import pytest
from hypothesis import given, strategies as st

from onlinepm.bits import BitReader, BitWriter, StateFormatError, split_envelopes, unwrap, wrap


@given(st.lists(st.integers(0, 10 ** 6)))
def test_gamma_round_trip(values):
    w = BitWriter()
    for v in values:
        w.gamma(v)
    r = BitReader(w.getvalue())
    assert [r.gamma() for _ in values] == values
    r.done()


def test_gamma_lengths():
    assert BitWriter().gamma(0).getvalue() == "1"
    assert BitWriter().gamma(1).getvalue() == "010"
    assert BitWriter().gamma(6).getvalue() == "00111"


@given(st.integers(1, 1000), st.data())
def test_fill_round_trip(m, data):
    fill = data.draw(st.integers(0, m))
    bits = BitWriter().fill(fill, m).getvalue()
    assert BitReader(bits).fill(m) == fill
    if fill == m:
        assert bits == "1"


def test_uint_bounds():
    assert BitWriter().uint(5, 3).getvalue() == "101"
    with pytest.raises(ValueError):
        BitWriter().uint(8, 3)
    with pytest.raises(ValueError):
        BitWriter().gamma(-1)


def test_envelope_checks():
    msg = wrap("ring", "0110")
    assert unwrap("ring", msg).bits(4) == "0110"
    with pytest.raises(StateFormatError):
        unwrap("edit", msg)
    with pytest.raises(StateFormatError):
        unwrap("ring", "00000010" + msg[8:])  # version 2
    with pytest.raises(StateFormatError):
        unwrap("ring", msg[:-1])
    with pytest.raises(StateFormatError):
        unwrap("ring", msg + "0")
    with pytest.raises(StateFormatError):
        BitReader("01x")


def test_reader_rejects_trailing_bits():
    r = BitReader("101")
    r.flag()
    with pytest.raises(StateFormatError):
        r.done()


@given(st.lists(st.text(alphabet="01", max_size=40), max_size=5))
def test_split_envelopes(payloads):
    message = "".join(wrap("conjunction", p) for p in payloads)
    assert split_envelopes(message) == [wrap("conjunction", p) for p in payloads]
