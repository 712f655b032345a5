import hashlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhibe.errors import DepthError, UsageError
from rhibe.identity import ROOT, encode_cid, encode_time, format_id, is_prefix, parse_id, prefix_set

components = st.text(min_size=1, max_size=6)
ids = st.lists(components, min_size=0, max_size=4).map(tuple)


def reference_digest(components, bits):
    data = b"".join(len(c.encode()).to_bytes(4, "big") + c.encode() for c in components)
    return int.from_bytes(hashlib.sha256(data).digest(), "big") >> (256 - bits)


def test_prefix_set_examples():
    assert prefix_set(("a", "b", "c")) == {("a",), ("a", "b"), ("a", "b", "c")}
    assert prefix_set(("a",)) == {("a",)}
    assert prefix_set(ROOT) == set()


def test_encode_cid_root_is_empty():
    assert encode_cid(ROOT, 256) == ()


def test_encode_cid_golden():
    assert encode_cid(("alice",), 256) == (0xE3E40CC57896DCDAC6731F60CB1748BD34B45AC0A6E42AA517D41DFEA2FF8A88,)
    assert encode_cid(("alice",), 16) == (0xE3E4,)
    assert encode_cid(("alice",), 256)[0] == reference_digest(["alice"], 256)


def test_encode_cid_distinguishes_siblings():
    a = encode_cid(("alice", "bob"), 256)
    b = encode_cid(("alice2", "bob"), 256)
    assert a[1] == 0x884A452152D3BF048CC051DF8F708AFF3F854A3DB0876F4E9F429EFFA3A09A27
    assert b[1] == 0x7533959B7F4DD086133151EC69D0056B0BF55F1F64F0C1C3AE0CAB3C4351BA9C
    assert a[1] != b[1]


def test_encode_cid_length_prefix_prevents_ambiguity():
    assert encode_cid(("a", "bc"), 256)[1] != encode_cid(("ab", "c"), 256)[1]


def test_encode_cid_depth_limit():
    with pytest.raises(DepthError):
        encode_cid(("a", "b", "c", "d"), 16, max_depth=3)


@given(ids)
def test_encoding_consistent_with_prefixes(hid):
    full = encode_cid(hid, 16)
    for j in range(len(hid) + 1):
        assert full[:j] == encode_cid(hid[:j], 16)
    assert list(full) == [reference_digest(hid[:j], 16) for j in range(1, len(hid) + 1)]


@given(ids, ids)
def test_prefix_property(a, b):
    assert (a in prefix_set(b)) == (len(a) >= 1 and is_prefix(a, b))


def test_anti_prefix_separation_on_corpus():
    corpus = [("alice",), ("alice", "bob"), ("bob",), ("bob", "alice"), ("carol", "dave", "erin"),
              ("alice", "carol"), ("carol", "dave", "frank"), ("alicebob",), ("alic", "ebob")]
    for hid in corpus:
        ci_k = encode_cid(hid, 256)[-1]
        for other in corpus:
            if hid in prefix_set(other):
                continue
            assert ci_k not in encode_cid(other, 256)


def test_encode_time():
    assert encode_time(0, 8).label == "00000000"
    assert encode_time(5, 8).label == "00000101"
    assert encode_time(5, 8).bits() == [0, 0, 0, 0, 0, 1, 0, 1]
    with pytest.raises(UsageError):
        encode_time(2**8, 8)
    with pytest.raises(UsageError):
        encode_time(-1, 8)


@given(st.integers(0, 255), st.integers(0, 255))
def test_encode_time_injective(a, b):
    assert (encode_time(a, 8) == encode_time(b, 8)) == (a == b)
    assert (encode_time(a, 8).label == encode_time(b, 8).label) == (a == b)


@given(st.lists(components, min_size=1, max_size=4).map(tuple))
def test_textual_form_round_trip(hid):
    assert parse_id(format_id(hid)) == hid


def test_textual_form_escapes_separator():
    assert format_id(("a/b", "c")) == "a%2Fb/c"
    assert parse_id("") == ROOT


def test_empty_component_rejected():
    with pytest.raises(UsageError):
        parse_id("a//b")
