import pytest

from lifecycle import Authority, artifacts, run_script
from rhibe import codec
from rhibe.errors import IntegrityError
from rhibe.hfu import hfu_derivekey
from rhibe.hpu import hpu_derivekey
from rhibe.scheme import random_message, rhibe_decrypt, rhibe_encrypt


@pytest.fixture(scope="module", params=["hpu", "hfu"])
def auth(request):
    a = Authority(request.param, seed=3)
    list(run_script(a))
    return a


def test_round_trip_every_artifact(auth):
    group = auth.params.group
    seen = set()
    for obj in artifacts(auth):
        data = codec.dumps(obj, auth.scheme, group)
        assert data.startswith(codec.MAGIC)
        rec = codec.load_record(data, group)
        assert rec.obj == obj and rec.scheme == auth.scheme
        seen.add(rec.kind)
    assert seen == {codec.KIND_PARAMS, codec.KIND_STATE, codec.KIND_RL, codec.KIND_DK,
                    *((codec.KIND_HPU_SK, codec.KIND_HPU_UK) if auth.scheme == "hpu"
                      else (codec.KIND_HFU_SK, codec.KIND_HFU_UK))}


def test_master_and_ciphertext(auth):
    group = auth.params.group
    mk = codec.MasterKey(auth.alpha)
    assert codec.loads(codec.dumps(mk, auth.scheme, group), group) == mk
    m = random_message(auth.params, auth.rng)
    ct = rhibe_encrypt(("a",), 0, m, auth.params, auth.rng)
    assert codec.loads(codec.dumps(ct), group) == ct


def test_loaded_objects_behave_identically(auth):
    group = auth.params.group
    params = codec.loads(codec.dumps(auth.params))
    assert params == auth.params
    derive = hpu_derivekey if auth.scheme == "hpu" else hfu_derivekey
    hid, epoch = ("a", "x"), 0
    sk = codec.loads(codec.dumps(auth.sks[hid]), group)
    uk = codec.loads(codec.dumps(auth.uks[hid[:-1], epoch]), group)
    dk = derive(sk, uk, params, auth.rng)
    m = random_message(params, auth.rng)
    ct = codec.loads(codec.dumps(rhibe_encrypt(hid, epoch, m, auth.params, auth.rng)), group)
    assert rhibe_decrypt(ct, dk, params) == m
    assert rhibe_decrypt(ct, auth.dks[hid, epoch], params) == m


def test_corruption_detected(auth):
    group = auth.params.group
    data = codec.dumps(auth.sks[("a",)], auth.scheme)
    with pytest.raises(IntegrityError):
        codec.loads(data[:-1], group)
    with pytest.raises(IntegrityError):
        codec.loads(data + b"\x00", group)
    with pytest.raises(IntegrityError):
        codec.loads(b"XXXXXXXX" + data[8:], group)
    with pytest.raises(IntegrityError):
        codec.loads(data[:8] + b"\x09" + data[9:], group)
    with pytest.raises(IntegrityError):
        codec.loads(data[:9] + b"\x63" + data[10:], group)


def test_out_of_range_element_rejected(auth):
    data = bytearray(codec.dumps(auth.params))
    # push the log of the first group element past the order
    width = auth.params.group.element_width
    idx = bytes(data).index(auth.params.group.element_to_bytes(auth.params.hibe.f[0][0]))
    data[idx + 2: idx + width] = b"\xff" * (width - 2)
    with pytest.raises(IntegrityError):
        codec.loads(bytes(data))


def test_to_json_is_plain(auth):
    import json
    json.dumps(codec.to_json(auth.uks[(), 0]))
    json.dumps(codec.to_json(auth.params))
