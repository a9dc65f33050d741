import random

import pytest

from filterlab.permutation import PermKey, invert, permute, sample_key


def _key(seed: int, domain: int) -> PermKey:
    return PermKey(random.Random(seed).getrandbits(128), 128, domain)


def test_roundtrip_exhaustive_256():
    key = _key(1, 256)
    for x in range(256):
        assert invert(key, permute(key, x)) == x
        assert permute(key, invert(key, x)) == x


def test_output_multiset_is_the_domain():
    key = _key(2, 256)
    assert sorted(permute(key, x) for x in range(256)) == list(range(256))


def test_cycle_walking_domain_1000():
    key = _key(3, 1000)
    outs = [permute(key, x) for x in range(1000)]
    assert all(0 <= y < 1000 for y in outs)
    assert sorted(outs) == list(range(1000))
    assert all(invert(key, y) == x for x, y in zip(range(1000), outs))


def test_determinism_under_fixed_key():
    key = _key(4, 1024)
    assert [permute(key, x) for x in range(50)] == [permute(key, x) for x in range(50)]


def test_distinct_keys_give_distinct_permutations():
    rng = random.Random(5)
    for _ in range(100):
        k1 = PermKey(rng.getrandbits(128), 128, 256)
        k2 = PermKey(rng.getrandbits(128), 128, 256)
        if k1.key_bits == k2.key_bits:
            continue
        assert any(permute(k1, x) != permute(k2, x) for x in range(256))


def test_no_tested_key_is_the_identity():
    rng = random.Random(6)
    for _ in range(100):
        key = PermKey(rng.getrandbits(128), 128, 256)
        assert any(permute(key, x) != x for x in range(256))


def test_avalanche_smoke_u16():
    # flipping one input bit changes the output for (essentially) every
    # input; a statistical sanity check, not a security claim
    key = _key(7, 1 << 16)
    rng = random.Random(8)
    changed = 0
    total = 1 << 16
    for x in range(total):
        y = x ^ (1 << rng.randrange(16))
        if permute(key, x) != permute(key, y):
            changed += 1
    assert changed / total >= 0.99


def test_domain_errors():
    key = _key(9, 1000)
    with pytest.raises(ValueError):
        permute(key, 1000)
    with pytest.raises(ValueError):
        invert(key, -1)
    with pytest.raises(ValueError):
        PermKey(1 << 130, 128, 256)  # key material too wide
    with pytest.raises(ValueError):
        PermKey(0, 128, 1)  # degenerate domain


def test_sample_key_uses_lambda_bits():
    key = sample_key(128, 1 << 10, random.Random(10))
    assert 0 <= key.key_bits < (1 << 128)
    assert key.lambda_bits == 128
    assert key.domain_size == 1 << 10
