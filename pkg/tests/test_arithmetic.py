import random
from math import gcd

import gmpy2
import pytest

from src.handlers.arithmetic import (
    TOY_GROUP,
    generate_dh_group,
    generate_prime,
    hash_to_group,
    mod_exp,
    random_exponent,
    sample_coprime,
)
from src.handlers.encoding import hash_bytes
from src.utils.errors import DomainError, ParameterError


def test_mod_exp_small_values():
    assert mod_exp(4, 13, 497) == 445
    assert mod_exp(2, 0, 7) == 1
    assert mod_exp(0, 5, 7) == 0
    assert mod_exp(5, 3, 1) == 0


def test_mod_exp_matches_builtin_pow(rng):
    for _ in range(200):
        modulus = rng.getrandbits(256) | 1
        base = rng.getrandbits(300)
        exponent = rng.getrandbits(256)
        assert mod_exp(base, exponent, modulus) == pow(base, exponent, modulus)


def test_mod_exp_domain_errors():
    with pytest.raises(DomainError):
        mod_exp(2, 3, 0)
    with pytest.raises(DomainError):
        mod_exp(2, -1, 7)


def test_generate_prime_has_exact_size(rng):
    for bits in (16, 64, 128):
        p = generate_prime(bits, rng)
        assert p.bit_length() == bits
        assert gmpy2.is_prime(p)


def test_generate_prime_rejects_tiny_sizes():
    with pytest.raises(ParameterError):
        generate_prime(1)


def test_sample_coprime(rng):
    for _ in range(100):
        r = sample_coprime(35, rng)
        assert 1 <= r < 35
        assert gcd(r, 35) == 1


def test_sample_coprime_empty_range():
    with pytest.raises(ParameterError):
        sample_coprime(2, low=2)


def test_toy_group_generator_has_order_q():
    assert TOY_GROUP.contains(TOY_GROUP.g)
    assert pow(TOY_GROUP.g, TOY_GROUP.q, TOY_GROUP.p) == 1
    assert TOY_GROUP.g != 1


def test_generate_dh_group_is_a_safe_prime_group(dh_group):
    assert dh_group.p == 2 * dh_group.q + 1
    assert gmpy2.is_prime(dh_group.p) and gmpy2.is_prime(dh_group.q)
    assert dh_group.p.bit_length() == 64
    assert dh_group.contains(dh_group.g)


def test_hash_to_group_lands_in_subgroup(dh_group, rng):
    for i in range(50):
        element = hash_to_group(hash_bytes(bytes([i]), 256), dh_group)
        assert dh_group.contains(element)


def test_random_exponent_range(rng):
    for _ in range(100):
        assert 1 <= random_exponent(TOY_GROUP, rng) < TOY_GROUP.q


def test_exponents_commute(dh_group, rng):
    h = hash_to_group(hash_bytes(b"trail", 256), dh_group)
    a, b = random_exponent(dh_group, rng), random_exponent(dh_group, rng)
    assert mod_exp(mod_exp(h, a, dh_group.p), b, dh_group.p) == mod_exp(mod_exp(h, b, dh_group.p), a, dh_group.p)


def test_generate_dh_group_is_reproducible_with_seed():
    first = generate_dh_group(48, rng=random.Random(7))
    assert first == generate_dh_group(48, rng=random.Random(7))
    assert first.p.bit_length() == 48
