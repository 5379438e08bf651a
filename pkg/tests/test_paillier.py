import random
from math import gcd

import pytest

from src.handlers.paillier import (
    encrypt_polynomial,
    encrypted_poly_eval,
    paillier_add,
    paillier_decrypt,
    paillier_encrypt,
    paillier_keygen,
    paillier_keypair_from_primes,
    paillier_scalar_mul,
)
from src.handlers.polynomial import poly_eval_horner, poly_from_roots
from src.models.keys import PaillierCiphertext
from src.utils.errors import DecryptionError, DomainError, KeyGenerationError, ParameterError


def test_small_key_values(toy_paillier):
    assert toy_paillier.public.u == 35
    assert toy_paillier.public.g == 36
    assert toy_paillier.private.lam == 12
    assert toy_paillier.private.mu == 3


def test_exhaustive_round_trip_small_modulus(toy_paillier, rng):
    pk, sk = toy_paillier.public, toy_paillier.private
    for s in range(pk.u):
        assert paillier_decrypt(sk, pk, paillier_encrypt(pk, s, rng=rng)) == s


def test_exhaustive_homomorphism_small_modulus(toy_paillier, rng):
    pk, sk = toy_paillier.public, toy_paillier.private
    ciphertexts = [paillier_encrypt(pk, s, rng=rng) for s in range(pk.u)]
    for s1 in range(pk.u):
        for s2 in range(pk.u):
            added = paillier_add(pk, ciphertexts[s1], ciphertexts[s2])
            assert paillier_decrypt(sk, pk, added) == (s1 + s2) % pk.u
            scaled = paillier_scalar_mul(pk, ciphertexts[s1], s2)
            assert paillier_decrypt(sk, pk, scaled) == s1 * s2 % pk.u


def test_encryption_is_randomized(toy_paillier):
    pk = toy_paillier.public
    assert paillier_encrypt(pk, 4, r=2) != paillier_encrypt(pk, 4, r=3)


def test_encryption_with_fixed_randomizer(toy_paillier):
    pk, sk = toy_paillier.public, toy_paillier.private
    c = paillier_encrypt(pk, 2, r=3)
    assert c.value == 36 ** 2 * 3 ** 35 % 1225
    assert paillier_decrypt(sk, pk, c) == 2


def test_sampled_randomizers_give_distinct_ciphertexts():
    rng = random.Random(29)
    keys = paillier_keygen(64, rng)
    pk, sk = keys.public, keys.private
    s = rng.randrange(pk.u)
    ciphertexts = [paillier_encrypt(pk, s, rng=rng) for _ in range(100)]
    assert len({c.value for c in ciphertexts}) == 100
    assert all(paillier_decrypt(sk, pk, c) == s for c in ciphertexts)


def test_polynomial_masking_collisions_at_toy_modulus(toy_paillier, rng):
    # Server reply for x is E(r * P(x) + x); a non-member can decrypt into Y
    pk, sk = toy_paillier.public, toy_paillier.private
    client_set = [3, 8]
    polynomial = poly_from_roots(client_set, pk.u)
    encrypted = encrypt_polynomial(pk, polynomial, rng)

    def reply(x, r):
        masked = paillier_scalar_mul(pk, encrypted_poly_eval(pk, encrypted, x), r)
        return paillier_decrypt(sk, pk, paillier_add(pk, masked, paillier_encrypt(pk, x, rng=rng)))

    for y in client_set:
        assert all(reply(y, r) == y for r in range(1, pk.u))

    collisions = trials = unit_collisions = unit_trials = 0
    for x in range(pk.u):
        if x in client_set:
            continue
        value = poly_eval_horner(polynomial, x, pk.u)
        for r in range(1, pk.u):
            decrypted = reply(x, r)
            assert decrypted == (r * value + x) % pk.u
            hit = decrypted in client_set
            collisions += hit
            trials += 1
            if gcd(value, pk.u) == 1:
                unit_collisions += hit
                unit_trials += 1

    assert trials == 33 * 34
    # r -> r * P(x) is a bijection onto the non-zero residues when P(x) is a unit
    assert unit_trials == 20 * 34
    assert unit_collisions == 20 * len(client_set)
    # Zero divisors of the composite modulus push the overall rate above |Y| / (u - 1)
    assert 0 < collisions / trials < 0.2
    assert collisions > unit_collisions


def test_round_trip_generated_key(paillier_keys, rng):
    pk, sk = paillier_keys.public, paillier_keys.private
    for _ in range(100):
        s1, s2 = rng.randrange(pk.u), rng.randrange(pk.u)
        c1, c2 = paillier_encrypt(pk, s1, rng=rng), paillier_encrypt(pk, s2, rng=rng)
        assert paillier_decrypt(sk, pk, c1) == s1
        assert paillier_decrypt(sk, pk, paillier_add(pk, c1, c2)) == (s1 + s2) % pk.u


@pytest.mark.slow
def test_round_trip_1024_bit_modulus():
    rng = random.Random(11)
    keys = paillier_keygen(512, rng)
    pk, sk = keys.public, keys.private
    assert pk.u.bit_length() in (1023, 1024)
    for _ in range(1000):
        s1, s2 = rng.randrange(pk.u), rng.randrange(pk.u)
        c1 = paillier_encrypt(pk, s1, rng=rng)
        assert paillier_decrypt(sk, pk, c1) == s1
        assert paillier_decrypt(sk, pk, paillier_add(pk, c1, paillier_encrypt(pk, s2, rng=rng))) == (s1 + s2) % pk.u


def test_keypair_rejects_equal_primes():
    with pytest.raises(KeyGenerationError):
        paillier_keypair_from_primes(7, 7)


def test_keypair_rejects_gcd_failure():
    # 3 divides (7 - 1), so gcd(21, 12) = 3
    with pytest.raises(KeyGenerationError):
        paillier_keypair_from_primes(3, 7)


def test_keygen_rejects_small_primes():
    with pytest.raises(ParameterError):
        paillier_keygen(8)


def test_encrypt_rejects_unreduced_plaintext(toy_paillier):
    with pytest.raises(DomainError):
        paillier_encrypt(toy_paillier.public, 35)
    with pytest.raises(DomainError):
        paillier_encrypt(toy_paillier.public, -1)


def test_encrypt_rejects_non_coprime_randomizer(toy_paillier):
    with pytest.raises(ParameterError):
        paillier_encrypt(toy_paillier.public, 1, r=5)


def test_decrypt_rejects_invalid_ciphertext(toy_paillier):
    pk, sk = toy_paillier.public, toy_paillier.private
    with pytest.raises(DecryptionError):
        paillier_decrypt(sk, pk, PaillierCiphertext(pk.u_squared))
    with pytest.raises(DecryptionError):
        paillier_decrypt(sk, pk, PaillierCiphertext(7))


def test_scalar_mul_rejects_unreduced_scalar(toy_paillier, rng):
    pk = toy_paillier.public
    with pytest.raises(DomainError):
        paillier_scalar_mul(pk, paillier_encrypt(pk, 1, rng=rng), pk.u)


def test_encrypted_evaluation_matches_plaintext_horner(paillier_keys, rng):
    pk, sk = paillier_keys.public, paillier_keys.private
    roots = [rng.randrange(pk.u) for _ in range(8)]
    polynomial = poly_from_roots(roots, pk.u)
    encrypted = encrypt_polynomial(pk, polynomial, rng)
    assert len(encrypted) == 9
    for x in roots[:3] + [rng.randrange(pk.u) for _ in range(3)]:
        value = paillier_decrypt(sk, pk, encrypted_poly_eval(pk, encrypted, x))
        assert value == poly_eval_horner(polynomial, x, pk.u)
    for root in roots:
        assert paillier_decrypt(sk, pk, encrypted_poly_eval(pk, encrypted, root)) == 0


def test_encrypt_polynomial_requires_matching_modulus(paillier_keys, rng):
    with pytest.raises(DomainError):
        encrypt_polynomial(paillier_keys.public, poly_from_roots([1, 2], 97), rng)


def test_encrypted_evaluation_rejects_empty_coefficients(toy_paillier):
    with pytest.raises(DomainError):
        encrypted_poly_eval(toy_paillier.public, [], 1)
