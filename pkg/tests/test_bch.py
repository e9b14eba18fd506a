"""Component-code tests: field/code construction, encoding, and the
bounded-distance decoder checked against a brute-force nearest-codeword
oracle."""

import numpy as np
import pytest

import oracles
from ibddlab.bch import (
    ApproxWeightEnumerator,
    CodeConstructionError,
    FieldConstructionError,
    GaloisField,
    bdd_decode,
    bdd_decode_matrix,
    build_bch,
    ideal_bdd_decode,
    ideal_decode_matrix,
    parse_descriptor,
    weight_enumerator_approx,
    weight_enumerator_exact,
)

# ---------------------------------------------------------------------------
# construction


@pytest.mark.parametrize(
    "m,t,shorten,n,k",
    [
        (4, 1, 0, 15, 11),
        (4, 2, 0, 15, 7),
        (5, 2, 1, 30, 20),
        (8, 3, 0, 255, 231),
        (8, 3, 1, 254, 230),
    ],
)
def test_code_parameters(m, t, shorten, n, k):
    code = build_bch(m, t, shorten=shorten)
    assert code.n == n
    assert code.k == k
    assert code.t == t
    assert code.d_design == 2 * t + 1
    assert code.n_parent == 2**m - 1


def test_known_generator_polys(code_15_11, code_15_7):
    # x^4 + x + 1 for the single-error code, degree 8 product of the
    # minimal polynomials of alpha and alpha^3 for the double-error code.
    assert code_15_11.generator_poly == 0b10011
    assert code_15_7.generator_poly == 0b111010001


def test_bad_construction_raises():
    with pytest.raises(CodeConstructionError):
        build_bch(4, 0)
    with pytest.raises(CodeConstructionError):
        build_bch(4, 1, shorten=11)  # would leave k <= 0
    with pytest.raises(FieldConstructionError):
        GaloisField(4, primitive_poly=0b10101)  # reducible: (x^2+x+1)^2


def test_descriptor_round_trip(code_30_20):
    rebuilt = parse_descriptor(code_30_20.descriptor())
    assert (rebuilt.n, rebuilt.k, rebuilt.t) == (30, 20, 2)
    assert rebuilt.descriptor() == code_30_20.descriptor()
    with pytest.raises(ValueError):
        parse_descriptor("4,1")


# ---------------------------------------------------------------------------
# encoding


def test_encode_systematic_and_linear(code_15_7, rng):
    k = code_15_7.k
    info = rng.integers(0, 2, size=(8, k), dtype=np.uint8)
    words = code_15_7.encode(info)
    assert words.shape == (8, code_15_7.n)
    np.testing.assert_array_equal(words[:, :k], info)
    # linearity: encode(a ^ b) == encode(a) ^ encode(b)
    a, b = info[0], info[1]
    np.testing.assert_array_equal(
        code_15_7.encode(a ^ b), code_15_7.encode(a) ^ code_15_7.encode(b)
    )
    assert np.all(code_15_7.is_codeword(words))


def test_unit_info_rows_are_codewords(code_15_11):
    eye = np.eye(code_15_11.k, dtype=np.uint8)
    words = code_15_11.encode(eye)
    assert np.all(code_15_11.is_codeword(words))
    # the all-zero word encodes to all zeros
    z = code_15_11.encode(np.zeros(code_15_11.k, dtype=np.uint8))
    assert not z.any()


def test_shortened_embeds_into_parent(code_30_20):
    parent = build_bch(5, 2)
    rng = np.random.default_rng(7)
    info = rng.integers(0, 2, size=(6, code_30_20.k), dtype=np.uint8)
    words = code_30_20.encode(info)
    embedded = np.concatenate(
        [np.zeros((6, 1), dtype=np.uint8), words], axis=1
    )
    assert np.all(parent.is_codeword(embedded))


def test_syndromes_zero_iff_codeword(code_15_7, rng):
    word = code_15_7.encode(rng.integers(0, 2, size=code_15_7.k, dtype=np.uint8))
    assert not code_15_7.syndromes(word).any()
    word[3] ^= 1
    assert code_15_7.syndromes(word).any()


# ---------------------------------------------------------------------------
# decoding vs brute-force oracle


@pytest.mark.parametrize("fixture", ["code_15_11", "code_15_7"])
def test_bdd_matches_oracle_sampled(fixture, request, rng):
    code = request.getfixturevalue(fixture)
    words = rng.integers(0, 2, size=(2000, code.n), dtype=np.uint8)
    want_dec, want_ok = oracles.brute_force_bdd(code, words)
    tern, got_dec, got_ok = bdd_decode_matrix(code, words)
    np.testing.assert_array_equal(got_ok, want_ok)
    np.testing.assert_array_equal(got_dec[want_ok], want_dec[want_ok])
    # failed rows pass through untouched
    np.testing.assert_array_equal(got_dec[~want_ok], words[~want_ok])
    # ternary map: +1 where decoded bit is 0, -1 where 1, 0 on failure
    assert set(np.unique(tern)) <= {-1, 0, 1}
    np.testing.assert_array_equal(tern[~want_ok], 0)
    np.testing.assert_array_equal(tern[want_ok], 1 - 2 * got_dec[want_ok].astype(np.int8))


def test_perfect_code_never_fails(code_15_11, rng):
    words = rng.integers(0, 2, size=(500, 15), dtype=np.uint8)
    _, _, ok = bdd_decode_matrix(code_15_11, words)
    assert ok.all()


def test_bdd_single_and_double_flip(code_15_7, rng):
    tx = code_15_7.encode(rng.integers(0, 2, size=code_15_7.k, dtype=np.uint8))
    for flips in ([2], [1, 9]):
        rx = tx.copy()
        for p in flips:
            rx[p] ^= 1
        out = bdd_decode(code_15_7, rx)
        assert out.decoded
        np.testing.assert_array_equal(out.word, tx)
    # weight-3 pattern exceeds t=2: either fails or lands on a different codeword
    rx = tx.copy()
    for p in (0, 5, 11):
        rx[p] ^= 1
    out = bdd_decode(code_15_7, rx)
    if out.decoded:
        assert not np.array_equal(out.word, tx)
        assert code_15_7.is_codeword(out.word)


def test_bdd_ternary_scalar_outcomes(code_15_7):
    zero = np.zeros(15, dtype=np.uint8)
    out = bdd_decode(code_15_7, zero)
    assert out.decoded
    np.testing.assert_array_equal(out.ternary(), np.ones(15, dtype=np.int8))


def test_ideal_decoder_genie(code_15_7, rng):
    tx = code_15_7.encode(rng.integers(0, 2, size=(4, code_15_7.k), dtype=np.uint8))
    rx = tx.copy()
    rx[0, [1, 4]] ^= 1          # within t: restored
    rx[1, [0, 3, 7]] ^= 1       # weight 3 > t: must NOT miscorrect
    tern, dec, ok = ideal_decode_matrix(code_15_7, rx, tx)
    np.testing.assert_array_equal(dec[0], tx[0])
    np.testing.assert_array_equal(dec[1], rx[1])  # untouched, never miscorrected
    assert ok[0] and not ok[1]
    assert tern[1].sum() == 0 and np.all(tern[1] == 0)
    out = ideal_bdd_decode(code_15_7, rx[0], tx[0])
    assert out.decoded and np.array_equal(out.word, tx[0])


# ---------------------------------------------------------------------------
# weight enumerators


def test_exact_enumerator_hamming15(code_15_11):
    counts = weight_enumerator_exact(code_15_11)
    expected = np.zeros(16, dtype=np.int64)
    expected[[0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 15]] = [
        1, 35, 105, 168, 280, 435, 435, 280, 168, 105, 35, 1,
    ]
    np.testing.assert_array_equal(counts, expected)
    assert counts.sum() == 2**11


def test_exact_enumerator_bch_15_7(code_15_7):
    counts = weight_enumerator_exact(code_15_7)
    assert counts[0] == 1 and counts[15] == 1
    assert counts[1:5].sum() == 0  # nothing below the design distance
    np.testing.assert_array_equal(counts[[5, 6, 7, 8, 9, 10]], [18, 30, 15, 15, 30, 18])
    assert counts.sum() == 2**7


def test_exact_enumerator_refuses_long(code_255_231):
    with pytest.raises(ValueError):
        weight_enumerator_exact(code_255_231)


def test_approx_enumerator(code_255_231):
    enum = weight_enumerator_approx(code_255_231)
    assert isinstance(enum, ApproxWeightEnumerator)
    assert enum(0) == 1.0 and enum(255) == 1.0
    assert enum(code_255_231.t * 2) == 0.0  # below design distance
    h = 100
    import math

    want = 2.0 ** (-8 * 3) * math.comb(255, h)
    assert enum(h) == pytest.approx(want, rel=1e-9)
