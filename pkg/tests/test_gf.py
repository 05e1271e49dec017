import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hexovoid.gf import (
    Cubic,
    FieldError,
    FiniteField,
    abs_trace,
    cubic_has_no_root_criterion,
    cubic_root_count,
    discriminant,
    find_irreducible,
    is_cube,
    is_irreducible,
    is_prime_power,
    xyz_form_anisotropic,
    prime_power,
    rel_trace,
    sqrt_neg3,
)

QS = [2, 3, 4, 5, 7, 8, 9, 13, 16, 25]


@pytest.fixture(scope="module", params=QS)
def F(request):
    return FiniteField(request.param)


def naive_mul(F, a, b):
    """Schoolbook polynomial product mod the field's modulus (independent of the tables)."""
    p, e, mod = F.p, F.e, F.modulus
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
    return sum(prod[i] * p**i for i in range(e))


def test_prime_power():
    assert prime_power(16) == (2, 4)
    assert prime_power(13) == (13, 1)
    assert not is_prime_power(10)
    assert not is_prime_power(1)
    with pytest.raises(FieldError):
        FiniteField(12)


def test_mul_against_schoolbook(F):
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.mul(a, b) == naive_mul(F, a, b)


def test_field_axioms(F):
    els = F.elements
    a, b, c = np.meshgrid(els, els, els, indexing="ij") if F.q <= 9 else (els[:, None, None], els[None, :, None], els[None, None, :5])
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    nz = els[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(els, F.neg(els)) == 0)


def test_omega_is_primitive(F):
    powers = {int(F.omega_pow(k)) for k in range(F.q - 1)}
    assert powers == set(range(1, F.q))


def test_frozen_omegas():
    assert {q: FiniteField(q).omega for q in (4, 7, 13, 16, 25)} == {4: 2, 7: 3, 13: 2, 16: 2, 25: 5}


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(QS), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 40))
def test_power_and_div(q, x, y, k):
    F = FiniteField(q)
    a, b = x % q, y % (q - 1) + 1
    assert F.mul(F.div(a, b), b) == a
    expect = 1
    for _ in range(k):
        expect = F.mul(expect, a)
    assert F.power(a, k) == expect


def test_matrix_helpers(F):
    rng = np.random.default_rng(5)
    for _ in range(5):
        A = rng.integers(0, F.q, size=(3, 3))
        if F.det3(A) == 0:
            continue
        assert np.array_equal(F.dot(A, F.mat_inv(A)), np.eye(3, dtype=np.int64))


def test_irreducible_search():
    for p, e in ((2, 3), (3, 2), (5, 2), (2, 4)):
        mod = find_irreducible(p, e)
        assert is_irreducible(mod, p)
    assert not is_irreducible((1, 0, 1), 2)  # x^2 + 1 = (x+1)^2


def test_traces():
    F4, F2 = FiniteField(4), FiniteField(2)
    assert rel_trace(2, F4, F2) == 1
    F16 = FiniteField(16)
    # the absolute trace is additive and onto the prime field
    t = [abs_trace(a, F16) for a in range(16)]
    assert sorted(set(t)) == [0, 1] and t.count(1) == 8
    for a, b in itertools.product(range(16), repeat=2):
        assert abs_trace(F16.add(a, b), F16) == t[a] ^ t[b]


def test_cubes_and_sqrt():
    F7 = FiniteField(7)
    assert [is_cube(F7, a) for a in range(1, 7)] == [True, False, False, False, False, True]
    with pytest.raises(FieldError):
        is_cube(F7, 0)
    assert sqrt_neg3(F7) == 2
    assert sqrt_neg3(FiniteField(13)) == 6
    for q in (7, 13, 19, 25):
        F = FiniteField(q)
        a = sqrt_neg3(F)
        assert F.mul(a, a) == F.neg(F.element(3))
    with pytest.raises(FieldError):
        sqrt_neg3(FiniteField(4))


def test_known_cubic():
    F = FiniteField(7)
    f = Cubic(F, 1, 1)
    assert discriminant(f) == 4
    assert cubic_root_count(f) == 0
    assert cubic_has_no_root_criterion(f)


@pytest.mark.parametrize("q", [4, 7, 13, 16])
def test_cubic_criterion_is_sound(q):
    F = FiniteField(q)
    certified = 0
    for c in range(q):
        for d in range(q):
            f = Cubic(F, c, d)
            if discriminant(f) == 0:
                with pytest.raises(FieldError):
                    cubic_has_no_root_criterion(f)
                continue
            if cubic_has_no_root_criterion(f):
                certified += 1
                assert cubic_root_count(f) == 0, (c, d)
    assert certified > 0


def test_criterion_needs_q_1_mod_3():
    with pytest.raises(FieldError):
        cubic_has_no_root_criterion(Cubic(FiniteField(5), 1, 1))


@pytest.mark.parametrize("q", [4, 7, 13, 16])
def test_xyz_form(q):
    F = FiniteField(q)
    for t in range(1, q):
        if is_cube(F, t):
            with pytest.raises(FieldError):
                xyz_form_anisotropic(F, t)
        else:
            assert xyz_form_anisotropic(F, t)


def test_info_census():
    info = FiniteField(13).info()
    assert info["nonzero_cubes"] == 4 and info["nonzero_squares"] == 6
    assert info["p"] == 13 and info["e"] == 1
