import itertools

import pytest

from char2lie import superfunc as sf


PI04 = sf.hamiltonian_space("Pi", 0, 4)  # xi1, eta1, xi2, eta2
I04 = sf.hamiltonian_space("I", 0, 4)  # xi1, eta1, theta1, theta2
I20 = sf.hamiltonian_space("I", 2, 0)  # z1, z2


def var(space, name):
    for i, v in enumerate(space.variables):
        if v.name == name:
            return i
    raise KeyError(name)


def mono(space, *names):
    m = 0
    for nm in names:
        m |= 1 << var(space, nm)
    return sf.poly(m)


def test_mul_square_is_zero():
    xi1 = mono(PI04, "xi1")
    assert sf.mul(PI04, xi1, xi1) == sf.ZERO


def test_mul_disjoint_union():
    xi1, eta1 = mono(PI04, "xi1"), mono(PI04, "eta1")
    assert sf.mul(PI04, xi1, eta1) == mono(PI04, "xi1", "eta1")


def test_mul_expand_cancel():
    xi1, eta1 = mono(PI04, "xi1"), mono(PI04, "eta1")
    assert sf.mul(PI04, xi1 ^ eta1, xi1) == mono(PI04, "xi1", "eta1")


def test_partial_basic():
    m = mono(PI04, "xi1", "eta1")
    assert sf.partial(PI04, m, var(PI04, "xi1")) == mono(PI04, "eta1")
    assert sf.partial(PI04, mono(PI04, "eta2"), var(PI04, "xi1")) == sf.ZERO
    with pytest.raises(ValueError):
        sf.partial(PI04, m, 99)


def test_partial_top_monomial_all_variables():
    # dX/dx equals the complementary monomial, checked by mask deletion
    full = PI04.full_mask
    for x in range(PI04.nvars):
        got = sf.partial(PI04, sf.poly(full), x)
        assert got == sf.poly(full ^ (1 << x))


def test_bracket_pi_pair():
    assert sf.bracket(PI04, mono(PI04, "xi1"), mono(PI04, "eta1")) == sf.ONE


def test_bracket_I_diagonal_is_one():
    # the Leibniz phenomenon: {z, z}_I = 1
    z1 = mono(I20, "z1")
    assert sf.bracket(I20, z1, z1) == sf.ONE


def test_bracket_hand_example():
    f = mono(PI04, "xi1", "eta1")
    g = mono(PI04, "xi1")
    assert sf.bracket(PI04, f, g) == mono(PI04, "xi1")


def test_squaring_pi_examples():
    assert sf.squaring(PI04, mono(PI04, "xi1")) == sf.ZERO
    f = mono(PI04, "xi1") ^ mono(PI04, "eta1", "xi2", "eta2")
    assert sf.squaring(PI04, f) == mono(PI04, "xi2", "eta2")


def test_squaring_theta_unit():
    # square of a lone diagonal odd variable is the unit (absorbing {w,w}=1)
    assert sf.squaring(I04, mono(I04, "theta1")) == sf.ONE


def test_squaring_requires_odd():
    with pytest.raises(ValueError):
        sf.squaring(PI04, mono(PI04, "xi1", "eta1"))


def test_polarization_exhaustive_pi04():
    # s(f+g) + s(f) + s(g) = {f,g} modulo constants, all odd f, g
    odd = [m for m in range(16) if PI04.element_parity(m) == sf.ODD]
    elems = []
    for bits in range(1 << len(odd)):
        elems.append(frozenset(odd[i] for i in range(len(odd)) if (bits >> i) & 1))
    for f in elems:
        sf_f = sf.squaring(PI04, f)
        for g in elems:
            lhs = sf.squaring(PI04, f ^ g) ^ sf_f ^ sf.squaring(PI04, g)
            rhs = sf.bracket(PI04, f, g)
            assert (lhs ^ rhs) <= sf.ONE  # difference is at most a constant


def test_polarization_with_diagonals_i04_sample():
    odd = [m for m in range(16) if I04.element_parity(m) == sf.ODD]
    import random

    rng = random.Random(3)
    for _ in range(300):
        f = frozenset(m for m in odd if rng.random() < 0.4)
        g = frozenset(m for m in odd if rng.random() < 0.4)
        lhs = sf.squaring(I04, f ^ g) ^ sf.squaring(I04, f) ^ sf.squaring(I04, g)
        rhs = sf.bracket(I04, f, g)
        assert (lhs ^ rhs) <= sf.ONE


def test_weight_and_degree_additivity():
    f = mono(PI04, "xi1", "xi2")
    g = mono(PI04, "eta1")
    prod = sf.mul(PI04, f, g)
    (pm,) = prod
    (fm,) = f
    (gm,) = g
    assert PI04.weight(pm) == tuple(a + b for a, b in zip(PI04.weight(fm), PI04.weight(gm)))
    br = sf.bracket(PI04, f, g)
    for m in br:
        assert PI04.degree(m) == PI04.degree(fm) + PI04.degree(gm) - 2
        assert PI04.weight(m) == tuple(a + b for a, b in zip(PI04.weight(fm), PI04.weight(gm)))


def test_berezin_examples():
    full = sf.poly(PI04.full_mask)
    assert sf.berezin_form(PI04, sf.ONE, full).value == 1
    xi1 = mono(PI04, "xi1")
    assert sf.berezin_form(PI04, xi1, xi1).value == 0
    assert sf.berezin_form(PI04, xi1, mono(PI04, "eta1", "xi2", "eta2")).value == 1
    assert sf.berezin_form(PI04, xi1, xi1).parity == 0  # 4 odd indeterminates


def test_berezin_invariance_on_simple_subquotient():
    # B({f,h},g) = B(f,{h,g}) over basis triples of degrees 1..3 at a+b <= 5
    for space in (PI04, I04, sf.hamiltonian_space("Pi", 0, 5), sf.buttin_space(2)):
        full = space.full_mask
        monos = [m for m in range(1 << space.nvars) if 0 < space.degree(m) < space.nvars]
        for f, h, g in itertools.product(monos[:10], monos[:10], monos[:10]):
            fh = sf.bracket(space, sf.poly(f), sf.poly(h))
            hg = sf.bracket(space, sf.poly(h), sf.poly(g))
            lhs = sf.berezin_form(space, fh, sf.poly(g)).value
            rhs = sf.berezin_form(space, sf.poly(f), hg).value
            assert lhs == rhs


def test_family_validation():
    with pytest.raises(ValueError):
        sf.hamiltonian_space("I", 0, 3)  # I needs even dimension
    with pytest.raises(ValueError):
        sf.hamiltonian_space("Q", 0, 4)
    with pytest.raises(ValueError):
        sf.buttin_space(0)


def test_le_parity_shift():
    b2 = sf.buttin_space(2)
    q1 = 1 << 0
    assert b2.monomial_parity(q1) == 0
    assert b2.element_parity(q1) == 1  # shifted
    assert sf.berezin_parity(b2) == 0  # two odd indeterminates
