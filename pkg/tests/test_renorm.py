from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetratwist.exactnum import Surd, rat
from tetratwist.renorm import (
    R,
    Terminal,
    coding_map,
    coding_sequence,
    convergent_near,
    convergents,
    eval_coding,
    eval_split,
    fixed_point,
    in_omega,
    lemma31_denominators,
    named_interval,
    parse_interval,
    signed_cf,
    split_expansion,
    sqrt2_minus_1,
)

unit_fracs = st.fractions(min_value=0, max_value=1, max_denominator=300).filter(lambda f: 0 < f < 1)


def ref_R(s: Fraction) -> Fraction:
    # independent reference on stdlib Fractions
    if s >= Fraction(1, 2):
        return 1 - s
    u = s / (1 - 2 * s)
    return u - (u.numerator // u.denominator)


def ref_code(s: Fraction) -> list:
    out = []
    while True:
        if s == Fraction(1, 2):
            out.append((2, 0, 1))
            return out
        if s > Fraction(1, 2):
            out.append((0, 1, -1))
        else:
            u = s / (1 - 2 * s)
            out.append((2, u.numerator // u.denominator, 1))
        s = ref_R(s)
        if s == 0:
            return out


@given(unit_fracs)
def test_R_matches_reference(f):
    assert R(rat(f.numerator, f.denominator)) == ref_R(f)


@given(unit_fracs)
def test_coding_matches_reference(f):
    got = [tuple(c) for c in coding_sequence(rat(f.numerator, f.denominator))]
    assert got == ref_code(f)


def test_coding_map_cases():
    assert tuple(coding_map(0))[0::2] == (0, 1)
    assert tuple(coding_map(rat(1, 2))) == (2, 0, 1)
    assert tuple(coding_map(rat(3, 4))) == (0, 1, -1)
    assert tuple(coding_map(rat(2, 5))) == (2, 2, 1)


def test_omega():
    assert in_omega([(2, 1, 1), (0, 1, -1), (2, 1, 1)])
    assert not in_omega([(0, 1, -1), (0, 1, -1), (2, 1, 1)])
    assert not in_omega([(2, 1, 1), (0, 1, -1)])
    with pytest.raises(ValueError):
        eval_coding([(2, 1, 1), (0, 1, -1)])


@settings(max_examples=200)
@given(unit_fracs)
def test_shift_property(f):
    # R shifts the splitted expansion by two terms (up to the overall sign)
    s = rat(f.numerator, f.denominator)
    t = R(s)
    if t == 0 or s == rat(1, 2):
        return
    a = split_expansion(s).terms
    b = split_expansion(t).terms
    sign = coding_map(s).r
    assert tuple(sign * x for x in a[2:]) == b


@given(unit_fracs)
def test_split_evaluates_back(f):
    s = rat(f.numerator, f.denominator)
    e = split_expansion(s)
    assert eval_split(e.terms) == s
    assert eval_split(signed_cf(e.terms)) == s


def test_signed_cf_merges_zeros():
    assert signed_cf((2, 0, 0, 1, -2, -21, -2)) == (2, 1, -2, -21, -2)
    assert signed_cf((2, 0, 2, 1)) == (4, 1)


def test_convergents_are_prefix_values():
    terms = split_expansion(rat(45, 178)).terms
    for k, (p, q) in enumerate(convergents(terms)):
        if k == 0 or q == 0:
            continue
        try:
            val = eval_split(terms[:k])
        except ZeroDivisionError:
            continue  # prefix ending in a zero quotient has no value
        assert rat(p, q) == val
    assert convergents(terms)[-1] in ((45, 178), (-45, -178))


@pytest.mark.parametrize("n", range(1, 9))
def test_fixed_points(n):
    s = fixed_point(n)
    assert R(s) == s
    assert [tuple(c) for c in coding_sequence(s, max_len=5)] == [(2, n, 1)] * 5
    assert split_expansion(s, max_terms=6).terms == (2, n) * 3


def test_sqrt2_minus_1():
    s = sqrt2_minus_1()
    assert s == Surd.sqrt(2) - 1
    assert split_expansion(s, max_terms=4).terminal is Terminal.INFINITE
    c = convergent_near(s, 10**4)
    assert c.denominator > 10**4 and abs(float(c) - float(s)) < 1e-8


def test_denominators_drop():
    qs = lemma31_denominators(rat(45, 178))
    assert qs[0] == 178 and qs[-1] in (1, 2)


def test_named_intervals():
    A23 = named_interval("A", 2, 3)
    assert (A23.lo, A23.hi) == (rat(41, 99), rat(29, 70))
    Ab23 = named_interval("Abar", 2, 3)
    assert (Ab23.lo, Ab23.hi) == (rat(7, 17), rat(5, 12))
    A24 = named_interval("A", 2, 4)
    assert (A24.lo, A24.hi) == (rat(53, 128), rat(41, 99))
    with pytest.raises(ValueError):
        named_interval("A", 1, 3)
    with pytest.raises(ValueError):
        named_interval("Q", 2, 3)


def test_parse_interval():
    assert parse_interval("7/17:5/12") == (rat(7, 17), rat(5, 12))
    for bad in ["7/17", "5/12:7/17", "a:b"]:
        with pytest.raises(ValueError):
            parse_interval(bad)
