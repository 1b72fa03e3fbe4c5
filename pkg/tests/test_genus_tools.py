from fractions import Fraction

import pytest

from dsperfect.catalog import catalog
from dsperfect.constants import LEVEL12_GENERA, S450_GENERA
from dsperfect.genus_tools import (
    discriminant_form, genus_key, genus_symbol, is_maximal_symbol, list_genus_symbols, mass, milgram_check,
    parse_genus_symbol, same_genus, symbol_level,
)
from dsperfect.lattice_core import Lattice
from dsperfect.utils import kronecker


def test_genus_symbols_of_catalog_lattices():
    cases = [('A5', '2^{-1}_3 3^1', 5), ('E6+E8', '3^1', 14), ('D14', '2^2_6', 14)]
    for name, text, n in cases:
        ours = genus_symbol(catalog(name))
        assert ours.det() == catalog(name).det
        assert genus_key(ours) == genus_key(parse_genus_symbol(text, n)), name


def test_same_genus_for_rearranged_sum():
    assert same_genus(genus_symbol(catalog('E6+E8')), genus_symbol(catalog('E8+E6')))
    assert not same_genus(genus_symbol(catalog('E6+E8')), genus_symbol(catalog('A2+D12')))


def test_e8_mass():
    assert mass(genus_symbol(catalog('E8'))) == Fraction(1, 696729600)


def test_level12_masses():
    for sym, row in LEVEL12_GENERA.items():
        assert mass(parse_genus_symbol(sym, 14)) == row[3], sym


def test_s450_masses():
    for sym, (_, printed) in S450_GENERA.items():
        assert mass(parse_genus_symbol(sym, 14)) == printed, sym


def test_small_root_lattice_masses():
    assert mass(genus_symbol(catalog('D4'))) == Fraction(1, 1152)
    assert mass(genus_symbol(catalog('D6'))) == Fraction(1, 46080)
    assert mass(genus_symbol(catalog('Z2'))) == Fraction(1, 8)


def test_level12_representatives_match_printed_symbols():
    for sym, (_, _, rep, _) in LEVEL12_GENERA.items():
        assert same_genus(genus_symbol(catalog(rep)), parse_genus_symbol(sym, 14)), sym


def test_sign_walking_canonical_form():
    g = genus_symbol(catalog('E8+A5+(2)'))
    assert genus_key(g) == genus_key(parse_genus_symbol('2^2_0 3^1', 14))
    two = [c for c in g.local(2).constituents if c.scale == 1]
    assert two[0].sign == 1 and two[0].oddity == 0
    one_four = genus_symbol(Lattice([[1, 0], [0, 4]]))
    assert same_genus(one_four, genus_symbol(Lattice([[5, 0], [0, 20]])))
    assert not same_genus(one_four, genus_symbol(Lattice([[3, 0], [0, 12]])))


def test_printed_even_two_adic_constituent():
    g = parse_genus_symbol('2^{-2}_0 3^1 5^1', 14)
    two = [c for c in g.local(2).constituents if c.scale == 1]
    assert len(two) == 1 and not two[0].odd and two[0].sign == -1
    assert same_genus(g, parse_genus_symbol('2^{-2}_II 3^1 5^1', 14))
    assert parse_genus_symbol('2^2_0 3^1 5^{-1}', 14).local(2).constituents[-1].odd


def test_kronecker_at_zero():
    assert kronecker(-3, 0) == 0
    assert kronecker(1, 0) == 1 and kronecker(-1, 0) == 1
    assert kronecker(-3, 2) == -1 and kronecker(5, 4) == 1


def test_milgram_check():
    assert milgram_check(genus_symbol(catalog('E8'))).ok
    assert milgram_check(parse_genus_symbol('3^1', 14)).ok
    assert not milgram_check(parse_genus_symbol('3^6', 14)).ok
    with pytest.raises(ValueError):
        mass(parse_genus_symbol('3^6', 14))


def test_parse_rejects_bad_tokens():
    with pytest.raises(ValueError):
        parse_genus_symbol('6^1', 14)
    with pytest.raises(ValueError):
        parse_genus_symbol('3^1_3', 14)
    with pytest.raises(ValueError):
        parse_genus_symbol('x', 14)


def test_level_and_maximality():
    g = genus_symbol(catalog('E6+E8'))
    assert symbol_level(g) == 3
    assert is_maximal_symbol(g)
    keys = {genus_key(s) for s in list_genus_symbols(14, [3], level=3)}
    assert genus_key(g) in keys


def test_discriminant_form_size():
    form = discriminant_form(catalog('A2'))
    assert form.size == 3
