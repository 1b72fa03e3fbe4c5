from fractions import Fraction

import pytest

from dsperfect.catalog import CATALOG_METADATA, catalog, s32_block_choices, s32_gram
from dsperfect.linalg import determinant


def test_metadata_entries_load():
    for name in ('A2', 'A5', 'E6', 'E7', 'E8', 'D12', 'L4', 'f1', 'E6+E8'):
        L = catalog(name)
        assert L.det == CATALOG_METADATA[name][0]


def test_name_grammar():
    assert catalog('(2)').gram == [[2]]
    assert catalog('2/3*A2').det == Fraction(4, 3)
    assert catalog('A2*').det == Fraction(1, 3)
    assert catalog(' E6 + E8 ').dim == 14
    assert catalog('Z3').minimum == 1
    with pytest.raises(ValueError):
        catalog('')
    with pytest.raises(ValueError):
        catalog('X9')


def test_file_source(tmp_path):
    path = tmp_path / "a2.gram"
    catalog('A2').save(path)
    assert catalog(f"file:{path}").det == 3


def test_s32_gram_blocks():
    choices = s32_block_choices()
    assert len(choices) == 15
    G = s32_gram("AAAA")
    assert len(G) == 14 and G[13][13] == 16
    assert determinant(G) != 0
    with pytest.raises(ValueError):
        s32_gram("AAAD")
