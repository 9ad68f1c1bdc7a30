import pytest
from hypothesis import given, strategies as st

from relalg.algebra import AtomStructure
from relalg.constructions import lyndon, mackenzie
from relalg.errors import FormatError
from relalg.proper import abstract, full_re
from relalg.raformat import format_ra, load_algebra, parse_ra, read_ra, write_ra

MACKENZIE_TEXT = """\
# MacKenzie
atoms: 1' a a~ b
identity: 1'
converse: 1'=1' a=a~ a~=a b=b
1';1' = 1'
1';a = a
1';a~ = a~
1';b = b
a;1' = a
a;a = a
a;a~ = 1
a;b = a+b
a~;1' = a~
a~;a = 1
a~;a~ = a~
a~;b = a~+b
b;1' = b
b;a = a+b
b;a~ = a~+b
b;b = 1'+a+a~
"""


def test_parse_known_text():
    assert parse_ra(MACKENZIE_TEXT) == mackenzie()


@pytest.mark.parametrize("structure", [mackenzie(), lyndon(5), abstract(full_re(2))])
def test_roundtrip(structure, tmp_path):
    assert parse_ra(format_ra(structure)) == structure
    path = tmp_path / "x.ra"
    write_ra(structure, path, comment="roundtrip")
    assert read_ra(path) == structure
    assert load_algebra(path).structure == structure


@pytest.mark.parametrize("text, fragment", [
    ("", "atoms"),
    ("atoms: a a\nidentity: a\nconverse: a=a\na;a = a\n", "duplicate"),
    ("atoms: e\nidentity: e\nconverse: e=e\n", "missing"),
    ("atoms: e\nidentity: e\nconverse: e=e\ne;e = f\n", "unknown atom"),
    ("atoms: e\nidentity: e\nconverse: e=e\ne;e = e\ne;e = e\n", "duplicate"),
    ("atoms: e\nidentity: e\nconverse:\ne;e = e\n", "converse missing"),
    ("atoms: e\nconverse: e=e\n", "identity"),
])
def test_format_errors(text, fragment):
    with pytest.raises(FormatError) as info:
        parse_ra(text)
    assert fragment in str(info.value)


def test_error_carries_line_number():
    text = "atoms: e\nidentity: e\nconverse: e=e\nnonsense\n"
    with pytest.raises(FormatError) as info:
        parse_ra(text)
    assert info.value.line == 4


@st.composite
def structures(draw):
    """Arbitrary (not necessarily valid) atom tables with symmetric atoms."""
    m = draw(st.integers(1, 4))
    names = tuple(f"t{i}" for i in range(m))
    comp = tuple(tuple(draw(st.integers(0, (1 << m) - 1)) for _ in range(m)) for _ in range(m))
    identity = draw(st.integers(1, (1 << m) - 1))
    perm = draw(st.permutations(range(m)))
    return AtomStructure(names, identity, tuple(perm), comp)


@given(structures())
def test_roundtrip_arbitrary_tables(s):
    assert parse_ra(format_ra(s)) == s
