import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synchro.automaton import Automaton
from synchro.errors import ParseError
from synchro.fileformat import emit_automaton, parse_automaton
from synchro.generate import cerny

C4_TEXT = "4 2\na 2 3 4 1\nb 2 2 3 4\n"


class TestParse:
    def test_family_file(self):
        assert parse_automaton(C4_TEXT) == cerny(4)

    def test_single_state(self):
        aut = parse_automaton("1 1\na 1\n")
        assert aut.n == 1
        assert aut.letters == ("a",)

    def test_out_of_range_image(self):
        with pytest.raises(ParseError) as info:
            parse_automaton("2 1\na 1 3\n")
        assert info.value.line == 2

    def test_bad_header(self):
        with pytest.raises(ParseError) as info:
            parse_automaton("four 2\na 1\n")
        assert info.value.line == 1

    def test_wrong_field_count(self):
        with pytest.raises(ParseError):
            parse_automaton("2 1\na 1\n")

    def test_duplicate_name(self):
        with pytest.raises(ParseError) as info:
            parse_automaton("2 2\na 1 2\na 2 1\n")
        assert info.value.line == 3

    def test_missing_rows(self):
        with pytest.raises(ParseError):
            parse_automaton("2 2\na 1 2\n")

    def test_non_integer_image(self):
        with pytest.raises(ParseError):
            parse_automaton("2 1\na 1 x\n")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_automaton("")

    def test_trailing_newlines_tolerated(self):
        assert parse_automaton(C4_TEXT + "\n\n") == cerny(4)


class TestEmit:
    def test_canonical_bytes(self):
        assert emit_automaton(cerny(4)) == C4_TEXT

    def test_round_trip_family(self):
        for n in range(2, 9):
            aut = cerny(n)
            assert parse_automaton(emit_automaton(aut)) == aut

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_round_trip_random(self, data):
        n = data.draw(st.integers(1, 6))
        k = data.draw(st.integers(1, 4))
        rows = tuple(
            tuple(data.draw(st.integers(0, n - 1)) for _ in range(n))
            for _ in range(k)
        )
        aut = Automaton(tuple("wxyz"[:k]), rows)
        assert parse_automaton(emit_automaton(aut)) == aut
