import pytest
from hypothesis import given, settings

from delaycrn import ParseError, format_network, parse_network
from delaycrn.network import NetworkError

from helpers import networks


def test_parse_single_reaction():
    net = parse_network("2 X1 -> 3 X1 + Xi | k=1, tau=0.5")
    assert net.names == ("X1", "Xi")
    (rxn,) = net.reactions
    assert rxn.reactant.coeffs == (2, 0)
    assert rxn.product.coeffs == (3, 1)
    assert rxn.rate_k == 1.0 and rxn.delay_tau == 0.5


def test_parse_minimal_reaction_defaults_tau():
    net = parse_network("A -> B | k=1")
    assert net.names == ("A", "B")
    assert net.reactions[0].reactant.coeffs == (1, 0)
    assert net.reactions[0].product.coeffs == (0, 1)
    assert net.reactions[0].delay_tau == 0.0


def test_species_declaration_fixes_order():
    net = parse_network("species: B A C\nA -> B | k=2\n")
    assert net.names == ("B", "A", "C")
    assert net.reactions[0].reactant.coeffs == (0, 1, 0)


def test_zero_complex_comments_and_compact_terms():
    net = parse_network("# inflow\n0 -> A | k=1  # comment\n2A -> 0 | k=3, tau=1\n")
    assert net.reactions[0].reactant.coeffs == (0,)
    assert net.reactions[1].reactant.coeffs == (2,)
    assert net.reactions[1].product.coeffs == (0,)


def test_repeated_species_on_one_side_add_up():
    net = parse_network("A + A -> B | k=1")
    assert net.reactions[0].reactant.coeffs == (2, 0)


def test_duplicate_reactions_are_kept():
    net = parse_network("A -> B | k=1\nA -> B | k=2, tau=1\n")
    assert net.r == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("A -> A | k=1", "reactant equals product"),
        ("A -> B | k=0", "k must be positive"),
        ("A -> B | k=-1", "k must be positive"),
        ("A -> B | k=1, tau=-0.5", "tau must be non-negative"),
        ("A -> B", "expected '|'"),
        ("A + B | k=1", "expected '->'"),
        ("-1 A -> B | k=1", "negative"),
        ("1.5 A -> B | k=1", "non-integer"),
        ("A -> B | tau=1", "k is required"),
        ("A -> B | k=1, rho=2", "unknown parameter"),
        ("A -> B + | k=1", "missing term"),
        ("species: A\nA -> B | k=1", "not declared"),
        ("", "no reactions"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_network(text)
    assert fragment in str(exc.value)
    assert exc.value.line >= 1 and exc.value.column >= 1


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError) as exc:
        parse_network("A -> B | k=1\n\nB -> C | k=oops\n")
    assert exc.value.line == 3


def test_direct_construction_rejects_equal_complexes():
    from delaycrn.network import Complex, Reaction

    with pytest.raises(NetworkError):
        Reaction(Complex((1,)), Complex((1,)), 1.0)


@given(networks())
@settings(max_examples=100, deadline=None)
def test_format_parse_round_trip(net):
    assert parse_network(format_network(net)) == net
