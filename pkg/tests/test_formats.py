import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outbranch.digraph import Digraph
from outbranch.formats import (
    InstanceFormatError,
    format_instance,
    format_witness,
    parse_instance,
    parse_witness,
)
from outbranch.generate import InstanceSpec, generate
from outbranch.outtree import OutTree


def test_parse_examples():
    assert parse_instance("3 2\n0 1\n1 2\n") == Digraph(3, [(0, 1), (1, 2)])
    g = parse_instance("1 0\n")
    assert g.n == 1 and g.m == 0
    g = parse_instance("# header next\n3 1   # n m\n\n2 0 # an arc\n")
    assert g.arcs() == [(2, 0)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 1\n0 0\n", 2),
        ("2 2\n0 1\n0 1\n", 3),
        ("2 1\n0 2\n", 2),
        ("2 1\n0 x\n", 2),
        ("2\n", 1),
        ("2 1\n0 1\n1 0\n", 3),
        ("", None),
        ("3 2\n0 1\n", None),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(InstanceFormatError) as info:
        parse_instance(text)
    assert info.value.line == line


def test_witness_round_trip():
    t = OutTree.from_arcs(2, [(2, 0), (2, 1), (0, 3)])
    text = format_witness(t)
    assert text.splitlines()[0] == "root 2"
    assert len(text.splitlines()) == 4
    assert parse_witness(text) == t
    with pytest.raises(InstanceFormatError):
        parse_witness("0 1\n")
    with pytest.raises(InstanceFormatError):
        parse_witness("root 0\n1 2\n2 1\n")


def test_generator_examples():
    star = generate(InstanceSpec("out_star", 5))
    assert star.arcs() == [(0, 1), (0, 2), (0, 3), (0, 4)]
    c4 = generate(InstanceSpec("cycle", 4))
    assert c4.arcs() == [(0, 1), (1, 2), (2, 3), (3, 0)]
    a = generate(InstanceSpec("gnp_digraph", 12, 0.3, 42))
    b = generate(InstanceSpec("gnp_digraph", 12, 0.3, 42))
    assert a == b and a.m > 0
    with pytest.raises(ValueError):
        generate(InstanceSpec("gnp_digraph", 5, 1.5))
    with pytest.raises(ValueError):
        generate(InstanceSpec("cycle", 0))
    with pytest.raises(ValueError):
        generate(InstanceSpec("nonsense", 3))


def test_generate_from_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("3 2\n0 1\n1 2\n")
    assert generate(InstanceSpec("file", path=str(path))).arcs() == [(0, 1), (1, 2)]


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(["gnp_digraph", "hamiltonian_gnp", "random_single_source_dag", "path", "cycle", "out_star"]),
    st.integers(1, 25),
    st.floats(0, 1),
    st.integers(0, 2**64 - 1),
)
def test_round_trip_and_determinism(kind, n, p, seed):
    spec = InstanceSpec(kind, n, p, seed)
    g = generate(spec)
    assert parse_instance(format_instance(g)) == g
    assert generate(spec) == g
    if kind == "random_single_source_dag":
        assert g.is_acyclic()
        assert sum(1 for v in range(n) if not g.in_adj[v]) == 1
