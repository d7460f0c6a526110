"""
Tests for the directed and hypergraph valuation witnesses, Paley tournaments
and the factorial lower-bound hypergraph.
"""
from itertools import combinations, product

import pytest

from common.errors import InputError
from common.generalized import (
    build_directed_valuation_witness, build_hypergraph_valuation_witness, build_obs_hypergraph,
    build_paley_tournament, decode_residue, directed_lower_bounds, encode_pair_type, is_prime,
    obs_lower_bound, observation_bijections, quadratic_residues, reverse_pair_type,
)
from common.search import find_embedding, is_embedding
from common.structures import Digraph, Hypergraph
from common.verify import Witness, verify_homogeneous, verify_witness


def all_tournaments(n):
    """Every tournament on vertices 0..n-1, one per orientation of the pairs."""
    pairs = list(combinations(range(n), 2))
    for flips in product((False, True), repeat=len(pairs)):
        yield Digraph(n, frozenset((v, u) if flip else (u, v) for (u, v), flip in zip(pairs, flips)))


@pytest.mark.unit
class TestPairTypeCodec:
    """Tests for the residue tables."""

    def test_reverse(self):
        """Test that reversing swaps forward and backward arcs."""
        assert [reverse_pair_type(t) for t in range(4)] == [0, 2, 1, 3]

    @pytest.mark.parametrize("q, types", [(4, range(4)), (3, range(3))])
    def test_encode_decode(self, q, types):
        """Test that encoding then decoding returns each supported type."""
        assert all(decode_residue(q, encode_pair_type(q, t)) == t for t in types)

    def test_z3_has_no_bidirectional_type(self):
        """Test that a bidirectional pair cannot be encoded over Z_3."""
        with pytest.raises(InputError):
            encode_pair_type(3, 3)


@pytest.mark.unit
class TestDirectedValuationWitness:
    """Tests for the Z_4 and Z_3 digraph witnesses."""

    def test_sizes(self):
        """Test n * q^(n-1) vertices."""
        assert build_directed_valuation_witness(2).host.n == 8
        assert build_directed_valuation_witness(3, allow_bidirectional=False).host.n == 27

    def test_z3_host_is_oriented(self):
        """Test that the Z_3 host has no bidirectional pair."""
        witness = build_directed_valuation_witness(3, allow_bidirectional=False)
        assert not witness.host.has_bidirectional()
        assert witness.construction == 'directed-z3'

    def test_bidirectional_base_in_z4(self):
        """Test that a 2-cycle embeds into the Z_4 host."""
        two_cycle = Digraph(2, frozenset({(0, 1), (1, 0)}))
        witness = build_directed_valuation_witness(2, base=two_cycle)
        assert witness.host.pair_type(*witness.embedding) == 3

    def test_bidirectional_base_rejected_in_z3(self):
        """Test that Z_3 refuses a base with a 2-cycle."""
        two_cycle = Digraph(2, frozenset({(0, 1), (1, 0)}))
        with pytest.raises(InputError):
            build_directed_valuation_witness(2, allow_bidirectional=False, base=two_cycle)

    def test_embedding_keeps_direction(self, transitive_triangle):
        """Test that arcs of the base keep their direction in the host."""
        witness = build_directed_valuation_witness(3, allow_bidirectional=False, base=transitive_triangle)
        assert is_embedding(transitive_triangle, witness.host, witness.embedding)

    @pytest.mark.slow
    def test_z3_witness_for_all_tournaments(self):
        """Test that the Z_3 host is a witness for every tournament on three vertices."""
        for tournament in all_tournaments(3):
            witness = build_directed_valuation_witness(3, allow_bidirectional=False, base=tournament)
            report = verify_witness(witness, strategy='search')
            assert report.passed, f"failed for arcs {sorted(tournament.arcs)}"

    def test_lower_bounds(self):
        """Test the multinomial lower bounds for n = 7."""
        assert directed_lower_bounds(7) == {'oriented': 90, 'bidirectional': 180}

    def test_lower_bounds_need_two_vertices(self):
        """Test the minimum order."""
        with pytest.raises(InputError):
            directed_lower_bounds(1)


@pytest.mark.unit
class TestPaley:
    """Tests for Paley tournaments."""

    def test_primes(self):
        """Test the primality helper."""
        assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_residues(self):
        """Test the squares modulo 7."""
        assert quadratic_residues(7) == {1, 2, 4}

    def test_paley_7_is_tournament(self):
        """Test that Paley(7) is a regular tournament."""
        tournament = build_paley_tournament(7)
        assert tournament.is_tournament()
        assert len(tournament.arcs) == 21
        assert all(len(tournament.out_neighbors[v]) == 3 for v in range(7))

    @pytest.mark.parametrize("q", [5, 9, 1])
    def test_invalid_orders(self, q):
        """Test that non-primes and primes 1 mod 4 are refused."""
        with pytest.raises(InputError):
            build_paley_tournament(q)

    def test_paley_3_is_homogeneous(self):
        """Test that the oriented triangle is its own witness."""
        assert verify_homogeneous(build_paley_tournament(3)).passed

    def test_paley_7_witness_for_transitive_triangle(self, transitive_triangle):
        """Test that Paley(7) is a witness for the transitive triangle."""
        host = build_paley_tournament(7)
        embedding = find_embedding(transitive_triangle, host)
        assert embedding is not None
        report = verify_witness(Witness(transitive_triangle, host, embedding, 'paley'), strategy='search')
        assert report.passed


@pytest.mark.unit
class TestHypergraphWitness:
    """Tests for the r-uniform valuation witness and the factorial lower bound."""

    def test_size(self, single_hyperedge):
        """Test n * 2^C(n-1, r-1) vertices for n = 4, r = 3."""
        witness = build_hypergraph_valuation_witness(4, 3, single_hyperedge)
        assert witness.host.n == 32
        assert is_embedding(single_hyperedge, witness.host, witness.embedding)

    def test_uniformity_mismatch(self, single_hyperedge):
        """Test that a 3-uniform base does not go into a 2-uniform witness."""
        with pytest.raises(InputError):
            build_hypergraph_valuation_witness(4, 2, single_hyperedge)

    def test_r_range(self):
        """Test 2 <= r <= n."""
        with pytest.raises(InputError):
            build_hypergraph_valuation_witness(3, 4)

    @pytest.mark.slow
    def test_witness_for_small_hypergraphs(self):
        """Test the witness for every 3-uniform hypergraph on four vertices up to isomorphism."""
        triples = list(combinations(range(4), 3))
        for count in range(len(triples) + 1):
            base = Hypergraph(4, 3, frozenset(triples[:count]))
            report = verify_witness(build_hypergraph_valuation_witness(4, 3, base), strategy='search')
            assert report.passed, f"failed with {count} hyperedges"

    def test_obs_hypergraph_shape(self):
        """Test the k = 1 lower-bound hypergraph."""
        hypergraph = build_obs_hypergraph(1)
        assert hypergraph.n == 4
        assert hypergraph.hyperedges == frozenset({(0, 1, 3)})
        assert build_obs_hypergraph(2).n == 7

    def test_obs_lower_bound(self):
        """Test (2^k)! for k = 1, 2."""
        assert obs_lower_bound(1) == 2
        assert obs_lower_bound(2) == 24

    @pytest.mark.slow
    def test_witness_realises_all_bijections(self):
        """Test that a verified witness for the k = 1 hypergraph shows both bijections."""
        witness = build_hypergraph_valuation_witness(4, 3, build_obs_hypergraph(1))
        assert verify_witness(witness, strategy='search').passed
        assert observation_bijections(witness, 1) == obs_lower_bound(1)

    def test_observation_needs_matching_base(self, single_hyperedge):
        """Test that the bijection count refuses other bases."""
        witness = build_hypergraph_valuation_witness(4, 3, single_hyperedge)
        with pytest.raises(InputError):
            observation_bijections(witness, 1)
