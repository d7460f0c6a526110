"""
Tests for the Kneser-type witnesses over edges and half-edges.
"""
import numpy as np
import pytest

from common.errors import CapacityError, InputError
from common.kneser import (
    ArcUniverse, EdgeUniverse, Element, KneserGraph, RelationalKneserHost, build_kneser_witness,
    build_relational_kneser_witness, extend_in_kneser_witness, kneser_bound_for_graph, kneser_size_bound,
    relational_size,
)
from common.structures import Digraph, Graph
from common.utils import EppaConfig
from common.verify import verify_witness


@pytest.fixture
def star():
    """K_{1,3} with centre 0."""
    return Graph(4, frozenset({(0, 1), (0, 2), (0, 3)}))


@pytest.mark.unit
class TestKneserPieces:
    """Tests for the ground set, the host and the size formulas."""

    def test_universe_size(self, c5):
        """Test |E'| = dn - m."""
        universe = EdgeUniverse.for_graph(c5, 3)
        assert len(universe) == 3 * 5 - 5
        assert all(len(incident) == 3 for incident in universe.incident)

    def test_universe_rejects_small_d(self, star):
        """Test that d below the maximum degree is refused."""
        with pytest.raises(InputError):
            EdgeUniverse.for_graph(star, 2)

    def test_element_names(self):
        """Test 1-based element names."""
        assert Element('e', 0, 1).describe() == "e(1,2)"
        assert Element('h', 2, 1).describe() == "h(3.1)"

    def test_kneser_graph_edges(self):
        """Test the intersection graph of 2-subsets of a 5-set."""
        host = KneserGraph(5, 2)
        assert host.n == 10
        assert host.edge_count() == len(host.relation_tuples()) == 30
        assert host.has_edge(host.index([0, 1]), host.index([1, 2]))
        assert not host.has_edge(host.index([0, 1]), host.index([2, 3]))

    def test_size_bound(self):
        """Test C(dn - m, d) on the odd cycles."""
        assert kneser_size_bound(5, 5, 2) == 10
        assert kneser_size_bound(7, 7, 2) == 21

    def test_bound_for_graph_uses_complement(self, c5):
        """Test that C5 gives 10 both directly and through its complement."""
        bound = kneser_bound_for_graph(c5)
        assert bound['d'] == 2
        assert bound['direct'] == 10
        assert bound['complement'] == 10
        assert bound['best'] == 10

    def test_relational_size(self):
        """Test C(2dn - m, d) * C(2dn - m - d, d)."""
        assert relational_size(2, 1, 1) == 6


@pytest.mark.integration
class TestKneserWitness:
    """End-to-end tests of the Kneser witness."""

    def test_c5(self, c5):
        """Test the ten-vertex witness for C5."""
        witness = build_kneser_witness(c5)
        assert witness.host.n == 10
        assert witness.metadata == {'d': 2, 'elements': 5}
        report = verify_witness(witness)
        assert report.passed
        assert not report.failures

    def test_c7(self, c7):
        """Test the 21-vertex witness for C7."""
        witness = build_kneser_witness(c7)
        assert witness.host.n == 21
        assert verify_witness(witness).passed

    def test_star_with_half_edges(self, star):
        """Test a witness with half-edges on every leaf."""
        witness = build_kneser_witness(star, d=3)
        assert witness.host.n == 84
        assert verify_witness(witness).passed

    def test_extension_by_element_permutation(self, c5):
        """Test that a partial rotation of C5 lifts to an automorphism moving the embedded vertices."""
        witness = build_kneser_witness(c5)
        universe = EdgeUniverse.for_graph(c5, 2)
        permutation = extend_in_kneser_witness(c5, universe, witness.host, {0: 1, 1: 2})
        assert witness.host.is_automorphism(permutation)
        assert permutation[witness.embedding[0]] == witness.embedding[1]
        assert permutation[witness.embedding[1]] == witness.embedding[2]

    def test_k2_gives_triangle(self):
        """Test that K_2 with d = 2 has ground set {e, h_u, h_v} and host K_3."""
        witness = build_kneser_witness(Graph(2, frozenset({(0, 1)})), d=2)
        assert witness.metadata == {'d': 2, 'elements': 3}
        assert witness.host.n == 3
        assert len(witness.host.relation_tuples()) == 3
        assert verify_witness(witness).passed

    @pytest.mark.parametrize("seed", range(5))
    def test_element_permutations_are_automorphisms(self, c5, seed):
        """Test that random permutations of the ground set act as host automorphisms."""
        host = build_kneser_witness(c5, d=3).host
        rng = np.random.default_rng(seed)
        sigma = tuple(int(x) for x in rng.permutation(host.ground))
        assert host.is_automorphism(host.element_action(sigma))

    def test_labels_name_elements(self, c5):
        """Test that embedded vertices are labelled by their incident edges."""
        witness = build_kneser_witness(c5)
        assert witness.label(witness.embedding[0]) == "{e(1,2), e(1,5)}"

    def test_small_d_rejected(self, star):
        """Test that d must reach the maximum degree."""
        with pytest.raises(InputError):
            build_kneser_witness(star, d=2)

    def test_size_cap(self, c7):
        """Test the Kneser size cap."""
        with pytest.raises(CapacityError):
            build_kneser_witness(c7, config=EppaConfig(kneser_max_vertices=20))


@pytest.mark.integration
class TestRelationalKneserWitness:
    """Tests for the digraph variant over arcs and directed half-edges."""

    def test_single_arc(self):
        """Test the six-vertex witness for a single arc."""
        arc = Digraph(2, frozenset({(0, 1)}))
        witness = build_relational_kneser_witness(arc)
        assert witness.host.n == 6
        assert witness.construction == 'relational-kneser'
        assert verify_witness(witness, strategy='both').passed

    def test_host_is_loopless(self):
        """Test that no host vertex points to itself."""
        arc = Digraph(2, frozenset({(0, 1)}))
        host = build_relational_kneser_witness(arc).host
        assert all(u != v for u, v in host.arcs)

    def test_oriented_triangle(self, oriented_triangle):
        """Test the d = 2 witness for the oriented triangle under both strategies."""
        witness = build_relational_kneser_witness(oriented_triangle, d=2)
        assert witness.host.n == relational_size(3, 3, 2)
        assert verify_witness(witness, strategy='both').passed

    def test_empty_digraph_images_unrelated(self):
        """Test that the images of an arcless digraph carry no arcs among them."""
        witness = build_relational_kneser_witness(Digraph(3))
        images = set(witness.embedding)
        assert len(images) == 3
        assert not any(u in images and v in images for u, v in witness.host.arcs)

    @pytest.mark.parametrize("seed", range(3))
    def test_element_permutations_are_automorphisms(self, seed):
        """Test that random permutations of the arc ends act as host automorphisms."""
        path = Digraph(3, frozenset({(0, 1), (1, 2)}))
        universe = ArcUniverse.for_digraph(path, 1)
        host = RelationalKneserHost(universe)
        rng = np.random.default_rng(seed)
        sigma = tuple(int(x) for x in rng.permutation(len(universe)))
        assert host.digraph.is_automorphism(host.element_action(sigma))
