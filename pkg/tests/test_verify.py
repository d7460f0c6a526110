"""
Tests for witness verification, partial-automorphism counts and the minimal witness search.
"""
from math import comb, factorial

import pytest

from common.errors import CapacityError, InputError
from common.search import are_isomorphic, graphs_up_to_isomorphism
from common.structures import Graph, PartialIso, complement, complete_graph, cycle_graph, disjoint_cliques, empty_graph
from common.utils import Deadline, EppaConfig
from common.verify import (
    Witness, count_partial_autos, min_witness_search, verify_homogeneous, verify_witness,
)


@pytest.mark.unit
class TestWitness:
    """Tests for the witness record."""

    def test_embedding_checked(self, p3, k3):
        """Test that a non-embedding is rejected on construction."""
        with pytest.raises(InputError):
            Witness(p3, k3, (0, 1, 2))

    def test_transport(self, p3, c5):
        """Test that partial maps are moved along the embedding."""
        witness = Witness(p3, c5, (1, 2, 3))
        partial = PartialIso.of(p3, {0: 2})
        assert witness.transport(partial) == {1: 3}

    def test_default_label(self, p3):
        """Test that unlabelled hosts print vertex numbers."""
        assert Witness.identity(p3).label(2) == "2"


@pytest.mark.unit
class TestVerifyWitness:
    """Tests for verify_witness."""

    def test_c5_is_homogeneous(self, c5):
        """Test that C5 is its own witness."""
        report = verify_homogeneous(c5)
        assert report.passed
        assert report.checked == count_partial_autos(c5)

    def test_p3_is_not_homogeneous(self, p3):
        """Test that P3 fails with a counterexample moving an end to the centre."""
        report = verify_homogeneous(p3)
        assert report.verdict == 'fail'
        assert report.failures
        assert any(f.partial.mapping in ({0: 1}, {2: 1}, {1: 0}, {1: 2}) for f in report.failures)

    def test_wall_time_per_call(self, c5):
        """Test that the reported time excludes time spent before the call on a shared budget."""
        deadline = Deadline()
        deadline.started -= 1000.0
        report = verify_witness(Witness.identity(c5), 'search', deadline=deadline)
        assert report.passed
        assert 0.0 <= report.wall_time < 1000.0

    def test_stop_on_failure(self, p3):
        """Test that stopping early marks the report incomplete."""
        report = verify_witness(Witness.identity(p3), 'search', stop_on_failure=True)
        assert len(report.failures) == 1
        assert not report.complete
        assert report.verdict == 'fail'

    def test_extender_required(self, p3):
        """Test that use-extender needs an extender."""
        with pytest.raises(InputError, match="no extender"):
            verify_witness(Witness.identity(p3), 'use-extender')

    def test_unknown_strategy(self, p3):
        """Test that an unknown strategy raises."""
        with pytest.raises(InputError):
            verify_witness(Witness.identity(p3), 'guess')

    def test_bad_extender_reported(self, c5):
        """Test that an extender returning the identity fails on a rotation."""
        witness = Witness(c5, c5, tuple(range(5)), 'broken', extender=lambda partial: tuple(range(5)))
        report = verify_witness(witness)
        assert not report.passed
        assert "does not extend" in report.failures[0].reason

    def test_base_cap(self):
        """Test the verification base size cap."""
        base = empty_graph(10)
        with pytest.raises(CapacityError):
            verify_witness(Witness.identity(base), 'search')

    def test_report_dict(self, c5):
        """Test the serialized report."""
        data = verify_homogeneous(c5).to_dict()
        assert data['verdict'] == 'pass'
        assert data['host_vertices'] == 5
        assert data['failures'] == []


@pytest.mark.unit
class TestCountPartialAutos:
    """Tests for counting partial automorphisms."""

    def test_single_vertex(self):
        """Test K1: the empty map and the identity."""
        assert count_partial_autos(complete_graph(1)) == 2

    def test_single_edge(self):
        """Test K2: empty map, four one-point maps, two full maps."""
        assert count_partial_autos(complete_graph(2)) == 7

    @pytest.mark.parametrize("n", range(1, 6))
    def test_empty_graph_closed_form(self, n):
        """Test sum over k of C(n,k)^2 k! for the edgeless graph."""
        expected = sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
        assert count_partial_autos(empty_graph(n)) == expected

    def test_complement_invariant(self, p4):
        """Test that a graph and its complement have the same partial automorphisms."""
        assert count_partial_autos(p4) == count_partial_autos(complement(p4))


@pytest.mark.integration
class TestMinWitnessSearch:
    """Tests for the exhaustive smallest-witness search."""

    def test_p3(self, p3):
        """Test that the smallest witness for P3 has four vertices (C4)."""
        result = min_witness_search(p3, max_m=6)
        assert result.value == 4
        assert are_isomorphic(result.witness.host, cycle_graph(4))
        assert verify_witness(result.witness, 'search').passed

    def test_p4(self, p4):
        """Test that the smallest witness for P4 has five vertices (C5)."""
        result = min_witness_search(p4, max_m=6)
        assert result.value == 5
        assert verify_witness(result.witness, 'search').passed

    def test_edge_plus_vertex(self, k2_k1):
        """Test that the smallest witness for K2 + K1 is 2 * K2."""
        result = min_witness_search(k2_k1, max_m=6)
        assert result.value == 4
        assert are_isomorphic(result.witness.host, disjoint_cliques(2, 2))

    def test_homogeneous_base_is_its_own_witness(self, c5):
        """Test that a homogeneous base stops at its own size."""
        result = min_witness_search(c5, max_m=5)
        assert result.value == 5
        assert result.hosts_per_size == {5: 1}

    def test_complement_gives_same_value(self):
        """Test that G and its complement have equal minimal witness size on three vertices."""
        for base in graphs_up_to_isomorphism(3):
            direct = min_witness_search(base, max_m=6)
            flipped = min_witness_search(complement(base), max_m=6)
            assert direct.value == flipped.value

    def test_smaller_hosts_exhausted(self, p3, p4):
        """Test that every host below the reported size was tried and failed."""
        for base, value in ((p3, 4), (p4, 5)):
            result = min_witness_search(base, max_m=6)
            assert result.value == value
            for m in range(base.n, value):
                assert result.verified_per_size[m] == result.hosts_per_size[m]
            assert min_witness_search(base, max_m=value - 1).exhausted

    def test_exhausted(self, p3):
        """Test that a too small bound reports exhaustion."""
        result = min_witness_search(p3, max_m=3)
        assert result.exhausted
        assert result.to_dict()['value'] is None
        assert result.to_dict()['certificate_edges'] is None

    def test_pruned_search_is_conditional(self, p3):
        """Test that pruning to vertex-transitive hosts finds C4 and flags the result."""
        result = min_witness_search(p3, max_m=6, prune_transitive=True)
        assert result.value == 4
        assert result.conditional

    def test_caps(self):
        """Test the base and host caps."""
        with pytest.raises(CapacityError):
            min_witness_search(empty_graph(7), max_m=8)
        with pytest.raises(CapacityError):
            min_witness_search(Graph(2), max_m=11)
        with pytest.raises(CapacityError):
            min_witness_search(Graph(2), max_m=6, config=EppaConfig(search_max_host=5))

    def test_graphs_only(self, transitive_triangle):
        """Test that digraphs are refused."""
        with pytest.raises(InputError):
            min_witness_search(transitive_triangle, max_m=4)
