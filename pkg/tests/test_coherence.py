"""
Tests for the coherent lift of a witness extender.
"""
import pytest

from common.coherence import CoherentExtender, make_coherent_extender
from common.errors import InputError, PreconditionError
from common.search import graphs_up_to_isomorphism
from common.structures import PartialIso
from common.valuation import build_valuation_witness
from common.verify import Witness, verify_coherence, verify_witness


def coherent_witness(base):
    """H_|base| witness whose extender is replaced by its coherent lift."""
    witness = build_valuation_witness(max(base.n, 1), base)
    lifted = make_coherent_extender(base, witness.extender, witness.host.n)
    return Witness(base, witness.host, witness.embedding, 'valuation-coherent', extender=lifted)


def skewed_extender(base, witness):
    """Sends the identity of P3 to the lift of its reflection."""
    reflection = PartialIso.of(base, {0: 2, 1: 1, 2: 0})

    def extender(partial):
        if len(partial) == 3 and partial.mapping[0] == 0:
            return witness.extender(reflection)
        return witness.extender(partial)
    return extender


@pytest.mark.unit
class TestCoherentExtender:
    """Tests for representatives and connecting maps."""

    def test_representatives_are_first_of_type(self, p3):
        """Test that each subset maps to the first subset of its isomorphism type."""
        witness = build_valuation_witness(3, p3)
        lifted = CoherentExtender(p3, witness.extender, witness.host.n)
        assert lifted.representative([1, 2]) == (0, 1)
        assert lifted.representative([0, 2]) == (0, 2)
        assert lifted.representative([2]) == (0,)

    def test_connecting_is_identity_on_representatives(self, p3):
        """Test that a representative connects to itself by the identity."""
        witness = build_valuation_witness(3, p3)
        lifted = CoherentExtender(p3, witness.extender, witness.host.n)
        assert lifted.connecting([0, 1]).mapping == {0: 0, 1: 1}
        assert lifted.connecting([1, 2]).mapping == {0: 1, 1: 2}

    def test_lift_extends_the_partial_map(self, c5):
        """Test that the lifted extender still extends the transported map."""
        witness = coherent_witness(c5)
        partial = PartialIso.of(c5, {0: 2, 1: 3})
        permutation = witness.extender(partial)
        assert witness.host.is_automorphism(permutation)
        assert permutation[witness.embedding[0]] == witness.embedding[2]
        assert permutation[witness.embedding[1]] == witness.embedding[3]

    def test_non_multiplicative_extender_rejected(self, p3):
        """Test that an extender which is not multiplicative on Aut(C) is refused."""
        witness = build_valuation_witness(3, p3)
        with pytest.raises(PreconditionError):
            make_coherent_extender(p3, skewed_extender(p3, witness), witness.host.n)


@pytest.mark.integration
class TestCoherenceCheck:
    """Tests for verify_coherence."""

    def test_valuation_extender_on_substructures(self, c5):
        """Test that the switch extender is multiplicative on substructure automorphisms."""
        report = verify_coherence(build_valuation_witness(5, c5), scope='substructure')
        assert report.verdict == 'pass'
        assert report.pairs_checked > 0

    def test_lift_is_coherent_on_small_graphs(self):
        """Test zero violations on every composable pair for all graphs on up to four vertices."""
        for n in range(1, 5):
            for base in graphs_up_to_isomorphism(n):
                report = verify_coherence(coherent_witness(base), scope='all-composable')
                assert report.violation is None, f"violation for edges {sorted(base.edges)}: {report.violation}"

    def test_lift_still_verifies(self, p3):
        """Test that the coherent extender passes ordinary verification."""
        assert verify_witness(coherent_witness(p3)).passed

    def test_violation_reported(self, p3):
        """Test that a broken extender yields a violation with the offending pair."""
        witness = build_valuation_witness(3, p3)
        broken = Witness(p3, witness.host, witness.embedding, 'skewed', extender=skewed_extender(p3, witness))
        report = verify_coherence(broken, scope='substructure')
        assert report.verdict == 'fail'
        assert set(report.violation) == {'f', 'g', 'point'}

    def test_unknown_scope(self, p3):
        """Test that an unknown scope raises."""
        with pytest.raises(InputError):
            verify_coherence(build_valuation_witness(3, p3), scope='everything')

    def test_needs_extender(self, p3):
        """Test that a witness without extender cannot be checked."""
        with pytest.raises(InputError):
            verify_coherence(Witness.identity(p3))
