"""
Tests for the eppa command-line entry point.
"""
import json
import os
from unittest.mock import patch

import pytest

from eppa import EXIT_CAPACITY, EXIT_FAIL, EXIT_OK, EXIT_USAGE, cli_main


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.unit
class TestUsage:
    """Argument handling and exit codes."""

    def test_no_subcommand(self, capsys):
        """Test that a missing subcommand is a usage error."""
        code, _ = run_cli(capsys)
        assert code == EXIT_USAGE

    def test_random_exp_requires_seed(self, capsys):
        """Test that experiments refuse to run unseeded."""
        code, _ = run_cli(capsys, 'random-exp', '--n', '8', '--p', '1/2')
        assert code == EXIT_USAGE

    def test_malformed_input(self, capsys, fixtures_dir):
        """Test that a format error exits with the usage code."""
        code, out = run_cli(capsys, 'bounds', 'hrus', '--input', str(fixtures_dir / "duplicate_edge.graph"))
        assert code == EXIT_USAGE
        assert out == ""

    def test_missing_file(self, capsys, tmp_path):
        """Test that an unreadable input is reported as a failure."""
        code, _ = run_cli(capsys, 'bounds', 'hrus', '--input', str(tmp_path / "absent.graph"))
        assert code == EXIT_FAIL

    def test_capacity(self, capsys):
        """Test that a construction beyond its cap exits with the capacity code."""
        code, _ = run_cli(capsys, 'witness', 'valuation', '--n', '20')
        assert code == EXIT_CAPACITY

    def test_cap_from_environment(self, capsys):
        """Test that EPPA_* variables lower the caps."""
        with patch('common.utils.load_dotenv'):
            with patch.dict(os.environ, {'EPPA_VALUATION_MAX_N': '2'}):
                code, _ = run_cli(capsys, 'witness', 'valuation', '--n', '3')
        assert code == EXIT_CAPACITY

    def test_wrong_structure_kind(self, capsys, fixtures_dir):
        """Test that a digraph is refused where a graph is needed."""
        code, _ = run_cli(capsys, 'search-min', '--input', str(fixtures_dir / "transitive_triangle.digraph"),
                          '--max-m', '4')
        assert code == EXIT_USAGE


@pytest.mark.integration
class TestWitnessCommands:
    """Building and verifying witnesses."""

    def test_kneser_verify(self, capsys, fixtures_dir):
        """Test the Kneser witness for C5."""
        code, out = run_cli(capsys, 'witness', 'kneser', '--input', str(fixtures_dir / "c5.graph"), '--verify')
        assert code == EXIT_OK
        assert "vertices=10" in out
        assert "verdict=pass" in out

    def test_valuation_output_with_labels(self, capsys, fixtures_dir, tmp_path):
        """Test writing a valuation host and its label sidecar."""
        path = tmp_path / "h3.graph"
        code, out = run_cli(capsys, 'witness', 'valuation', '--input', str(fixtures_dir / "p3.graph"),
                            '--output', str(path))
        assert code == EXIT_OK
        assert "vertices=12" in out
        assert path.read_text(encoding='utf-8').startswith("graph 12\n")
        labels = json.loads((tmp_path / "h3.graph.labels.json").read_text(encoding='utf-8'))
        assert len(labels) == 12

    def test_verify_counterexample(self, capsys, fixtures_dir):
        """Test that P3 is not its own witness."""
        p3 = str(fixtures_dir / "p3.graph")
        code, out = run_cli(capsys, 'verify', '--g', p3, '--h', p3)
        assert code == EXIT_FAIL
        assert "verdict=fail" in out
        assert "counterexample" in out

    def test_verify_explicit_embedding(self, capsys, fixtures_dir):
        """Test that C5 verifies as its own witness under the identity."""
        c5 = str(fixtures_dir / "c5.graph")
        code, out = run_cli(capsys, 'verify', '--g', c5, '--h', c5, '--embedding', '0,1,2,3,4')
        assert code == EXIT_OK
        assert "verdict=pass" in out

    def test_bad_embedding(self, capsys, fixtures_dir):
        """Test that an unreadable embedding is a usage error."""
        c5 = str(fixtures_dir / "c5.graph")
        code, _ = run_cli(capsys, 'verify', '--g', c5, '--h', c5, '--embedding', 'a,b')
        assert code == EXIT_USAGE

    def test_paley_tournament(self, capsys, fixtures_dir):
        """Test that the Paley tournament on seven vertices witnesses the transitive triangle."""
        code, out = run_cli(capsys, 'paley', '--q', '7', '--input',
                            str(fixtures_dir / "transitive_triangle.digraph"), '--verify')
        assert code == EXIT_OK
        assert "construction=paley-7" in out
        assert "strategy=search" in out

    def test_search_min(self, capsys, fixtures_dir):
        """Test that the smallest witness for P3 has four vertices."""
        code, out = run_cli(capsys, 'search-min', '--input', str(fixtures_dir / "p3.graph"), '--max-m', '5')
        assert code == EXIT_OK
        assert "value=4" in out

    def test_search_min_disjoint_edge(self, capsys, fixtures_dir, tmp_path):
        """Test that K_2 + K_1 needs four vertices and the certificate is written."""
        path = tmp_path / "certificate.graph"
        code, out = run_cli(capsys, 'search-min', '--input', str(fixtures_dir / "k2_k1.graph"), '--max-m', '4',
                            '--output', str(path))
        assert code == EXIT_OK
        assert "value=4" in out
        assert path.read_text(encoding='utf-8').startswith("graph 4\n")

    def test_hypergraph_witness(self, capsys, fixtures_dir):
        """Test the 3-uniform valuation witness for a single hyperedge."""
        code, out = run_cli(capsys, 'witness', 'hypergraph', '--input', str(fixtures_dir / "single_edge.hypergraph"))
        assert code == EXIT_OK
        assert "construction=hypergraph-valuation vertices=32" in out

    def test_search_min_exhausted(self, capsys, fixtures_dir):
        """Test that a too-small limit fails."""
        code, out = run_cli(capsys, 'search-min', '--input', str(fixtures_dir / "p3.graph"), '--max-m', '3')
        assert code == EXIT_FAIL
        assert out.startswith("exhausted")

    def test_coherence(self, capsys, fixtures_dir):
        """Test the lifted extender for P3."""
        code, out = run_cli(capsys, 'coherence', '--input', str(fixtures_dir / "p3.graph"))
        assert code == EXIT_OK
        assert out.startswith("verdict=pass")


@pytest.mark.integration
class TestBoundsCommands:
    """Bounds, tables and the catalog."""

    def test_cycles(self, capsys):
        """Test the C7 bracket."""
        code, out = run_cli(capsys, 'bounds', 'cycles', '--n', '7')
        assert code == EXIT_OK
        assert out.strip() == "lower=9 upper=21"

    def test_hrus_half_graph(self, capsys):
        """Test the bound for the half graph of order three."""
        code, out = run_cli(capsys, 'bounds', 'hrus', '--family', 'half', '--size', '3')
        assert code == EXIT_OK
        value = int(out.splitlines()[0].split('=')[1])
        assert value >= 8

    def test_hrus_needs_input(self, capsys):
        """Test that hrus without a graph is a usage error."""
        code, _ = run_cli(capsys, 'bounds', 'hrus')
        assert code == EXIT_USAGE

    @pytest.mark.parametrize("family", ['half', 'half-star'])
    def test_hrus_family_needs_size(self, capsys, family):
        """Test that a family without --size is a usage error."""
        code, out = run_cli(capsys, 'bounds', 'hrus', '--family', family)
        assert code == EXIT_USAGE
        assert out == ""

    def test_degrees(self, capsys, fixtures_dir):
        """Test the degree report for C7."""
        code, out = run_cli(capsys, 'bounds', 'degrees', '--input', str(fixtures_dir / "c7.graph"))
        assert code == EXIT_OK
        assert out.startswith("d=2 k=2")

    def test_table(self, capsys):
        """Test the bounds table header and rows."""
        code, out = run_cli(capsys, 'bounds', 'table', '--n', '6')
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "n cycle_lower cycle_upper"
        assert "n eppa_lower eppa_upper oriented_lower bidirectional_lower" in lines
        assert len(lines) == 2 + 4 + 6

    def test_catalog(self, capsys):
        """Test the catalog listing without verification."""
        code, out = run_cli(capsys, 'catalog', '--max-param', '2')
        assert code == EXIT_OK
        assert len(out.splitlines()) == 2 + 2 * 4


@pytest.mark.integration
class TestRandomExperiment:
    """Seeded experiments and run records."""

    def test_reproducible(self, capsys):
        """Test that the same seed prints the same statistics."""
        argv = ['random-exp', '--n', '10', '--p', '1/2', '--samples', '4', '--seed', '5']
        _, first = run_cli(capsys, *argv)
        _, second = run_cli(capsys, *argv)
        assert first == second
        assert len(json.loads(first)['values']) == 4

    def test_results_file(self, capsys, tmp_path):
        """Test that --results appends one record per run."""
        path = tmp_path / "results.jsonl"
        argv = ['random-exp', '--n', '8', '--p', '0.3', '--samples', '2', '--seed', '1', '--results', str(path)]
        assert run_cli(capsys, *argv)[0] == EXIT_OK
        assert run_cli(capsys, *argv)[0] == EXIT_OK

        records = [json.loads(line) for line in path.read_text(encoding='utf-8').splitlines()]
        assert len(records) == 2
        assert records[0]['seed'] == 1
        assert records[0]['command'] == argv
        assert records[0]['outputs']['exit_code'] == EXIT_OK

    def test_results_digest_of_inputs(self, capsys, tmp_path, fixtures_dir):
        """Test that commands reading files record the input digest."""
        path = tmp_path / "results.jsonl"
        run_cli(capsys, 'bounds', 'degrees', '--input', str(fixtures_dir / "c5.graph"), '--results', str(path))
        record = json.loads(path.read_text(encoding='utf-8'))
        assert len(record['input_digest']) == 64
        assert record['outputs']['degrees']['d'] == 2
