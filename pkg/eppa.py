#!/usr/bin/env python3
"""
Build, verify and bound EPPA-witnesses from the command line.

Examples:
    python eppa.py witness kneser --input tests/fixtures/c5.graph --verify
    python eppa.py verify --g tests/fixtures/p3.graph --h tests/fixtures/p3.graph
    python eppa.py bounds cycles --n 7
    python eppa.py random-exp --n 32 --p 1/2 --samples 50 --seed 7
"""

import argparse
import dataclasses
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from common.bounds import (
    build_half_graph, build_half_star_graph, cycle_bounds, degree_bounds, eppa_bracket, lower_bound_hrus,
)
from common.coherence import make_coherent_extender
from common.errors import CapacityError, EppaError, FormatError, InputError
from common.experiments import random_experiment
from common.formats import parse_structure, read_text, write_structure
from common.generalized import (
    build_directed_valuation_witness, build_hypergraph_valuation_witness, build_paley_tournament,
    directed_lower_bounds,
)
from common.homogeneous import CLIQUES, CO_CLIQUES, catalog_witness, homogeneous_catalog
from common.kkfree import build_kkfree_witness
from common.kneser import build_kneser_witness, build_relational_kneser_witness, kneser_bound_for_graph
from common.logger import setup_logger
from common.search import find_embedding, is_embedding
from common.storage import RunRecord, input_digest, write_results
from common.structures import Digraph, Graph, Hypergraph, Structure
from common.utils import VERSION, Deadline, EppaConfig
from common.valuation import build_valuation_witness
from common.verify import STRATEGIES, Witness, min_witness_search, verify_coherence, verify_witness

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

logger = setup_logger('eppa')


class Run:
    """State shared by one invocation: configuration, input texts and the run record outputs."""

    def __init__(self, args: argparse.Namespace, config: EppaConfig):
        self.args = args
        self.config = config
        self.texts: List[str] = []
        self.outputs: Dict[str, Any] = {}
        self.seed: Optional[int] = None

    def load(self, path: str) -> Structure:
        text = read_text(path)
        self.texts.append(text)
        logger.info(f"Loaded structure from {path}")
        return parse_structure(text)

    def emit(self, line: str) -> None:
        print(line)

    def digest(self) -> Optional[str]:
        return input_digest(''.join(self.texts)) if self.texts else None


def build_config(args: argparse.Namespace) -> EppaConfig:
    config = EppaConfig.from_env()
    changes: Dict[str, Any] = {}
    if args.max_vertices is not None:
        changes.update(kneser_max_vertices=args.max_vertices, kkfree_max_vertices=args.max_vertices,
                       generalized_max_vertices=args.max_vertices)
    if args.max_hosts is not None:
        changes['max_hosts'] = args.max_hosts
    if args.timeout_secs is not None:
        changes['timeout_secs'] = args.timeout_secs
    return dataclasses.replace(config, **changes) if changes else config


def log_configuration(config: EppaConfig) -> None:
    logger.info("=== eppa configuration ===")
    for item in dataclasses.fields(config):
        logger.info(f"  {item.name} = {getattr(config, item.name)}")
    logger.info("==========================")


def run_verification(run: Run, witness: Witness, strategy: Optional[str] = None) -> int:
    strategy = strategy or ('use-extender' if witness.extender is not None else 'search')
    report = verify_witness(witness, strategy, config=run.config, deadline=Deadline(run.config.timeout_secs))
    run.outputs['verification'] = report.to_dict()
    run.emit(f"verdict={report.verdict} checked={report.checked} extended={report.extended} strategy={strategy}")
    if report.failures:
        first = report.failures[0]
        run.emit(f"counterexample: {first.partial.describe()} ({first.reason})")
    return EXIT_OK if report.passed else EXIT_FAIL


def finish_witness(run: Run, witness: Witness) -> int:
    host = witness.host
    relations = len(host.relation_tuples())
    run.outputs.update(construction=witness.construction, vertices=host.n, relations=relations)
    run.emit(f"construction={witness.construction} vertices={host.n} relations={relations}")
    run.emit(f"embedding={' '.join(witness.label(v) for v in witness.embedding)}")
    if run.args.output:
        write_structure(host, run.args.output, witness.label)
    if run.args.verify:
        return run_verification(run, witness, run.args.strategy)
    return EXIT_OK


def _require(structure: Structure, kind: type, what: str) -> Any:
    if not isinstance(structure, kind):
        raise InputError(f"{what} needs a {kind.__name__.lower()}, got a {structure.kind}")
    return structure


def cmd_witness(run: Run) -> int:
    args = run.args
    base = run.load(args.input) if args.input else None
    construction = args.construction
    if construction == 'valuation':
        graph = _require(base, Graph, 'valuation witness') if base is not None else None
        order = args.n if args.n is not None else (graph.n if graph is not None else None)
        if order is None:
            raise InputError("valuation witness needs --n or --input")
        witness = build_valuation_witness(order, graph, run.config)
    elif construction == 'kneser':
        if base is None:
            raise InputError("kneser witness needs --input")
        if isinstance(base, Digraph):
            witness = build_relational_kneser_witness(base, args.d, run.config)
        else:
            witness = build_kneser_witness(_require(base, Graph, 'kneser witness'), args.d, run.config)
    elif construction == 'kkfree':
        if base is None:
            raise InputError("K_k-free witness needs --input")
        witness = build_kkfree_witness(_require(base, Graph, 'K_k-free witness'), args.k, run.config)
    elif construction == 'directed':
        digraph = _require(base, Digraph, 'directed witness') if base is not None else None
        order = args.n if args.n is not None else (digraph.n if digraph is not None else None)
        if order is None:
            raise InputError("directed witness needs --n or --input")
        witness = build_directed_valuation_witness(order, not args.no_bidirectional, digraph, run.config)
    else:
        hypergraph = _require(base, Hypergraph, 'hypergraph witness') if base is not None else None
        order = args.n if args.n is not None else (hypergraph.n if hypergraph is not None else None)
        r = args.r if args.r is not None else (hypergraph.r if hypergraph is not None else None)
        if order is None or r is None:
            raise InputError("hypergraph witness needs --n and --r, or --input")
        witness = build_hypergraph_valuation_witness(order, r, hypergraph, run.config)
    return finish_witness(run, witness)


def _embedding_for(base: Structure, host: Structure, text: Optional[str]) -> Tuple[int, ...]:
    if text:
        try:
            return tuple(int(token) for token in text.replace(',', ' ').split())
        except ValueError:
            raise InputError(f"cannot read embedding {text!r}; give host vertices separated by commas")
    identity = tuple(range(base.n))
    if base.n <= host.n and is_embedding(base, host, identity):
        return identity
    found = find_embedding(base, host)
    if found is None:
        raise InputError("the base does not embed into the host")
    return found


def cmd_verify(run: Run) -> int:
    base = run.load(run.args.g)
    host = run.load(run.args.h)
    witness = Witness(base, host, _embedding_for(base, host, run.args.embedding), 'file')
    return run_verification(run, witness, 'search')


def cmd_bounds(run: Run) -> int:
    args = run.args
    if args.bound == 'cycles':
        bounds = cycle_bounds(args.n)
        run.outputs.update(bounds.to_dict())
        run.emit(f"lower={bounds.lower} upper={bounds.upper}")
        return EXIT_OK
    if args.bound == 'table':
        return _bounds_table(run, args.n)

    graph = _structure_for_bounds(run)
    if args.bound == 'hrus':
        certificate = lower_bound_hrus(graph, args.mode, run.config)
        certificate.validate(graph)
        run.outputs['certificate'] = certificate.to_dict()
        run.emit(f"value={certificate.value}")
        run.emit(f"independent_set={' '.join(map(str, certificate.independent_set))} "
                 f"complemented={str(certificate.complemented).lower()}")
        run.emit(f"witnesses={' '.join(f'{v}:{k}' for v, k in certificate.witnesses)}")
        kneser = kneser_bound_for_graph(graph)
        run.outputs['kneser_upper'] = kneser['best']
        run.emit(f"kneser_upper={kneser['best']}")
        return EXIT_OK

    report = degree_bounds(graph)
    run.outputs['degrees'] = report.to_dict()
    run.emit(f"d={report.max_degree} k={report.neighbourhood_independence} bound={report.bound}")
    if report.triangle_free_bound is not None:
        run.emit(f"triangle_free_bound={report.triangle_free_bound}")
    if report.informational is not None:
        run.emit(f"informational={report.informational}")
    for note in report.notes:
        run.emit(f"note: {note}")
    return EXIT_OK


def _structure_for_bounds(run: Run) -> Graph:
    args = run.args
    if args.input:
        return _require(run.load(args.input), Graph, 'bounds')
    if args.family and args.size is None:
        raise InputError("--family needs --size")
    if args.family == 'half-star':
        return build_half_star_graph(args.size)
    if args.family == 'half':
        return build_half_graph(args.size)
    raise InputError("bounds needs --input or --family with --size")


def _bounds_table(run: Run, limit: int) -> int:
    rows = []
    run.emit("n cycle_lower cycle_upper")
    for n in range(3, limit + 1):
        bounds = cycle_bounds(n)
        rows.append(bounds.to_dict())
        run.emit(f"{n} {bounds.formula_lower} {bounds.formula_upper}")
    run.emit("n eppa_lower eppa_upper oriented_lower bidirectional_lower")
    for n in range(1, limit + 1):
        lower, upper = eppa_bracket(n)
        directed = directed_lower_bounds(n) if n >= 2 else {'oriented': 1, 'bidirectional': 1}
        run.emit(f"{n} {lower} {upper} {directed['oriented']} {directed['bidirectional']}")
    run.outputs['cycles'] = rows
    return EXIT_OK


def cmd_catalog(run: Run) -> int:
    code = EXIT_OK
    results = []
    limit = run.args.max_param
    for entry in homogeneous_catalog():
        params_list = [(s, t) for s in range(1, limit + 1) for t in range(1, limit + 1)] \
            if entry.family in (CLIQUES, CO_CLIQUES) else [None]
        for params in params_list:
            witness = catalog_witness(entry, params, run.config)
            line = f"{witness.construction} vertices={witness.host.n}"
            if run.args.verify:
                strategy = 'use-extender' if witness.extender is not None else 'search'
                report = verify_witness(witness, strategy, config=run.config)
                line += f" verdict={report.verdict}"
                results.append({'entry': witness.construction, 'verdict': report.verdict})
                if not report.passed:
                    code = EXIT_FAIL
            run.emit(line)
    run.outputs['catalog'] = results
    return code


def cmd_search_min(run: Run) -> int:
    base = _require(run.load(run.args.input), Graph, 'minimal witness search')
    result = min_witness_search(base, run.args.max_m, run.args.prune_transitive, run.config)
    run.outputs['search'] = result.to_dict()
    if result.exhausted:
        run.emit(f"exhausted: no witness on at most {run.args.max_m} vertices")
        return EXIT_FAIL
    suffix = " (conditional on vertex-transitivity of smallest witnesses)" if result.conditional else ""
    run.emit(f"value={result.value}{suffix}")
    run.emit(f"certificate={' '.join(f'{u}-{v}' for u, v in result.witness.host.relation_tuples())}")
    if run.args.output:
        write_structure(result.witness.host, run.args.output)
    return EXIT_OK


def cmd_random_exp(run: Run) -> int:
    args = run.args
    run.seed = args.seed
    report = random_experiment(args.n, args.p, args.samples, args.seed, args.mode, run.config)
    statistics = report.to_dict()
    run.outputs['statistics'] = statistics
    run.emit(json.dumps(statistics, sort_keys=True))
    return EXIT_OK


def cmd_coherence(run: Run) -> int:
    base = _require(run.load(run.args.input), Graph, 'coherence check')
    order = run.args.n if run.args.n is not None else base.n
    witness = build_valuation_witness(order, base, run.config)
    lifted = make_coherent_extender(base, witness.extender, witness.host.n, run.config)
    coherent = dataclasses.replace(witness, extender=lifted, construction='coherent-valuation')
    report = verify_coherence(coherent, run.args.scope, run.config)
    run.outputs['coherence'] = report.to_dict()
    run.emit(f"verdict={report.verdict} pairs={report.pairs_checked}")
    if report.violation:
        run.emit(f"violation: f={report.violation['f']} g={report.violation['g']} point={report.violation['point']}")
    return EXIT_OK if report.violation is None else EXIT_FAIL


def cmd_paley(run: Run) -> int:
    tournament = build_paley_tournament(run.args.q)
    base = _require(run.load(run.args.input), Digraph, 'Paley witness') if run.args.input else tournament
    embedding = _embedding_for(base, tournament, None)
    witness = Witness(base, tournament, embedding, f"paley-{run.args.q}")
    return finish_witness(run, witness)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--debug", action="store_true", help="Enable debug logging")
    common.add_argument("--max-vertices", type=int, help="Cap on constructed host sizes")
    common.add_argument("--max-hosts", type=int, help="Cap on hosts per size in minimal witness search")
    common.add_argument("--timeout-secs", type=float, help="Wall-clock budget in seconds (0 = none)")
    common.add_argument("--results", nargs='?', const='', default=None,
                        help="Append a run record to this JSON-lines file (default: EPPA_RESULTS_FILE)")

    witness_flags = argparse.ArgumentParser(add_help=False)
    witness_flags.add_argument("--verify", action="store_true", help="Verify the built witness")
    witness_flags.add_argument("--strategy", choices=STRATEGIES, help="Verification strategy")
    witness_flags.add_argument("--output", help="Write the host in text format (plus a .labels.json sidecar)")

    parser = argparse.ArgumentParser(description=f"EPPA witness toolkit (version {VERSION})")
    commands = parser.add_subparsers(dest="command", required=True)

    witness = commands.add_parser("witness", help="Build a witness", parents=[common, witness_flags])
    witness.add_argument("construction", choices=['valuation', 'kneser', 'kkfree', 'directed', 'hypergraph'])
    witness.add_argument("--input", help="Base structure file")
    witness.add_argument("--n", type=int, help="Order of the valuation construction")
    witness.add_argument("--d", type=int, help="Kneser subset size (default: max(2, max degree))")
    witness.add_argument("--k", type=int, default=3, help="Forbidden clique size (default: 3)")
    witness.add_argument("--r", type=int, help="Hypergraph uniformity")
    witness.add_argument("--no-bidirectional", action="store_true", help="Use the Z_3 directed construction")

    verify = commands.add_parser("verify", help="Verify a host file as a witness for a base file", parents=[common])
    verify.add_argument("--g", required=True, help="Base structure file")
    verify.add_argument("--h", required=True, help="Host structure file")
    verify.add_argument("--embedding", help="Host vertices for base vertices 0..n-1, comma separated")

    bounds = commands.add_parser("bounds", help="Lower bounds and closed forms", parents=[common])
    bounds.add_argument("bound", choices=['hrus', 'cycles', 'degrees', 'table'])
    bounds.add_argument("--input", help="Graph file")
    bounds.add_argument("--family", choices=['half-star', 'half'], help="Built-in extremal graph instead of --input")
    bounds.add_argument("--size", type=int, help="Parameter of the built-in family")
    bounds.add_argument("--n", type=int, default=12, help="Cycle length, or table limit (default: 12)")
    bounds.add_argument("--mode", choices=['exact', 'greedy'], default='exact', help="Independent-set search mode")

    catalog = commands.add_parser("catalog", help="Finite homogeneous graphs", parents=[common])
    catalog.add_argument("--verify", action="store_true", help="Verify every entry as its own witness")
    catalog.add_argument("--max-param", type=int, default=3, help="Largest s and t for the clique families")

    search = commands.add_parser("search-min", help="Smallest witness by exhaustive search", parents=[common])
    search.add_argument("--input", required=True, help="Graph file")
    search.add_argument("--max-m", type=int, required=True, help="Largest host size to try")
    search.add_argument("--prune-transitive", action="store_true",
                        help="Only try vertex-transitive hosts (result is conditional)")
    search.add_argument("--output", help="Write the certificate host in text format")

    experiment = commands.add_parser("random-exp", help="Seeded random-graph bound experiment", parents=[common])
    experiment.add_argument("--n", type=int, required=True)
    experiment.add_argument("--p", required=True, help="Edge probability: 0.5, 1/2 or c/n")
    experiment.add_argument("--samples", type=int, default=50)
    experiment.add_argument("--seed", type=int, required=True)
    experiment.add_argument("--mode", choices=['exact', 'greedy'])

    coherence = commands.add_parser("coherence", help="Check a lifted valuation extender for coherence",
                                    parents=[common])
    coherence.add_argument("--input", required=True, help="Graph file")
    coherence.add_argument("--n", type=int, help="Order of the valuation witness (default: graph size)")
    coherence.add_argument("--scope", choices=['substructure', 'all-composable'], default='substructure')

    paley = commands.add_parser("paley", help="Paley tournament as a witness", parents=[common, witness_flags])
    paley.add_argument("--q", type=int, required=True, help="Prime q = 3 (mod 4)")
    paley.add_argument("--input", help="Base digraph (default: the tournament itself)")

    return parser


COMMANDS = {
    'witness': cmd_witness,
    'verify': cmd_verify,
    'bounds': cmd_bounds,
    'catalog': cmd_catalog,
    'search-min': cmd_search_min,
    'random-exp': cmd_random_exp,
    'coherence': cmd_coherence,
    'paley': cmd_paley,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    global logger
    logger = setup_logger('eppa', args.debug)

    try:
        config = build_config(args)
        log_configuration(config)
        run = Run(args, config)
        code = COMMANDS[args.command](run)
    except FormatError as e:
        logger.error(f"Malformed input: {str(e)}")
        return EXIT_USAGE
    except InputError as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_USAGE
    except CapacityError as e:
        logger.error(f"Capacity exceeded: {str(e)}")
        return EXIT_CAPACITY
    except (EppaError, OSError) as e:
        logger.error(f"Error during {args.command}: {str(e)}")
        return EXIT_FAIL

    if args.results is not None:
        path = args.results or config.results_file
        record = RunRecord(argv, run.digest(), run.seed, dict(run.outputs, exit_code=code))
        write_results([record], path)
        logger.info(f"Appended run record to {path}")
    return code


def main():
    """Main function."""
    return cli_main()


if __name__ == "__main__":
    exit(main())
