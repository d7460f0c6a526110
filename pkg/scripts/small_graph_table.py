#!/usr/bin/env python3
"""
Print lower and upper bounds on the smallest EPPA-witness for every graph on few vertices.

One row per isomorphism class: the certified lower bound, the Kneser and valuation
upper bounds, the smallest homogeneous host (when the graph is an induced subgraph
of one) and, with --search-max-m, the exact value found by exhaustive search.
"""

import argparse
import csv
import io
import os
import sys
from typing import Any, Dict, List, Optional

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from common.bounds import lower_bound_hrus  # noqa: E402
from common.errors import EppaError  # noqa: E402
from common.homogeneous import is_subgraph_of_homogeneous, materialize  # noqa: E402
from common.kneser import kneser_bound_for_graph  # noqa: E402
from common.search import graphs_up_to_isomorphism  # noqa: E402
from common.structures import Graph  # noqa: E402
from common.utils import EppaConfig  # noqa: E402
from common.verify import count_partial_autos, min_witness_search  # noqa: E402

COLUMNS = ['n', 'edges', 'partial_autos', 'lower', 'kneser_upper', 'valuation_upper',
           'homogeneous_host', 'upper', 'min_witness']


def graph_row(graph: Graph, search_max_m: int = 0, config: Optional[EppaConfig] = None) -> Dict[str, Any]:
    """Bounds for one graph; ``min_witness`` stays empty unless a search limit is given."""
    n = graph.n
    lower = lower_bound_hrus(graph, config=config).value
    kneser = kneser_bound_for_graph(graph)['best']
    valuation = n * 2 ** (n - 1)

    verdict = is_subgraph_of_homogeneous(graph)
    host_size = materialize(verdict.entry).n if verdict.found else None
    uppers = [v for v in (kneser, valuation, host_size) if v is not None]

    row = {
        'n': n,
        'edges': ' '.join(f'{u}-{v}' for u, v in sorted(graph.edges)),
        'partial_autos': count_partial_autos(graph),
        'lower': lower,
        'kneser_upper': kneser if kneser is not None else '',
        'valuation_upper': valuation,
        'homogeneous_host': verdict.describe() if verdict.found else '',
        'upper': min(uppers),
        'min_witness': '',
    }
    if search_max_m:
        result = min_witness_search(graph, search_max_m, config=config)
        row['min_witness'] = result.value if not result.exhausted else f'>{search_max_m}'
    return row


def build_table(max_n: int, search_max_m: int = 0, config: Optional[EppaConfig] = None) -> List[Dict[str, Any]]:
    rows = []
    for n in range(1, max_n + 1):
        for graph in graphs_up_to_isomorphism(n, config):
            rows.append(graph_row(graph, search_max_m, config))
    return rows


def generate_csv_output(rows: List[Dict[str, Any]]) -> str:
    """Rows as CSV with a header line."""
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return output.getvalue()


def print_table(rows: List[Dict[str, Any]]) -> None:
    widths = {c: max(len(c), *(len(str(row[c])) for row in rows)) for c in COLUMNS}
    print('  '.join(c.ljust(widths[c]) for c in COLUMNS))
    for row in rows:
        print('  '.join(str(row[c]).ljust(widths[c]) for c in COLUMNS))


def main():
    """Main function to print the bounds table."""
    parser = argparse.ArgumentParser(description="EPPA bounds for all graphs on up to --max-n vertices")
    parser.add_argument("--max-n", type=int, default=4, help="Largest vertex count (default: 4)")
    parser.add_argument("--search-max-m", type=int, default=0,
                        help="Also run the minimal witness search up to this host size (default: off)")
    parser.add_argument("--csv", action="store_true", help="Print CSV instead of an aligned table")
    args = parser.parse_args()

    try:
        rows = build_table(args.max_n, args.search_max_m, EppaConfig.from_env())
    except EppaError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    if args.csv:
        print(generate_csv_output(rows), end='')
    else:
        print_table(rows)
    return 0


if __name__ == "__main__":
    exit(main())
