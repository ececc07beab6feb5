"""Tour of the deterministic-variable notation on the bundled graphs.

Each bundled .dag file describes a scenario where some variables are exact
algebraic functions of others: a dichotomised measurement, a whole made of
parts, ratios, change scores, area-level aggregates, and a two-component
body-size index.  This script prints each graph's canonical text and its DOT
rendering, where double outlines mark fully determined nodes, doubled arcs
mark functional (non-probabilistic) inputs, and dashed boxes group
definitions whose members crystallise together.
"""

from detdag import FIXTURE_NAMES, load_fixture, serialize, to_dot, validate

for name in FIXTURE_NAMES:
    dag = load_fixture(name)
    assert validate(dag) == []
    print("=" * 72)
    print(serialize(dag))
    print(to_dot(dag))

print("Pipe any of the DOT blocks above into `dot -Tsvg` to draw them.")
