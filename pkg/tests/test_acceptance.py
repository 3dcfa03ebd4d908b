"""Corpus-scale checks over generated graphs; run with ``pytest -m slow``."""

import random

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from planar_decomp.certify import greedy_color, oracle_nice, validate_coloring, verify_nice
from planar_decomp.class_gate import CaseTag, ConfigId, contains_config, find_cycle_of_length, pattern
from planar_decomp.decomposer import Decomposer
from planar_decomp.discharge_audit import audit
from planar_decomp.generator import generate

pytestmark = pytest.mark.slow

GRAPHS_PER_BLOCK = 100
BLOCKS = 5
MAX_VERTICES = 60
SMALL_GRAPHS_PER_BLOCK = 35
SMALL_VERTICES = 12
PALETTE = range(6)


def corpus(case, block, size, max_vertices):
    """Generated graphs for one seed block, sizes cycling through 3..max_vertices."""
    for i in range(size):
        seed = block * size + i
        yield generate(seed, 3 + seed % (max_vertices - 2), case).graph


@pytest.mark.parametrize("block", range(BLOCKS))
@pytest.mark.parametrize("case", list(CaseTag))
def test_generated_corpus_decomposes(case, block):
    """Test decomposition with per-step verification and charge conservation on every graph."""
    decomposer = Decomposer(verify_steps=True, case=case)
    for g in corpus(case, block, GRAPHS_PER_BLOCK, MAX_VERTICES):
        assert len(g.vertices) <= MAX_VERTICES
        assert len(g.outer_walk()) >= 3

        cert = decomposer.decompose_nice(g)
        verdict = verify_nice(g, cert)
        assert verdict.ok, verdict.describe()
        assert decomposer.steps == sum(decomposer.reductions.values())

        assert audit(g, None, case).total == 0


@pytest.mark.parametrize("block", range(2))
@pytest.mark.parametrize("case", list(CaseTag))
def test_decomposer_agrees_with_oracle(case, block):
    """Test that small in-class graphs get a certificate from both the decomposer and the oracle."""
    for g in corpus(case, block, SMALL_GRAPHS_PER_BLOCK, SMALL_VERTICES):
        decomposer = Decomposer(oracle_threshold=0, case=case)
        cert = decomposer.decompose_nice(g)
        reference = oracle_nice(g)

        assert "Oracle" not in decomposer.reductions
        assert reference is not None
        assert verify_nice(g, cert).ok
        assert verify_nice(g, reference).ok


@pytest.mark.parametrize("case", list(CaseTag))
def test_random_lists_colour_with_one_defect(case):
    """Test random 3-lists on a subsample: proper off the matching, at most one defect per vertex."""
    rng = random.Random(case.value)
    checked = 0
    for g in corpus(case, 0, 17, MAX_VERTICES):
        cert = Decomposer(case=case).decompose_nice(g)
        for _ in range(20):
            lists = {v: rng.sample(PALETTE, 3) for v in g.vertices}
            coloring = greedy_color(g, cert, lists)
            verdict = validate_coloring(g, cert, coloring, lists)
            assert verdict.ok, verdict.describe()
            checked += 1

    assert checked == 17 * 20


def simple_path_cycle(graph, k):
    """Whether ``graph`` has a k-cycle, by extending every simple path."""
    adj = {v: set(graph[v]) for v in graph}

    def extend(path):
        if len(path) == k:
            return path[0] in adj[path[-1]]
        return any(extend(path + [w]) for w in adj[path[-1]] if w not in path)

    return any(extend([s]) for s in adj)


def random_hosts(count):
    rng = random.Random(12)
    for _ in range(count):
        n = rng.randint(4, SMALL_VERTICES)
        yield nx.gnp_random_graph(n, rng.uniform(0.1, 0.35), seed=rng.randrange(10**6))


def test_cycle_search_matches_path_enumeration():
    """Test fixed-length cycle search against exhaustive path extension on random hosts."""
    for host in random_hosts(100):
        for k in range(3, 10):
            found = find_cycle_of_length(host, k)
            assert (found is not None) == simple_path_cycle(host, k)
            if found is not None:
                assert len(set(found)) == k
                assert all(host.has_edge(a, b) for a, b in zip(found, found[1:] + found[:1]))


def test_configuration_search_matches_networkx():
    """Test the subgraph matcher against networkx monomorphism search on random hosts."""
    for host in random_hosts(100):
        for c in ConfigId:
            p = pattern(c)
            found = contains_config(host, c)
            expected = GraphMatcher(host, p.to_networkx()).subgraph_is_monomorphic()

            assert (found is not None) == expected
            if found is not None:
                assert len(set(found.values())) == p.vertex_count
                assert all(host.has_edge(found[a], found[b]) for a, b in p.edges)


@pytest.mark.parametrize("c", list(ConfigId))
def test_every_configuration_is_found_in_itself(c):
    """Test that each atlas drawing contains its own configuration."""
    assert contains_config(pattern(c).to_networkx(), c) is not None
