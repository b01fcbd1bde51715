"""Weighted random intersection graphs: generation, exact finite-n
probabilities, limiting degree and clustering laws, and parameter calibration."""

__version__ = "0.1.0"

from .weights import Degenerate, EmpiricalTable, Pareto, from_config, sample_weights  # noqa: E402
from .graphgen import BipartiteGraph, Graph, ModelParams, generate, generate_bipartite, project  # noqa: E402
from .exact import (TripleProbs, conditional_triangle_exact, edge_prob_exact,  # noqa: E402
                    expected_degree_exact, triple_probs_asymptotic, triple_probs_exact)
from .limits import (ClusteringPrediction, Regime, clustering_limit, figure1_curves,  # noqa: E402
                     limiting_degree_law, marginal_degree_pmf)
from .stats import (ClusteringEstimate, DegreeHistogram, conditional_triple_mc,  # noqa: E402
                    degree_histogram, tail_slope, transitivity, tv_distance, validate)
