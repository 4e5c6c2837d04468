#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "amrcl/graph.hpp"
#include "amrcl/rng.hpp"

namespace amrcl::testing {

// Connected random graph with 1..max_vars variables drawn from a five-concept
// vocabulary, so that many mappings tie on concepts. Includes attributes,
// inverse roles and re-entrant edges.
AmrGraph random_small_graph(Rng& rng, int max_vars);

// Same graph with variables renamed by a random permutation of fresh names.
AmrGraph rename_variables(const AmrGraph& graph, Rng& rng);

// A gold graph and a prediction: either an independent random graph or a
// renamed copy of the gold with a few concept, role and edge edits.
std::pair<AmrGraph, AmrGraph> random_pair(Rng& rng, int max_vars);

// Best match count over all partial injective variable mappings, found by
// exhaustive recursion over gold variables. Independent of the library's
// scorer; only for small inputs.
int brute_force_best_match(std::span<const Triple> gold, std::span<const Triple> pred);

}  // namespace amrcl::testing
