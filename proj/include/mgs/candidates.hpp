#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgs/optimize.hpp"

namespace mgs {

// Shortlist selectors over a Pareto front. All of them return members of the
// front itself, never synthesized points.

// Baseline (embodied == 0, when present), the cheapest-to-run point within
// each embodied budget, then the global minimum-operational point, duplicates
// collapsed. Budgets must be ascending.
std::vector<ObjectivePoint> threshold_select(const ParetoFront& front,
                                             std::span<const double> budgets);

// Farthest-point selection in min-max normalized objective space, seeded with
// the two objective extremes. Ties go to lower embodied carbon.
std::vector<ObjectivePoint> greedy_diversity(const ParetoFront& front, std::size_t k);

// Lloyd k-means in normalized objective space; one representative per cluster
// (the member nearest its centroid).
std::vector<ObjectivePoint> kmeans_select(const ParetoFront& front, std::size_t k,
                                          std::uint64_t seed);

} // namespace mgs
