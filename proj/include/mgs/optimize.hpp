#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mgs/composition.hpp"
#include "mgs/search_config.hpp"
#include "mgs/simulate.hpp"

namespace mgs {

struct ObjectivePoint {
    Composition composition;
    std::vector<double> objectives; // minimization sense
    SimulationMetrics metrics;
};

struct ParetoFront {
    std::vector<ObjectivePoint> points;

    // Throws unless no point dominates another and all objectives are finite.
    void check() const;
};

// Named objective registry. Unknown names throw.
using ObjectiveFn = double (*)(const SimulationMetrics&);
ObjectiveFn objective_fn(const std::string& name);
const std::vector<std::string>& objective_registry();
std::vector<double> compute_objectives(const SimulationMetrics& metrics,
                                       std::span<const std::string> names);

std::vector<Composition> parameter_grid(const SpaceBounds& space);

// a dominates b: <= everywhere, < somewhere (minimization).
bool dominates(std::span<const double> a, std::span<const double> b);

// Deb's fast non-dominated sort. Returns fronts of indices into objs;
// front 0 is the Pareto rank.
std::vector<std::vector<std::size_t>>
non_dominated_sort(const std::vector<std::vector<double>>& objs);

// Crowding distance per point, aligned with the input order. Objective-wise
// boundary points get +inf; zero-range objectives contribute nothing.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& objs);

// Non-dominated filter over arbitrary points, sorted canonically (objectives
// lexicographic, composition as tie break) so serialized fronts are stable.
ParetoFront make_front(std::span<const ObjectivePoint> points);

struct EvalRecord {
    Composition composition;
    std::vector<double> objectives;
    SimulationMetrics metrics;
    bool cache_hit = false;
    int generation = 0; // 0 = initial population / grid pass
};

// Memoizing evaluation frontend over run_simulation. Batches simulate cache
// misses on up to `jobs` threads; results and the log are independent of the
// thread count.
class Evaluator {
public:
    Evaluator(const Scenario& scenario, std::vector<std::string> objective_names, int jobs = 1);

    const ObjectivePoint& evaluate(const Composition& c);
    void evaluate_batch(std::span<const Composition> batch);
    bool cached(const Composition& c) const { return cache_.find(c) != cache_.end(); }
    const ObjectivePoint& at(const Composition& c) const { return cache_.at(c); }

    void set_generation(int g) { generation_ = g; }
    std::size_t distinct_evaluations() const { return cache_.size(); }
    const std::vector<EvalRecord>& log() const { return log_; }
    // All distinct points in first-evaluation order.
    std::vector<ObjectivePoint> archive() const;

private:
    const Scenario* scenario_;
    std::vector<std::string> names_;
    int jobs_;
    int generation_ = 0;
    std::map<Composition, ObjectivePoint> cache_;
    std::vector<Composition> order_;
    std::vector<EvalRecord> log_;
};

struct SearchResult {
    ParetoFront front;
    std::vector<EvalRecord> log;
    std::vector<ObjectivePoint> evaluated; // distinct, first-evaluation order
    std::size_t distinct_evaluations = 0;
    int generations = 0;
};

SearchResult nsga2_run(const Scenario& scenario, const SpaceBounds& space,
                       const SearchConfig& config, int jobs = 1);

// Evaluates every grid point once; `evaluated` comes back in grid order.
SearchResult exhaustive_run(const Scenario& scenario, const SpaceBounds& space,
                            std::span<const std::string> objective_names, int jobs = 1);

} // namespace mgs
