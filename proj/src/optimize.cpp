#include "mgs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

#include "mgs/error.hpp"
#include "mgs/rng.hpp"

namespace mgs {

namespace {

double obj_embodied(const SimulationMetrics& m) { return m.embodied_tco2; }
double obj_operational(const SimulationMetrics& m) { return m.operational_tco2_per_day; }
double obj_import(const SimulationMetrics& m) { return m.import_kwh; }
double obj_export(const SimulationMetrics& m) { return m.export_kwh; }

constexpr std::pair<const char*, ObjectiveFn> kObjectives[] = {
    {"embodied_tco2", obj_embodied},
    {"operational_tco2_per_day", obj_operational},
    {"import_kwh", obj_import},
    {"export_kwh", obj_export},
};

} // namespace

ObjectiveFn objective_fn(const std::string& name) {
    for (const auto& [n, fn] : kObjectives)
        if (name == n)
            return fn;
    throw Error("unknown objective '" + name + "'");
}

const std::vector<std::string>& objective_registry() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [n, fn] : kObjectives) {
            (void)fn;
            out.emplace_back(n);
        }
        return out;
    }();
    return names;
}

std::vector<double> compute_objectives(const SimulationMetrics& metrics,
                                       std::span<const std::string> names) {
    std::vector<double> out;
    out.reserve(names.size());
    for (const std::string& name : names)
        out.push_back(objective_fn(name)(metrics));
    return out;
}

std::vector<Composition> parameter_grid(const SpaceBounds& space) {
    space.check();
    std::vector<Composition> grid;
    grid.reserve(static_cast<std::size_t>(space.count()));
    for (int w = 0; w <= space.max_wind_turbines; ++w)
        for (int s = 0; s <= space.max_solar_units; ++s)
            for (int b = 0; b <= space.max_battery_units; ++b)
                grid.push_back(Composition{w, s, b});
    return grid;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("dominates: mismatched objective lengths");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i])
            return false;
        if (a[i] < b[i])
            strict = true;
    }
    return strict;
}

std::vector<std::vector<std::size_t>>
non_dominated_sort(const std::vector<std::vector<double>>& objs) {
    const std::size_t n = objs.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0)
        return fronts;
    for (const auto& o : objs)
        if (o.size() != objs[0].size())
            throw Error("non_dominated_sort: mismatched objective lengths");

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> dom_count(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (q == p)
                continue;
            if (dominates(objs[p], objs[q]))
                dominated[p].push_back(q);
            else if (dominates(objs[q], objs[p]))
                ++dom_count[p];
        }
        if (dom_count[p] == 0)
            current.push_back(p);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (const std::size_t p : fronts.back())
            for (const std::size_t q : dominated[p])
                if (--dom_count[q] == 0)
                    next.push_back(q);
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& objs) {
    const std::size_t n = objs.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0)
        return dist;
    const std::size_t m = objs[0].size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return objs[a][k] < objs[b][k]; });
        dist[idx.front()] = inf;
        dist[idx.back()] = inf;
        const double range = objs[idx.back()][k] - objs[idx.front()][k];
        if (!(range > 0.0))
            continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (dist[idx[i]] != inf)
                dist[idx[i]] += (objs[idx[i + 1]][k] - objs[idx[i - 1]][k]) / range;
        }
    }
    return dist;
}

void ParetoFront::check() const {
    for (const ObjectivePoint& p : points) {
        if (p.objectives.empty())
            throw Error("pareto front: point with no objectives");
        if (p.objectives.size() != points[0].objectives.size())
            throw Error("pareto front: mismatched objective lengths");
        for (const double v : p.objectives)
            if (!std::isfinite(v))
                throw Error("pareto front: non-finite objective");
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (dominates(points[i].objectives, points[j].objectives) ||
                dominates(points[j].objectives, points[i].objectives))
                throw Error("pareto front: contains a dominated point");
}

ParetoFront make_front(std::span<const ObjectivePoint> points) {
    ParetoFront front;
    if (!points.empty()) {
        std::vector<std::vector<double>> objs;
        objs.reserve(points.size());
        for (const ObjectivePoint& p : points)
            objs.push_back(p.objectives);
        const auto fronts = non_dominated_sort(objs);
        for (const std::size_t i : fronts.front())
            front.points.push_back(points[i]);
        std::sort(front.points.begin(), front.points.end(),
                  [](const ObjectivePoint& a, const ObjectivePoint& b) {
                      if (a.objectives != b.objectives)
                          return a.objectives < b.objectives;
                      return a.composition < b.composition;
                  });
    }
    front.check();
    return front;
}

Evaluator::Evaluator(const Scenario& scenario, std::vector<std::string> objective_names, int jobs)
    : scenario_(&scenario), names_(std::move(objective_names)), jobs_(std::max(1, jobs)) {
    if (names_.empty())
        throw Error("evaluator needs at least one objective");
    for (const std::string& name : names_)
        objective_fn(name); // validates
}

void Evaluator::evaluate_batch(std::span<const Composition> batch) {
    std::vector<Composition> misses;
    std::set<Composition> miss_set;
    for (const Composition& c : batch)
        if (!cached(c) && miss_set.insert(c).second)
            misses.push_back(c);

    std::vector<ObjectivePoint> results(misses.size());
    if (!misses.empty()) {
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs_), misses.size());
        std::vector<std::exception_ptr> errors(workers);
        auto work = [&](std::size_t slot) {
            try {
                for (std::size_t i = slot; i < misses.size(); i += workers) {
                    ObjectivePoint& p = results[i];
                    p.composition = misses[i];
                    p.metrics = run_simulation(*scenario_, misses[i]);
                    p.objectives = compute_objectives(p.metrics, names_);
                }
            } catch (...) {
                errors[slot] = std::current_exception();
            }
        };
        if (workers <= 1) {
            work(0);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(workers);
            for (std::size_t t = 0; t < workers; ++t)
                threads.emplace_back(work, t);
            for (std::thread& t : threads)
                t.join();
        }
        for (const std::exception_ptr& e : errors)
            if (e)
                std::rethrow_exception(e);
        for (std::size_t i = 0; i < misses.size(); ++i) {
            cache_.emplace(misses[i], std::move(results[i]));
            order_.push_back(misses[i]);
        }
    }

    std::set<Composition> fresh = std::move(miss_set);
    for (const Composition& c : batch) {
        const ObjectivePoint& p = cache_.at(c);
        const bool first_eval = fresh.erase(c) > 0;
        log_.push_back(EvalRecord{c, p.objectives, p.metrics, !first_eval, generation_});
    }
}

const ObjectivePoint& Evaluator::evaluate(const Composition& c) {
    evaluate_batch(std::span<const Composition>(&c, 1));
    return cache_.at(c);
}

std::vector<ObjectivePoint> Evaluator::archive() const {
    std::vector<ObjectivePoint> out;
    out.reserve(order_.size());
    for (const Composition& c : order_)
        out.push_back(cache_.at(c));
    return out;
}

namespace {

struct RankedPopulation {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

RankedPopulation rank_and_crowd(const std::vector<std::vector<double>>& objs) {
    RankedPopulation rp;
    rp.rank.assign(objs.size(), 0);
    rp.crowding.assign(objs.size(), 0.0);
    const auto fronts = non_dominated_sort(objs);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<std::vector<double>> fobjs;
        fobjs.reserve(fronts[r].size());
        for (const std::size_t i : fronts[r]) {
            rp.rank[i] = r;
            fobjs.push_back(objs[i]);
        }
        const auto d = crowding_distance(fobjs);
        for (std::size_t k = 0; k < fronts[r].size(); ++k)
            rp.crowding[fronts[r][k]] = d[k];
    }
    return rp;
}

} // namespace

SearchResult nsga2_run(const Scenario& scenario, const SpaceBounds& space,
                       const SearchConfig& config, int jobs) {
    space.check();
    config.check();
    Rng rng(config.seed);
    Evaluator ev(scenario, config.objectives, jobs);
    const std::size_t pop_n = static_cast<std::size_t>(config.population_size);
    const std::size_t budget = static_cast<std::size_t>(config.max_evaluations);
    const std::size_t space_count = static_cast<std::size_t>(space.count());

    auto random_comp = [&] {
        return Composition{rng.next_int(0, space.max_wind_turbines),
                           rng.next_int(0, space.max_solar_units),
                           rng.next_int(0, space.max_battery_units)};
    };

    std::vector<Composition> pop;
    pop.reserve(pop_n);
    {
        std::set<Composition> seen;
        for (std::size_t i = 0; i < pop_n; ++i) {
            Composition c = random_comp();
            for (int tries = 0; tries < 10 && seen.count(c) > 0; ++tries)
                c = random_comp();
            seen.insert(c);
            pop.push_back(c);
        }
    }
    ev.set_generation(0);
    ev.evaluate_batch(pop);

    auto objectives_of = [&](const std::vector<Composition>& set) {
        std::vector<std::vector<double>> objs;
        objs.reserve(set.size());
        for (const Composition& c : set)
            objs.push_back(ev.at(c).objectives);
        return objs;
    };

    int gen = 0;
    while (ev.distinct_evaluations() < budget && ev.distinct_evaluations() < space_count &&
           gen < config.max_evaluations) {
        ++gen;
        ev.set_generation(gen);

        const RankedPopulation ranked = rank_and_crowd(objectives_of(pop));
        auto tournament = [&]() -> const Composition& {
            const std::size_t a = rng.next_below(pop.size());
            const std::size_t b = rng.next_below(pop.size());
            if (ranked.rank[a] < ranked.rank[b])
                return pop[a];
            if (ranked.rank[b] < ranked.rank[a])
                return pop[b];
            return ranked.crowding[a] >= ranked.crowding[b] ? pop[a] : pop[b];
        };

        std::vector<Composition> offspring;
        offspring.reserve(pop_n);
        std::set<Composition> seen;
        while (offspring.size() < pop_n) {
            Composition c1 = tournament();
            Composition c2 = tournament();
            if (rng.next_double() < config.crossover_probability) {
                int* genes1[] = {&c1.wind_turbines, &c1.solar_units, &c1.battery_units};
                int* genes2[] = {&c2.wind_turbines, &c2.solar_units, &c2.battery_units};
                for (int g = 0; g < 3; ++g)
                    if (rng.next_bool())
                        std::swap(*genes1[g], *genes2[g]);
            }
            auto mutate = [&](Composition& c) {
                if (rng.next_double() < config.mutation_probability)
                    c.wind_turbines = rng.next_int(0, space.max_wind_turbines);
                if (rng.next_double() < config.mutation_probability)
                    c.solar_units = rng.next_int(0, space.max_solar_units);
                if (rng.next_double() < config.mutation_probability)
                    c.battery_units = rng.next_int(0, space.max_battery_units);
            };
            mutate(c1);
            mutate(c2);
            for (Composition child : {c1, c2}) {
                if (offspring.size() >= pop_n)
                    break;
                for (int tries = 0; tries < 10 && seen.count(child) > 0; ++tries)
                    child = random_comp();
                seen.insert(child);
                offspring.push_back(child);
            }
        }

        // Keep the evaluation budget hard: uncached children beyond the
        // remaining allowance are dropped, cached ones ride free.
        std::vector<Composition> kept;
        kept.reserve(offspring.size());
        std::set<Composition> counted;
        std::size_t prospective = ev.distinct_evaluations();
        for (const Composition& child : offspring) {
            if (ev.cached(child) || counted.count(child) > 0) {
                kept.push_back(child);
            } else if (prospective < budget) {
                ++prospective;
                counted.insert(child);
                kept.push_back(child);
            }
        }
        if (kept.empty())
            break;
        ev.evaluate_batch(kept);

        std::vector<Composition> combined = pop;
        combined.insert(combined.end(), kept.begin(), kept.end());
        const auto cobjs = objectives_of(combined);
        const auto cfronts = non_dominated_sort(cobjs);
        std::vector<Composition> next;
        next.reserve(pop_n);
        for (const auto& front : cfronts) {
            if (next.size() + front.size() <= pop_n) {
                for (const std::size_t i : front)
                    next.push_back(combined[i]);
            } else {
                std::vector<std::vector<double>> fobjs;
                fobjs.reserve(front.size());
                for (const std::size_t i : front)
                    fobjs.push_back(cobjs[i]);
                const auto d = crowding_distance(fobjs);
                std::vector<std::size_t> order(front.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
                for (std::size_t k = 0; next.size() < pop_n; ++k)
                    next.push_back(combined[front[order[k]]]);
            }
            if (next.size() >= pop_n)
                break;
        }
        pop = std::move(next);
    }

    SearchResult res;
    res.evaluated = ev.archive();
    res.front = make_front(res.evaluated);
    res.log = ev.log();
    res.distinct_evaluations = ev.distinct_evaluations();
    res.generations = gen;
    return res;
}

SearchResult exhaustive_run(const Scenario& scenario, const SpaceBounds& space,
                            std::span<const std::string> objective_names, int jobs) {
    Evaluator ev(scenario,
                 std::vector<std::string>(objective_names.begin(), objective_names.end()), jobs);
    const std::vector<Composition> grid = parameter_grid(space);
    ev.set_generation(0);
    ev.evaluate_batch(grid);

    SearchResult res;
    res.evaluated = ev.archive();
    res.front = make_front(res.evaluated);
    res.log = ev.log();
    res.distinct_evaluations = ev.distinct_evaluations();
    res.generations = 0;
    return res;
}

} // namespace mgs
