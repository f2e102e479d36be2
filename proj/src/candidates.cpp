#include "mgs/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mgs/error.hpp"
#include "mgs/rng.hpp"

namespace mgs {

namespace {

// Min-max normalized objective rows; zero-range dimensions collapse to 0.
std::vector<std::vector<double>> normalize(const ParetoFront& front) {
    const std::size_t n = front.points.size();
    const std::size_t m = front.points.front().objectives.size();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (const ObjectivePoint& p : front.points) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], p.objectives[k]);
            hi[k] = std::max(hi[k], p.objectives[k]);
        }
    }
    std::vector<std::vector<double>> rows(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
            if (hi[k] > lo[k])
                rows[i][k] = (front.points[i].objectives[k] - lo[k]) / (hi[k] - lo[k]);
    return rows;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

void require_points(const ParetoFront& front) {
    front.check();
    if (front.points.empty())
        throw Error("candidate selection needs a non-empty front");
}

} // namespace

std::vector<ObjectivePoint> threshold_select(const ParetoFront& front,
                                             std::span<const double> budgets) {
    require_points(front);
    for (std::size_t i = 1; i < budgets.size(); ++i)
        if (!(budgets[i] > budgets[i - 1]))
            throw Error("budgets must be sorted ascending");

    const auto& pts = front.points;
    auto better = [](const ObjectivePoint& a, const ObjectivePoint& b) {
        if (a.metrics.operational_tco2_per_day != b.metrics.operational_tco2_per_day)
            return a.metrics.operational_tco2_per_day < b.metrics.operational_tco2_per_day;
        return a.metrics.embodied_tco2 < b.metrics.embodied_tco2;
    };

    std::vector<const ObjectivePoint*> picks;
    for (const ObjectivePoint& p : pts) {
        if (p.metrics.embodied_tco2 == 0.0) {
            picks.push_back(&p);
            break;
        }
    }
    for (const double budget : budgets) {
        const ObjectivePoint* best = nullptr;
        for (const ObjectivePoint& p : pts)
            if (p.metrics.embodied_tco2 <= budget && (best == nullptr || better(p, *best)))
                best = &p;
        if (best != nullptr)
            picks.push_back(best);
    }
    {
        const ObjectivePoint* best = nullptr;
        for (const ObjectivePoint& p : pts)
            if (best == nullptr || better(p, *best))
                best = &p;
        picks.push_back(best);
    }

    std::vector<ObjectivePoint> out;
    std::set<Composition> chosen;
    for (const ObjectivePoint* p : picks)
        if (chosen.insert(p->composition).second)
            out.push_back(*p);
    return out;
}

std::vector<ObjectivePoint> greedy_diversity(const ParetoFront& front, std::size_t k) {
    require_points(front);
    if (k < 1)
        throw Error("greedy_diversity: k must be >= 1");
    const auto& pts = front.points;
    const std::size_t n = pts.size();
    if (k >= n)
        return pts;

    const auto rows = normalize(front);

    // Seed with the extremes: best first objective, then best last objective.
    std::vector<std::size_t> selected;
    std::vector<bool> in_set(n, false);
    auto add = [&](std::size_t i) {
        if (!in_set[i]) {
            in_set[i] = true;
            selected.push_back(i);
        }
    };
    std::size_t lo_first = 0;
    std::size_t lo_last = 0;
    const std::size_t m = pts.front().objectives.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (pts[i].objectives.front() < pts[lo_first].objectives.front())
            lo_first = i;
        if (pts[i].objectives[m - 1] < pts[lo_last].objectives[m - 1])
            lo_last = i;
    }
    add(lo_first);
    if (selected.size() < k)
        add(lo_last);

    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (const std::size_t s : selected)
            min_d2[i] = std::min(min_d2[i], dist2(rows[i], rows[s]));

    while (selected.size() < k) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_set[i])
                continue;
            if (best == n || min_d2[i] > min_d2[best] ||
                (min_d2[i] == min_d2[best] &&
                 pts[i].metrics.embodied_tco2 < pts[best].metrics.embodied_tco2))
                best = i;
        }
        add(best);
        for (std::size_t i = 0; i < n; ++i)
            min_d2[i] = std::min(min_d2[i], dist2(rows[i], rows[best]));
    }

    std::vector<ObjectivePoint> out;
    out.reserve(selected.size());
    for (const std::size_t i : selected)
        out.push_back(pts[i]);
    return out;
}

std::vector<ObjectivePoint> kmeans_select(const ParetoFront& front, std::size_t k,
                                          std::uint64_t seed) {
    require_points(front);
    if (k < 1)
        throw Error("kmeans_select: k must be >= 1");
    const auto& pts = front.points;
    const std::size_t n = pts.size();
    if (k >= n)
        return pts;

    const auto rows = normalize(front);
    const std::size_t m = rows.front().size();

    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.next_below(n - i)]);
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    for (std::size_t c = 0; c < k; ++c)
        centroids.push_back(rows[idx[c]]);

    std::vector<std::size_t> owner(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = dist2(rows[i], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = dist2(rows[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            owner[i] = best;
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<double> mean(m, 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (owner[i] != c)
                    continue;
                ++count;
                for (std::size_t d = 0; d < m; ++d)
                    mean[d] += rows[i][d];
            }
            if (count == 0)
                continue; // empty cluster keeps its centroid
            for (std::size_t d = 0; d < m; ++d)
                mean[d] /= static_cast<double>(count);
            shift = std::max(shift, std::sqrt(dist2(mean, centroids[c])));
            centroids[c] = std::move(mean);
        }
        if (shift < 1e-9)
            break;
    }

    std::vector<ObjectivePoint> out;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (owner[i] != c)
                continue;
            if (best == n || dist2(rows[i], centroids[c]) < dist2(rows[best], centroids[c]))
                best = i;
        }
        if (best != n)
            out.push_back(pts[best]);
    }
    return out;
}

} // namespace mgs
