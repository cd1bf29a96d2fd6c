#pragma once

// Lloyd's algorithm with k-means++ seeding. Uses a hand-rolled splitmix64
// uniform generator so results are identical across platforms for a given
// seed. Empty clusters are reseeded to the point farthest from its centroid.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "iplan/errors.hpp"

namespace iplan {

struct KMeansResult {
    std::vector<std::vector<double>> centroids;
    std::vector<int> assignment;  // per point
    std::vector<int> counts;      // per cluster
    double inertia = 0;           // sum of squared distances
};

namespace detail {

inline double kmeans_uniform(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                           std::uint64_t seed, int max_iter = 100) {
    const int n = static_cast<int>(points.size());
    if (k <= 0 || n == 0) throw InputError("kmeans: need k > 0 and at least one point");
    if (k > n) throw InputError("kmeans: k exceeds the number of points");
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw InputError("kmeans: points have inconsistent dimensions");

    std::uint64_t rng = seed;
    KMeansResult res;
    res.centroids.reserve(static_cast<std::size_t>(k));

    // k-means++ seeding.
    res.centroids.push_back(points[static_cast<std::size_t>(
        static_cast<int>(detail::kmeans_uniform(rng) * n) % n)]);
    std::vector<double> d2(static_cast<std::size_t>(n));
    while (static_cast<int>(res.centroids.size()) < k) {
        double total = 0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : res.centroids)
                best = std::min(best, detail::sq_dist(points[static_cast<std::size_t>(i)], c));
            d2[static_cast<std::size_t>(i)] = best;
            total += best;
        }
        int pick = 0;
        if (total > 0) {
            double r = detail::kmeans_uniform(rng) * total;
            for (int i = 0; i < n; ++i) {
                r -= d2[static_cast<std::size_t>(i)];
                if (r <= 0) { pick = i; break; }
                pick = i;
            }
        }
        res.centroids.push_back(points[static_cast<std::size_t>(pick)]);
    }

    res.assignment.assign(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                const double d = detail::sq_dist(points[static_cast<std::size_t>(i)],
                                                 res.centroids[static_cast<std::size_t>(c)]);
                if (d < bd) { bd = d; best = c; }
            }
            if (res.assignment[static_cast<std::size_t>(i)] != best) {
                res.assignment[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        res.counts.assign(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) ++res.counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])];

        for (int c = 0; c < k; ++c) {
            if (res.counts[static_cast<std::size_t>(c)] > 0) continue;
            // Reseed to the point farthest from its own centroid.
            int far = 0;
            double fd = -1;
            for (int i = 0; i < n; ++i) {
                const double d = detail::sq_dist(
                    points[static_cast<std::size_t>(i)],
                    res.centroids[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])]);
                if (d > fd) { fd = d; far = i; }
            }
            res.centroids[static_cast<std::size_t>(c)] = points[static_cast<std::size_t>(far)];
            res.assignment[static_cast<std::size_t>(far)] = c;
            res.counts = {};
            changed = true;
            break;
        }
        if (res.counts.empty()) {  // recount after a reseed
            res.counts.assign(static_cast<std::size_t>(k), 0);
            for (int i = 0; i < n; ++i) ++res.counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])];
        }

        const std::size_t dim = points.front().size();
        std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        for (int i = 0; i < n; ++i) {
            const auto& p = points[static_cast<std::size_t>(i)];
            auto& c = next[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])];
            for (std::size_t d = 0; d < dim; ++d) c[d] += p[d];
        }
        for (int c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                next[static_cast<std::size_t>(c)][d] /= res.counts[static_cast<std::size_t>(c)];
        res.centroids = std::move(next);
        if (!changed && it > 0) break;
    }

    res.inertia = 0;
    for (int i = 0; i < n; ++i)
        res.inertia += detail::sq_dist(points[static_cast<std::size_t>(i)],
                                       res.centroids[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])]);
    return res;
}

}  // namespace iplan
