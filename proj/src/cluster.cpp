#include "assoc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "assoc/error.hpp"

namespace assoc {

namespace {

constexpr std::size_t kMaxIterations = 100;

double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

Vector unit(Vector v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double n = std::sqrt(sq);
    for (double& x : v) x /= n;
    return v;
}

std::vector<Vector> seed_centers(const std::vector<Vector>& points, std::size_t k, UnitRng& rng) {
    std::vector<Vector> centers;
    std::vector<bool> taken(points.size(), false);
    const std::size_t first = rng.index(points.size());
    centers.push_back(points[first]);
    taken[first] = true;

    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centers[0]);

    while (centers.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick = points.size();
        if (total > 0.0) {
            const double r = rng.next() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (d2[i] <= 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc > r) break;
            }
        } else {
            // Every point coincides with a center; take the next unused one.
            for (std::size_t i = 0; i < points.size() && pick == points.size(); ++i)
                if (!taken[i]) pick = i;
        }
        taken[pick] = true;
        centers.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
    return centers;
}

}  // namespace

double vector_cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractViolation("cosine of vectors with different dimensions");
    double dot = 0.0;
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        dot += a[j] * b[j];
        sa += a[j] * a[j];
        sb += b[j] * b[j];
    }
    if (sa == 0.0 || sb == 0.0) return -2.0;
    return std::clamp(dot / std::sqrt(sa * sb), -1.0, 1.0);
}

ClusterSet cluster_symbols(const EmbeddingStore& store, std::span<const std::string> symbols, std::size_t k,
                           std::uint64_t rng_seed) {
    if (symbols.empty()) throw ContractViolation("clustering needs at least one symbol");
    if (k == 0) throw ContractViolation("cluster count must be positive");

    std::vector<std::string> words;
    std::set<std::string, std::less<>> seen;
    std::vector<std::string> missing;
    for (const auto& s : symbols) {
        if (!seen.insert(s).second) continue;
        if (!store.contains(s)) missing.push_back(s);
        words.push_back(s);
    }
    if (!missing.empty()) throw OutOfVocabularyError(std::move(missing));
    k = std::min(k, words.size());

    std::vector<Vector> points;
    points.reserve(words.size());
    for (const auto& w : words) points.push_back(unit(store.vector(w)));

    UnitRng rng(rng_seed);
    std::vector<Vector> centers = seed_centers(points, k, rng);
    const std::size_t dim = points.front().size();

    ClusterSet out;
    std::vector<std::size_t> assignment(points.size(), k);
    for (std::size_t iter = 1; iter <= kMaxIterations; ++iter) {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared_distance(points[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) changed = true;
            assignment[i] = best;
            objective += best_d;
        }
        out.iterations = iter;
        if (!changed) {
            out.converged = true;
            break;
        }
        out.objective_trace.push_back(objective);

        // Empty clusters keep their previous center.
        std::vector<Vector> sums(k, Vector(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j) sums[assignment[i]][j] += points[i][j];
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t j = 0; j < dim; ++j) centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
        }
    }

    std::vector<Cluster> clusters(k);
    std::vector<std::size_t> counts(k, 0);
    for (auto& c : clusters) c.centroid.assign(dim, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        Cluster& c = clusters[assignment[i]];
        c.members.push_back(words[i]);
        for (std::size_t j = 0; j < dim; ++j) c.centroid[j] += points[i][j];
        ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (double& x : clusters[c].centroid) x /= static_cast<double>(counts[c]);
        std::sort(clusters[c].members.begin(), clusters[c].members.end());
        out.clusters.push_back(std::move(clusters[c]));
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.members.front() < b.members.front(); });
    return out;
}

double within_cluster_distance(const EmbeddingStore& store, const ClusterSet& set) {
    double total = 0.0;
    for (const auto& c : set.clusters)
        for (const auto& w : c.members) total += squared_distance(unit(store.vector(w)), c.centroid);
    return total;
}

}  // namespace assoc
