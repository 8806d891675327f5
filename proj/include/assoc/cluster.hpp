#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "assoc/embedding.hpp"

namespace assoc {

struct Cluster {
    std::vector<std::string> members;  // ascending
    Vector centroid;                   // mean of the members' unit vectors
};

struct ClusterSet {
    /// Non-empty clusters ordered by their smallest member.
    std::vector<Cluster> clusters;
    /// Within-cluster squared distance after each assignment step that
    /// changed the assignment.
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Doubles in [0, 1) from mt19937_64. The engine's output is fixed by the
/// standard; the distribution classes are not, so they are avoided.
class UnitRng {
public:
    explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform index in [0, n), n > 0.
    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(next() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

/// Spherical k-means: unit-normalizes the vectors, seeds k-means++ style
/// from `rng_seed` and runs Lloyd iterations on squared Euclidean distance
/// until the assignment stops changing or 100 iterations pass. k is clamped
/// to the number of distinct symbols. Clusters that end up empty are dropped.
///
/// Throws ContractViolation on empty input or k == 0, OutOfVocabularyError
/// when a symbol has no vector.
ClusterSet cluster_symbols(const EmbeddingStore& store, std::span<const std::string> symbols, std::size_t k,
                           std::uint64_t rng_seed);

/// Total squared distance of each symbol's unit vector to its cluster's
/// centroid.
double within_cluster_distance(const EmbeddingStore& store, const ClusterSet& set);

/// Cosine of two arbitrary vectors, or -2 when either is zero (so such a
/// cluster sorts last).
double vector_cosine(std::span<const double> a, std::span<const double> b);

}  // namespace assoc
