#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "assoc/embedding.hpp"

namespace assoc {

struct FratProblem {
    std::vector<std::string> query_words;  // three, pairwise distinct
    std::optional<std::string> gold_answer;
};

enum class RankingKind { Mean, VarianceAdjusted };

std::string_view to_string(RankingKind k) noexcept;

struct RankOptions {
    std::size_t pool = 200;
    /// Drop the query words and their case variants from the pool.
    bool exclude_query = false;
};

struct RankedCandidates {
    RankingKind kind = RankingKind::Mean;
    std::vector<ScoredWord> entries;  // score descending, then word
    std::size_t pool_size = 0;
};

/// The `pool` nearest words to the mean of the query vectors, scored by
/// cosine to that mean. The query is sorted before averaging so any
/// permutation gives the same bits. Throws OutOfVocabularyError naming every
/// missing query word, DomainError on an empty or repeating query or a zero
/// pool.
RankedCandidates rank_by_mean(const EmbeddingStore& store, const std::vector<std::string>& query,
                              const RankOptions& options = {});

/// Same pool as rank_by_mean, rescored as cosine to the mean minus the
/// population variance of the cosines to the individual query words.
RankedCandidates rank_variance_adjusted(const EmbeddingStore& store, const std::vector<std::string>& query,
                                        const RankOptions& options = {});

/// Ranked words only, for building contexts from seed words.
std::vector<std::string> context_words(const EmbeddingStore& store, const std::vector<std::string>& seeds,
                                       RankingKind kind, const RankOptions& options = {});

struct HitRate {
    std::size_t k = 0;
    std::size_t hits = 0;
    double rate = 0.0;
};

struct KindMetrics {
    RankingKind kind = RankingKind::Mean;
    std::vector<HitRate> hits;  // in k_values order
};

struct ProblemOutcome {
    /// 1-based rank of the gold answer; nullopt when outside the pool.
    std::optional<std::size_t> mean_rank;
    std::optional<std::size_t> variance_rank;
    /// Query or gold words without a vector; non-empty means skipped.
    std::vector<std::string> missing;
};

struct BenchmarkMetrics {
    std::size_t problems = 0;
    std::size_t skipped = 0;
    std::vector<KindMetrics> kinds;  // Mean, then VarianceAdjusted
    /// Gold-rank movement from mean to variance-adjusted ranking, over
    /// problems that were not skipped. A gold outside the pool ranks last.
    std::size_t improved = 0;
    std::size_t worsened = 0;
    std::size_t unchanged = 0;
    std::vector<ProblemOutcome> outcomes;  // in problem order
};

/// hit@k for both rankings. Problems with out-of-vocabulary words count as
/// misses and are listed in `outcomes`. Rates are over all problems.
/// `jobs` > 1 spreads problems over threads; results do not depend on it.
BenchmarkMetrics evaluate_benchmark(const EmbeddingStore& store, const std::vector<FratProblem>& problems,
                                    const std::vector<std::size_t>& k_values, const RankOptions& options = {},
                                    std::size_t jobs = 1);

/// Tab-separated lines `q1 q2 q3 gold`; blank and '#' lines are skipped.
/// Throws ParseError on any other shape.
std::vector<FratProblem> load_frat_problems(std::istream& in);

}  // namespace assoc
