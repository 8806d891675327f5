#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "assoc/cluster.hpp"
#include "assoc/embedding.hpp"
#include "assoc/kb.hpp"
#include "assoc/reasoner.hpp"
#include "assoc/select.hpp"

namespace assoc {

enum class ClusterPick { Nearest, Middle, Farthest, Index };

struct FocusStrategy {
    ClusterPick pick = ClusterPick::Middle;
    std::size_t index = 0;  // used by ClusterPick::Index

    /// "nearest", "middle", "farthest" or a non-negative integer.
    static FocusStrategy parse(std::string_view text);
};

std::string to_string(const FocusStrategy& s);

struct WanderConfig {
    std::size_t steps = 10;
    std::size_t cluster_divisor = 4;
    FocusStrategy pick;
    SelectionConfig selection;
    Limits limits;
    std::uint64_t rng_seed = 42;

    void validate() const;
};

struct ChainStep {
    std::vector<std::string> focus_symbols;
    /// Expanded context built from this focus (empty for an unexpanded step).
    std::vector<std::string> context_symbols;
    std::size_t selected_clauses = 0;
    std::size_t model_size = 0;
    std::size_t cluster_count = 0;
    /// Model symbols without a vector, dropped before clustering.
    std::size_t dropped_oov = 0;
    ReasonerStatus status = ReasonerStatus::Open;
};

enum class TerminatedReason { MaxSteps, NoNewSymbols, EmptyModel };

std::string_view to_string(TerminatedReason r) noexcept;

struct Chain {
    std::vector<ChainStep> steps;
    TerminatedReason terminated_reason = TerminatedReason::MaxSteps;
};

/// Cluster indices by cos(centroid, mean of the in-vocabulary context seed
/// vectors), descending; ties keep the lower index first. Falls back to the
/// expanded symbols when no seed has a vector, and to index order when
/// neither does.
std::vector<std::size_t> order_clusters(const EmbeddingStore& store, const ClusterSet& clusters,
                                        const Context& context);

/// Members of the cluster the strategy picks from order_clusters():
/// nearest = first, middle = floor((n-1)/2), farthest = last, index = clamped.
std::vector<std::string> choose_focus(const EmbeddingStore& store, const ClusterSet& clusters,
                                      const Context& context, const FocusStrategy& pick);

/// Number of clusters for n symbols: max(1, round_half_up(n / divisor)).
std::size_t cluster_count_for(std::size_t n, std::size_t divisor);

/// Ground facts s(c_s), one per seed whose knowledge-base arity is 1 or
/// unknown, so rules can fire from bare symbols.
std::vector<Clause> seed_facts(const std::vector<std::string>& seeds, const KnowledgeBase& kb);

/// Repeats expand -> associative selection -> reasoning -> clustering ->
/// refocus. steps[0] holds the start symbols; each later focus comes from
/// model symbols outside the previous expanded context. Stops after
/// cfg.steps rounds (MaxSteps), when reasoning adds nothing beyond the seed
/// facts or refutes them (EmptyModel), or when no new symbol with a vector
/// remains (NoNewSymbols). Step i clusters with seed cfg.rng_seed + i.
///
/// Throws DomainError ("unwanderable start") when no start symbol is in the
/// vocabulary or the knowledge base.
Chain wander(const std::vector<std::string>& start, const KnowledgeBase& kb, const EmbeddingStore& store,
             const WanderConfig& cfg);

/// 1 - cos(mean of the chain's distinct in-vocabulary focus symbols, mean of
/// the in-vocabulary sentence words). Throws UndefinedDistanceError when
/// either side has no vector.
double chain_sentence_distance(const EmbeddingStore& store, const Chain& chain,
                               const std::vector<std::string>& sentence_words);

/// Candidate whose chains are on average closest to the sentence. Chains
/// with an undefined distance are skipped; a candidate with none left scores
/// +infinity. Ties go to the earlier candidate.
std::string choose_answer(const EmbeddingStore& store,
                          const std::vector<std::pair<std::string, std::vector<Chain>>>& chains_per_candidate,
                          const std::vector<std::string>& sentence_words);

}  // namespace assoc
