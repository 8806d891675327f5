#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "assoc/embedding.hpp"
#include "assoc/kb.hpp"

namespace assoc {

enum class ContextOrigin { Formula, Cluster };

/// Symbols driving selection. `expanded_symbols` starts with the seeds in
/// their given order, followed by embedding neighbours.
struct Context {
    std::vector<std::string> seed_symbols;
    std::vector<std::string> expanded_symbols;
    ContextOrigin origin = ContextOrigin::Formula;

    /// Context without embedding expansion.
    static Context from_seeds(std::vector<std::string> seeds, ContextOrigin origin = ContextOrigin::Formula);
};

// The default interval was tuned on the dog/fur/poodle fixture: it keeps
// related symbols and drops both near-synonyms and unrelated ones.
struct SelectionConfig {
    SimilarityInterval similarity_interval{0.3, 0.8};
    double neighbor_threshold = 0.7;
    std::size_t neighbor_cap = 5;
    std::size_t frequency_cutoff = 1000;
    std::size_t depth = 1;

    void validate() const;
};

/// Trigger-based selection. Level 0 takes every clause mentioning a context
/// symbol whose occurrence count is within the cutoff; each further level
/// (up to cfg.depth) triggers on the not-yet-seen, low-frequency predicate
/// symbols of clauses selected by the previous level. Returns ascending
/// clause positions.
std::vector<std::size_t> syntactic_select(const KnowledgeBase& kb, const Context& context,
                                          const SelectionConfig& cfg);

/// Seeds plus, for each seed, its neighbours above cfg.neighbor_threshold
/// (at most cfg.neighbor_cap each). Neighbours are deduplicated keeping the
/// best similarity and ordered by similarity descending, then by word.
Context expand_context(const EmbeddingStore& store, const std::vector<std::string>& seeds,
                       const SelectionConfig& cfg, ContextOrigin origin = ContextOrigin::Formula);

/// syntactic_select over the expanded context, then drops every clause with
/// a non-context predicate whose best cosine to the context falls outside
/// the similarity interval. Out-of-vocabulary symbols never cause removal.
std::vector<std::size_t> associative_select(const KnowledgeBase& kb, const EmbeddingStore& store,
                                            const Context& context, const SelectionConfig& cfg);

}  // namespace assoc
