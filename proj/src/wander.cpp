#include "assoc/wander.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "assoc/error.hpp"

namespace assoc {

FocusStrategy FocusStrategy::parse(std::string_view text) {
    if (text == "nearest") return {ClusterPick::Nearest, 0};
    if (text == "middle") return {ClusterPick::Middle, 0};
    if (text == "farthest") return {ClusterPick::Farthest, 0};
    std::size_t i = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw DomainError("unknown cluster pick '" + std::string(text) +
                          "' (expected nearest, middle, farthest or an index)");
    }
    return {ClusterPick::Index, i};
}

std::string to_string(const FocusStrategy& s) {
    switch (s.pick) {
        case ClusterPick::Nearest: return "nearest";
        case ClusterPick::Middle: return "middle";
        case ClusterPick::Farthest: return "farthest";
        case ClusterPick::Index: return std::to_string(s.index);
    }
    return "middle";
}

void WanderConfig::validate() const {
    if (steps == 0) throw DomainError("steps must be positive");
    if (cluster_divisor == 0) throw DomainError("cluster divisor must be positive");
    selection.validate();
    limits.validate();
}

std::string_view to_string(TerminatedReason r) noexcept {
    switch (r) {
        case TerminatedReason::MaxSteps: return "max_steps";
        case TerminatedReason::NoNewSymbols: return "no_new_symbols";
        case TerminatedReason::EmptyModel: return "empty_model";
    }
    return "unknown";
}

namespace {

std::vector<std::string> in_vocabulary(const EmbeddingStore& store, const std::vector<std::string>& words) {
    std::vector<std::string> out;
    std::set<std::string, std::less<>> seen;
    for (const auto& w : words) {
        if (store.contains(w) && seen.insert(w).second) out.push_back(w);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> order_clusters(const EmbeddingStore& store, const ClusterSet& clusters,
                                        const Context& context) {
    std::vector<std::size_t> order(clusters.clusters.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    auto anchors = in_vocabulary(store, context.seed_symbols);
    if (anchors.empty()) anchors = in_vocabulary(store, context.expanded_symbols);
    if (anchors.empty()) return order;

    std::sort(anchors.begin(), anchors.end());
    const Vector target = store.mean_vector(anchors);
    std::vector<double> score(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) score[i] = vector_cosine(clusters.clusters[i].centroid, target);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    return order;
}

std::vector<std::string> choose_focus(const EmbeddingStore& store, const ClusterSet& clusters,
                                      const Context& context, const FocusStrategy& pick) {
    if (clusters.clusters.empty()) throw ContractViolation("no clusters to choose a focus from");
    const auto order = order_clusters(store, clusters, context);
    const std::size_t n = order.size();
    std::size_t at = 0;
    switch (pick.pick) {
        case ClusterPick::Nearest: at = 0; break;
        case ClusterPick::Middle: at = (n - 1) / 2; break;
        case ClusterPick::Farthest: at = n - 1; break;
        case ClusterPick::Index: at = std::min(pick.index, n - 1); break;
    }
    return clusters.clusters[order[at]].members;
}

std::size_t cluster_count_for(std::size_t n, std::size_t divisor) {
    if (divisor == 0) throw ContractViolation("cluster divisor must be positive");
    return std::max<std::size_t>(1, (2 * n + divisor) / (2 * divisor));
}

std::vector<Clause> seed_facts(const std::vector<std::string>& seeds, const KnowledgeBase& kb) {
    std::vector<Clause> out;
    for (const auto& s : seeds) {
        const int arity = kb.arity(s);
        if (arity != -1 && arity != 1) continue;
        Clause c;
        c.id = "seed" + std::to_string(out.size() + 1);
        c.provenance = Provenance::Generated;
        c.heads = {{Atom{s, {Term::constant("c_" + s)}}}};
        out.push_back(std::move(c));
    }
    return out;
}

Chain wander(const std::vector<std::string>& start, const KnowledgeBase& kb, const EmbeddingStore& store,
             const WanderConfig& cfg) {
    cfg.validate();
    if (start.empty()) throw ContractViolation("wandering needs at least one start symbol");
    const bool usable = std::any_of(start.begin(), start.end(), [&](const std::string& s) {
        return store.contains(s) || kb.has_predicate(s);
    });
    if (!usable) throw DomainError("unwanderable start: no start symbol is in the vocabulary or the knowledge base");

    Chain chain;
    chain.steps.push_back({Context::from_seeds(start).seed_symbols, {}, 0, 0, 0, 0, ReasonerStatus::Open});

    for (std::size_t step = 0; step < cfg.steps; ++step) {
        ChainStep& current = chain.steps.back();
        const ContextOrigin origin = step == 0 ? ContextOrigin::Formula : ContextOrigin::Cluster;
        const Context ctx = expand_context(store, current.focus_symbols, cfg.selection, origin);
        current.context_symbols = ctx.expanded_symbols;

        const auto ids = associative_select(kb, store, ctx, cfg.selection);
        current.selected_clauses = ids.size();
        std::vector<Clause> problem;
        problem.reserve(ids.size() + ctx.seed_symbols.size());
        for (std::size_t i : ids) problem.push_back(kb.clause(i));
        const auto facts = seed_facts(ctx.seed_symbols, kb);
        problem.insert(problem.end(), facts.begin(), facts.end());

        const ReasonerResult result = reason(problem, cfg.limits);
        current.status = result.status;
        current.model_size = result.model.size();
        if (result.status == ReasonerStatus::Refutation || result.model.size() <= facts.size()) {
            chain.terminated_reason = TerminatedReason::EmptyModel;
            return chain;
        }

        std::set<std::string, std::less<>> context_set(ctx.expanded_symbols.begin(), ctx.expanded_symbols.end());
        std::vector<std::string> fresh;
        for (auto& s : model_symbols(result)) {
            if (context_set.contains(s)) continue;
            if (store.contains(s)) {
                fresh.push_back(std::move(s));
            } else {
                ++current.dropped_oov;
            }
        }
        if (fresh.empty()) {
            chain.terminated_reason = TerminatedReason::NoNewSymbols;
            return chain;
        }

        const std::size_t k = cluster_count_for(fresh.size(), cfg.cluster_divisor);
        const ClusterSet clusters = cluster_symbols(store, fresh, k, cfg.rng_seed + step);
        current.cluster_count = clusters.clusters.size();
        auto focus = choose_focus(store, clusters, ctx, cfg.pick);
        chain.steps.push_back({std::move(focus), {}, 0, 0, 0, 0, ReasonerStatus::Open});
    }
    chain.terminated_reason = TerminatedReason::MaxSteps;
    return chain;
}

double chain_sentence_distance(const EmbeddingStore& store, const Chain& chain,
                               const std::vector<std::string>& sentence_words) {
    std::vector<std::string> symbols;
    for (const auto& s : chain.steps) symbols.insert(symbols.end(), s.focus_symbols.begin(), s.focus_symbols.end());
    auto chain_words = in_vocabulary(store, symbols);
    auto sentence = in_vocabulary(store, sentence_words);
    if (chain_words.empty()) throw UndefinedDistanceError("no chain symbol has a vector");
    if (sentence.empty()) throw UndefinedDistanceError("no sentence word has a vector");
    std::sort(chain_words.begin(), chain_words.end());
    std::sort(sentence.begin(), sentence.end());
    const double c = vector_cosine(store.mean_vector(chain_words), store.mean_vector(sentence));
    if (c < -1.0) throw UndefinedDistanceError("mean vector is zero");
    return 1.0 - c;
}

std::string choose_answer(const EmbeddingStore& store,
                          const std::vector<std::pair<std::string, std::vector<Chain>>>& chains_per_candidate,
                          const std::vector<std::string>& sentence_words) {
    if (chains_per_candidate.empty()) throw ContractViolation("no answer candidates");
    const std::string* best = nullptr;
    double best_score = 0.0;
    for (const auto& [candidate, chains] : chains_per_candidate) {
        if (chains.empty()) throw ContractViolation("candidate '" + candidate + "' has no chains");
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto& chain : chains) {
            try {
                sum += chain_sentence_distance(store, chain, sentence_words);
                ++used;
            } catch (const UndefinedDistanceError&) {
            }
        }
        const double score = used == 0 ? std::numeric_limits<double>::infinity() : sum / static_cast<double>(used);
        if (best == nullptr || score < best_score) {
            best = &candidate;
            best_score = score;
        }
    }
    return *best;
}

}  // namespace assoc
