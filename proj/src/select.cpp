#include "assoc/select.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "assoc/error.hpp"

namespace assoc {

Context Context::from_seeds(std::vector<std::string> seeds, ContextOrigin origin) {
    Context c;
    for (auto& s : seeds) {
        if (std::find(c.seed_symbols.begin(), c.seed_symbols.end(), s) == c.seed_symbols.end()) {
            c.seed_symbols.push_back(std::move(s));
        }
    }
    c.expanded_symbols = c.seed_symbols;
    c.origin = origin;
    return c;
}

void SelectionConfig::validate() const {
    if (!(neighbor_threshold >= -1.0 && neighbor_threshold <= 1.0)) {
        throw DomainError("neighbor threshold must lie in [-1, 1]");
    }
    if (neighbor_cap == 0) throw DomainError("neighbor cap must be positive");
    if (frequency_cutoff == 0) throw DomainError("frequency cutoff must be positive");
}

std::vector<std::size_t> syntactic_select(const KnowledgeBase& kb, const Context& context,
                                          const SelectionConfig& cfg) {
    std::set<std::string, std::less<>> seen(context.expanded_symbols.begin(), context.expanded_symbols.end());
    std::vector<bool> selected(kb.size(), false);

    std::vector<std::string> triggers;
    for (const auto& s : context.expanded_symbols) {
        const auto n = kb.occurrence_count(s);
        if (n > 0 && n <= cfg.frequency_cutoff) triggers.push_back(s);
    }

    for (std::size_t level = 0;; ++level) {
        std::vector<std::size_t> fresh;
        for (const auto& s : triggers) {
            for (std::size_t idx : kb.clauses_with(s)) {
                if (!selected[idx]) {
                    selected[idx] = true;
                    fresh.push_back(idx);
                }
            }
        }
        if (level >= cfg.depth || fresh.empty()) break;

        std::sort(fresh.begin(), fresh.end());
        triggers.clear();
        for (std::size_t idx : fresh) {
            for (auto& s : predicate_symbols(kb.clause(idx))) {
                if (seen.contains(s)) continue;
                const auto n = kb.occurrence_count(s);
                seen.insert(s);
                if (n <= cfg.frequency_cutoff) triggers.push_back(std::move(s));
            }
        }
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (selected[i]) out.push_back(i);
    }
    return out;
}

Context expand_context(const EmbeddingStore& store, const std::vector<std::string>& seeds,
                       const SelectionConfig& cfg, ContextOrigin origin) {
    Context ctx = Context::from_seeds(seeds, origin);
    std::set<std::string, std::less<>> in_seed(ctx.seed_symbols.begin(), ctx.seed_symbols.end());

    std::map<std::string, double, std::less<>> best;
    for (const auto& s : ctx.seed_symbols) {
        for (auto& n : store.similar_words(s, cfg.neighbor_threshold, cfg.neighbor_cap)) {
            if (in_seed.contains(n.word)) continue;
            auto [it, inserted] = best.emplace(n.word, n.score);
            if (!inserted) it->second = std::max(it->second, n.score);
        }
    }
    std::vector<ScoredWord> neighbours;
    neighbours.reserve(best.size());
    for (const auto& [w, s] : best) neighbours.push_back({w, s});
    std::sort(neighbours.begin(), neighbours.end(), ranks_before);
    for (auto& n : neighbours) ctx.expanded_symbols.push_back(std::move(n.word));
    return ctx;
}

std::vector<std::size_t> associative_select(const KnowledgeBase& kb, const EmbeddingStore& store,
                                            const Context& context, const SelectionConfig& cfg) {
    const auto candidates = syntactic_select(kb, context, cfg);

    std::set<std::string, std::less<>> context_set(context.expanded_symbols.begin(),
                                                   context.expanded_symbols.end());
    std::vector<std::string> anchors;
    for (const auto& c : context.expanded_symbols) {
        if (store.contains(c)) anchors.push_back(c);
    }

    // Best similarity per symbol, memoised across clauses.
    std::map<std::string, double, std::less<>> memo;
    auto admitted = [&](const std::string& symbol) {
        if (context_set.contains(symbol) || anchors.empty() || !store.contains(symbol)) return true;
        auto it = memo.find(symbol);
        if (it == memo.end()) {
            double m = -1.0;
            for (const auto& a : anchors) m = std::max(m, store.cosine(symbol, a));
            it = memo.emplace(symbol, m).first;
        }
        return cfg.similarity_interval.contains(it->second);
    };

    std::vector<std::size_t> out;
    for (std::size_t idx : candidates) {
        const auto symbols = predicate_symbols(kb.clause(idx));
        if (std::all_of(symbols.begin(), symbols.end(), admitted)) out.push_back(idx);
    }
    return out;
}

}  // namespace assoc
