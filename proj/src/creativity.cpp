#include "assoc/creativity.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <thread>

#include "assoc/error.hpp"

namespace assoc {

std::string_view to_string(RankingKind k) noexcept {
    return k == RankingKind::Mean ? "mean" : "variance_adjusted";
}

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> checked_query(const EmbeddingStore& store, const std::vector<std::string>& query,
                                       const RankOptions& options) {
    if (query.empty()) throw DomainError("query needs at least one word");
    if (options.pool == 0) throw DomainError("pool size must be positive");
    std::vector<std::string> sorted = query;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DomainError("query words must be pairwise distinct");
    }
    std::vector<std::string> missing;
    for (const auto& w : query) {
        if (!store.contains(w)) missing.push_back(w);
    }
    if (!missing.empty()) throw OutOfVocabularyError(std::move(missing));
    return sorted;
}

std::set<std::string, std::less<>> exclusions(const EmbeddingStore& store, const std::vector<std::string>& query,
                                              const RankOptions& options) {
    std::set<std::string, std::less<>> out;
    if (!options.exclude_query) return out;
    std::set<std::string, std::less<>> lowered;
    for (const auto& q : query) lowered.insert(lower_ascii(q));
    for (const auto& w : store.words()) {
        if (lowered.contains(lower_ascii(w))) out.insert(w);
    }
    return out;
}

RankedCandidates mean_ranking(const EmbeddingStore& store, const std::vector<std::string>& sorted_query,
                              const RankOptions& options) {
    RankedCandidates r;
    r.kind = RankingKind::Mean;
    r.pool_size = options.pool;
    const Vector mean = store.mean_vector(sorted_query);
    r.entries = store.nearest(mean, options.pool, exclusions(store, sorted_query, options));
    return r;
}

RankedCandidates adjust(const EmbeddingStore& store, const std::vector<std::string>& sorted_query,
                        RankedCandidates r) {
    r.kind = RankingKind::VarianceAdjusted;
    for (auto& e : r.entries) e.score -= store.similarity_variance(e.word, sorted_query);
    std::sort(r.entries.begin(), r.entries.end(), ranks_before);
    return r;
}

std::optional<std::size_t> rank_of(const RankedCandidates& r, const std::string& word) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        if (r.entries[i].word == word) return i + 1;
    }
    return std::nullopt;
}

ProblemOutcome evaluate_one(const EmbeddingStore& store, const FratProblem& p, const RankOptions& options) {
    ProblemOutcome o;
    for (const auto& w : p.query_words) {
        if (!store.contains(w)) o.missing.push_back(w);
    }
    if (!store.contains(*p.gold_answer)) o.missing.push_back(*p.gold_answer);
    if (!o.missing.empty()) return o;

    const auto sorted = checked_query(store, p.query_words, options);
    const auto mean = mean_ranking(store, sorted, options);
    const auto adjusted = adjust(store, sorted, mean);
    o.mean_rank = rank_of(mean, *p.gold_answer);
    o.variance_rank = rank_of(adjusted, *p.gold_answer);
    return o;
}

}  // namespace

RankedCandidates rank_by_mean(const EmbeddingStore& store, const std::vector<std::string>& query,
                              const RankOptions& options) {
    return mean_ranking(store, checked_query(store, query, options), options);
}

RankedCandidates rank_variance_adjusted(const EmbeddingStore& store, const std::vector<std::string>& query,
                                        const RankOptions& options) {
    const auto sorted = checked_query(store, query, options);
    return adjust(store, sorted, mean_ranking(store, sorted, options));
}

std::vector<std::string> context_words(const EmbeddingStore& store, const std::vector<std::string>& seeds,
                                       RankingKind kind, const RankOptions& options) {
    const auto r = kind == RankingKind::Mean ? rank_by_mean(store, seeds, options)
                                             : rank_variance_adjusted(store, seeds, options);
    std::vector<std::string> out;
    out.reserve(r.entries.size());
    for (const auto& e : r.entries) out.push_back(e.word);
    return out;
}

BenchmarkMetrics evaluate_benchmark(const EmbeddingStore& store, const std::vector<FratProblem>& problems,
                                    const std::vector<std::size_t>& k_values, const RankOptions& options,
                                    std::size_t jobs) {
    if (problems.empty()) throw ContractViolation("benchmark needs at least one problem");
    if (options.pool == 0) throw DomainError("pool size must be positive");
    for (const auto& p : problems) {
        if (!p.gold_answer) throw ContractViolation("benchmark problems need a gold answer");
    }

    BenchmarkMetrics m;
    m.problems = problems.size();
    m.outcomes.resize(problems.size());
    jobs = std::clamp<std::size_t>(jobs, 1, problems.size());
    if (jobs == 1) {
        for (std::size_t i = 0; i < problems.size(); ++i) m.outcomes[i] = evaluate_one(store, problems[i], options);
    } else {
        // Strided split; each worker writes only its own outcome slots.
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> workers;
        for (std::size_t j = 0; j < jobs; ++j) {
            workers.emplace_back([&, j] {
                try {
                    for (std::size_t i = j; i < problems.size(); i += jobs)
                        m.outcomes[i] = evaluate_one(store, problems[i], options);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    KindMetrics mean{RankingKind::Mean, {}};
    KindMetrics var{RankingKind::VarianceAdjusted, {}};
    for (std::size_t k : k_values) {
        HitRate hm{k, 0, 0.0};
        HitRate hv{k, 0, 0.0};
        for (const auto& o : m.outcomes) {
            if (o.mean_rank && *o.mean_rank <= k) ++hm.hits;
            if (o.variance_rank && *o.variance_rank <= k) ++hv.hits;
        }
        hm.rate = static_cast<double>(hm.hits) / static_cast<double>(m.problems);
        hv.rate = static_cast<double>(hv.hits) / static_cast<double>(m.problems);
        mean.hits.push_back(hm);
        var.hits.push_back(hv);
    }
    m.kinds = {mean, var};

    const std::size_t last = options.pool + 1;
    for (const auto& o : m.outcomes) {
        if (!o.missing.empty()) {
            ++m.skipped;
            continue;
        }
        const std::size_t a = o.mean_rank.value_or(last);
        const std::size_t b = o.variance_rank.value_or(last);
        if (b < a) ++m.improved;
        else if (b > a) ++m.worsened;
        else ++m.unchanged;
    }
    return m;
}

std::vector<FratProblem> load_frat_problems(std::istream& in) {
    if (!in) throw LoadError("problem stream is not readable");
    std::vector<FratProblem> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, '\t')) {
            const auto b = f.find_first_not_of(' ');
            const auto e = f.find_last_not_of(' ');
            fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
        }
        if (fields.size() != 3 && fields.size() != 4) {
            throw ParseError("expected 3 query words and an optional gold answer, found " +
                                 std::to_string(fields.size()) + " fields",
                             line_no, 1);
        }
        for (const auto& w : fields) {
            if (w.empty()) throw ParseError("empty field", line_no, 1);
        }
        FratProblem p;
        p.query_words.assign(fields.begin(), fields.begin() + 3);
        if (fields.size() == 4) p.gold_answer = fields[3];
        std::vector<std::string> sorted = p.query_words;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ParseError("query words must be pairwise distinct", line_no, 1);
        }
        out.push_back(std::move(p));
    }
    if (in.bad()) throw LoadError("read error in problem stream");
    return out;
}

}  // namespace assoc
