// Acceptance run: one PASS/FAIL (or SKIP) line per criterion, nonzero exit
// if anything failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "assoc/cli.hpp"
#include "assoc/cluster.hpp"
#include "assoc/creativity.hpp"
#include "assoc/error.hpp"
#include "assoc/kb.hpp"
#include "assoc/reasoner.hpp"
#include "assoc/select.hpp"
#include "assoc/wander.hpp"
#include "generators.hpp"
#include "horn_fixpoint.hpp"
#include "reference_vectors.hpp"

using namespace assoc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum class Kind { Pass, Fail, Skip } kind = Kind::Fail;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Kind::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Kind::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Kind::Skip, std::move(d)}; }

std::string fixture(const std::string& name) { return std::string(ASSOC_FIXTURE_DIR) + "/" + name; }

EmbeddingStore load_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    return load_embedding(in).store;
}

KnowledgeBase triple_kb(const std::string& path) {
    std::ifstream in(path);
    return build_kb(triples_to_clauses(parse_triples(in, TripleFormat::Tsv).triples));
}

std::vector<std::string> ids(const KnowledgeBase& kb, const std::vector<std::size_t>& positions) {
    std::vector<std::string> out;
    for (std::size_t i : positions) out.push_back(kb.clause(i).id);
    return out;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Atom> sorted_atoms(std::vector<Atom> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// 1 --------------------------------------------------------------------------

Outcome horn_oracle() {
    constexpr std::size_t kSets = 250;
    for (std::size_t seed = 0; seed < kSets; ++seed) {
        UnitRng rng(1000 + seed);
        const auto clauses = testing::random_clauses(rng);
        const auto r = reason(clauses, Limits{});
        if (r.status != ReasonerStatus::Open)
            return fail("set " + std::to_string(seed) + ": status " + std::string(to_string(r.status)));
        if (sorted_atoms(r.model) != sorted_atoms(testing::horn_fixpoint(clauses)))
            return fail("set " + std::to_string(seed) + ": model differs from the fixpoint");
    }
    return pass(std::to_string(kSets) + " Horn sets agree with the naive fixpoint");
}

// 2 --------------------------------------------------------------------------

Outcome dog_bone_branches() {
    std::ifstream in(fixture("dogbone.clauses"));
    const auto clauses = parse_clause_file(in);
    const auto start = std::chrono::steady_clock::now();
    const auto r = reason(clauses, Limits{});
    const auto took = std::chrono::steady_clock::now() - start;
    auto has = [&](const std::string& text) {
        return std::any_of(r.model.begin(), r.model.end(), [&](const Atom& a) { return to_string(a) == text; });
    };
    if (r.status != ReasonerStatus::Open) return fail("status " + std::string(to_string(r.status)));
    if (r.stats.closed_branches < 1) return fail("no closed branch");
    if (!has("bone(b)") || !has("dog_food(b)")) return fail("open model lacks bone(b) or dog_food(b)");
    if (took >= std::chrono::seconds(1)) return fail("took a second or more");
    return pass(std::to_string(r.stats.closed_branches) + " closed branch(es); open model has bone(b), dog_food(b)");
}

// 3 --------------------------------------------------------------------------

Outcome dog_fur_selection() {
    const auto kb = triple_kb(fixture("dogfur.tsv"));
    const auto store = load_store(fixture("dogfur.vec"));
    const SelectionConfig cfg;  // interval [0.3, 0.8]
    const auto got = ids(kb, associative_select(kb, store, Context::from_seeds({"dog", "fur"}), cfg));
    if (got != std::vector<std::string>{"t1"}) {
        std::string s;
        for (const auto& g : got) s += g + " ";
        return fail("selected { " + s + "}, expected { t1 }");
    }
    return pass("dog/fur selects t1 and rejects the poodle and carpet clauses");
}

// 4 --------------------------------------------------------------------------

struct SelectionInstance {
    KnowledgeBase kb;
    EmbeddingStore store{4};
    std::vector<std::string> seeds;
    SelectionConfig cfg;
};

SelectionInstance random_selection_instance(std::uint64_t seed) {
    UnitRng rng(seed);
    const auto concepts = testing::word_list("w", 12);
    const std::vector<std::string> relations{"isa", "hasa", "atlocation"};
    SelectionInstance s;
    s.kb = testing::random_triple_kb(rng, concepts, relations, testing::uniform(rng, 3, 20));
    // Leave a few words without vectors so the out-of-vocabulary path is hit.
    std::vector<std::string> vocab = testing::sample(rng, concepts, testing::uniform(rng, 8, 12));
    vocab.insert(vocab.end(), relations.begin(), relations.end());
    s.store = testing::random_store(rng, vocab, 4);
    s.seeds = testing::sample(rng, concepts, testing::uniform(rng, 1, 3));
    s.cfg.neighbor_threshold = 0.5 + 0.5 * rng.next();
    s.cfg.neighbor_cap = testing::uniform(rng, 1, 3);
    s.cfg.frequency_cutoff = testing::uniform(rng, 1, 12);
    s.cfg.depth = testing::uniform(rng, 0, 3);
    double a = -1.0 + 2.0 * rng.next();
    double b = -1.0 + 2.0 * rng.next();
    if (a > b) std::swap(a, b);
    s.cfg.similarity_interval = SimilarityInterval(a, b);
    return s;
}

Outcome selection_properties() {
    constexpr std::size_t kInstances = 100;
    for (std::size_t i = 0; i < kInstances; ++i) {
        const auto s = random_selection_instance(2000 + i);
        const Context ctx = expand_context(s.store, s.seeds, s.cfg);
        const auto base = associative_select(s.kb, s.store, ctx, s.cfg);
        const std::string at = "instance " + std::to_string(i) + ": ";

        auto deeper = s.cfg;
        deeper.depth += 1;
        if (!subset(base, associative_select(s.kb, s.store, ctx, deeper))) return fail(at + "depth monotonicity");

        if (!subset(base, syntactic_select(s.kb, ctx, s.cfg))) return fail(at + "filter added a clause");

        auto wider = s.cfg;
        wider.similarity_interval = SimilarityInterval(std::max(-1.0, s.cfg.similarity_interval.lo() - 0.25),
                                                       std::min(1.0, s.cfg.similarity_interval.hi() + 0.25));
        if (!subset(base, associative_select(s.kb, s.store, ctx, wider))) return fail(at + "interval widening");
    }
    return pass(std::to_string(kInstances) + " instances: depth, filter and interval monotonicity hold");
}

// 5 --------------------------------------------------------------------------

WanderConfig desk_config() {
    WanderConfig cfg;
    cfg.steps = 5;
    cfg.selection.neighbor_threshold = 0.95;
    cfg.selection.neighbor_cap = 3;
    cfg.selection.frequency_cutoff = 3;
    cfg.selection.depth = 2;
    cfg.selection.similarity_interval = SimilarityInterval(0.1, 1.0);
    cfg.rng_seed = 42;
    return cfg;
}

bool same_chain(const Chain& a, const Chain& b) {
    if (a.steps.size() != b.steps.size() || a.terminated_reason != b.terminated_reason) return false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        const auto& x = a.steps[i];
        const auto& y = b.steps[i];
        if (x.focus_symbols != y.focus_symbols || x.context_symbols != y.context_symbols ||
            x.selected_clauses != y.selected_clauses || x.model_size != y.model_size ||
            x.cluster_count != y.cluster_count || x.status != y.status)
            return false;
    }
    return true;
}

Outcome wandering_invariants() {
    const auto desk = wander({"dog", "chew", "bone"}, triple_kb(fixture("wander_kb.tsv")),
                             load_store(fixture("wander20.vec")), desk_config());
    if (desk.steps.size() < 2 || desk.steps[1].focus_symbols != std::vector<std::string>{"animal", "animals"})
        return fail("desk fixture: second focus is not {animal, animals}");

    constexpr std::size_t kFixtures = 50;
    const auto concepts = testing::word_list("w", 20);
    const std::vector<std::string> relations{"isa", "hasa", "atlocation"};
    std::size_t longest = 0;
    for (std::size_t i = 0; i < kFixtures; ++i) {
        UnitRng rng(3000 + i);
        const auto kb = testing::random_triple_kb(rng, concepts, relations, 10);
        std::vector<std::string> vocab = concepts;
        vocab.insert(vocab.end(), relations.begin(), relations.end());
        const auto store = testing::random_store(rng, vocab, 5);
        WanderConfig cfg;
        cfg.steps = testing::uniform(rng, 1, 6);
        cfg.cluster_divisor = testing::uniform(rng, 1, 4);
        cfg.pick = {static_cast<ClusterPick>(rng.index(3)), 0};
        cfg.selection.neighbor_threshold = 0.8;
        cfg.selection.neighbor_cap = 2;
        cfg.selection.depth = testing::uniform(rng, 0, 2);
        cfg.selection.similarity_interval = SimilarityInterval(-1.0, 1.0);
        cfg.rng_seed = 7 + i;
        const auto start = testing::sample(rng, concepts, testing::uniform(rng, 1, 3));

        const auto chain = wander(start, kb, store, cfg);
        const std::string at = "fixture " + std::to_string(i) + ": ";
        if (chain.steps.size() > cfg.steps + 1) return fail(at + "chain longer than steps + 1");
        for (std::size_t s = 1; s < chain.steps.size(); ++s) {
            const auto& prev = chain.steps[s - 1].context_symbols;
            for (const auto& f : chain.steps[s].focus_symbols) {
                if (std::find(prev.begin(), prev.end(), f) != prev.end())
                    return fail(at + "focus symbol '" + f + "' was already in the previous context");
            }
        }
        if (!same_chain(chain, wander(start, kb, store, cfg))) return fail(at + "rerun differs");
        longest = std::max(longest, chain.steps.size());
    }
    return pass("desk focus {animal, animals}; " + std::to_string(kFixtures) +
                " random fixtures disjoint, bounded, deterministic (longest chain " + std::to_string(longest) + ")");
}

// 6 --------------------------------------------------------------------------

Outcome clustering_invariants() {
    constexpr std::size_t kSets = 100;
    for (std::size_t i = 0; i < kSets; ++i) {
        UnitRng rng(4000 + i);
        const std::size_t n = testing::uniform(rng, 1, 50);
        const std::size_t d = testing::uniform(rng, 1, 10);
        const std::size_t k = testing::uniform(rng, 1, 60);
        const auto words = testing::word_list("v", n);
        const auto store = testing::random_store(rng, words, d);
        const auto set = cluster_symbols(store, words, k, 99 + i);
        const std::string at = "set " + std::to_string(i) + ": ";

        std::multiset<std::string> seen;
        for (const auto& c : set.clusters) {
            if (c.members.empty()) return fail(at + "empty cluster");
            seen.insert(c.members.begin(), c.members.end());
        }
        if (seen != std::multiset<std::string>(words.begin(), words.end())) return fail(at + "not a partition");
        if (set.clusters.empty() || set.clusters.size() > std::min(k, n)) return fail(at + "cluster count not clamped");
        for (std::size_t t = 1; t < set.objective_trace.size(); ++t) {
            if (set.objective_trace[t] > set.objective_trace[t - 1] + 1e-9)
                return fail(at + "objective rose at iteration " + std::to_string(t));
        }
    }
    return pass(std::to_string(kSets) + " vector sets: partition, clamped k, non-increasing objective");
}

// 7 --------------------------------------------------------------------------

Outcome frat_fixture() {
    const auto store = load_store(fixture("frat30.vec"));
    const testing::ReferenceVectors ref(fixture("frat30.vec"));
    std::ifstream in(fixture("frat5.tsv"));
    const auto problems = load_frat_problems(in);
    const std::vector<std::size_t> ks{1, 3, 10};
    const RankOptions options{20, false};
    const auto metrics = evaluate_benchmark(store, problems, ks, options);

    // Brute force: rank every vocabulary word, cut to the pool, find the gold.
    std::vector<std::size_t> mean_hits(ks.size(), 0), var_hits(ks.size(), 0);
    double worst = 0.0;
    for (const auto& p : problems) {
        auto mean_rank = ref.mean_ranking(p.query_words);
        mean_rank.resize(options.pool);
        const auto var_rank = ref.adjusted_ranking(p.query_words, options.pool);
        auto position = [&](const auto& ranking) {
            for (std::size_t i = 0; i < ranking.size(); ++i)
                if (ranking[i].first == *p.gold_answer) return i + 1;
            return ranking.size() + 1;
        };
        for (std::size_t j = 0; j < ks.size(); ++j) {
            mean_hits[j] += position(mean_rank) <= ks[j];
            var_hits[j] += position(var_rank) <= ks[j];
        }

        for (const auto& e : rank_variance_adjusted(store, p.query_words, options).entries) {
            const double direct = ref.cos_to_mean(e.word, p.query_words) -
                                  ref.variance(e.word, p.query_words);
            worst = std::max(worst, std::abs(direct - e.score));
        }
    }
    std::ostringstream detail;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const auto& hm = metrics.kinds[0].hits[j];
        const auto& hv = metrics.kinds[1].hits[j];
        if (hm.hits != mean_hits[j] || hv.hits != var_hits[j])
            return fail("hit@" + std::to_string(ks[j]) + " differs from the brute-force oracle");
        detail << "hit@" << ks[j] << " " << hm.hits << "/" << hv.hits << " ";
    }
    if (worst > 1e-9) return fail("variance-adjusted score off by " + std::to_string(worst));
    detail << "(mean/variance), max score error " << worst;
    return pass(detail.str());
}

// 8 --------------------------------------------------------------------------

Outcome frat_full_scale() {
    const char* vectors = std::getenv("ASSOC_FRAT_VECTORS");
    const char* problems_path = std::getenv("ASSOC_FRAT_PROBLEMS");
    if (vectors == nullptr || problems_path == nullptr)
        return skip("set ASSOC_FRAT_VECTORS and ASSOC_FRAT_PROBLEMS to the 300-d vectors and the 48 problems");
    const auto store = load_store(vectors);
    std::ifstream in(problems_path);
    const auto problems = load_frat_problems(in);
    const auto m = evaluate_benchmark(store, problems, {3, 10}, {200, true}, std::thread::hardware_concurrency());
    const std::size_t h3 = m.kinds[0].hits[0].hits;
    const std::size_t h10 = m.kinds[0].hits[1].hits;
    std::ostringstream detail;
    detail << "hit@3 " << h3 << ", hit@10 " << h10 << ", improved " << m.improved << ", worsened " << m.worsened
           << " of " << m.problems;
    const bool ok = h10 >= 25 && h10 <= 31 && h3 >= 20 && h3 <= 26 && m.improved >= 17 && m.worsened <= 10;
    return ok ? pass(detail.str()) : fail(detail.str());
}

// 9 --------------------------------------------------------------------------

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / "assoc_acceptance";
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"ingest", {"ingest", "--triples", fixture("wander_kb.tsv"), "--kb", fixture("dogbone.clauses")}},
        {"select", {"select", "--triples", fixture("dogfur.tsv"), "--embedding", fixture("dogfur.vec"), "--context",
                    "dog,fur"}},
        {"reason", {"reason", "--kb", fixture("dogbone.clauses"), "--derivations"}},
        {"wander", {"wander", "--triples", fixture("wander_kb.tsv"), "--embedding", fixture("wander20.vec"),
                    "--start", "dog,chew,bone", "--neighbor-threshold", "0.95", "--neighbor-cap", "3",
                    "--frequency-cutoff", "3", "--depth", "2", "--sim-lo", "0.1", "--sim-hi", "1.0", "--seed", "42",
                    "--sentence", "dog,bone"}},
        {"frat", {"frat", "--embedding", fixture("frat30.vec"), "--query", "bread,butter,knife", "--pool", "20",
                  "--rank", "both"}},
        {"frat-bench", {"frat-bench", "--embedding", fixture("frat30.vec"), "--problems", fixture("frat5.tsv"),
                        "--pool", "20", "--jobs", "2"}},
    };
    std::size_t files = 0;
    for (const auto& [name, args] : commands) {
        std::vector<std::string> outputs[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path out = dir / (name + "." + std::to_string(run) + ".json");
            const fs::path dot = dir / (name + "." + std::to_string(run) + ".dot");
            auto full = args;
            full.insert(full.end(), {"--out", out.string()});
            if (name == "wander") full.insert(full.end(), {"--dot", dot.string()});
            std::ostringstream so, se;
            const int code = run_cli(full, so, se);
            if (code != 0) return fail(name + " exited with " + std::to_string(code) + ": " + se.str());
            outputs[run].push_back(read_bytes(out));
            if (name == "wander") outputs[run].push_back(read_bytes(dot));
        }
        if (outputs[0] != outputs[1]) return fail(name + " output differs between runs");
        if (outputs[0].front().empty()) return fail(name + " wrote nothing");
        files += outputs[0].size();
    }
    fs::remove_all(dir);
    return pass(std::to_string(commands.size()) + " subcommands, " + std::to_string(files) +
                " output files byte-identical across runs");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"reasoner matches the Horn fixpoint oracle", horn_oracle},
        {"dog/bone closed and open branches", dog_bone_branches},
        {"dog/fur associative selection", dog_fur_selection},
        {"selection monotonicity properties", selection_properties},
        {"mind-wandering invariants", wandering_invariants},
        {"clustering invariants", clustering_invariants},
        {"fRAT fixture exactness", frat_fixture},
        {"full-scale fRAT reproduction", frat_full_scale},
        {"CLI determinism", cli_determinism},
    };
    bool failed = false;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* tag = o.kind == Outcome::Kind::Pass ? "PASS" : o.kind == Outcome::Kind::Skip ? "SKIP" : "FAIL";
        failed = failed || o.kind == Outcome::Kind::Fail;
        std::cout << tag << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
