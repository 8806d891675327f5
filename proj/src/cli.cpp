#include "assoc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "assoc/cluster.hpp"
#include "assoc/creativity.hpp"
#include "assoc/embedding.hpp"
#include "assoc/error.hpp"
#include "assoc/kb.hpp"
#include "assoc/reasoner.hpp"
#include "assoc/select.hpp"
#include "assoc/wander.hpp"

namespace assoc {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

enum class LogLevel { Error, Warn, Info, Debug };

class Log {
public:
    explicit Log(std::ostream& err) : err_(err) {}

    void set_level(const std::string& name) {
        static const std::map<std::string, LogLevel> levels{
            {"error", LogLevel::Error}, {"warn", LogLevel::Warn}, {"info", LogLevel::Info}, {"debug", LogLevel::Debug}};
        level_ = levels.at(name);
    }

    void warn(const std::string& msg) const { write(LogLevel::Warn, "warning", msg); }
    void info(const std::string& msg) const { write(LogLevel::Info, "info", msg); }
    void debug(const std::string& msg) const { write(LogLevel::Debug, "debug", msg); }

private:
    void write(LogLevel at, const char* tag, const std::string& msg) const {
        if (at <= level_) err_ << "assoc: " << tag << ": " << msg << "\n";
    }

    std::ostream& err_;
    LogLevel level_ = LogLevel::Warn;
};

// ---------------------------------------------------------------------------
// Shared option groups

struct KbOptions {
    std::vector<std::string> clause_files;
    std::vector<std::string> fact_files;
    std::vector<std::string> triple_files;
    std::string triple_format = "auto";

    void add_to(CLI::App* app) {
        app->add_option("--kb", clause_files, "Clause file (repeatable)");
        app->add_option("--facts", fact_files, "Further clause file, usually ground facts (repeatable)");
        app->add_option("--triples", triple_files, "Triple file, CSV or TSV (repeatable)");
        app->add_option("--triple-format", triple_format, "auto (by extension), csv or tsv")
            ->check(CLI::IsMember({"auto", "csv", "tsv"}));
    }

    json echo() const {
        return json{{"kb", clause_files}, {"facts", fact_files}, {"triples", triple_files}, {"triple_format", triple_format}};
    }
};

struct SelectionOptions {
    SelectionConfig defaults;
    double sim_lo = defaults.similarity_interval.lo();
    double sim_hi = defaults.similarity_interval.hi();
    double neighbor_threshold = defaults.neighbor_threshold;
    std::size_t neighbor_cap = defaults.neighbor_cap;
    std::size_t frequency_cutoff = defaults.frequency_cutoff;
    std::size_t depth = defaults.depth;

    void add_to(CLI::App* app) {
        app->add_option("--sim-lo", sim_lo, "Lower bound of the similarity interval")->capture_default_str();
        app->add_option("--sim-hi", sim_hi, "Upper bound of the similarity interval")->capture_default_str();
        app->add_option("--neighbor-threshold", neighbor_threshold, "Minimum cosine for context expansion")
            ->capture_default_str();
        app->add_option("--neighbor-cap", neighbor_cap, "Neighbours added per seed")->capture_default_str();
        app->add_option("--frequency-cutoff", frequency_cutoff, "Symbols in more clauses never trigger")
            ->capture_default_str();
        app->add_option("--depth", depth, "Trigger levels beyond the context")->capture_default_str();
    }

    SelectionConfig resolve() const {
        SelectionConfig c;
        c.similarity_interval = SimilarityInterval(sim_lo, sim_hi);
        c.neighbor_threshold = neighbor_threshold;
        c.neighbor_cap = neighbor_cap;
        c.frequency_cutoff = frequency_cutoff;
        c.depth = depth;
        c.validate();
        return c;
    }

    json echo() const {
        return json{{"sim_lo", sim_lo},
                    {"sim_hi", sim_hi},
                    {"neighbor_threshold", neighbor_threshold},
                    {"neighbor_cap", neighbor_cap},
                    {"frequency_cutoff", frequency_cutoff},
                    {"depth", depth}};
    }
};

struct LimitOptions {
    std::int64_t timeout_ms = 30000;
    std::size_t max_atoms = Limits{}.max_atoms;
    std::size_t max_branch_depth = Limits{}.max_branch_depth;
    std::size_t max_term_depth = Limits{}.max_term_depth;

    void add_to(CLI::App* app) {
        app->add_option("--timeout-ms", timeout_ms, "Reasoner timeout in milliseconds")->capture_default_str();
        app->add_option("--max-atoms", max_atoms, "Atom limit per branch")->capture_default_str();
        app->add_option("--max-branch-depth", max_branch_depth, "Inference steps per branch")
            ->capture_default_str();
        app->add_option("--max-term-depth", max_term_depth, "Nesting limit for derived function terms")
            ->capture_default_str();
    }

    Limits resolve() const {
        if (timeout_ms <= 0) throw DomainError("timeout must be positive");
        Limits l;
        l.timeout = std::chrono::milliseconds(timeout_ms);
        l.max_atoms = max_atoms;
        l.max_branch_depth = max_branch_depth;
        l.max_term_depth = max_term_depth;
        l.validate();
        return l;
    }

    json echo() const {
        return json{{"timeout_ms", timeout_ms}, {"max_atoms", max_atoms}, {"max_branch_depth", max_branch_depth},
                    {"max_term_depth", max_term_depth}};
    }
};

// ---------------------------------------------------------------------------
// Input and output

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open '" + path + "'");
    return in;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw LoadError("cannot write '" + path + "'");
    f << text;
    if (!f.flush()) throw LoadError("write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

TripleFormat format_for(const std::string& path, const std::string& requested) {
    if (requested == "csv") return TripleFormat::Csv;
    if (requested == "tsv") return TripleFormat::Tsv;
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == "csv" ? TripleFormat::Csv : TripleFormat::Tsv;
}

std::vector<Clause> load_clauses(const KbOptions& o, const Log& log) {
    SkolemNamer namer;
    std::vector<Clause> all;
    for (std::size_t i = 0; i < o.clause_files.size(); ++i) {
        auto in = open_input(o.clause_files[i]);
        const std::string prefix = i == 0 ? "c" : "c" + std::to_string(i + 1) + "_";
        auto clauses = parse_clause_file(in, prefix, namer);
        log.info("read " + std::to_string(clauses.size()) + " clauses from " + o.clause_files[i]);
        std::move(clauses.begin(), clauses.end(), std::back_inserter(all));
    }
    for (std::size_t i = 0; i < o.fact_files.size(); ++i) {
        auto in = open_input(o.fact_files[i]);
        auto clauses = parse_clause_file(in, "f" + std::to_string(i + 1) + "_", namer);
        log.info("read " + std::to_string(clauses.size()) + " clauses from " + o.fact_files[i]);
        std::move(clauses.begin(), clauses.end(), std::back_inserter(all));
    }
    std::size_t triple_id = 0;
    for (const auto& path : o.triple_files) {
        auto in = open_input(path);
        const auto parsed = parse_triples(in, format_for(path, o.triple_format));
        for (const auto& s : parsed.skipped)
            log.warn(path + ":" + std::to_string(s.line) + ": skipped (" + s.reason + ")");
        for (const auto& t : parsed.triples) all.push_back(triple_to_clause(t, namer, "t" + std::to_string(++triple_id)));
        log.info("read " + std::to_string(parsed.triples.size()) + " triples from " + path);
    }
    return all;
}

EmbeddingStore load_store(const std::string& path, const Log& log) {
    if (path.empty()) throw LoadError("no embedding given (use --embedding or set ASSOC_EMBEDDING)");
    auto in = open_input(path);
    auto loaded = load_embedding(in);
    log.info("loaded " + std::to_string(loaded.store.size()) + " vectors of dimension " +
             std::to_string(loaded.store.dimension()) + " from " + path);
    if (loaded.stats.duplicates > 0)
        log.warn(std::to_string(loaded.stats.duplicates) + " duplicate words ignored in " + path);
    if (loaded.stats.zero_norm_dropped > 0)
        log.warn(std::to_string(loaded.stats.zero_norm_dropped) + " zero vectors dropped from " + path);
    return std::move(loaded.store);
}

json header(const char* command, json config) {
    return json{{"command", command}, {"version", kVersion}, {"config", std::move(config)}};
}

json atoms_json(const std::vector<Atom>& atoms) {
    json a = json::array();
    for (const auto& x : atoms) a.push_back(to_string(x));
    return a;
}

json scored_json(const std::vector<ScoredWord>& entries, std::size_t top) {
    json a = json::array();
    for (std::size_t i = 0; i < entries.size() && i < top; ++i)
        a.push_back(json{{"word", entries[i].word}, {"score", entries[i].score}});
    return a;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string chain_dot(const Chain& chain) {
    std::ostringstream dot;
    dot << "digraph chain {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        std::string label = std::to_string(i + 1) + ": {";
        const auto& f = chain.steps[i].focus_symbols;
        for (std::size_t j = 0; j < f.size(); ++j) label += (j ? ", " : "") + f[j];
        label += "}";
        dot << "  s" << i + 1 << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    for (std::size_t i = 1; i < chain.steps.size(); ++i) dot << "  s" << i << " -> s" << i + 1 << ";\n";
    dot << "}\n";
    return dot.str();
}

// ---------------------------------------------------------------------------
// Subcommands

struct Common {
    std::string out_path;
    std::string embedding_path;
};

void add_embedding_option(CLI::App* app, Common& c) {
    app->add_option("--embedding", c.embedding_path, "Word-vector text file")->envname("ASSOC_EMBEDDING");
}

void add_out_option(CLI::App* app, Common& c) {
    app->add_option("--out", c.out_path, "Output file (default: standard output)");
}

struct IngestCommand {
    Common common;
    KbOptions kb;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("ingest", "Convert triples and clause files into one clause file");
        kb.add_to(sub);
        add_out_option(sub, common);
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        const auto clauses = load_clauses(kb, log);
        build_kb(clauses);  // arity and id checks
        json config = kb.echo();
        std::string text = "# " + header("ingest", config).dump() + "\n";
        text += serialize_clauses(clauses);
        emit(text, common.out_path, out);
    }

    bool ran = false;
};

struct SelectCommand {
    Common common;
    KbOptions kb;
    SelectionOptions selection;
    std::vector<std::string> context;
    bool syntactic_only = false;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("select", "Select clauses relevant to a context");
        kb.add_to(sub);
        selection.add_to(sub);
        add_embedding_option(sub, common);
        add_out_option(sub, common);
        sub->add_option("--context", context, "Context symbols")->delimiter(',')->required();
        sub->add_flag("--syntactic-only", syntactic_only, "Skip embedding expansion and filtering");
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        const SelectionConfig cfg = selection.resolve();
        const KnowledgeBase base = build_kb(load_clauses(kb, log));

        Context ctx;
        std::vector<std::size_t> syntactic;
        std::vector<std::size_t> chosen;
        if (syntactic_only) {
            ctx = Context::from_seeds(context);
            syntactic = syntactic_select(base, ctx, cfg);
            chosen = syntactic;
        } else {
            const EmbeddingStore store = load_store(common.embedding_path, log);
            ctx = expand_context(store, context, cfg);
            syntactic = syntactic_select(base, ctx, cfg);
            chosen = associative_select(base, store, ctx, cfg);
        }

        json config = kb.echo();
        config.update(selection.echo());
        config["embedding"] = syntactic_only ? json(nullptr) : json(common.embedding_path);
        config["context"] = context;
        config["syntactic_only"] = syntactic_only;

        json j = header("select", std::move(config));
        j["context"] = json{{"seeds", ctx.seed_symbols}, {"expanded", ctx.expanded_symbols}};
        json ids = json::array();
        for (std::size_t i : syntactic) ids.push_back(base.clause(i).id);
        j["syntactic"] = std::move(ids);
        json sel = json::array();
        for (std::size_t i : chosen)
            sel.push_back(json{{"id", base.clause(i).id}, {"clause", to_string(base.clause(i))}});
        j["selected"] = std::move(sel);
        emit(dump(j), common.out_path, out);
    }

    bool ran = false;
};

struct ReasonCommand {
    Common common;
    KbOptions kb;
    LimitOptions limits;
    std::vector<std::string> contradictions;
    bool derivations = false;
    bool timing = false;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("reason", "Run the hyper tableau reasoner on clause files");
        kb.add_to(sub);
        limits.add_to(sub);
        add_out_option(sub, common);
        sub->add_option("--contradiction", contradictions, "Predicate pair p,q that may not share arguments");
        sub->add_flag("--derivations", derivations, "Include the derivation log");
        sub->add_flag("--timing", timing, "Include elapsed time (makes output run-dependent)");
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        ReasonerOptions options;
        options.limits = limits.resolve();
        for (const auto& c : contradictions) {
            const auto comma = c.find(',');
            if (comma == std::string::npos || comma == 0 || comma + 1 == c.size() ||
                c.find(',', comma + 1) != std::string::npos) {
                throw DomainError("contradiction '" + c + "' must have the form p,q");
            }
            options.contradiction_pairs.emplace_back(c.substr(0, comma), c.substr(comma + 1));
        }
        const auto clauses = load_clauses(kb, log);
        build_kb(clauses);
        const ReasonerResult r = reason(clauses, options);
        log.info("status " + std::string(to_string(r.status)) + " after " + std::to_string(r.stats.inferences) +
                 " inferences");

        json config = kb.echo();
        config.update(limits.echo());
        config["contradictions"] = contradictions;
        config["derivations"] = derivations;
        config["timing"] = timing;

        json j = header("reason", std::move(config));
        j["status"] = to_string(r.status);
        j["model"] = atoms_json(r.model);
        j["root_facts"] = atoms_json(r.root_facts);
        json stats{{"inferences", r.stats.inferences},
                   {"branches", r.stats.branches},
                   {"closed_branches", r.stats.closed_branches}};
        if (timing) stats["elapsed_us"] = r.stats.elapsed.count();
        j["stats"] = std::move(stats);
        if (derivations) {
            json log_j = json::array();
            for (const auto& d : r.derivation_log) {
                json subst = json::object();
                for (const auto& [var, term] : d.substitution) subst[var] = to_string(term);
                log_j.push_back(json{{"clause", d.clause_id}, {"substitution", subst}, {"produced", atoms_json(d.produced)}});
            }
            j["derivations"] = std::move(log_j);
        }
        emit(dump(j), common.out_path, out);
    }

    bool ran = false;
};

struct WanderCommand {
    Common common;
    KbOptions kb;
    SelectionOptions selection;
    LimitOptions limits;
    std::vector<std::string> start;
    std::vector<std::string> sentence;
    std::size_t steps = 10;
    std::size_t cluster_divisor = 4;
    std::string cluster_pick = "middle";
    std::uint64_t seed = 42;
    std::string dot_path;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("wander", "Build a mind-wandering chain from start symbols");
        kb.add_to(sub);
        selection.add_to(sub);
        limits.add_to(sub);
        add_embedding_option(sub, common);
        add_out_option(sub, common);
        sub->add_option("--start", start, "Start symbols")->delimiter(',')->required();
        sub->add_option("--steps", steps, "Maximum number of refocusing rounds")->capture_default_str();
        sub->add_option("--cluster-divisor", cluster_divisor, "Model symbols per cluster")->capture_default_str();
        sub->add_option("--cluster-pick", cluster_pick, "nearest, middle, farthest or an index")
            ->capture_default_str()
            ->check(CLI::Validator(
                [](std::string& v) -> std::string {
                    try {
                        FocusStrategy::parse(v);
                        return {};
                    } catch (const DomainError& e) {
                        return e.what();
                    }
                },
                "PICK"));
        sub->add_option("--seed", seed, "Clustering seed")->capture_default_str();
        sub->add_option("--sentence", sentence, "Words to measure the chain's distance to")->delimiter(',');
        sub->add_option("--dot", dot_path, "Also write the chain as a Graphviz graph");
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        WanderConfig cfg;
        cfg.steps = steps;
        cfg.cluster_divisor = cluster_divisor;
        cfg.pick = FocusStrategy::parse(cluster_pick);
        cfg.selection = selection.resolve();
        cfg.limits = limits.resolve();
        cfg.rng_seed = seed;
        cfg.validate();

        const KnowledgeBase base = build_kb(load_clauses(kb, log));
        const EmbeddingStore store = load_store(common.embedding_path, log);
        const Chain chain = wander(start, base, store, cfg);

        json config = kb.echo();
        config["embedding"] = common.embedding_path;
        config["start"] = start;
        config["steps"] = steps;
        config["cluster_divisor"] = cluster_divisor;
        config["cluster_pick"] = to_string(cfg.pick);
        config["seed"] = seed;
        config.update(selection.echo());
        config.update(limits.echo());
        config["sentence"] = sentence;

        json j = header("wander", std::move(config));
        json steps_j = json::array();
        for (const auto& s : chain.steps) {
            if (s.dropped_oov > 0) log.info(std::to_string(s.dropped_oov) + " model symbols without vectors dropped");
            steps_j.push_back(json{{"focus", s.focus_symbols},
                                   {"context", s.context_symbols},
                                   {"selected_clauses", s.selected_clauses},
                                   {"model_size", s.model_size},
                                   {"cluster_count", s.cluster_count},
                                   {"dropped_oov", s.dropped_oov},
                                   {"status", to_string(s.status)}});
        }
        j["steps"] = std::move(steps_j);
        j["terminated_reason"] = to_string(chain.terminated_reason);
        if (!sentence.empty()) {
            try {
                j["sentence_distance"] = chain_sentence_distance(store, chain, sentence);
            } catch (const UndefinedDistanceError& e) {
                log.warn(e.what());
                j["sentence_distance"] = nullptr;
            }
        }
        emit(dump(j), common.out_path, out);
        if (!dot_path.empty()) emit(chain_dot(chain), dot_path, out);
    }

    bool ran = false;
};

struct FratCommand {
    Common common;
    std::vector<std::string> query;
    std::size_t pool = 200;
    std::string rank = "both";
    std::size_t top = 10;
    bool exclude_query = false;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("frat", "Rank answer candidates for three query words");
        add_embedding_option(sub, common);
        add_out_option(sub, common);
        sub->add_option("--query", query, "Three query words")->delimiter(',')->required()->expected(3);
        sub->add_option("--pool", pool, "Candidate pool size")->capture_default_str();
        sub->add_option("--rank", rank, "mean, variance or both")
            ->capture_default_str()
            ->check(CLI::IsMember({"mean", "variance", "both"}));
        sub->add_option("--top", top, "Entries to print per ranking")->capture_default_str();
        sub->add_flag("--exclude-query", exclude_query, "Drop query words and their case variants");
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        if (query.size() != 3) throw DomainError("frat needs exactly three query words");
        const EmbeddingStore store = load_store(common.embedding_path, log);
        const RankOptions options{pool, exclude_query};

        json config{{"embedding", common.embedding_path}, {"query", query}, {"pool", pool},
                    {"rank", rank},                       {"top", top},     {"exclude_query", exclude_query}};
        json j = header("frat", std::move(config));
        json rankings = json::object();
        if (rank != "variance") rankings["mean"] = scored_json(rank_by_mean(store, query, options).entries, top);
        if (rank != "mean")
            rankings["variance_adjusted"] = scored_json(rank_variance_adjusted(store, query, options).entries, top);
        j["rankings"] = std::move(rankings);
        emit(dump(j), common.out_path, out);
    }

    bool ran = false;
};

struct FratBenchCommand {
    Common common;
    std::string problems_path;
    std::size_t pool = 200;
    std::vector<std::size_t> k_values{1, 3, 10};
    bool exclude_query = false;
    std::size_t jobs = 1;

    void add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("frat-bench", "Score both rankings on a problem set");
        add_embedding_option(sub, common);
        add_out_option(sub, common);
        sub->add_option("--problems", problems_path, "TSV lines: q1 q2 q3 gold")->required();
        sub->add_option("--pool", pool, "Candidate pool size")->capture_default_str();
        sub->add_option("--k", k_values, "Cut-offs for hit@k")->delimiter(',')->capture_default_str();
        sub->add_flag("--exclude-query", exclude_query, "Drop query words and their case variants");
        sub->add_option("--jobs", jobs, "Worker threads (output does not depend on it)")->capture_default_str();
        sub->callback([this] { ran = true; });
    }

    void run(std::ostream& out, const Log& log) const {
        if (jobs == 0) throw DomainError("jobs must be positive");
        auto in = open_input(problems_path);
        const auto problems = load_frat_problems(in);
        if (problems.empty()) throw DomainError("no problems in '" + problems_path + "'");
        for (std::size_t k : k_values)
            if (k == 0) throw DomainError("k must be positive");
        const EmbeddingStore store = load_store(common.embedding_path, log);
        const auto m = evaluate_benchmark(store, problems, k_values, RankOptions{pool, exclude_query}, jobs);

        json config{{"embedding", common.embedding_path}, {"problems", problems_path}, {"pool", pool},
                    {"k", k_values},                      {"exclude_query", exclude_query}};
        json j = header("frat-bench", std::move(config));
        j["problems"] = m.problems;
        j["skipped"] = m.skipped;
        json metrics = json::object();
        for (const auto& kind : m.kinds) {
            json hits = json::array();
            for (const auto& h : kind.hits) hits.push_back(json{{"k", h.k}, {"hits", h.hits}, {"rate", h.rate}});
            metrics[std::string(to_string(kind.kind))] = std::move(hits);
        }
        j["metrics"] = std::move(metrics);
        j["movement"] = json{{"improved", m.improved}, {"worsened", m.worsened}, {"unchanged", m.unchanged}};
        json outcomes = json::array();
        for (std::size_t i = 0; i < problems.size(); ++i) {
            const auto& o = m.outcomes[i];
            if (!o.missing.empty()) log.warn("problem " + std::to_string(i + 1) + " skipped: out of vocabulary");
            outcomes.push_back(json{{"query", problems[i].query_words},
                                    {"gold", *problems[i].gold_answer},
                                    {"mean_rank", o.mean_rank ? json(*o.mean_rank) : json(nullptr)},
                                    {"variance_rank", o.variance_rank ? json(*o.variance_rank) : json(nullptr)},
                                    {"missing", o.missing}});
        }
        j["outcomes"] = std::move(outcomes);
        emit(dump(j), common.out_path, out);
    }

    bool ran = false;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Associative selection, hyper tableau reasoning and mind-wandering over commonsense knowledge",
                 "assoc"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "Read options from an INI/TOML file (flags override it)");
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "error, warn, info or debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}))
        ->capture_default_str();
    app.require_subcommand(1);

    IngestCommand ingest;
    SelectCommand select;
    ReasonCommand reason_cmd;
    WanderCommand wander_cmd;
    FratCommand frat;
    FratBenchCommand bench;
    ingest.add_to(app);
    select.add_to(app);
    reason_cmd.add_to(app);
    wander_cmd.add_to(app);
    frat.add_to(app);
    bench.add_to(app);

    if (args.empty()) {
        err << app.help();
        return 2;
    }

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "assoc: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Log log(err);
    log.set_level(log_level);
    try {
        if (ingest.ran) ingest.run(out, log);
        else if (select.ran) select.run(out, log);
        else if (reason_cmd.ran) reason_cmd.run(out, log);
        else if (wander_cmd.ran) wander_cmd.run(out, log);
        else if (frat.ran) frat.run(out, log);
        else if (bench.ran) bench.run(out, log);
        return 0;
    } catch (const FormatError& e) {
        err << "assoc: error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "assoc: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "assoc: error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace assoc
