#include "assoc/reasoner.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "assoc/error.hpp"

namespace assoc {

void Limits::validate() const {
    if (timeout.count() <= 0) throw DomainError("timeout must be positive");
    if (max_atoms == 0) throw DomainError("max_atoms must be positive");
    if (max_branch_depth == 0) throw DomainError("max_branch_depth must be positive");
    if (max_term_depth == 0) throw DomainError("max_term_depth must be positive");
}

std::string_view to_string(ReasonerStatus s) noexcept {
    switch (s) {
        case ReasonerStatus::Refutation: return "refutation";
        case ReasonerStatus::Open: return "open";
        case ReasonerStatus::ResourceLimit: return "resource_limit";
    }
    return "unknown";
}

std::vector<std::string> model_symbols(const ReasonerResult& result) {
    if (result.status == ReasonerStatus::Refutation) {
        throw ContractViolation("a refutation has no model to read symbols from");
    }
    std::set<std::string> symbols;
    for (const auto& a : result.model) symbols.insert(a.predicate);
    return {symbols.begin(), symbols.end()};
}

namespace {

using Id = std::uint32_t;
constexpr Id kUnbound = std::numeric_limits<Id>::max();

struct IdVectorHash {
    std::size_t operator()(const std::vector<Id>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Id x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

class Interner {
public:
    Id intern(const std::string& s) {
        auto [it, inserted] = ids_.emplace(s, static_cast<Id>(names_.size()));
        if (inserted) names_.push_back(s);
        return it->second;
    }
    const std::string& name(Id id) const { return names_[id]; }

private:
    std::unordered_map<std::string, Id> ids_;
    std::vector<std::string> names_;
};

// Hash-consed ground terms; a term is its symbol id plus argument term ids.
class TermBank {
public:
    Id intern(Id symbol, const std::vector<Id>& args) {
        key_.assign(1, symbol);
        key_.insert(key_.end(), args.begin(), args.end());
        auto [it, inserted] = lookup_.emplace(key_, static_cast<Id>(nodes_.size()));
        if (inserted) {
            std::size_t depth = 0;
            for (Id a : args) depth = std::max(depth, nodes_[a].depth + 1);
            nodes_.push_back({symbol, args, depth});
        }
        return it->second;
    }

    Term to_term(Id id, const Interner& symbols) const {
        const Node& n = nodes_[id];
        if (n.args.empty()) return Term::constant(symbols.name(n.symbol));
        std::vector<Term> args;
        args.reserve(n.args.size());
        for (Id a : n.args) args.push_back(to_term(a, symbols));
        return Term::function(symbols.name(n.symbol), std::move(args));
    }

    Id symbol(Id id) const { return nodes_[id].symbol; }
    std::size_t depth(Id id) const { return nodes_[id].depth; }
    const std::vector<Id>& args(Id id) const { return nodes_[id].args; }

private:
    struct Node {
        Id symbol;
        std::vector<Id> args;
        std::size_t depth;  // 0 for constants
    };
    std::vector<Node> nodes_;
    std::unordered_map<std::vector<Id>, Id, IdVectorHash> lookup_;
    std::vector<Id> key_;
};

struct Pattern {
    enum class Kind : std::uint8_t { Var, Ground, Func };
    Kind kind;
    Id value;  // variable slot, ground term id, or function symbol
    std::vector<Pattern> args;
};

struct PatternAtom {
    Id predicate;
    std::vector<Pattern> args;
};

struct CompiledClause {
    const Clause* source;
    std::vector<PatternAtom> body;
    std::vector<std::vector<PatternAtom>> heads;
    std::vector<std::string> variables;  // slot -> name
};

struct GroundAtom {
    Id predicate;
    std::vector<Id> args;
};

struct LogEntry {
    std::size_t clause;
    std::vector<Id> binding;
    std::size_t produced_begin;
    std::size_t produced_end;
};

struct ChoicePoint {
    std::size_t trail_mark;
    std::size_t log_mark;
    std::size_t clause;
    std::vector<Id> binding;
    std::size_t next_alternative;
};

struct LimitReached {};

enum class Saturation { Saturated, Closed };

using Binding = std::vector<Id>;

class HyperTableau {
public:
    HyperTableau(const std::vector<Clause>& clauses, const ReasonerOptions& options)
        : limits_(options.limits), start_(std::chrono::steady_clock::now()) {
        limits_.validate();
        for (const auto& c : clauses) {
            check_range_restricted(c);
            if (c.is_fact()) {
                for (const auto& alt : c.heads)
                    for (const auto& a : alt)
                        if (!a.is_ground()) {
                            throw ContractViolation("fact " + c.id + " is not ground: " + to_string(a));
                        }
            }
        }
        for (const auto& c : clauses) compile(c);
        add_contradiction_pairs(options.contradiction_pairs);
        for (std::size_t i = 0; i < compiled_.size(); ++i) {
            const auto& c = compiled_[i];
            if (c.heads.empty()) {
                constraints_.push_back(i);
            } else if (c.heads.size() == 1) {
                if (!c.body.empty()) horn_.push_back(i);
            } else {
                disjunctive_.push_back(i);
            }
        }
    }

    ReasonerResult run() {
        ReasonerResult result;
        result.status = search();
        result.stats = stats_;
        result.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start_);
        for (std::size_t i = 0; i < root_count_ && i < trail_.size(); ++i) {
            result.root_facts.push_back(to_atom(trail_[i]));
        }
        if (result.status == ReasonerStatus::Refutation) return result;

        for (const auto& g : trail_) result.model.push_back(to_atom(g));
        std::sort(result.model.begin(), result.model.end());
        for (const auto& e : log_) result.derivation_log.push_back(to_derivation(e));
        return result;
    }

private:
    // ---- compilation -------------------------------------------------------

    Id predicate_id(const std::string& name, std::size_t arity) {
        const Id id = predicates_.intern(name + "/" + std::to_string(arity));
        if (id >= predicate_names_.size()) {
            predicate_names_.resize(id + 1);
            by_predicate_.resize(id + 1);
        }
        predicate_names_[id] = name;
        return id;
    }

    Pattern compile_term(const Term& t, std::unordered_map<std::string, Id>& slots,
                         std::vector<std::string>& names) {
        if (t.is_variable()) {
            auto [it, inserted] = slots.emplace(t.name, static_cast<Id>(names.size()));
            if (inserted) names.push_back(t.name);
            return {Pattern::Kind::Var, it->second, {}};
        }
        if (t.is_ground()) return {Pattern::Kind::Ground, intern_ground(t), {}};
        Pattern p{Pattern::Kind::Func, symbols_.intern(t.name), {}};
        for (const auto& a : t.args) p.args.push_back(compile_term(a, slots, names));
        return p;
    }

    PatternAtom compile_atom(const Atom& a, std::unordered_map<std::string, Id>& slots,
                             std::vector<std::string>& names) {
        PatternAtom p{predicate_id(a.predicate, a.args.size()), {}};
        for (const auto& t : a.args) p.args.push_back(compile_term(t, slots, names));
        return p;
    }

    void compile(const Clause& c) {
        CompiledClause cc{&c, {}, {}, {}};
        std::unordered_map<std::string, Id> slots;
        for (const auto& a : c.body) cc.body.push_back(compile_atom(a, slots, cc.variables));
        for (const auto& alt : c.heads) {
            std::vector<PatternAtom> atoms;
            for (const auto& a : alt) atoms.push_back(compile_atom(a, slots, cc.variables));
            cc.heads.push_back(std::move(atoms));
        }
        compiled_.push_back(std::move(cc));
    }

    void add_contradiction_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
        // Arities come from the input clauses; pairs naming unused predicates are inert.
        std::unordered_map<std::string, std::size_t> arity;
        for (const auto& cc : compiled_) {
            auto note = [&](const Atom& a) { arity.emplace(a.predicate, a.args.size()); };
            for (const auto& a : cc.source->body) note(a);
            for (const auto& alt : cc.source->heads)
                for (const auto& a : alt) note(a);
        }
        for (const auto& [p, q] : pairs) {
            auto ip = arity.find(p);
            auto iq = arity.find(q);
            if (ip == arity.end() || iq == arity.end() || ip->second != iq->second) continue;
            Clause c;
            c.id = "contradiction(" + p + "," + q + ")";
            c.provenance = Provenance::Generated;
            std::vector<Term> vars;
            for (std::size_t i = 0; i < ip->second; ++i) vars.push_back(Term::variable("X" + std::to_string(i + 1)));
            c.body = {Atom{p, vars}, Atom{q, vars}};
            synthetic_.push_back(std::move(c));
        }
        // compile() keeps a pointer to the clause; synthetic_ no longer grows.
        for (const auto& c : synthetic_) compile(c);
    }

    Id intern_ground(const Term& t) {
        std::vector<Id> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(intern_ground(a));
        return terms_.intern(symbols_.intern(t.name), args);
    }

    // ---- matching ----------------------------------------------------------

    bool match(const Pattern& p, Id ground, Binding& b, std::vector<Id>& newly_bound) const {
        switch (p.kind) {
            case Pattern::Kind::Ground:
                return p.value == ground;
            case Pattern::Kind::Var:
                if (b[p.value] == kUnbound) {
                    b[p.value] = ground;
                    newly_bound.push_back(p.value);
                    return true;
                }
                return b[p.value] == ground;
            case Pattern::Kind::Func: {
                if (terms_.symbol(ground) != p.value) return false;
                const auto& args = terms_.args(ground);
                if (args.size() != p.args.size()) return false;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (!match(p.args[i], args[i], b, newly_bound)) return false;
                }
                return true;
            }
        }
        return false;
    }

    Id instantiate(const Pattern& p, const Binding& b) {
        switch (p.kind) {
            case Pattern::Kind::Ground: return p.value;
            case Pattern::Kind::Var: return b[p.value];
            case Pattern::Kind::Func: {
                std::vector<Id> args;
                args.reserve(p.args.size());
                for (const auto& a : p.args) args.push_back(instantiate(a, b));
                const Id id = terms_.intern(p.value, args);
                if (terms_.depth(id) > limits_.max_term_depth) throw LimitReached{};
                return id;
            }
        }
        return kUnbound;
    }

    struct Range {
        std::size_t lo;
        std::size_t hi;
    };

    // Enumerates body matches where body atom j draws from ranges[j].
    // The callback returns true to stop; enumerate then returns true.
    template <typename F>
    bool enumerate(const CompiledClause& c, std::size_t j, const std::vector<Range>& ranges, Binding& b,
                   F& on_match) {
        if (j == c.body.size()) return on_match(b);
        const PatternAtom& pa = c.body[j];
        const auto& positions = by_predicate_[pa.predicate];
        auto it = std::lower_bound(positions.begin(), positions.end(), ranges[j].lo);
        for (std::size_t k = static_cast<std::size_t>(it - positions.begin()); k < positions.size(); ++k) {
            const std::size_t pos = positions[k];
            if (pos >= ranges[j].hi) break;
            tick();
            const GroundAtom& g = trail_[pos];
            std::vector<Id> newly_bound;
            bool ok = true;
            for (std::size_t a = 0; a < pa.args.size() && ok; ++a) ok = match(pa.args[a], g.args[a], b, newly_bound);
            if (ok && enumerate(c, j + 1, ranges, b, on_match)) return true;
            for (Id slot : newly_bound) b[slot] = kUnbound;
        }
        return false;
    }

    // Semi-naive: every reported match uses at least one atom in [delta, end).
    template <typename F>
    bool enumerate_delta(const CompiledClause& c, std::size_t delta, std::size_t end, F&& on_match) {
        std::vector<Range> ranges(c.body.size());
        Binding b(c.variables.size(), kUnbound);
        for (std::size_t d = 0; d < c.body.size(); ++d) {
            for (std::size_t j = 0; j < c.body.size(); ++j) {
                if (j < d) ranges[j] = {0, delta};
                else if (j == d) ranges[j] = {delta, end};
                else ranges[j] = {0, end};
            }
            if (enumerate(c, 0, ranges, b, on_match)) return true;
        }
        return false;
    }

    template <typename F>
    bool enumerate_all(const CompiledClause& c, F&& on_match) {
        std::vector<Range> ranges(c.body.size(), Range{0, trail_.size()});
        Binding b(c.variables.size(), kUnbound);
        return enumerate(c, 0, ranges, b, on_match);
    }

    // ---- branch state ------------------------------------------------------

    std::vector<Id> key_of(Id predicate, const std::vector<Id>& args) const {
        std::vector<Id> key;
        key.reserve(args.size() + 1);
        key.push_back(predicate);
        key.insert(key.end(), args.begin(), args.end());
        return key;
    }

    GroundAtom ground(const PatternAtom& pa, const Binding& b) {
        GroundAtom g{pa.predicate, {}};
        g.args.reserve(pa.args.size());
        for (const auto& p : pa.args) g.args.push_back(instantiate(p, b));
        return g;
    }

    bool holds(const std::vector<PatternAtom>& alternative, const Binding& b) {
        return std::all_of(alternative.begin(), alternative.end(),
                           [&](const PatternAtom& pa) {
                               GroundAtom g = ground(pa, b);
                               return present_.contains(key_of(g.predicate, g.args));
                           });
    }

    bool any_alternative_holds(const CompiledClause& c, const Binding& b) {
        return std::any_of(c.heads.begin(), c.heads.end(), [&](const auto& alt) { return holds(alt, b); });
    }

    void push_atom(GroundAtom g) {
        auto key = key_of(g.predicate, g.args);
        if (!present_.insert(std::move(key)).second) return;
        by_predicate_[g.predicate].push_back(trail_.size());
        trail_.push_back(std::move(g));
    }

    // Adds the alternative's atoms as one step and records it in the log.
    void extend(std::size_t clause, const std::vector<PatternAtom>& alternative, const Binding& b) {
        std::vector<GroundAtom> fresh;
        for (const auto& pa : alternative) {
            GroundAtom g = ground(pa, b);
            const bool seen = present_.contains(key_of(g.predicate, g.args)) ||
                              std::any_of(fresh.begin(), fresh.end(), [&](const GroundAtom& f) {
                                  return f.predicate == g.predicate && f.args == g.args;
                              });
            if (!seen) fresh.push_back(std::move(g));
        }
        if (trail_.size() + fresh.size() > limits_.max_atoms) throw LimitReached{};
        if (log_.size() + 1 > limits_.max_branch_depth) throw LimitReached{};
        const std::size_t begin = trail_.size();
        for (auto& g : fresh) push_atom(std::move(g));
        log_.push_back({clause, b, begin, trail_.size()});
        ++stats_.inferences;
        check_clock();
    }

    void undo_to(std::size_t trail_mark, std::size_t log_mark) {
        while (trail_.size() > trail_mark) {
            GroundAtom& g = trail_.back();
            present_.erase(key_of(g.predicate, g.args));
            by_predicate_[g.predicate].pop_back();
            trail_.pop_back();
        }
        log_.resize(log_mark);
    }

    void tick() {
        if ((++ticks_ & 0x3ff) == 0) check_clock();
    }

    void check_clock() const {
        if (std::chrono::steady_clock::now() - start_ >= limits_.timeout) throw LimitReached{};
    }

    // ---- search ------------------------------------------------------------

    Saturation saturate(std::size_t delta) {
        for (;;) {
            const std::size_t end = trail_.size();
            if (delta == end) return Saturation::Saturated;

            for (std::size_t ci : constraints_) {
                const auto& c = compiled_[ci];
                if (c.body.empty()) continue;
                std::optional<Binding> hit;
                enumerate_delta(c, delta, end, [&](const Binding& b) {
                    hit = b;
                    return true;
                });
                if (hit) {
                    if (log_.size() + 1 > limits_.max_branch_depth) throw LimitReached{};
                    log_.push_back({ci, *hit, trail_.size(), trail_.size()});
                    ++stats_.inferences;
                    return Saturation::Closed;
                }
            }

            for (std::size_t ci : horn_) {
                const auto& c = compiled_[ci];
                std::vector<Binding> matches;
                enumerate_delta(c, delta, end, [&](const Binding& b) {
                    matches.push_back(b);
                    return false;
                });
                for (const auto& b : matches) {
                    if (!holds(c.heads.front(), b)) extend(ci, c.heads.front(), b);
                }
            }
            delta = end;
        }
    }

    std::optional<std::pair<std::size_t, Binding>> pending_split() {
        for (std::size_t ci : disjunctive_) {
            const auto& c = compiled_[ci];
            std::optional<Binding> found;
            enumerate_all(c, [&](const Binding& b) {
                if (any_alternative_holds(c, b)) return false;
                found = b;
                return true;
            });
            if (found) return std::make_pair(ci, std::move(*found));
        }
        return std::nullopt;
    }

    bool root_closed() {
        for (std::size_t ci : constraints_) {
            if (compiled_[ci].body.empty()) {
                log_.push_back({ci, {}, trail_.size(), trail_.size()});
                ++stats_.inferences;
                return true;
            }
        }
        return false;
    }

    ReasonerStatus search() {
        stats_.branches = 1;
        try {
            for (const auto& cc : compiled_) {
                if (!cc.body.empty() || cc.heads.size() != 1) continue;
                for (const auto& pa : cc.heads.front()) {
                    if (trail_.size() + 1 > limits_.max_atoms) throw LimitReached{};
                    push_atom(ground(pa, {}));
                }
            }
            root_count_ = trail_.size();
            if (root_closed()) {
                ++stats_.closed_branches;
                return ReasonerStatus::Refutation;
            }

            std::vector<ChoicePoint> stack;
            std::size_t delta = 0;
            for (;;) {
                if (saturate(delta) == Saturation::Saturated) {
                    auto split = pending_split();
                    if (!split) return ReasonerStatus::Open;
                    ChoicePoint cp{trail_.size(), log_.size(), split->first, std::move(split->second), 0};
                    stack.push_back(std::move(cp));
                    const ChoicePoint& top = stack.back();
                    extend(top.clause, compiled_[top.clause].heads[0], top.binding);
                    delta = top.trail_mark;
                    continue;
                }

                ++stats_.closed_branches;
                for (;;) {
                    if (stack.empty()) {
                        undo_to(root_count_, 0);
                        return ReasonerStatus::Refutation;
                    }
                    ChoicePoint& cp = stack.back();
                    undo_to(cp.trail_mark, cp.log_mark);
                    if (++cp.next_alternative < compiled_[cp.clause].heads.size()) {
                        ++stats_.branches;
                        extend(cp.clause, compiled_[cp.clause].heads[cp.next_alternative], cp.binding);
                        delta = cp.trail_mark;
                        break;
                    }
                    stack.pop_back();
                }
            }
        } catch (const LimitReached&) {
            if (root_count_ == 0) root_count_ = trail_.size();
            return ReasonerStatus::ResourceLimit;
        }
    }

    // ---- output ------------------------------------------------------------

    Atom to_atom(const GroundAtom& g) const {
        Atom a{predicate_names_[g.predicate], {}};
        for (Id t : g.args) a.args.push_back(terms_.to_term(t, symbols_));
        return a;
    }

    Derivation to_derivation(const LogEntry& e) const {
        const auto& c = compiled_[e.clause];
        Derivation d;
        d.clause_id = c.source->id;
        for (std::size_t slot = 0; slot < e.binding.size(); ++slot) {
            if (e.binding[slot] != kUnbound) {
                d.substitution.emplace_back(c.variables[slot], terms_.to_term(e.binding[slot], symbols_));
            }
        }
        for (std::size_t p = e.produced_begin; p < e.produced_end; ++p) d.produced.push_back(to_atom(trail_[p]));
        return d;
    }

    Limits limits_;
    std::chrono::steady_clock::time_point start_;

    Interner symbols_;
    Interner predicates_;
    std::vector<std::string> predicate_names_;
    TermBank terms_;
    std::vector<CompiledClause> compiled_;
    std::vector<Clause> synthetic_;
    std::vector<std::size_t> constraints_;
    std::vector<std::size_t> horn_;
    std::vector<std::size_t> disjunctive_;

    std::vector<GroundAtom> trail_;
    std::unordered_set<std::vector<Id>, IdVectorHash> present_;
    std::vector<std::vector<std::size_t>> by_predicate_;
    std::vector<LogEntry> log_;
    std::size_t root_count_ = 0;

    ReasonerStats stats_;
    std::size_t ticks_ = 0;
};

}  // namespace

ReasonerResult reason(const std::vector<Clause>& clauses, const ReasonerOptions& options) {
    return HyperTableau(clauses, options).run();
}

}  // namespace assoc
