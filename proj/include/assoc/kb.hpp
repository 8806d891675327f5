#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "assoc/logic.hpp"

namespace assoc {

struct Triple {
    std::string subject;
    std::string relation;
    std::string object;

    friend bool operator==(const Triple&, const Triple&) = default;
};

enum class TripleFormat { Csv, Tsv };

struct SkippedLine {
    std::size_t line = 0;
    std::string reason;
};

struct TripleParseResult {
    std::vector<Triple> triples;
    std::vector<SkippedLine> skipped;
};

/// Lowercases ASCII letters, trims surrounding whitespace, turns inner
/// whitespace into underscores. Characters the clause syntax cannot carry
/// ('(', ')', ',', '.', '|', '#', ':', '?', '[', ']', '"') also become '_'.
std::string normalize_concept(std::string_view raw);

/// Reads subject/relation/object lines; fields beyond the third are ignored.
/// Blank lines and '#' comments are skipped silently. Malformed lines are
/// recorded in `skipped`; more than half malformed is a FormatError.
TripleParseResult parse_triples(std::istream& in, TripleFormat format);

/// Hands out Skolem function names that avoid a reserved set.
class SkolemNamer {
public:
    explicit SkolemNamer(std::string prefix = "sk") : prefix_(std::move(prefix)) {}

    void reserve(std::string name) { reserved_.insert(std::move(name)); }
    std::string next();

private:
    std::string prefix_;
    std::size_t counter_ = 0;
    std::set<std::string> reserved_;
};

/// subject(X) -> relation(X, sk(X)), object(sk(X)) with a fresh sk.
Clause triple_to_clause(const Triple& t, SkolemNamer& namer, std::string id);

std::vector<Clause> triples_to_clauses(const std::vector<Triple>& triples,
                                       std::string_view id_prefix = "t");

/// Parses the clause syntax:
///
///   clause   := [atoms] "->" [headAlt ("|" headAlt)*] "."
///   headAlt  := ["?[" Var ("," Var)* "]:"] atom ("," atom)*
///   atom     := ident "(" term ("," term)* ")"
///   term     := Variable | constant | ident "(" term ("," term)* ")"
///
/// '#' starts a comment running to end of line. Variables bound by "?[..]:"
/// are existential and get Skolemized over the body variables; any other
/// head variable missing from the body is a RangeRestrictionError. Clause
/// ids are `id_prefix` followed by the 1-based clause ordinal.
std::vector<Clause> parse_clause_file(std::istream& in, std::string_view id_prefix = "c");
std::vector<Clause> parse_clause_text(std::string_view text, std::string_view id_prefix = "c");

/// Variants sharing a namer, so several files loaded into one knowledge base
/// never hand out the same Skolem name twice.
std::vector<Clause> parse_clause_file(std::istream& in, std::string_view id_prefix, SkolemNamer& namer);
std::vector<Clause> parse_clause_text(std::string_view text, std::string_view id_prefix, SkolemNamer& namer);

/// Reserves every constant and function name occurring in `clauses`.
void reserve_function_symbols(SkolemNamer& namer, const std::vector<Clause>& clauses);

/// One clause per line, in order.
std::string serialize_clauses(const std::vector<Clause>& clauses);

/// Indexed, immutable clause collection. Clause positions are the handles
/// used by selection; `Clause::id` is the human-facing label.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    const std::vector<Clause>& clauses() const noexcept { return clauses_; }
    std::size_t size() const noexcept { return clauses_.size(); }
    const Clause& clause(std::size_t index) const { return clauses_.at(index); }

    /// Positions of the clauses mentioning `predicate`, ascending.
    const std::vector<std::size_t>& clauses_with(std::string_view predicate) const;

    /// Number of clauses mentioning `predicate` (0 when absent).
    std::size_t occurrence_count(std::string_view predicate) const;

    /// Arity of `predicate`, or -1 when the predicate does not occur.
    int arity(std::string_view predicate) const;

    bool has_predicate(std::string_view predicate) const;

    const std::map<std::string, std::vector<std::size_t>, std::less<>>& symbol_index() const noexcept {
        return symbol_index_;
    }

    friend KnowledgeBase build_kb(std::vector<Clause> clauses);

private:
    std::vector<Clause> clauses_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> symbol_index_;
    std::map<std::string, int, std::less<>> arity_;
};

/// Builds the predicate index. Throws ArityClashError when a predicate is
/// used with two arities, and FormatError on duplicate clause ids.
KnowledgeBase build_kb(std::vector<Clause> clauses);

}  // namespace assoc
