#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace assoc {

/// First-order term. Variables are uppercase-initial, constants and function
/// symbols lowercase-initial; Skolem functions are ordinary function terms.
struct Term {
    enum class Kind : std::uint8_t { Variable, Constant, Function };

    Kind kind = Kind::Constant;
    std::string name;
    std::vector<Term> args;  // non-empty only for Kind::Function

    static Term variable(std::string name) { return {Kind::Variable, std::move(name), {}}; }
    static Term constant(std::string name) { return {Kind::Constant, std::move(name), {}}; }
    static Term function(std::string name, std::vector<Term> args) {
        return {Kind::Function, std::move(name), std::move(args)};
    }

    bool is_variable() const noexcept { return kind == Kind::Variable; }
    bool is_ground() const noexcept;

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.name == b.name && a.args == b.args;
    }
    friend bool operator<(const Term& a, const Term& b);
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    bool is_ground() const noexcept;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.predicate == b.predicate && a.args == b.args;
    }
    friend bool operator<(const Atom& a, const Atom& b);
};

enum class Provenance : std::uint8_t { Triple, File, Generated };

std::string_view to_string(Provenance p) noexcept;

/// Range-restricted implication: conjunction of body atoms implies a
/// disjunction of head alternatives, each a conjunction. Empty body is a
/// fact; empty head list is an integrity constraint.
struct Clause {
    std::vector<Atom> body;
    std::vector<std::vector<Atom>> heads;
    std::string id;
    Provenance provenance = Provenance::File;

    bool is_fact() const noexcept { return body.empty(); }
    bool is_constraint() const noexcept { return heads.empty(); }
    bool is_horn() const noexcept { return heads.size() <= 1; }

    /// Structural equality; ids and provenance are labels and do not count.
    friend bool same_structure(const Clause& a, const Clause& b) {
        return a.body == b.body && a.heads == b.heads;
    }
};

/// Returns the first head variable missing from the body, or an empty string.
std::string first_unrestricted_variable(const Clause& clause);

/// Throws RangeRestrictionError when the clause is not range-restricted.
void check_range_restricted(const Clause& clause);

/// Distinct predicate symbols in body and heads, lexicographically ordered.
std::vector<std::string> predicate_symbols(const Clause& clause);

std::string to_string(const Term& term);
std::string to_string(const Atom& atom);

/// Renders a clause in the line-based clause syntax, terminated by '.'.
std::string to_string(const Clause& clause);

}  // namespace assoc
