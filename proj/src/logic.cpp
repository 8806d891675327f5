#include "assoc/logic.hpp"

#include <algorithm>
#include <set>

#include "assoc/error.hpp"

namespace assoc {

bool Term::is_ground() const noexcept {
    if (kind == Kind::Variable) return false;
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

namespace {

// One pass per level; lexicographical_compare would test both a < b and
// b < a on equal prefixes, which is exponential in the nesting depth.
int compare(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (const int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
    const std::size_t n = std::min(a.args.size(), b.args.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (const int c = compare(a.args[i], b.args[i]); c != 0) return c;
    }
    return a.args.size() < b.args.size() ? -1 : a.args.size() > b.args.size() ? 1 : 0;
}

int compare(const std::vector<Term>& a, const std::vector<Term>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (const int c = compare(a[i], b[i]); c != 0) return c;
    }
    return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
}

}  // namespace

bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

bool Atom::is_ground() const noexcept {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

bool operator<(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return compare(a.args, b.args) < 0;
}

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::Triple: return "triple";
        case Provenance::File: return "file";
        case Provenance::Generated: return "generated";
    }
    return "unknown";
}

namespace {

void collect_variables(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) {
        out.insert(t.name);
        return;
    }
    for (const auto& a : t.args) collect_variables(a, out);
}

void collect_variables(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args) collect_variables(t, out);
}

void append_args(std::string& out, const std::vector<Term>& args) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) out += ',';
        out += to_string(args[i]);
    }
    out += ')';
}

}  // namespace

std::string first_unrestricted_variable(const Clause& clause) {
    std::set<std::string> body_vars;
    for (const auto& a : clause.body) collect_variables(a, body_vars);
    for (const auto& alt : clause.heads) {
        for (const auto& a : alt) {
            std::set<std::string> head_vars;
            collect_variables(a, head_vars);
            for (const auto& v : head_vars) {
                if (!body_vars.contains(v)) return v;
            }
        }
    }
    return {};
}

void check_range_restricted(const Clause& clause) {
    if (auto v = first_unrestricted_variable(clause); !v.empty()) {
        throw RangeRestrictionError(v, clause.id);
    }
}

std::vector<std::string> predicate_symbols(const Clause& clause) {
    std::set<std::string> symbols;
    for (const auto& a : clause.body) symbols.insert(a.predicate);
    for (const auto& alt : clause.heads) {
        for (const auto& a : alt) symbols.insert(a.predicate);
    }
    return {symbols.begin(), symbols.end()};
}

std::string to_string(const Term& term) {
    std::string out = term.name;
    if (term.kind == Term::Kind::Function) append_args(out, term.args);
    return out;
}

std::string to_string(const Atom& atom) {
    std::string out = atom.predicate;
    append_args(out, atom.args);
    return out;
}

std::string to_string(const Clause& clause) {
    std::string out;
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(clause.body[i]);
    }
    out += clause.body.empty() ? "->" : " ->";
    for (std::size_t h = 0; h < clause.heads.size(); ++h) {
        out += h == 0 ? " " : " | ";
        const auto& alt = clause.heads[h];
        for (std::size_t i = 0; i < alt.size(); ++i) {
            if (i > 0) out += ", ";
            out += to_string(alt[i]);
        }
    }
    out += '.';
    return out;
}

}  // namespace assoc
