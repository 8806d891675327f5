#include "horn_fixpoint.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "assoc/error.hpp"

namespace assoc::testing {

namespace {

void scan(const Atom& a, std::set<std::string>& constants, std::vector<std::string>& vars) {
    for (const auto& t : a.args) {
        if (t.kind == Term::Kind::Function) throw ContractViolation("horn_fixpoint: function term in " + to_string(a));
        if (t.kind == Term::Kind::Constant) constants.insert(t.name);
        else if (std::find(vars.begin(), vars.end(), t.name) == vars.end()) vars.push_back(t.name);
    }
}

Atom ground(const Atom& a, const std::map<std::string, std::string>& env) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args)
        out.args.push_back(t.is_variable() ? Term::constant(env.at(t.name)) : t);
    return out;
}

}  // namespace

std::vector<Atom> horn_fixpoint(const std::vector<Clause>& clauses) {
    std::set<std::string> constants;
    std::vector<std::vector<std::string>> clause_vars;
    for (const auto& c : clauses) {
        if (c.heads.size() > 1) throw ContractViolation("horn_fixpoint: disjunctive clause " + c.id);
        std::vector<std::string> vars;
        for (const auto& a : c.body) scan(a, constants, vars);
        for (const auto& alt : c.heads)
            for (const auto& a : alt) scan(a, constants, vars);
        clause_vars.push_back(std::move(vars));
    }
    const std::vector<std::string> domain(constants.begin(), constants.end());

    std::set<Atom> model;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
            const Clause& c = clauses[ci];
            if (c.heads.empty()) continue;
            const auto& vars = clause_vars[ci];
            if (!vars.empty() && domain.empty()) continue;

            // Odometer over domain^|vars|.
            std::vector<std::size_t> digit(vars.size(), 0);
            for (bool more = true; more;) {
                std::map<std::string, std::string> env;
                for (std::size_t v = 0; v < vars.size(); ++v) env[vars[v]] = domain[digit[v]];
                bool body_holds = true;
                for (const auto& a : c.body) body_holds = body_holds && model.contains(ground(a, env));
                if (body_holds) {
                    for (const auto& a : c.heads.front()) changed = model.insert(ground(a, env)).second || changed;
                }
                more = false;
                for (std::size_t v = 0; v < digit.size(); ++v) {
                    if (++digit[v] < domain.size()) {
                        more = true;
                        break;
                    }
                    digit[v] = 0;
                }
            }
        }
    }
    return {model.begin(), model.end()};
}

}  // namespace assoc::testing
