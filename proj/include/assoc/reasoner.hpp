#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "assoc/logic.hpp"

namespace assoc {

struct Limits {
    std::chrono::milliseconds timeout{30000};
    std::size_t max_atoms = 100000;
    /// Maximum number of inference steps along a single branch.
    std::size_t max_branch_depth = 100000;
    /// Maximum nesting of function terms in a derived atom. Reporting a model
    /// costs time quadratic in this, so Skolem chains are cut here.
    std::size_t max_term_depth = 64;

    void validate() const;
};

/// One hyper-extension step on a branch: the clause instance that fired and
/// the atoms it contributed (atoms already on the branch are not repeated).
struct Derivation {
    std::string clause_id;
    std::vector<std::pair<std::string, Term>> substitution;  // by variable name
    std::vector<Atom> produced;
};

enum class ReasonerStatus { Refutation, Open, ResourceLimit };

std::string_view to_string(ReasonerStatus s) noexcept;

struct ReasonerStats {
    std::size_t inferences = 0;
    std::size_t branches = 0;
    std::size_t closed_branches = 0;
    std::chrono::microseconds elapsed{0};
};

struct ReasonerResult {
    ReasonerStatus status = ReasonerStatus::Open;
    /// Ground atoms of the reported branch, sorted; empty on refutation.
    std::vector<Atom> model;
    /// Input facts placed on the root branch, in clause order.
    std::vector<Atom> root_facts;
    /// Inference steps of the reported branch, in order.
    std::vector<Derivation> derivation_log;
    ReasonerStats stats;
};

struct ReasonerOptions {
    Limits limits;
    /// Predicate pairs (p, q) such that p(t..) and q(t..) with equal
    /// arguments close a branch.
    std::vector<std::pair<std::string, std::string>> contradiction_pairs;
};

/// Hyper tableau over range-restricted clauses.
///
/// A clause instance fires on a branch when its body matches branch atoms
/// under one substitution and none of its head alternatives already holds.
/// Constraints close the branch; single-alternative clauses extend it;
/// disjunctive clauses split it, children explored depth-first in clause
/// order. Horn steps and constraint checks saturate (semi-naively) before
/// any split is taken.
///
/// Returns Refutation when every branch closes, Open with the first
/// saturated open branch, or ResourceLimit with the current branch once a
/// limit is hit. Throws RangeRestrictionError / ContractViolation for
/// unrestricted clauses or non-ground facts.
ReasonerResult reason(const std::vector<Clause>& clauses, const ReasonerOptions& options);

inline ReasonerResult reason(const std::vector<Clause>& clauses, const Limits& limits) {
    return reason(clauses, ReasonerOptions{limits, {}});
}

/// Distinct predicate symbols of the model, ascending. Throws
/// ContractViolation for a refutation.
std::vector<std::string> model_symbols(const ReasonerResult& result);

}  // namespace assoc
