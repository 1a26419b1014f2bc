#ifndef FIXDIFF_LAWS_HPP
#define FIXDIFF_LAWS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fixdiff/semiring.hpp"

namespace fixdiff {

/// Result of one checked law. Failures are rendered counterexamples
/// (inputs, lhs, rhs); an empty list means the law passed.
struct LawReport {
    std::string law_name;
    std::uint32_t cases_run = 0;
    std::uint32_t skipped = 0;  // divergent samples, counted and skipped
    std::vector<std::string> failures;
    std::optional<double> tolerance;  // nullopt reads as "exact"

    bool passed() const { return failures.empty(); }
    /// One deterministic summary line.
    std::string str() const;
};

struct LawConfig {
    std::uint64_t seed = 1;
    std::uint32_t cases = 100;
    const Semiring* semiring = nullptr;  // required
    std::uint32_t degree = 4;
};

/// The seven differential-combinator axioms on random polynomial tuples.
std::vector<LawReport> check_cd_axioms(const LawConfig& cfg);

/// Differential-fixpoint, tangent-fixpoint and strong rules, each compared
/// against the directly differentiated Kleene solution. These agree for a
/// Conway operator, so all three reports must pass.
std::vector<LawReport> check_fixpoint_rules(const LawConfig& cfg);

/// Dinaturality and the two-unknown nested-elimination identity.
std::vector<LawReport> check_conway(const LawConfig& cfg);

/// Linear fixpoints stay linear, fixpoints of maps linear in the unknowns
/// vanish, and linear maps are strict (uniformity squares).
std::vector<LawReport> check_linearity_lemmas(const LawConfig& cfg);

/// Repetition operator axioms, the induction rule, agreement between the
/// iterative and eliminative stars, and the shortest-path cross-check on
/// the tropical carrier.
std::vector<LawReport> check_repetition(const LawConfig& cfg);

/// Truncated-subtraction laws; exhaustive over the Boolean carrier,
/// randomized elsewhere.
std::vector<LawReport> check_monus_laws(const LawConfig& cfg);

/// The finite weighted-relation model against the series module through the
/// isomorphism, plus the comonad laws on tiny instances.
std::vector<LawReport> check_relmodel(const LawConfig& cfg);

}  // namespace fixdiff

#endif
