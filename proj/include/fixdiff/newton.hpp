#ifndef FIXDIFF_NEWTON_HPP
#define FIXDIFF_NEWTON_HPP

#include <optional>
#include <string>
#include <vector>

#include "fixdiff/fixpoint.hpp"

namespace fixdiff {

/// Jacobian in the unknowns, evaluated at a point: entry (i, j) is the
/// partial derivative of the i-th right-hand side by the j-th unknown, with
/// the unknowns then bound to `at`. Entries live over the parameter context.
SemiringMatrix jacobian(const EquationSystem& sys, const SeriesTuple& at);

/// One step of the accelerated iteration:
/// z + star(jacobian(sys, z)) * (rhs(z) - z), all modulo the degree.
SeriesTuple newton_step(const EquationSystem& sys, const SeriesTuple& z);

/// Smallest p with jacobian(sys, at)^p = 0 modulo the degree, searched up to
/// degree + 1; empty order when no power vanishes within that bound.
struct NilpotenceCertificate {
    std::optional<std::uint32_t> order;
    bool nilpotent() const { return order.has_value(); }
};

NilpotenceCertificate check_nilpotent(const EquationSystem& sys,
                                      const SeriesTuple& at);

/// Outcome of the accelerated solve. The reference solution is always the
/// independently computed Kleene fixpoint; this solver never certifies
/// itself.
struct NewtonReport {
    SeriesTuple solution;
    std::vector<SeriesTuple> approximants;  // starting from the zero tuple
    /// Distance of each approximant to the Kleene solution.
    std::vector<TaylorDistance> distances;
    std::uint32_t kleene_baseline_iterations = 0;
    /// Whether the quadratic-rate hypotheses hold (constant-free map and a
    /// nilpotence certificate along the whole approximant chain). When they
    /// do not, the rate is reported as not applicable rather than pass/fail.
    bool rate_applicable = false;
    /// Per step: distance exponent at least doubles. Empty unless applicable.
    std::vector<bool> rate_check;

    std::uint32_t steps() const {
        return static_cast<std::uint32_t>(approximants.size()) - 1;
    }
    /// CSV: step,distance_exponent,rate_ok with rate_ok in {1, 0, na}.
    std::string trace_csv() const;
};

NewtonReport newton_solve(const EquationSystem& sys);

}  // namespace fixdiff

#endif
