#ifndef FIXDIFF_FIXPOINT_HPP
#define FIXDIFF_FIXPOINT_HPP

#include <string>
#include <vector>

#include "fixdiff/differential.hpp"
#include "fixdiff/series.hpp"

namespace fixdiff {

/// A polynomial fixpoint system: one right-hand side per unknown, over the
/// combined context (params..., unknowns...), all at one truncation degree.
class EquationSystem {
public:
    /// Validates arities and context layout; detects guardedness.
    EquationSystem(std::vector<std::string> params,
                   std::vector<std::string> unknowns, SeriesTuple rhs);

    const std::vector<std::string>& params() const { return params_; }
    const std::vector<std::string>& unknowns() const { return unknowns_; }
    const SeriesTuple& rhs() const { return rhs_; }
    const Semiring& semiring() const { return rhs_[0].semiring(); }
    std::uint32_t degree() const { return rhs_[0].degree(); }

    /// Combined context, params first.
    const std::vector<std::string>& context() const { return context_; }

    /// Syntactic guardedness: every unknown occurrence carries a parameter
    /// factor, or the parameter-free constant subsystem already stabilizes
    /// within one iteration per unknown. Non-guarded systems are still
    /// attempted, under the iteration cap.
    bool guarded() const { return guarded_; }

    /// Iteration cap: 4 * (degree + 1) * max(1, unknown count).
    std::uint32_t iteration_cap() const;

    /// rhs with the unknowns bound to z (over the parameter context) and the
    /// parameters left alone.
    SeriesTuple apply(const SeriesTuple& z) const;

private:
    std::vector<std::string> params_;
    std::vector<std::string> unknowns_;
    std::vector<std::string> context_;
    SeriesTuple rhs_;
    bool guarded_;
};

/// Raised when the iteration cap is exceeded; carries the last iterate so
/// callers can report partial output.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string what, SeriesTuple last, std::uint32_t iterations)
        : std::runtime_error(std::move(what)),
          last_iterate(std::move(last)),
          iterations(iterations) {}

    SeriesTuple last_iterate;
    std::uint32_t iterations;
};

struct SolveReport {
    SeriesTuple solution;  // over the parameter context
    std::uint32_t iterations = 0;
    /// Distance of each recorded iterate (starting from the zero iterate)
    /// to the final solution; non-increasing.
    std::vector<TaylorDistance> per_iteration_distance;
    bool stabilized = false;

    /// CSV trace: step,distance_exponent,rate_ok. The rate column is "na"
    /// here; Newton reports fill it in.
    std::string trace_csv() const;
};

/// Least fixpoint modulo the truncation degree by Kleene iteration from 0.
SolveReport kleene_fixpoint(const EquationSystem& sys);

/// The Kleene chain itself (iterate 0 is the zero tuple), for tests and for
/// the sandwich comparisons in the Newton module.
std::vector<SeriesTuple> kleene_chain(const EquationSystem& sys, std::uint32_t steps);

/// Square matrix of series sharing one context; rows index equations,
/// columns unknowns.
class SemiringMatrix {
public:
    SemiringMatrix(std::size_t dim, Series fill);
    static SemiringMatrix zero(const Semiring& sr, std::vector<std::string> vars,
                               std::uint32_t degree, std::size_t dim);
    static SemiringMatrix identity(const Semiring& sr, std::vector<std::string> vars,
                                   std::uint32_t degree, std::size_t dim);

    std::size_t dim() const { return dim_; }
    const Series& at(std::size_t i, std::size_t j) const;
    Series& at(std::size_t i, std::size_t j);

    const Semiring& semiring() const { return entries_[0].semiring(); }
    const std::vector<std::string>& variables() const { return entries_[0].variables(); }
    std::uint32_t degree() const { return entries_[0].degree(); }

private:
    std::size_t dim_;
    std::vector<Series> entries_;
};

SemiringMatrix operator+(const SemiringMatrix& a, const SemiringMatrix& b);
SemiringMatrix operator*(const SemiringMatrix& a, const SemiringMatrix& b);
bool operator==(const SemiringMatrix& a, const SemiringMatrix& b);
inline bool operator!=(const SemiringMatrix& a, const SemiringMatrix& b) {
    return !(a == b);
}
SeriesTuple mat_apply(const SemiringMatrix& m, const SeriesTuple& v);
bool mat_is_zero(const SemiringMatrix& m);

/// Least solution of S = I + M*S by recursive two-block elimination, the
/// computational reading of Bekic's axiom. Entries may saturate to infinity;
/// that is a value, not an error.
SemiringMatrix matrix_star(const SemiringMatrix& m);

/// The same operator obtained from the fixpoint side: Kleene iteration of
/// T -> I + M*T, with saturation of coefficients that are still growing at
/// the cap. Kept separate from matrix_star so the two derivations can be
/// compared against each other. Entries must be linear or constant.
SemiringMatrix repetition(const SemiringMatrix& m);

/// Feedback: f maps (params, traced) to (outputs..., traced...); the first
/// `split` components are the outputs, the rest is the loop body, one per
/// traced variable. Substitutes the least fixpoint of the loop body into the
/// outputs.
SeriesTuple trace(const SeriesTuple& f, std::size_t split,
                  const std::vector<std::string>& params,
                  const std::vector<std::string>& traced);

}  // namespace fixdiff

#endif
