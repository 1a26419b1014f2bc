#ifndef FIXDIFF_DIFFERENTIAL_HPP
#define FIXDIFF_DIFFERENTIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "fixdiff/series.hpp"

namespace fixdiff {

/// Names for a fresh direction block, one per context variable. The prefix
/// is grown deterministically until it collides with nothing in the context.
std::vector<std::string> direction_names(const std::vector<std::string>& vars,
                                         const std::string& prefix = "a_");

/// Total derivative: for p over x_1..x_n, a series over the doubled context
/// (x_1..x_n, a_1..a_n) equal to sum_i dp/dx_i * a_i. Degree-1 homogeneous
/// and additive in the direction block.
Series derivative(const Series& p);

/// Partial derivative dp/dx_i, in the original context.
Series partial(const Series& p, std::size_t var_index);

/// Result of the tangent bundle functor: base components in the original
/// variables, fiber components over the doubled context, degree-1 in the
/// direction block.
struct TangentSeries {
    SeriesTuple base;
    SeriesTuple fiber;
};

/// T(f) = (f o pi1, D[f]).
TangentSeries tangent(const SeriesTuple& f);

/// n-th derivative: series over (x_1..x_n, b1_*, ..., bn_*), multilinear in
/// each direction block and symmetric under permuting them. Zero once n
/// exceeds the total degree of p.
Series nth_derivative(const Series& p, std::uint32_t n);

/// Degree-n homogeneous slice of p.
Series taylor_monomial(const Series& p, std::uint32_t n);

/// Distance in the Taylor ultrametric: 2^-k with k the least degree whose
/// homogeneous slices differ, or the identical marker when the series agree
/// up to the truncation degree (agreement beyond it is unknowable).
struct TaylorDistance {
    std::optional<std::uint32_t> exponent;  // nullopt means identical

    bool identical() const { return !exponent.has_value(); }
    double value() const;
    /// Deterministic text: the exponent, or "inf" for identical.
    std::string str() const;
};

TaylorDistance taylor_distance(const Series& p, const Series& q);
TaylorDistance tuple_distance(const SeriesTuple& a, const SeriesTuple& b);

/// d(a, b) <= d(c, d) in the 2^-k reading (identical counts as exponent
/// infinity).
bool distance_leq(const TaylorDistance& a, const TaylorDistance& b);

/// Linearity in the differential sense: every term has total degree exactly
/// one. Equivalent, for series, to D[p] = p evaluated on the direction block;
/// that equivalence is itself tested rather than recomputed here.
bool is_linear(const Series& p);

/// Degree-1 homogeneous in the designated variable block, any degree in the
/// remaining variables.
bool is_linear_in(const Series& p, const std::vector<std::size_t>& block);

/// p evaluated at a+b, computed by direct substitution and again as the
/// binomial-weighted Taylor sum (division-free: the 1/n! is absorbed by
/// binomial coefficients of the monomial expansion). The two routes must
/// agree; a mismatch throws std::logic_error.
Series taylor_shift(const Series& p, const SeriesTuple& a, const SeriesTuple& b);
/// The binomial route alone, for tests that want to compare both paths.
Series taylor_shift_binomial(const Series& p, const SeriesTuple& a,
                             const SeriesTuple& b);

}  // namespace fixdiff

#endif
