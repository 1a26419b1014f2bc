#ifndef FIXDIFF_SERIES_HPP
#define FIXDIFF_SERIES_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fixdiff/semiring.hpp"

namespace fixdiff {

/// One exponent per context variable.
using Exponents = std::vector<std::uint32_t>;

std::uint64_t total_degree(const Exponents& e);

/// Graded lexicographic order: total degree first, then lex. This is the
/// storage, display and serialization order, so all output is deterministic.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

using TermMap = std::map<Exponents, Value, GradedLexLess>;

/// Truncated multivariate power series over one of the built-in semirings.
/// Canonical form: no stored coefficient is the semiring zero and every
/// stored exponent vector has total degree <= truncation degree.
/// Values are immutable once built; all operations return new series.
class Series {
public:
    Series(const Semiring& sr, std::vector<std::string> variables,
           std::uint32_t truncation_degree);

    static Series constant(const Semiring& sr, std::vector<std::string> variables,
                           std::uint32_t degree, const Value& c);
    /// The monomial x_i (requires degree >= 1).
    static Series variable(const Semiring& sr, std::vector<std::string> variables,
                           std::uint32_t degree, std::size_t index);
    static Series monomial(const Semiring& sr, std::vector<std::string> variables,
                           std::uint32_t degree, const Exponents& e, const Value& c);

    const Semiring& semiring() const { return *sr_; }
    const std::vector<std::string>& variables() const { return vars_; }
    std::uint32_t degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    Value constant_term() const;
    /// Stored coefficient or the semiring zero. Throws on wrong arity.
    Value coefficient(const Exponents& e) const;

    bool same_context(const Series& other) const;

    /// In-place accumulation helper used by the operations below; keeps the
    /// term map canonical and enforces the truncation degree.
    void accumulate(const Exponents& e, const Value& c);

private:
    const Semiring* sr_;
    std::vector<std::string> vars_;
    std::uint32_t degree_;
    TermMap terms_;
};

Series operator+(const Series& p, const Series& q);
Series operator*(const Series& p, const Series& q);
Series scale(const Value& c, const Series& p);
bool operator==(const Series& p, const Series& q);
inline bool operator!=(const Series& p, const Series& q) { return !(p == q); }

/// Coefficientwise truncated subtraction (the series natural order and monus
/// factor through coefficients because addition is coefficientwise).
Series series_monus(const Series& p, const Series& q);
/// Coefficientwise natural order.
bool series_leq(const Series& p, const Series& q);

/// Simultaneous substitution of every variable of p; all bound series must
/// share one target context with the same truncation degree.
Series substitute(const Series& p, std::span<const Series> bindings);
Series substitute(const Series& p, const std::vector<Series>& bindings);

/// Drop all terms of total degree > d and lower the truncation degree to d.
/// Raising the degree is rejected: the dropped information cannot come back.
Series truncate(const Series& p, std::uint32_t d);

/// Least solution of s = 1 + p*s modulo the truncation degree. Splitting off
/// the constant term c gives s = (c* * rest)* * c*, where the inner star is a
/// finite geometric sum because rest has no constant term. Saturates, never
/// fails.
Series series_star(const Series& p);

/// Evaluate at a point of the carrier (one value per variable).
Value evaluate(const Series& p, std::span<const Value> point);

/// Reinterpret p over a wider (or reordered) context; every variable of p
/// must appear in new_vars by name. Terms above new_degree are dropped.
Series embed(const Series& p, std::vector<std::string> new_vars,
             std::uint32_t new_degree);

/// Text form, graded-lex term order: `3 + 2*z + 5*z^2*w`. Unit coefficients
/// on non-constant monomials are omitted. Round-trip stable with the parser
/// in textio.
std::string to_string(const Series& p);

/// Tuple of series sharing a variable context and truncation degree.
struct SeriesTuple {
    std::vector<Series> components;

    SeriesTuple() = default;
    explicit SeriesTuple(std::vector<Series> comps);

    std::size_t size() const { return components.size(); }
    const Series& operator[](std::size_t i) const { return components[i]; }

    static SeriesTuple zero(const Semiring& sr, std::vector<std::string> variables,
                            std::uint32_t degree, std::size_t arity);
    /// The identity tuple (x_1, ..., x_n) over its own context.
    static SeriesTuple identity(const Semiring& sr, std::vector<std::string> variables,
                                std::uint32_t degree);
};

SeriesTuple operator+(const SeriesTuple& a, const SeriesTuple& b);
bool operator==(const SeriesTuple& a, const SeriesTuple& b);
inline bool operator!=(const SeriesTuple& a, const SeriesTuple& b) { return !(a == b); }
bool tuple_leq(const SeriesTuple& a, const SeriesTuple& b);
SeriesTuple tuple_monus(const SeriesTuple& a, const SeriesTuple& b);
SeriesTuple substitute(const SeriesTuple& f, const std::vector<Series>& bindings);

}  // namespace fixdiff

#endif
