#include "fixdiff/differential.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fixdiff {

std::vector<std::string> direction_names(const std::vector<std::string>& vars,
                                         const std::string& prefix) {
    std::string p = prefix;
    auto collides = [&](const std::string& pre) {
        return std::any_of(vars.begin(), vars.end(), [&](const std::string& v) {
            return std::find(vars.begin(), vars.end(), pre + v) != vars.end();
        });
    };
    while (collides(p)) p.insert(p.begin(), p[0]);
    std::vector<std::string> out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(p + v);
    return out;
}

namespace {

// Derivative with respect to the variables in [0, block_size), introducing
// one fresh direction variable per differentiated variable. The context of
// the result is (vars, directions).
Series block_derivative(const Series& p, std::size_t block_size,
                        const std::vector<std::string>& dir_names) {
    assert(dir_names.size() == block_size);
    std::vector<std::string> vars2 = p.variables();
    vars2.insert(vars2.end(), dir_names.begin(), dir_names.end());
    const std::size_t n = p.variables().size();
    Series r(p.semiring(), vars2, p.degree());
    for (const auto& [e, c] : p.terms()) {
        for (std::size_t i = 0; i < block_size; ++i) {
            if (e[i] == 0) continue;
            Exponents e2(vars2.size(), 0);
            std::copy(e.begin(), e.end(), e2.begin());
            e2[i] -= 1;
            e2[n + i] = 1;
            r.accumulate(e2, nat_scale(e[i], c));
        }
    }
    return r;
}

}  // namespace

Series derivative(const Series& p) {
    return block_derivative(p, p.variables().size(),
                            direction_names(p.variables()));
}

Series partial(const Series& p, std::size_t var_index) {
    if (var_index >= p.variables().size())
        throw DomainMismatchError("partial: variable index out of range");
    Series r(p.semiring(), p.variables(), p.degree());
    for (const auto& [e, c] : p.terms()) {
        if (e[var_index] == 0) continue;
        Exponents e2 = e;
        e2[var_index] -= 1;
        r.accumulate(e2, nat_scale(e[var_index], c));
    }
    return r;
}

TangentSeries tangent(const SeriesTuple& f) {
    std::vector<Series> fiber;
    fiber.reserve(f.size());
    for (const auto& comp : f.components) fiber.push_back(derivative(comp));
    return TangentSeries{f, SeriesTuple(std::move(fiber))};
}

Series nth_derivative(const Series& p, std::uint32_t n) {
    Series q = p;
    std::size_t block = p.variables().size();
    for (std::uint32_t k = 1; k <= n; ++k) {
        std::vector<std::string> base(p.variables());
        std::string prefix = "b" + std::to_string(k) + "_";
        std::vector<std::string> dirs = direction_names(q.variables(), prefix);
        dirs.resize(block);  // directions only for the original block
        q = block_derivative(q, block, dirs);
    }
    return q;
}

Series taylor_monomial(const Series& p, std::uint32_t n) {
    Series r(p.semiring(), p.variables(), p.degree());
    for (const auto& [e, c] : p.terms())
        if (total_degree(e) == n) r.accumulate(e, c);
    return r;
}

double TaylorDistance::value() const {
    if (identical()) return 0.0;
    return std::pow(2.0, -static_cast<double>(*exponent));
}

std::string TaylorDistance::str() const {
    return identical() ? "inf" : std::to_string(*exponent);
}

TaylorDistance taylor_distance(const Series& p, const Series& q) {
    if (!p.same_context(q))
        throw DomainMismatchError("taylor_distance: context mismatch");
    std::optional<std::uint32_t> k;
    auto consider = [&](const Exponents& e) {
        if (value_eq(p.coefficient(e), q.coefficient(e))) return;
        auto d = static_cast<std::uint32_t>(total_degree(e));
        if (!k || d < *k) k = d;
    };
    for (const auto& [e, c] : p.terms()) consider(e);
    for (const auto& [e, c] : q.terms()) consider(e);
    return TaylorDistance{k};
}

TaylorDistance tuple_distance(const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != b.size())
        throw DomainMismatchError("tuple_distance: arity mismatch");
    TaylorDistance best{std::nullopt};
    for (std::size_t i = 0; i < a.size(); ++i) {
        TaylorDistance d = taylor_distance(a[i], b[i]);
        if (d.identical()) continue;
        if (best.identical() || *d.exponent < *best.exponent) best = d;
    }
    return best;
}

bool distance_leq(const TaylorDistance& a, const TaylorDistance& b) {
    if (a.identical()) return true;
    if (b.identical()) return false;
    return *a.exponent >= *b.exponent;
}

bool is_linear(const Series& p) {
    for (const auto& [e, c] : p.terms())
        if (total_degree(e) != 1) return false;
    return true;
}

bool is_linear_in(const Series& p, const std::vector<std::size_t>& block) {
    for (const auto& [e, c] : p.terms()) {
        std::uint64_t d = 0;
        for (std::size_t i : block) d += e[i];
        if (d != 1) return false;
    }
    return true;
}

namespace {

std::uint64_t sat_binomial(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        // r * (n-k+i) / i is integral at every step
        std::uint64_t num = n - k + i;
        if (__builtin_mul_overflow(r, num, &r))
            return std::numeric_limits<std::uint64_t>::max();
        r /= i;
    }
    return r;
}

void check_shift_args(const Series& p, const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != p.variables().size() || b.size() != a.size())
        throw DomainMismatchError("taylor_shift: arity mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].same_context(b[i]) || !a[i].same_context(a[0]))
            throw DomainMismatchError("taylor_shift: displacement context mismatch");
}

}  // namespace

Series taylor_shift_binomial(const Series& p, const SeriesTuple& a,
                             const SeriesTuple& b) {
    check_shift_args(p, a, b);
    const Series& model = a[0];
    Series r(p.semiring(), model.variables(), model.degree());
    // per-variable power tables
    std::vector<std::vector<Series>> pa(a.size()), pb(a.size());
    auto power = [&](std::vector<Series>& cache, const Series& base,
                     std::uint32_t k) -> const Series& {
        if (cache.empty())
            cache.push_back(Series::constant(model.semiring(), model.variables(),
                                             model.degree(), model.semiring().one()));
        while (cache.size() <= k) cache.push_back(cache.back() * base);
        return cache[k];
    };
    for (const auto& [e, c] : p.terms()) {
        Series term = Series::constant(p.semiring(), model.variables(),
                                       model.degree(), c);
        for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i) {
            if (e[i] == 0) continue;
            // (a_i + b_i)^e_i expanded with explicit binomial coefficients
            Series factor(p.semiring(), model.variables(), model.degree());
            for (std::uint32_t j = 0; j <= e[i]; ++j) {
                Series piece = power(pa[i], a[i], j) * power(pb[i], b[i], e[i] - j);
                factor = factor + scale(p.semiring().from_natural(
                                            sat_binomial(e[i], j)),
                                        piece);
            }
            term = term * factor;
        }
        r = r + term;
    }
    return r;
}

Series taylor_shift(const Series& p, const SeriesTuple& a, const SeriesTuple& b) {
    check_shift_args(p, a, b);
    std::vector<Series> sum;
    sum.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum.push_back(a[i] + b[i]);
    Series direct = substitute(p, sum);
    Series binomial = taylor_shift_binomial(p, a, b);
    if (direct != binomial)
        throw std::logic_error("taylor_shift: expansion routes disagree");
    return direct;
}

}  // namespace fixdiff
