#include "fixdiff/series.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace fixdiff {

std::uint64_t total_degree(const Exponents& e) {
    std::uint64_t d = 0;
    for (auto k : e) d += k;
    return d;
}

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
    std::uint64_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

namespace {

void require_context(const Series& p, const Series& q) {
    if (!p.same_context(q))
        throw DomainMismatchError("series context mismatch");
}

std::string context_error(const char* what) {
    return std::string("series ") + what;
}

}  // namespace

Series::Series(const Semiring& sr, std::vector<std::string> variables,
               std::uint32_t truncation_degree)
    : sr_(&sr), vars_(std::move(variables)), degree_(truncation_degree) {}

Series Series::constant(const Semiring& sr, std::vector<std::string> variables,
                        std::uint32_t degree, const Value& c) {
    Series p(sr, std::move(variables), degree);
    p.accumulate(Exponents(p.vars_.size(), 0), c);
    return p;
}

Series Series::variable(const Semiring& sr, std::vector<std::string> variables,
                        std::uint32_t degree, std::size_t index) {
    Series p(sr, std::move(variables), degree);
    assert(index < p.vars_.size());
    // at degree 0 the monomial truncates away and the variable reads as zero
    Exponents e(p.vars_.size(), 0);
    e[index] = 1;
    p.accumulate(e, sr.one());
    return p;
}

Series Series::monomial(const Semiring& sr, std::vector<std::string> variables,
                        std::uint32_t degree, const Exponents& e, const Value& c) {
    Series p(sr, std::move(variables), degree);
    if (e.size() != p.vars_.size())
        throw DomainMismatchError(context_error("monomial arity mismatch"));
    p.accumulate(e, c);
    return p;
}

Value Series::constant_term() const {
    return coefficient(Exponents(vars_.size(), 0));
}

Value Series::coefficient(const Exponents& e) const {
    if (e.size() != vars_.size())
        throw DomainMismatchError(context_error("exponent arity mismatch"));
    auto it = terms_.find(e);
    return it == terms_.end() ? sr_->zero() : it->second;
}

bool Series::same_context(const Series& other) const {
    return sr_ == other.sr_ && degree_ == other.degree_ && vars_ == other.vars_;
}

void Series::accumulate(const Exponents& e, const Value& c) {
    assert(e.size() == vars_.size());
    if (c.semiring_id() != sr_->id())
        throw DomainMismatchError(context_error("coefficient semiring mismatch"));
    if (total_degree(e) > degree_) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(e, c);
        return;
    }
    Value sum = add(it->second, c);
    if (sum.is_zero())
        terms_.erase(it);
    else
        it->second = sum;
}

Series operator+(const Series& p, const Series& q) {
    require_context(p, q);
    Series r = p;
    for (const auto& [e, c] : q.terms()) r.accumulate(e, c);
    return r;
}

Series operator*(const Series& p, const Series& q) {
    require_context(p, q);
    Series r(p.semiring(), p.variables(), p.degree());
    const std::uint64_t cap = p.degree();
    for (const auto& [ep, cp] : p.terms()) {
        std::uint64_t dp = total_degree(ep);
        for (const auto& [eq, cq] : q.terms()) {
            if (dp + total_degree(eq) > cap) continue;
            Exponents e = ep;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eq[i];
            r.accumulate(e, mul(cp, cq));
        }
    }
    return r;
}

Series scale(const Value& c, const Series& p) {
    Series r(p.semiring(), p.variables(), p.degree());
    for (const auto& [e, v] : p.terms()) r.accumulate(e, mul(c, v));
    return r;
}

bool operator==(const Series& p, const Series& q) {
    if (!p.same_context(q)) return false;
    auto it = p.terms().begin();
    auto jt = q.terms().begin();
    // Canonical form plus tolerance-aware coefficient equality: exact
    // carriers never store zero, inexact ones may differ within tolerance.
    if (p.semiring().exact()) {
        if (p.terms().size() != q.terms().size()) return false;
        for (; it != p.terms().end(); ++it, ++jt)
            if (it->first != jt->first || !value_eq(it->second, jt->second))
                return false;
        return true;
    }
    GradedLexLess less;
    while (it != p.terms().end() || jt != q.terms().end()) {
        if (jt == q.terms().end() || (it != p.terms().end() && less(it->first, jt->first))) {
            if (!it->second.is_zero()) return false;
            ++it;
        } else if (it == p.terms().end() || less(jt->first, it->first)) {
            if (!jt->second.is_zero()) return false;
            ++jt;
        } else {
            if (!value_eq(it->second, jt->second)) return false;
            ++it, ++jt;
        }
    }
    return true;
}

Series series_monus(const Series& p, const Series& q) {
    require_context(p, q);
    Series r(p.semiring(), p.variables(), p.degree());
    for (const auto& [e, c] : p.terms()) r.accumulate(e, monus(c, q.coefficient(e)));
    return r;
}

bool series_leq(const Series& p, const Series& q) {
    require_context(p, q);
    for (const auto& [e, c] : p.terms())
        if (!leq(c, q.coefficient(e))) return false;
    // zero coefficients of p are below everything
    return true;
}

namespace {

// Powers of each binding, filled lazily up to the exponent actually used.
class PowerCache {
public:
    explicit PowerCache(const Series& base) : powers_{/*x^0*/ Series::constant(
                                                  base.semiring(), base.variables(),
                                                  base.degree(), base.semiring().one())},
                                              base_(base) {}

    const Series& get(std::uint32_t k) {
        while (powers_.size() <= k) powers_.push_back(powers_.back() * base_);
        return powers_[k];
    }

private:
    std::vector<Series> powers_;
    Series base_;
};

}  // namespace

Series substitute(const Series& p, std::span<const Series> bindings) {
    if (bindings.size() != p.variables().size())
        throw DomainMismatchError("substitute: binding count mismatch");
    for (const auto& b : bindings) {
        if (!b.same_context(bindings[0]))
            throw DomainMismatchError("substitute: bindings disagree on context");
        if (b.semiring().id() != p.semiring().id())
            throw DomainMismatchError("substitute: semiring mismatch");
        if (b.degree() != p.degree())
            throw DomainMismatchError("substitute: truncation degree mismatch");
    }
    if (bindings.empty()) {
        // constant context: p is a plain value
        return p;
    }
    std::vector<PowerCache> pw(bindings.begin(), bindings.end());
    Series r(p.semiring(), bindings[0].variables(), bindings[0].degree());
    for (const auto& [e, c] : p.terms()) {
        Series term = Series::constant(p.semiring(), bindings[0].variables(),
                                       bindings[0].degree(), c);
        for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i)
            if (e[i] > 0) term = term * pw[i].get(e[i]);
        r = r + term;
    }
    return r;
}

Series substitute(const Series& p, const std::vector<Series>& bindings) {
    return substitute(p, std::span<const Series>(bindings));
}

Series truncate(const Series& p, std::uint32_t d) {
    if (d > p.degree())
        throw DomainMismatchError("truncate: cannot raise the truncation degree");
    Series r(p.semiring(), p.variables(), d);
    for (const auto& [e, c] : p.terms()) r.accumulate(e, c);
    return r;
}

Series series_star(const Series& p) {
    const Semiring& sr = p.semiring();
    Value c = p.constant_term();
    Value cs = star(c);
    Series cs_series = Series::constant(sr, p.variables(), p.degree(), cs);
    // rest = p with the constant term removed (an exact split, not a monus)
    Series rest(sr, p.variables(), p.degree());
    for (const auto& [e, v] : p.terms())
        if (total_degree(e) > 0) rest.accumulate(e, v);
    Series t = cs_series * rest;  // zero constant term
    // t* = sum of t^k, finite modulo the degree
    Series acc = Series::constant(sr, p.variables(), p.degree(), sr.one());
    Series power = acc;
    for (std::uint32_t k = 1; k <= p.degree(); ++k) {
        power = power * t;
        if (power.is_zero()) break;
        acc = acc + power;
    }
    return acc * cs_series;
}

Series embed(const Series& p, std::vector<std::string> new_vars,
             std::uint32_t new_degree) {
    std::vector<std::size_t> where(p.variables().size());
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
        auto it = std::find(new_vars.begin(), new_vars.end(), p.variables()[i]);
        if (it == new_vars.end())
            throw DomainMismatchError("embed: variable " + p.variables()[i] +
                                      " missing from the target context");
        where[i] = static_cast<std::size_t>(it - new_vars.begin());
    }
    Series r(p.semiring(), std::move(new_vars), new_degree);
    for (const auto& [e, c] : p.terms()) {
        Exponents e2(r.variables().size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) e2[where[i]] += e[i];
        r.accumulate(e2, c);
    }
    return r;
}

Value evaluate(const Series& p, std::span<const Value> point) {
    if (point.size() != p.variables().size())
        throw DomainMismatchError("evaluate: arity mismatch");
    Value acc = p.semiring().zero();
    for (const auto& [e, c] : p.terms()) {
        Value term = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) term = mul(term, point[i]);
        acc = add(acc, term);
    }
    return acc;
}

std::string to_string(const Series& p) {
    if (p.is_zero()) return p.semiring().zero().str();
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (!first) out << " + ";
        first = false;
        bool constant = total_degree(e) == 0;
        bool unit = c.is_one();
        if (constant || !unit) out << c.str();
        bool need_star = !constant && !unit;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) out << "*";
            out << p.variables()[i];
            if (e[i] > 1) out << "^" << e[i];
            need_star = true;
        }
    }
    return out.str();
}

SeriesTuple::SeriesTuple(std::vector<Series> comps) : components(std::move(comps)) {
    for (std::size_t i = 1; i < components.size(); ++i)
        if (!components[i].same_context(components[0]))
            throw DomainMismatchError("series tuple components disagree on context");
}

SeriesTuple SeriesTuple::zero(const Semiring& sr, std::vector<std::string> variables,
                              std::uint32_t degree, std::size_t arity) {
    std::vector<Series> comps;
    comps.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) comps.emplace_back(sr, variables, degree);
    return SeriesTuple(std::move(comps));
}

SeriesTuple SeriesTuple::identity(const Semiring& sr, std::vector<std::string> variables,
                                  std::uint32_t degree) {
    std::vector<Series> comps;
    comps.reserve(variables.size());
    for (std::size_t i = 0; i < variables.size(); ++i)
        comps.push_back(Series::variable(sr, variables, degree, i));
    return SeriesTuple(std::move(comps));
}

SeriesTuple operator+(const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != b.size()) throw DomainMismatchError("tuple arity mismatch");
    std::vector<Series> comps;
    comps.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) comps.push_back(a[i] + b[i]);
    return SeriesTuple(std::move(comps));
}

bool operator==(const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

bool tuple_leq(const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != b.size()) throw DomainMismatchError("tuple arity mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!series_leq(a[i], b[i])) return false;
    return true;
}

SeriesTuple tuple_monus(const SeriesTuple& a, const SeriesTuple& b) {
    if (a.size() != b.size()) throw DomainMismatchError("tuple arity mismatch");
    std::vector<Series> comps;
    comps.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) comps.push_back(series_monus(a[i], b[i]));
    return SeriesTuple(std::move(comps));
}

SeriesTuple substitute(const SeriesTuple& f, const std::vector<Series>& bindings) {
    std::vector<Series> comps;
    comps.reserve(f.size());
    for (const auto& c : f.components) comps.push_back(substitute(c, bindings));
    return SeriesTuple(std::move(comps));
}

}  // namespace fixdiff
