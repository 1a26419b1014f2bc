#include "fixdiff/relmodel.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace fixdiff {

std::uint64_t multiset_total(const Multiset& m) {
    std::uint64_t t = 0;
    for (auto c : m) t += c;
    return t;
}

WeightedRelation::WeightedRelation(const Semiring& sr, std::uint32_t source_size,
                                   std::uint32_t target_size, std::uint32_t cap)
    : sr_(&sr), source_size_(source_size), target_size_(target_size), cap_(cap) {}

WeightedRelation WeightedRelation::dereliction(const Semiring& sr,
                                               std::uint32_t size,
                                               std::uint32_t cap) {
    WeightedRelation d(sr, size, size, cap);
    for (std::uint32_t a = 0; a < size; ++a) {
        Multiset m(size, 0);
        m[a] = 1;
        d.accumulate(m, a, sr.one());
    }
    return d;
}

Value WeightedRelation::weight(const Multiset& m, std::uint32_t target) const {
    auto it = weights_.find({m, target});
    return it == weights_.end() ? sr_->zero() : it->second;
}

void WeightedRelation::accumulate(const Multiset& m, std::uint32_t target,
                                  const Value& v) {
    if (m.size() != source_size_)
        throw DomainMismatchError("relation: multiset arity mismatch");
    if (target >= target_size_)
        throw DomainMismatchError("relation: target element out of range");
    if (multiset_total(m) > cap_) return;
    auto key = std::make_pair(m, target);
    auto it = weights_.find(key);
    if (it == weights_.end()) {
        if (!v.is_zero()) weights_.emplace(std::move(key), v);
        return;
    }
    Value sum = add(it->second, v);
    if (sum.is_zero())
        weights_.erase(it);
    else
        it->second = sum;
}

bool operator==(const WeightedRelation& a, const WeightedRelation& b) {
    if (a.source_size() != b.source_size() || a.target_size() != b.target_size() ||
        a.cap() != b.cap() || a.semiring().id() != b.semiring().id())
        return false;
    // tolerate within-epsilon differences on inexact carriers
    for (const auto& [k, v] : a.weights())
        if (!value_eq(v, b.weight(k.first, k.second))) return false;
    for (const auto& [k, v] : b.weights())
        if (!value_eq(v, a.weight(k.first, k.second))) return false;
    return true;
}

namespace {

// Sparse map from source multisets to weights; the building block of the
// comonadic composition.
using ConvMap = std::map<Multiset, Value>;

void conv_add(ConvMap& m, const Multiset& k, const Value& v) {
    if (v.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end())
        m.emplace(k, v);
    else
        it->second = add(it->second, v);
}

ConvMap convolve(const ConvMap& f, const ConvMap& g, std::uint64_t cap) {
    ConvMap out;
    for (const auto& [m1, v1] : f) {
        std::uint64_t t1 = multiset_total(m1);
        for (const auto& [m2, v2] : g) {
            if (t1 + multiset_total(m2) > cap) continue;
            Multiset m = m1;
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
            conv_add(out, m, mul(v1, v2));
        }
    }
    return out;
}

}  // namespace

WeightedRelation cokleisli_compose(const WeightedRelation& r,
                                   const WeightedRelation& s) {
    if (r.target_size() != s.source_size())
        throw DomainMismatchError("compose: middle sets disagree");
    if (r.cap() != s.cap())
        throw DomainMismatchError("compose: caps disagree");
    if (r.semiring().id() != s.semiring().id())
        throw DomainMismatchError("compose: semiring mismatch");
    const Semiring& sr = r.semiring();
    const std::uint32_t cap = r.cap();

    // per-middle-element slices of r
    std::vector<ConvMap> slice(r.target_size());
    for (const auto& [k, v] : r.weights()) slice[k.second].emplace(k.first, v);

    ConvMap unit;
    unit.emplace(Multiset(r.source_size(), 0), sr.one());

    // prefix-memoized folds over the canonical (sorted) listing of beta
    std::map<std::vector<std::uint32_t>, ConvMap> memo;
    memo.emplace(std::vector<std::uint32_t>{}, unit);
    std::function<const ConvMap&(const std::vector<std::uint32_t>&)> fold_fn =
        [&](const std::vector<std::uint32_t>& listing) -> const ConvMap& {
        auto it = memo.find(listing);
        if (it != memo.end()) return it->second;
        std::vector<std::uint32_t> prefix = listing;
        prefix.pop_back();
        const ConvMap& head = fold_fn(prefix);
        ConvMap folded = convolve(head, slice[listing.back()], cap);
        return memo.emplace(listing, std::move(folded)).first->second;
    };

    WeightedRelation out(sr, r.source_size(), s.target_size(), cap);
    for (const auto& [k, v] : s.weights()) {
        const auto& [beta, c] = k;
        // canonical listing of beta with multiplicity
        std::vector<std::uint32_t> listing;
        for (std::uint32_t b = 0; b < beta.size(); ++b)
            for (std::uint32_t j = 0; j < beta[b]; ++j) listing.push_back(b);
        const ConvMap& pieces = fold_fn(listing);
        for (const auto& [m, w] : pieces) out.accumulate(m, c, mul(v, w));
    }
    return out;
}

WeightedRelation rel_pair(const WeightedRelation& f, const WeightedRelation& g) {
    if (f.source_size() != g.source_size() || f.cap() != g.cap() ||
        f.semiring().id() != g.semiring().id())
        throw DomainMismatchError("pair: relations must share source and cap");
    WeightedRelation out(f.semiring(), f.source_size(),
                         f.target_size() + g.target_size(), f.cap());
    for (const auto& [k, v] : f.weights()) out.accumulate(k.first, k.second, v);
    for (const auto& [k, v] : g.weights())
        out.accumulate(k.first, f.target_size() + k.second, v);
    return out;
}

WeightedRelation rel_derivative(const WeightedRelation& r) {
    const std::uint32_t n = r.source_size();
    WeightedRelation out(r.semiring(), 2 * n, r.target_size(), r.cap());
    for (const auto& [k, v] : r.weights()) {
        const Multiset& u = k.first;
        for (std::uint32_t a = 0; a < n; ++a) {
            if (u[a] == 0) continue;
            Multiset doubled(2 * n, 0);
            std::copy(u.begin(), u.end(), doubled.begin());
            doubled[a] -= 1;      // base part loses one occurrence
            doubled[n + a] = 1;   // which reappears as the direction singleton
            // the occurrence count is the quantitative content of the
            // derivative; over idempotent carriers it melts away
            out.accumulate(doubled, k.second, nat_scale(u[a], v));
        }
    }
    return out;
}

WeightedRelation rel_fixpoint(const WeightedRelation& r, std::uint32_t param_size) {
    if (param_size > r.source_size())
        throw DomainMismatchError("fixpoint: parameter block exceeds the source");
    const std::uint32_t x_size = r.source_size() - param_size;
    if (x_size != r.target_size())
        throw DomainMismatchError("fixpoint: traced block must match the target");
    const Semiring& sr = r.semiring();

    WeightedRelation cur(sr, param_size, x_size, r.cap());
    WeightedRelation derel = WeightedRelation::dereliction(sr, param_size, r.cap());
    const std::uint32_t cap_steps = 4 * (r.cap() + 1) * std::max(1u, x_size);
    for (std::uint32_t k = 0; k < cap_steps; ++k) {
        WeightedRelation next = cokleisli_compose(rel_pair(derel, cur), r);
        if (next == cur) return cur;
        cur = std::move(next);
    }
    throw DivergenceError("relational fixpoint exceeded its cap of " +
                              std::to_string(cap_steps) + " steps",
                          series_of_relation(cur), cap_steps);
}

SeriesTuple series_of_relation(const WeightedRelation& r,
                               std::vector<std::string> variable_names) {
    if (variable_names.empty())
        for (std::uint32_t i = 0; i < r.source_size(); ++i)
            variable_names.push_back("x" + std::to_string(i + 1));
    if (variable_names.size() != r.source_size())
        throw DomainMismatchError("series_of_relation: name count mismatch");
    std::vector<Series> comps;
    for (std::uint32_t j = 0; j < r.target_size(); ++j)
        comps.emplace_back(r.semiring(), variable_names, r.cap());
    for (const auto& [k, v] : r.weights()) {
        Exponents e(k.first.begin(), k.first.end());
        comps[k.second].accumulate(e, v);
    }
    return SeriesTuple(std::move(comps));
}

WeightedRelation relation_of_series(const SeriesTuple& p) {
    if (p.size() == 0)
        throw DomainMismatchError("relation_of_series: empty tuple");
    const Series& model = p[0];
    WeightedRelation out(model.semiring(),
                         static_cast<std::uint32_t>(model.variables().size()),
                         static_cast<std::uint32_t>(p.size()), model.degree());
    for (std::uint32_t j = 0; j < p.size(); ++j)
        for (const auto& [e, c] : p[j].terms())
            out.accumulate(Multiset(e.begin(), e.end()), j, c);
    return out;
}

}  // namespace fixdiff
