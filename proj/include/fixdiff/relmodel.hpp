#ifndef FIXDIFF_RELMODEL_HPP
#define FIXDIFF_RELMODEL_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "fixdiff/fixpoint.hpp"
#include "fixdiff/series.hpp"

namespace fixdiff {

/// Multiset over {0..n-1} as a count vector; the finite stand-in for the
/// exponential modality. Total size is bounded by the relation's cap, the
/// relational mirror of the series truncation degree.
using Multiset = std::vector<std::uint32_t>;

std::uint64_t multiset_total(const Multiset& m);

/// Finitely-supported map (multiset over source, target element) -> weight.
/// Absent keys mean the semiring zero; stored weights are never zero.
class WeightedRelation {
public:
    WeightedRelation(const Semiring& sr, std::uint32_t source_size,
                     std::uint32_t target_size, std::uint32_t cap);

    /// Identity of the coKleisli category: weight one exactly on the
    /// singleton pairs ([a], a).
    static WeightedRelation dereliction(const Semiring& sr, std::uint32_t size,
                                        std::uint32_t cap);

    const Semiring& semiring() const { return *sr_; }
    std::uint32_t source_size() const { return source_size_; }
    std::uint32_t target_size() const { return target_size_; }
    std::uint32_t cap() const { return cap_; }

    Value weight(const Multiset& m, std::uint32_t target) const;
    /// Canonicalizing accumulate; drops keys whose total exceeds the cap.
    void accumulate(const Multiset& m, std::uint32_t target, const Value& v);

    using KeyMap = std::map<std::pair<Multiset, std::uint32_t>, Value>;
    const KeyMap& weights() const { return weights_; }

private:
    const Semiring* sr_;
    std::uint32_t source_size_;
    std::uint32_t target_size_;
    std::uint32_t cap_;
    KeyMap weights_;
};

bool operator==(const WeightedRelation& a, const WeightedRelation& b);
inline bool operator!=(const WeightedRelation& a, const WeightedRelation& b) {
    return !(a == b);
}

/// Composition through the multiset comonad: the weight of (m, c) sums, over
/// every multiset beta over the middle set and every ordered decomposition of
/// m along beta's canonical listing, the product of the r-weights of the
/// pieces times s(beta, c). Realized as iterated sparse convolution with the
/// per-listing prefixes memoized.
WeightedRelation cokleisli_compose(const WeightedRelation& r,
                                   const WeightedRelation& s);

/// Pairing into a tagged disjoint-union target: components of f keep their
/// indices, components of g are shifted past f's target.
WeightedRelation rel_pair(const WeightedRelation& f, const WeightedRelation& g);

/// Relational derivative: source doubled by tagging, nonzero exactly when
/// the direction part is a singleton, where it reads the underlying relation
/// at the merged multiset.
WeightedRelation rel_derivative(const WeightedRelation& r);

/// Least fixpoint of r : (A (+) X) -> X over the parameter block A (the
/// first param_size source elements), by Kleene iteration under the cap.
WeightedRelation rel_fixpoint(const WeightedRelation& r, std::uint32_t param_size);

/// The finite-set isomorphism with series: exponent vectors are source
/// multisets, tuple components are target elements. Variable names default
/// to x1..xn when not supplied.
SeriesTuple series_of_relation(const WeightedRelation& r,
                               std::vector<std::string> variable_names = {});
WeightedRelation relation_of_series(const SeriesTuple& p);

}  // namespace fixdiff

#endif
