#ifndef FIXDIFF_SEMIRING_HPP
#define FIXDIFF_SEMIRING_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "fixdiff/error.hpp"

namespace fixdiff {

/// Absolute tolerance used for the inexact carriers (real, viterbi).
inline constexpr double kRealTolerance = 1e-9;

enum class SemiringId : std::uint8_t {
    boolean,   // ({f,t}, or, and)
    natural,   // (N u {inf}, +, *), saturating
    real,      // ([0,inf], +, *)
    tropical,  // (Z u {+inf,-inf}, min, +), zero = +inf, one = 0
    viterbi,   // ([0,1], max, *)
};

class Value;

/// Descriptor for one of the five built-in omega-continuous semirings.
/// All instances are static singletons; compare descriptors by address or id.
class Semiring {
public:
    static const Semiring& boolean();
    static const Semiring& natural();
    static const Semiring& real();
    static const Semiring& tropical();
    static const Semiring& viterbi();
    static const Semiring& get(SemiringId id);

    /// Lookup by the external name: bool | nat | real | tropical | viterbi.
    /// Returns nullptr when the name is unknown.
    static const Semiring* find(std::string_view name);
    /// Same, but throws DomainMismatchError on an unknown name.
    static const Semiring& by_name(std::string_view name);

    SemiringId id() const { return id_; }
    std::string_view name() const { return name_; }
    bool idempotent_add() const { return idempotent_; }
    /// True when arithmetic in the carrier is exact (no tolerance needed).
    bool exact() const { return exact_; }

    Value zero() const;
    Value one() const;

    /// n-fold sum of one; the canonical N-action on the semiring.
    Value from_natural(std::uint64_t n) const;
    /// Interpret an integer literal from an input file.
    Value from_integer(std::int64_t n) const;
    /// Interpret a decimal literal (real and viterbi carriers only).
    Value from_decimal(double x) const;
    /// Parse a coefficient in the same textual form Value::str() emits.
    Value parse(std::string_view text) const;

private:
    Semiring(SemiringId id, std::string_view name, bool idem, bool exact)
        : id_(id), name_(name), idempotent_(idem), exact_(exact) {}

    SemiringId id_;
    std::string_view name_;
    bool idempotent_;
    bool exact_;
};

/// Immutable element of one of the built-in semirings. Mixing values from
/// different semirings raises DomainMismatchError.
class Value {
public:
    static Value boolean(bool b);
    static Value natural(std::uint64_t n);
    static Value natural_infinity();
    static Value real(double x);  // x >= 0 or +inf
    static Value tropical_weight(std::int64_t w);
    static Value tropical_zero();      // +inf
    static Value tropical_bottomless();  // -inf saturation value
    static Value viterbi(double p);  // p in [0,1]

    SemiringId semiring_id() const { return id_; }
    const Semiring& semiring() const { return Semiring::get(id_); }

    bool is_zero() const;
    bool is_one() const;
    /// True for the saturating infinity of nat/real and the -inf of tropical.
    bool is_saturated() const;

    bool as_bool() const;
    std::uint64_t as_natural() const;  // asserts finite
    bool natural_is_infinite() const;
    double as_double() const;        // real and viterbi
    std::int64_t as_tropical() const;  // asserts finite

    /// Deterministic round-trippable text form.
    std::string str() const;

private:
    Value(SemiringId id) : id_(id) {}

    SemiringId id_;
    union {
        bool flag;
        std::uint64_t count;
        double number;
        std::int64_t weight;
    } p_{};

    friend Value add(const Value&, const Value&);
    friend Value mul(const Value&, const Value&);
    friend Value monus(const Value&, const Value&);
    friend bool leq(const Value&, const Value&);
    friend Value star(const Value&);
    friend bool value_eq(const Value&, const Value&);
    friend Value nat_scale(std::uint64_t, const Value&);
};

/// Semiring addition; commutative monoid with unit zero, saturating.
Value add(const Value& a, const Value& b);
/// Semiring multiplication; monoid with unit one, distributes over add,
/// zero annihilates (including 0 * inf = 0 on the unbounded carriers).
Value mul(const Value& a, const Value& b);
/// Truncated subtraction: least h in the natural order with b + h >= a.
/// On the idempotent carriers this is residuation, not numeric subtraction.
Value monus(const Value& a, const Value& b);
/// Natural order induced by addition: a <= b iff some h has a + h = b.
/// Tropical note: this is *reverse* numeric order (zero = +inf is bottom).
bool leq(const Value& a, const Value& b);
/// Least solution of x = 1 + a*x; saturates instead of failing.
Value star(const Value& a);
/// Equality; exact carriers compare exactly, real/viterbi within tolerance.
bool value_eq(const Value& a, const Value& b);
/// n-fold sum n*a (saturating); the N-module action used by derivatives.
Value nat_scale(std::uint64_t n, const Value& a);

}  // namespace fixdiff

#endif
