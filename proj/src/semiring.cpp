#include "fixdiff/semiring.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace fixdiff {

namespace {

constexpr std::uint64_t kNatInf = std::numeric_limits<std::uint64_t>::max();
constexpr std::int64_t kTropInf = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kTropNegInf = std::numeric_limits<std::int64_t>::min();

[[noreturn]] void mismatch(const Value& a, const Value& b) {
    throw DomainMismatchError("semiring mismatch: " +
                              std::string(a.semiring().name()) + " vs " +
                              std::string(b.semiring().name()));
}

void require_same(const Value& a, const Value& b) {
    if (a.semiring_id() != b.semiring_id()) mismatch(a, b);
}

std::uint64_t sat_add_u64(std::uint64_t a, std::uint64_t b) {
    if (a == kNatInf || b == kNatInf) return kNatInf;
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) return kNatInf;
    return r;
}

std::uint64_t sat_mul_u64(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;  // zero annihilates, even against inf
    if (a == kNatInf || b == kNatInf) return kNatInf;
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) return kNatInf;
    return r;
}

// Tropical multiplication is weight addition. +inf (the semiring zero)
// annihilates; otherwise -inf is absorbing.
std::int64_t trop_mul(std::int64_t a, std::int64_t b) {
    if (a == kTropInf || b == kTropInf) return kTropInf;
    if (a == kTropNegInf || b == kTropNegInf) return kTropNegInf;
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) return a > 0 ? kTropInf : kTropNegInf;
    return r;
}

std::string double_str(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    assert(ec == std::errc());
    return std::string(buf, end);
}

}  // namespace

const Semiring& Semiring::boolean() {
    static const Semiring s(SemiringId::boolean, "bool", true, true);
    return s;
}
const Semiring& Semiring::natural() {
    static const Semiring s(SemiringId::natural, "nat", false, true);
    return s;
}
const Semiring& Semiring::real() {
    static const Semiring s(SemiringId::real, "real", false, false);
    return s;
}
const Semiring& Semiring::tropical() {
    static const Semiring s(SemiringId::tropical, "tropical", true, true);
    return s;
}
const Semiring& Semiring::viterbi() {
    static const Semiring s(SemiringId::viterbi, "viterbi", true, false);
    return s;
}

const Semiring& Semiring::get(SemiringId id) {
    switch (id) {
        case SemiringId::boolean: return boolean();
        case SemiringId::natural: return natural();
        case SemiringId::real: return real();
        case SemiringId::tropical: return tropical();
        case SemiringId::viterbi: return viterbi();
    }
    std::abort();
}

const Semiring* Semiring::find(std::string_view name) {
    for (const Semiring* s : {&boolean(), &natural(), &real(), &tropical(), &viterbi()})
        if (s->name() == name) return s;
    return nullptr;
}

const Semiring& Semiring::by_name(std::string_view name) {
    if (const Semiring* s = find(name)) return *s;
    throw DomainMismatchError("unknown semiring: " + std::string(name));
}

Value Semiring::zero() const {
    switch (id_) {
        case SemiringId::boolean: return Value::boolean(false);
        case SemiringId::natural: return Value::natural(0);
        case SemiringId::real: return Value::real(0.0);
        case SemiringId::tropical: return Value::tropical_zero();
        case SemiringId::viterbi: return Value::viterbi(0.0);
    }
    std::abort();
}

Value Semiring::one() const {
    switch (id_) {
        case SemiringId::boolean: return Value::boolean(true);
        case SemiringId::natural: return Value::natural(1);
        case SemiringId::real: return Value::real(1.0);
        case SemiringId::tropical: return Value::tropical_weight(0);
        case SemiringId::viterbi: return Value::viterbi(1.0);
    }
    std::abort();
}

Value Semiring::from_natural(std::uint64_t n) const {
    switch (id_) {
        case SemiringId::boolean: return Value::boolean(n > 0);
        case SemiringId::natural: return Value::natural(n);
        case SemiringId::real: return Value::real(static_cast<double>(n));
        case SemiringId::tropical:
            // min(0, ..., 0) for n >= 1 copies of one, else the empty sum.
            return n > 0 ? Value::tropical_weight(0) : Value::tropical_zero();
        case SemiringId::viterbi: return n > 0 ? Value::viterbi(1.0) : Value::viterbi(0.0);
    }
    std::abort();
}

Value Semiring::from_integer(std::int64_t n) const {
    switch (id_) {
        case SemiringId::boolean: return Value::boolean(n != 0);
        case SemiringId::natural:
            if (n < 0) throw DomainMismatchError("negative literal in nat semiring");
            return Value::natural(static_cast<std::uint64_t>(n));
        case SemiringId::real:
            if (n < 0) throw DomainMismatchError("negative literal in real semiring");
            return Value::real(static_cast<double>(n));
        case SemiringId::tropical: return Value::tropical_weight(n);
        case SemiringId::viterbi: return from_decimal(static_cast<double>(n));
    }
    std::abort();
}

Value Semiring::from_decimal(double x) const {
    switch (id_) {
        case SemiringId::real:
            if (x < 0) throw DomainMismatchError("negative literal in real semiring");
            return Value::real(x);
        case SemiringId::viterbi:
            if (x < 0 || x > 1)
                throw DomainMismatchError("viterbi literal outside [0,1]");
            return Value::viterbi(x);
        default:
            if (x != std::floor(x))
                throw DomainMismatchError("fractional literal in exact semiring " +
                                          std::string(name_));
            return from_integer(static_cast<std::int64_t>(x));
    }
}

Value Semiring::parse(std::string_view text) const {
    switch (id_) {
        case SemiringId::boolean:
            if (text == "t") return Value::boolean(true);
            if (text == "f") return Value::boolean(false);
            break;
        case SemiringId::natural: {
            if (text == "inf") return Value::natural_infinity();
            std::uint64_t n = 0;
            auto [ptr, ec] = std::from_chars(text.begin(), text.end(), n);
            if (ec == std::errc() && ptr == text.end()) return Value::natural(n);
            break;
        }
        case SemiringId::tropical: {
            if (text == "inf") return Value::tropical_zero();
            if (text == "-inf") return Value::tropical_bottomless();
            std::int64_t w = 0;
            auto [ptr, ec] = std::from_chars(text.begin(), text.end(), w);
            if (ec == std::errc() && ptr == text.end()) return Value::tropical_weight(w);
            break;
        }
        case SemiringId::real:
        case SemiringId::viterbi: {
            if (text == "inf") {
                if (id_ == SemiringId::real)
                    return Value::real(std::numeric_limits<double>::infinity());
                break;
            }
            std::string buf(text);
            char* end = nullptr;
            double x = std::strtod(buf.c_str(), &end);
            if (end == buf.c_str() + buf.size()) return from_decimal(x);
            break;
        }
    }
    throw DomainMismatchError("cannot parse '" + std::string(text) +
                              "' as a " + std::string(name_) + " value");
}

Value Value::boolean(bool b) {
    Value v(SemiringId::boolean);
    v.p_.flag = b;
    return v;
}
Value Value::natural(std::uint64_t n) {
    Value v(SemiringId::natural);
    v.p_.count = n;
    return v;
}
Value Value::natural_infinity() { return natural(kNatInf); }
Value Value::real(double x) {
    assert(x >= 0 || std::isinf(x));
    Value v(SemiringId::real);
    v.p_.number = x;
    return v;
}
Value Value::tropical_weight(std::int64_t w) {
    Value v(SemiringId::tropical);
    v.p_.weight = w;
    return v;
}
Value Value::tropical_zero() { return tropical_weight(kTropInf); }
Value Value::tropical_bottomless() { return tropical_weight(kTropNegInf); }
Value Value::viterbi(double p) {
    assert(p >= 0 && p <= 1);
    Value v(SemiringId::viterbi);
    v.p_.number = p;
    return v;
}

bool Value::is_zero() const { return value_eq(*this, semiring().zero()); }
bool Value::is_one() const { return value_eq(*this, semiring().one()); }

bool Value::is_saturated() const {
    switch (id_) {
        case SemiringId::natural: return p_.count == kNatInf;
        case SemiringId::real: return std::isinf(p_.number);
        case SemiringId::tropical: return p_.weight == kTropNegInf;
        default: return false;
    }
}

bool Value::as_bool() const {
    assert(id_ == SemiringId::boolean);
    return p_.flag;
}
std::uint64_t Value::as_natural() const {
    assert(id_ == SemiringId::natural && p_.count != kNatInf);
    return p_.count;
}
bool Value::natural_is_infinite() const {
    assert(id_ == SemiringId::natural);
    return p_.count == kNatInf;
}
double Value::as_double() const {
    assert(id_ == SemiringId::real || id_ == SemiringId::viterbi);
    return p_.number;
}
std::int64_t Value::as_tropical() const {
    assert(id_ == SemiringId::tropical && p_.weight != kTropInf &&
           p_.weight != kTropNegInf);
    return p_.weight;
}

std::string Value::str() const {
    switch (id_) {
        case SemiringId::boolean: return p_.flag ? "t" : "f";
        case SemiringId::natural:
            return p_.count == kNatInf ? "inf" : std::to_string(p_.count);
        case SemiringId::real:
        case SemiringId::viterbi: return double_str(p_.number);
        case SemiringId::tropical:
            if (p_.weight == kTropInf) return "inf";
            if (p_.weight == kTropNegInf) return "-inf";
            return std::to_string(p_.weight);
    }
    std::abort();
}

Value add(const Value& a, const Value& b) {
    require_same(a, b);
    Value r(a.id_);
    switch (a.id_) {
        case SemiringId::boolean: r.p_.flag = a.p_.flag || b.p_.flag; break;
        case SemiringId::natural: r.p_.count = sat_add_u64(a.p_.count, b.p_.count); break;
        case SemiringId::real: r.p_.number = a.p_.number + b.p_.number; break;
        case SemiringId::tropical:
            r.p_.weight = a.p_.weight < b.p_.weight ? a.p_.weight : b.p_.weight;
            break;
        case SemiringId::viterbi:
            r.p_.number = a.p_.number > b.p_.number ? a.p_.number : b.p_.number;
            break;
    }
    return r;
}

Value mul(const Value& a, const Value& b) {
    require_same(a, b);
    Value r(a.id_);
    switch (a.id_) {
        case SemiringId::boolean: r.p_.flag = a.p_.flag && b.p_.flag; break;
        case SemiringId::natural: r.p_.count = sat_mul_u64(a.p_.count, b.p_.count); break;
        case SemiringId::real:
            // continuous-semiring convention: 0 * inf = 0
            if (a.p_.number == 0 || b.p_.number == 0)
                r.p_.number = 0;
            else
                r.p_.number = a.p_.number * b.p_.number;
            break;
        case SemiringId::tropical: r.p_.weight = trop_mul(a.p_.weight, b.p_.weight); break;
        case SemiringId::viterbi: r.p_.number = a.p_.number * b.p_.number; break;
    }
    return r;
}

bool leq(const Value& a, const Value& b) {
    require_same(a, b);
    switch (a.id_) {
        case SemiringId::boolean: return !a.p_.flag || b.p_.flag;
        case SemiringId::natural: return a.p_.count <= b.p_.count;
        case SemiringId::real: return a.p_.number <= b.p_.number + kRealTolerance;
        case SemiringId::tropical: return b.p_.weight <= a.p_.weight;
        case SemiringId::viterbi: return a.p_.number <= b.p_.number + kRealTolerance;
    }
    std::abort();
}

Value monus(const Value& a, const Value& b) {
    require_same(a, b);
    Value r(a.id_);
    switch (a.id_) {
        case SemiringId::boolean: r.p_.flag = a.p_.flag && !b.p_.flag; break;
        case SemiringId::natural:
            if (b.p_.count >= a.p_.count)
                r.p_.count = 0;  // covers inf - inf = 0
            else if (a.p_.count == kNatInf)
                r.p_.count = kNatInf;
            else
                r.p_.count = a.p_.count - b.p_.count;
            break;
        case SemiringId::real:
            if (b.p_.number >= a.p_.number)
                r.p_.number = 0;
            else if (std::isinf(a.p_.number))
                r.p_.number = a.p_.number;
            else
                r.p_.number = a.p_.number - b.p_.number;
            break;
        case SemiringId::tropical:
            // residuation: least h in the reverse-numeric order with
            // min(b, h) <=num a.
            r.p_.weight = b.p_.weight <= a.p_.weight ? kTropInf : a.p_.weight;
            break;
        case SemiringId::viterbi:
            r.p_.number = b.p_.number >= a.p_.number ? 0.0 : a.p_.number;
            break;
    }
    return r;
}

Value star(const Value& a) {
    switch (a.id_) {
        case SemiringId::boolean: return Value::boolean(true);
        case SemiringId::natural:
            return a.p_.count == 0 ? Value::natural(1) : Value::natural_infinity();
        case SemiringId::real:
            if (a.p_.number < 1.0) return Value::real(1.0 / (1.0 - a.p_.number));
            return Value::real(std::numeric_limits<double>::infinity());
        case SemiringId::tropical:
            // x = min(0, a + x): stays at one for a >= 0, dives otherwise.
            return a.p_.weight >= 0 ? Value::tropical_weight(0)
                                    : Value::tropical_bottomless();
        case SemiringId::viterbi: return Value::viterbi(1.0);
    }
    std::abort();
}

bool value_eq(const Value& a, const Value& b) {
    require_same(a, b);
    switch (a.id_) {
        case SemiringId::boolean: return a.p_.flag == b.p_.flag;
        case SemiringId::natural: return a.p_.count == b.p_.count;
        case SemiringId::tropical: return a.p_.weight == b.p_.weight;
        case SemiringId::real:
        case SemiringId::viterbi:
            if (std::isinf(a.p_.number) || std::isinf(b.p_.number))
                return a.p_.number == b.p_.number;
            return std::fabs(a.p_.number - b.p_.number) <= kRealTolerance;
    }
    std::abort();
}

Value nat_scale(std::uint64_t n, const Value& a) {
    return mul(a.semiring().from_natural(n), a);
}

}  // namespace fixdiff
