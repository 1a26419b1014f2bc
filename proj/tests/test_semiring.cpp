#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "fixdiff/semiring.hpp"

using namespace fixdiff;

namespace {

// Independent oracle for star: the Kleene chain s_0 = 0, s_{k+1} = 1 + a*s_k.
// Returns the stable value, or the saturation value when the chain is still
// moving after `steps` iterations.
Value star_oracle(const Value& a, int steps) {
    const Semiring& sr = a.semiring();
    Value s = sr.zero();
    for (int k = 0; k < steps; ++k) {
        Value next = add(sr.one(), mul(a, s));
        if (value_eq(next, s)) return s;
        s = next;
    }
    switch (sr.id()) {
        case SemiringId::natural: return Value::natural_infinity();
        case SemiringId::real:
            return Value::real(std::numeric_limits<double>::infinity());
        case SemiringId::tropical: return Value::tropical_bottomless();
        default: return s;
    }
}

// Brute-force least h with b + h >= a over the two-element Boolean carrier.
Value boolean_monus_oracle(const Value& a, const Value& b) {
    Value best = Value::boolean(true);
    bool found = false;
    for (bool h : {false, true}) {
        Value hv = Value::boolean(h);
        if (!leq(a, add(b, hv))) continue;
        if (!found || leq(hv, best)) best = hv;
        found = true;
    }
    REQUIRE(found);
    return best;
}

std::vector<Value> sample_values(const Semiring& sr, std::mt19937_64& rng, int n) {
    std::vector<Value> out;
    for (int i = 0; i < n; ++i) {
        std::uint64_t pick = rng() % 8;
        switch (sr.id()) {
            case SemiringId::boolean: out.push_back(Value::boolean(pick & 1)); break;
            case SemiringId::natural:
                out.push_back(pick == 7 ? Value::natural_infinity() : Value::natural(pick));
                break;
            case SemiringId::real:
                out.push_back(pick == 7
                                  ? Value::real(std::numeric_limits<double>::infinity())
                                  : Value::real(static_cast<double>(pick) * 0.75));
                break;
            case SemiringId::tropical:
                out.push_back(pick == 7 ? Value::tropical_zero()
                                        : Value::tropical_weight(static_cast<std::int64_t>(pick) - 2));
                break;
            case SemiringId::viterbi:
                out.push_back(Value::viterbi(static_cast<double>(pick) / 7.0));
                break;
        }
    }
    return out;
}

const Semiring* kAll[] = {&Semiring::boolean(), &Semiring::natural(),
                          &Semiring::real(), &Semiring::tropical(),
                          &Semiring::viterbi()};

}  // namespace

TEST_CASE("descriptor lookup") {
    CHECK(Semiring::by_name("nat").id() == SemiringId::natural);
    CHECK(Semiring::by_name("bool").idempotent_add());
    CHECK(Semiring::by_name("tropical").exact());
    CHECK_FALSE(Semiring::by_name("real").exact());
    CHECK(Semiring::find("no-such") == nullptr);
    CHECK_THROWS_AS(Semiring::by_name("no-such"), DomainMismatchError);
}

TEST_CASE("add examples") {
    CHECK(value_eq(add(Value::natural(2), Value::natural(3)), Value::natural(5)));
    CHECK(value_eq(add(Value::natural_infinity(), Value::natural(1)),
                   Value::natural_infinity()));
    CHECK(value_eq(add(Value::tropical_weight(3), Value::tropical_weight(5)),
                   Value::tropical_weight(3)));
}

TEST_CASE("mul examples") {
    CHECK(value_eq(mul(Value::boolean(true), Value::boolean(false)),
                   Value::boolean(false)));
    CHECK(value_eq(mul(Value::tropical_weight(3), Value::tropical_weight(5)),
                   Value::tropical_weight(8)));
    CHECK(value_eq(mul(Value::real(0.0),
                       Value::real(std::numeric_limits<double>::infinity())),
                   Value::real(0.0)));
}

TEST_CASE("leq examples") {
    CHECK(leq(Value::natural(2), Value::natural(5)));
    CHECK(leq(Value::tropical_weight(5), Value::tropical_weight(3)));
    CHECK_FALSE(leq(Value::boolean(true), Value::boolean(false)));
}

TEST_CASE("monus examples") {
    CHECK(value_eq(monus(Value::natural(5), Value::natural(3)), Value::natural(2)));
    CHECK(value_eq(monus(Value::natural(3), Value::natural(5)), Value::natural(0)));
    Value t = Value::boolean(true);
    CHECK(value_eq(monus(t, t), boolean_monus_oracle(t, t)));
    CHECK(value_eq(monus(t, t), Value::boolean(false)));
    CHECK(value_eq(monus(Value::natural_infinity(), Value::natural_infinity()),
                   Value::natural(0)));
}

TEST_CASE("tropical monus is residuation") {
    // not(b <=num a) keeps a, otherwise the result is the semiring zero
    CHECK(value_eq(monus(Value::tropical_weight(2), Value::tropical_weight(5)),
                   Value::tropical_weight(2)));
    CHECK(value_eq(monus(Value::tropical_weight(5), Value::tropical_weight(2)),
                   Value::tropical_zero()));
}

TEST_CASE("scalar star examples") {
    CHECK(value_eq(star(Value::natural(0)), Value::natural(1)));
    CHECK(value_eq(star(Value::natural(2)), star_oracle(Value::natural(2), 64)));
    CHECK(value_eq(star(Value::natural(2)), Value::natural_infinity()));
    Value half = Value::real(0.5);
    // the iteration oracle stops once successive iterates agree within the
    // carrier tolerance, so it can sit up to one extra step below the limit
    CHECK(star(half).as_double() ==
          doctest::Approx(star_oracle(half, 1024).as_double()).epsilon(1e-8));
    CHECK(star(half).as_double() == doctest::Approx(2.0));
    CHECK(value_eq(star(Value::tropical_weight(1)), Value::tropical_weight(0)));
    CHECK(value_eq(star(Value::tropical_weight(-1)), Value::tropical_bottomless()));
}

TEST_CASE("star satisfies its fixpoint equation") {
    std::mt19937_64 rng(11);
    for (const Semiring* sr : kAll) {
        for (const Value& a : sample_values(*sr, rng, 40)) {
            Value s = star(a);
            CHECK(value_eq(s, add(sr->one(), mul(a, s))));
        }
    }
}

TEST_CASE("mixed semirings are rejected") {
    CHECK_THROWS_AS(add(Value::natural(1), Value::boolean(true)), DomainMismatchError);
    CHECK_THROWS_AS(mul(Value::real(1.0), Value::viterbi(1.0)), DomainMismatchError);
    CHECK_THROWS_AS(leq(Value::tropical_weight(0), Value::natural(0)),
                    DomainMismatchError);
}

TEST_CASE("monus adjunction, exhaustive on Boolean") {
    for (bool a : {false, true})
        for (bool b : {false, true})
            for (bool h : {false, true}) {
                Value av = Value::boolean(a), bv = Value::boolean(b),
                      hv = Value::boolean(h);
                CHECK(leq(monus(av, bv), hv) == leq(av, add(bv, hv)));
                CHECK(value_eq(monus(av, bv), boolean_monus_oracle(av, bv)));
            }
}

TEST_CASE("monus adjunction, randomized everywhere else") {
    std::mt19937_64 rng(23);
    for (const Semiring* sr : kAll) {
        auto vals = sample_values(*sr, rng, 120);
        for (std::size_t i = 0; i + 2 < vals.size(); i += 3) {
            const Value &a = vals[i], &b = vals[i + 1], &h = vals[i + 2];
            CHECK(leq(monus(a, b), h) == leq(a, add(b, h)));
        }
    }
}

TEST_CASE("monus laws on sampled triples") {
    std::mt19937_64 rng(37);
    for (const Semiring* sr : kAll) {
        auto vals = sample_values(*sr, rng, 300);
        for (std::size_t i = 0; i + 3 < vals.size(); i += 4) {
            const Value &a = vals[i], &b = vals[i + 1], &c = vals[i + 2],
                        &k = vals[i + 3];
            CHECK(value_eq(monus(a, add(b, c)), monus(monus(a, b), c)));
            CHECK(leq(monus(add(a, b), b), a));
            CHECK(leq(a, add(monus(a, b), b)));
            if (leq(b, a)) CHECK(value_eq(a, add(monus(a, b), b)));
            CHECK(leq(monus(a, b), add(monus(a, c), monus(c, b))));
            // multiplication by a fixed k is additive
            CHECK(leq(monus(mul(k, a), mul(k, b)), mul(k, monus(a, b))));
        }
    }
}

TEST_CASE("natural order sanity") {
    std::mt19937_64 rng(41);
    for (const Semiring* sr : kAll) {
        auto vals = sample_values(*sr, rng, 60);
        for (const Value& a : vals) {
            CHECK(leq(a, a));
            CHECK(leq(sr->zero(), a));
        }
        for (std::size_t i = 0; i + 2 < vals.size(); i += 3) {
            const Value &a = vals[i], &b = vals[i + 1], &c = vals[i + 2];
            if (leq(a, b) && leq(b, c)) CHECK(leq(a, c));
            // monotonicity of add and mul
            if (leq(a, b)) {
                CHECK(leq(add(a, c), add(b, c)));
                CHECK(leq(mul(a, c), mul(b, c)));
            }
        }
    }
}

TEST_CASE("nat arithmetic saturates instead of wrapping") {
    std::mt19937_64 rng(53);
    Value big = Value::natural(std::uint64_t(1) << 62);
    CHECK(value_eq(add(big, big), add(big, big)));
    for (int i = 0; i < 200; ++i) {
        std::uint64_t x = rng();
        Value a = Value::natural(x), b = Value::natural(rng());
        Value s = add(a, b), m = mul(a, b);
        // saturation means every result is >= each finite operand
        CHECK(leq(a, s));
        CHECK(leq(b, s));
        if (!b.is_zero()) CHECK(leq(a, m));
    }
    CHECK(value_eq(mul(big, big), Value::natural_infinity()));
    CHECK(value_eq(mul(Value::natural(0), Value::natural_infinity()),
                   Value::natural(0)));
}

TEST_CASE("value text round-trip") {
    std::mt19937_64 rng(67);
    for (const Semiring* sr : kAll)
        for (const Value& a : sample_values(*sr, rng, 50))
            CHECK(value_eq(sr->parse(a.str()), a));
    CHECK(value_eq(Semiring::natural().parse("inf"), Value::natural_infinity()));
    CHECK(value_eq(Semiring::tropical().parse("-3"), Value::tropical_weight(-3)));
}

TEST_CASE("from_natural is the n-fold sum of one") {
    for (const Semiring* sr : kAll)
        for (std::uint64_t n : {0ull, 1ull, 2ull, 5ull}) {
            Value acc = sr->zero();
            for (std::uint64_t i = 0; i < n; ++i) acc = add(acc, sr->one());
            CHECK(value_eq(sr->from_natural(n), acc));
        }
}
