#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixdiff/newton.hpp"

using namespace fixdiff;

namespace {

const Semiring& nat = Semiring::natural();

Series nat_series(std::vector<std::string> vars, std::uint32_t d,
                  std::vector<std::pair<Exponents, std::uint64_t>> terms) {
    Series p(nat, vars, d);
    for (auto& [e, c] : terms) p.accumulate(e, Value::natural(c));
    return p;
}

EquationSystem btree_system(std::uint32_t d) {
    Series rhs = nat_series({"z", "B"}, d, {{{1, 0}, 1}, {{1, 2}, 1}});
    return EquationSystem({"z"}, {"B"}, SeriesTuple({rhs}));
}

EquationSystem random_guarded(std::mt19937_64& rng, const Semiring& sr,
                              std::vector<std::string> params,
                              std::vector<std::string> unknowns, std::uint32_t d) {
    std::vector<std::string> ctx = params;
    ctx.insert(ctx.end(), unknowns.begin(), unknowns.end());
    std::vector<Series> rhs;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        Series p(sr, ctx, d);
        int nterms = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < nterms; ++t) {
            Exponents e(ctx.size(), 0);
            for (auto& k : e) k = static_cast<std::uint32_t>(rng() % 2);
            bool has_unknown = false;
            for (std::size_t i = params.size(); i < ctx.size(); ++i)
                if (e[i] > 0) has_unknown = true;
            if (has_unknown || total_degree(e) == 0) e[0] += 1;
            p.accumulate(e, sr.from_natural(rng() % 3));
        }
        rhs.push_back(std::move(p));
    }
    return EquationSystem(std::move(params), std::move(unknowns),
                          SeriesTuple(std::move(rhs)));
}

}  // namespace

TEST_CASE("jacobian examples") {
    EquationSystem sys = btree_system(9);
    SeriesTuple at0 = SeriesTuple::zero(nat, {"z"}, 9, 1);
    SemiringMatrix j0 = jacobian(sys, at0);
    CHECK(j0.dim() == 1);
    CHECK(j0.at(0, 0).is_zero());

    SeriesTuple atz(std::vector<Series>{nat_series({"z"}, 9, {{{1}, 1}})});
    SemiringMatrix jz = jacobian(sys, atz);
    CHECK(jz.at(0, 0) == nat_series({"z"}, 9, {{{2}, 2}}));

    // linear system: X0 = 2*z*X1 + z, X1 = 3*z*X0; the jacobian is the
    // coefficient matrix whatever the point
    std::vector<std::string> ctx = {"z", "X0", "X1"};
    Series r0 = nat_series(ctx, 5, {{{1, 0, 1}, 2}, {{1, 0, 0}, 1}});
    Series r1 = nat_series(ctx, 5, {{{1, 1, 0}, 3}});
    EquationSystem lin({"z"}, {"X0", "X1"}, SeriesTuple({r0, r1}));
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        Series s0(nat, {"z"}, 5), s1(nat, {"z"}, 5);
        s0.accumulate({1 + static_cast<std::uint32_t>(rng() % 3)},
                      Value::natural(rng() % 4));
        s1.accumulate({1 + static_cast<std::uint32_t>(rng() % 3)},
                      Value::natural(rng() % 4));
        SemiringMatrix j = jacobian(lin, SeriesTuple({s0, s1}));
        CHECK(j.at(0, 0).is_zero());
        CHECK(j.at(0, 1) == nat_series({"z"}, 5, {{{1}, 2}}));
        CHECK(j.at(1, 0) == nat_series({"z"}, 5, {{{1}, 3}}));
        CHECK(j.at(1, 1).is_zero());
    }
}

TEST_CASE("newton step examples") {
    EquationSystem sys = btree_system(9);
    SeriesTuple z0 = SeriesTuple::zero(nat, {"z"}, 9, 1);
    // jacobian at 0 is 0, its star is I, and f(0) - 0 = z
    SeriesTuple z1 = newton_step(sys, z0);
    CHECK(z1[0] == nat_series({"z"}, 9, {{{1}, 1}}));

    // one step solves a linear system outright
    Series rhs = nat_series({"z", "X"}, 6, {{{0, 0}, 1}, {{1, 1}, 1}});  // X = z X + 1
    EquationSystem lin({"z"}, {"X"}, SeriesTuple({rhs}));
    SeriesTuple shot = newton_step(lin, SeriesTuple::zero(nat, {"z"}, 6, 1));
    CHECK(shot == kleene_fixpoint(lin).solution);

    // a fixpoint is a fixed point of the step
    SolveReport base = kleene_fixpoint(sys);
    CHECK(newton_step(sys, base.solution) == base.solution);
}

TEST_CASE("nilpotence certificates") {
    EquationSystem sys = btree_system(7);
    SeriesTuple y = kleene_fixpoint(sys).solution;
    NilpotenceCertificate cert = check_nilpotent(sys, y);
    REQUIRE(cert.nilpotent());
    CHECK(*cert.order <= 8);

    // X = 2*X has the constant jacobian [2], never nilpotent
    Series rhs(nat, {"z", "X"}, 4);
    rhs.accumulate({0, 1}, Value::natural(2));
    EquationSystem dbl({"z"}, {"X"}, SeriesTuple({rhs}));
    CHECK_FALSE(check_nilpotent(dbl, SeriesTuple::zero(nat, {"z"}, 4, 1)).nilpotent());

    // zero constant term in the jacobian entry forces nilpotence mod degree
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        EquationSystem g = random_guarded(rng, nat, {"z"}, {"x"}, 5);
        SeriesTuple at = SeriesTuple::zero(nat, {"z"}, 5, 1);
        SemiringMatrix j = jacobian(g, at);
        if (j.at(0, 0).constant_term().is_zero())
            CHECK(check_nilpotent(g, at).nilpotent());
    }
}

TEST_CASE("newton matches kleene on the binary tree system and is faster") {
    EquationSystem sys = btree_system(31);
    SolveReport kl = kleene_fixpoint(sys);
    NewtonReport nw = newton_solve(sys);
    CHECK(nw.solution == kl.solution);
    CHECK(nw.steps() <= 6);
    CHECK(kl.iterations >= 16);
    CHECK(nw.kleene_baseline_iterations == kl.iterations);
}

TEST_CASE("newton solves linear systems in one step") {
    Series rhs = nat_series({"z", "S"}, 8, {{{0, 0}, 1}, {{2, 1}, 1}});  // S = 1 + z^2 S
    EquationSystem lin({"z"}, {"S"}, SeriesTuple({rhs}));
    NewtonReport nw = newton_solve(lin);
    CHECK(nw.steps() == 1);
    CHECK(nw.solution == kleene_fixpoint(lin).solution);
}

TEST_CASE("identity system") {
    Series rhs(nat, {"z", "X"}, 4);
    rhs.accumulate({0, 1}, nat.one());
    EquationSystem sys({"z"}, {"X"}, SeriesTuple({rhs}));
    NewtonReport nw = newton_solve(sys);
    CHECK(nw.solution[0].is_zero());
    CHECK(nw.steps() <= 1);
}

TEST_CASE("sandwich: kleene chain below newton chain below the solution") {
    std::mt19937_64 rng(7);
    for (const Semiring* sr : {&nat, &Semiring::boolean(), &Semiring::tropical()}) {
        for (int rep = 0; rep < 12; ++rep) {
            EquationSystem sys = random_guarded(rng, *sr, {"z"}, {"x", "y"}, 5);
            NewtonReport nw = newton_solve(sys);
            SolveReport kl = kleene_fixpoint(sys);
            CHECK(nw.solution == kl.solution);
            auto kleene = kleene_chain(sys, nw.steps());
            for (std::size_t n = 0; n < nw.approximants.size(); ++n) {
                CHECK(tuple_leq(kleene[n], nw.approximants[n]));
                CHECK(tuple_leq(nw.approximants[n], kl.solution));
                // monotone chain: z_n <= f(z_n) <= z_{n+1}
                SeriesTuple fz = sys.apply(nw.approximants[n]);
                CHECK(tuple_leq(nw.approximants[n], fz));
                if (n + 1 < nw.approximants.size())
                    CHECK(tuple_leq(fz, nw.approximants[n + 1]));
            }
        }
    }
}

TEST_CASE("nilpotent repetition inequality") {
    // for nilpotent additive h and any k: k <= h* (k - h k)
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 1 + rng() % 3;
        SemiringMatrix h = SemiringMatrix::zero(nat, {"z"}, 4, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Series e(nat, {"z"}, 4);
                if (rng() % 2)
                    e.accumulate({1 + static_cast<std::uint32_t>(rng() % 2)},
                                 Value::natural(rng() % 3));
                h.at(i, j) = e;  // zero constant terms: nilpotent mod degree
            }
        std::vector<Series> kvec;
        for (std::size_t i = 0; i < n; ++i) {
            Series s(nat, {"z"}, 4);
            for (int t = 0; t < 3; ++t)
                s.accumulate({static_cast<std::uint32_t>(rng() % 5)},
                             Value::natural(rng() % 3));
            kvec.push_back(std::move(s));
        }
        SeriesTuple k(kvec);
        SeriesTuple residue = tuple_monus(k, mat_apply(h, k));
        SeriesTuple bound = mat_apply(matrix_star(h), residue);
        CHECK(tuple_leq(k, bound));
    }
}

TEST_CASE("quadratic rate on the binary tree system at degree 63") {
    EquationSystem sys = btree_system(63);
    NewtonReport nw = newton_solve(sys);
    REQUIRE(nw.rate_applicable);
    for (bool ok : nw.rate_check) CHECK(ok);
    CHECK(nw.steps() <= 8);
    CHECK(nw.kleene_baseline_iterations >= 32);

    std::string csv = nw.trace_csv();
    CHECK(csv.rfind("step,distance_exponent,rate_ok\n", 0) == 0);
    CHECK(csv.find(",1\n") != std::string::npos);
}

TEST_CASE("rate is reported as not applicable when hypotheses fail") {
    // S = 1 + z^2 S has a visible constant term in the map
    Series rhs = nat_series({"z", "S"}, 8, {{{0, 0}, 1}, {{2, 1}, 1}});
    EquationSystem lin({"z"}, {"S"}, SeriesTuple({rhs}));
    NewtonReport nw = newton_solve(lin);
    CHECK_FALSE(nw.rate_applicable);
    CHECK(nw.rate_check.empty());
    CHECK(nw.trace_csv().find(",na\n") != std::string::npos);
}
