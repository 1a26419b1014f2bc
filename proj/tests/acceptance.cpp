// Acceptance suite: one criterion per section, one PASS/FAIL line each, exit
// status is the number of failed criteria. Run from the repository root so
// the data/ corpus resolves.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixdiff/laws.hpp"
#include "fixdiff/newton.hpp"
#include "fixdiff/relmodel.hpp"
#include "fixdiff/textio.hpp"
#include "oracles.hpp"

using namespace fixdiff;

namespace {

int failures = 0;

double run_criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) line << " (" << detail << ")";
    line.precision(2);
    line << " [" << std::fixed << seconds << "s]";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
    return seconds;
}

bool reports_pass(const std::vector<LawReport>& reports, std::string& detail,
                  std::uint32_t expect_cases = 0) {
    for (const auto& rep : reports) {
        if (!rep.passed()) {
            detail = rep.str() + " | " +
                     (rep.failures.empty() ? "" : rep.failures.front());
            return false;
        }
        if (expect_cases && rep.cases_run < expect_cases &&
            rep.law_name != "tropical-star-vs-floyd-warshall") {
            detail = rep.law_name + " ran " + std::to_string(rep.cases_run) +
                     " cases, expected " + std::to_string(expect_cases);
            return false;
        }
    }
    return true;
}

LawConfig config(const Semiring& sr, std::uint32_t cases, std::uint32_t degree) {
    LawConfig cfg;
    cfg.seed = 2024;
    cfg.cases = cases;
    cfg.semiring = &sr;
    cfg.degree = degree;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

EquationSystem btree(std::uint32_t degree) {
    return parse_system(slurp("data/btree.eqn"), nullptr, degree);
}

// The systems every sandwich/agreement check runs on.
std::vector<std::pair<std::string, EquationSystem>> corpus() {
    std::vector<std::pair<std::string, EquationSystem>> out;
    out.emplace_back("btree.eqn", parse_system(slurp("data/btree.eqn")));
    out.emplace_back("geom.eqn", parse_system(slurp("data/geom.eqn")));
    out.emplace_back("pair.eqn", parse_system(slurp("data/pair.eqn")));
    out.emplace_back("catalan.cfg/nat",
                     parse_grammar(slurp("data/catalan.cfg"), Semiring::natural(), 8));
    out.emplace_back("dyck.cfg/bool",
                     parse_grammar(slurp("data/dyck.cfg"), Semiring::boolean(), 8));
    out.emplace_back(
        "weighted.cfg/tropical",
        parse_grammar(slurp("data/weighted.cfg"), Semiring::tropical(), 8));
    return out;
}

}  // namespace

int main() {
    double total = 0;

    total += run_criterion("cd-axioms: 200 cases per axiom, nat/bool exact, real within 1e-9, under 30s", [](std::string& detail) {
        double elapsed = 0;
        auto t0 = std::chrono::steady_clock::now();
        for (const Semiring* sr :
             {&Semiring::natural(), &Semiring::boolean(), &Semiring::real()}) {
            auto reports = check_cd_axioms(config(*sr, 200, 4));
            if (reports.size() != 7) {
                detail = "expected seven reports";
                return false;
            }
            if (!reports_pass(reports, detail, 200)) return false;
            for (const auto& rep : reports) {
                bool wants_tolerance = !sr->exact();
                if (rep.tolerance.has_value() != wants_tolerance) {
                    detail = rep.law_name + " tolerance flag wrong";
                    return false;
                }
            }
        }
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
        if (elapsed >= 30.0) {
            detail = "runtime " + std::to_string(elapsed) + "s over budget";
            return false;
        }
        return true;
    });

    total += run_criterion("fixpoint-rule equivalence: 100 guarded systems, three routes agree mod degree 6, under 60s", [](std::string& detail) {
        auto t0 = std::chrono::steady_clock::now();
        auto reports = check_fixpoint_rules(config(Semiring::natural(), 100, 6));
        if (!reports_pass(reports, detail, 100)) return false;
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (elapsed >= 60.0) {
            detail = "runtime " + std::to_string(elapsed) + "s over budget";
            return false;
        }
        return true;
    });

    total += run_criterion("conway: dinaturality and nested elimination on 100 systems each at degree 5", [](std::string& detail) {
        return reports_pass(check_conway(config(Semiring::natural(), 100, 5)),
                            detail, 100);
    });

    total += run_criterion("monus laws: exhaustive boolean, 1000 random triples on nat and tropical", [](std::string& detail) {
        auto bool_reports = check_monus_laws(config(Semiring::boolean(), 1, 3));
        if (!reports_pass(bool_reports, detail, 8)) return false;
        for (const auto& rep : bool_reports)
            if (rep.cases_run != 8) {
                detail = "boolean check was not exhaustive";
                return false;
            }
        return reports_pass(check_monus_laws(config(Semiring::natural(), 1000, 3)),
                            detail, 1000) &&
               reports_pass(check_monus_laws(config(Semiring::tropical(), 1000, 3)),
                            detail, 1000);
    });

    total += run_criterion("repetition axioms and induction on 100 matrices up to 4x4; tropical star vs floyd-warshall on 50 8x8 instances", [](std::string& detail) {
        auto bool_reports = check_repetition(config(Semiring::boolean(), 100, 3));
        if (!reports_pass(bool_reports, detail, 100)) return false;
        auto trop_reports = check_repetition(config(Semiring::tropical(), 100, 3));
        if (!reports_pass(trop_reports, detail, 100)) return false;
        for (const auto& rep : trop_reports)
            if (rep.law_name == "tropical-star-vs-floyd-warshall" &&
                rep.cases_run != 50) {
                detail = "floyd-warshall cross-check ran " +
                         std::to_string(rep.cases_run) + " cases";
                return false;
            }
        return true;
    });

    total += run_criterion("binary-tree system: both solvers give the odd-index catalan coefficients, verified by shape enumeration, under 1s", [](std::string& detail) {
        auto t0 = std::chrono::steady_clock::now();
        EquationSystem sys = btree(9);
        SeriesTuple kl = kleene_fixpoint(sys).solution;
        NewtonReport nw = newton_solve(sys);
        if (nw.solution != kl) {
            detail = "solvers disagree";
            return false;
        }
        const std::uint64_t frozen[5] = {1, 1, 2, 5, 14};
        for (unsigned leaves = 1; leaves <= 5; ++leaves) {
            std::uint64_t enumerated = oracles::tree_shapes(leaves).size();
            std::uint32_t degree = 2 * leaves - 1;
            Value got = kl[0].coefficient({degree});
            if (enumerated != frozen[leaves - 1] ||
                !value_eq(got, Value::natural(enumerated))) {
                detail = "mismatch at " + std::to_string(leaves) + " leaves";
                return false;
            }
        }
        for (std::uint32_t even : {0u, 2u, 4u, 6u, 8u})
            if (!kl[0].coefficient({even}).is_zero()) {
                detail = "unexpected even-degree coefficient";
                return false;
            }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (elapsed >= 1.0) {
            detail = "runtime " + std::to_string(elapsed) + "s over budget";
            return false;
        }
        return true;
    });

    total += run_criterion("newton sandwich and agreement on every corpus system", [](std::string& detail) {
        for (const auto& [name, sys] : corpus()) {
            NewtonReport nw = newton_solve(sys);
            SolveReport kl = kleene_fixpoint(sys);
            if (nw.solution != kl.solution) {
                detail = name + ": solutions differ";
                return false;
            }
            auto kleene = kleene_chain(sys, nw.steps());
            for (std::size_t n = 0; n < nw.approximants.size(); ++n) {
                if (!tuple_leq(kleene[n], nw.approximants[n]) ||
                    !tuple_leq(nw.approximants[n], kl.solution)) {
                    detail = name + ": sandwich broken at step " + std::to_string(n);
                    return false;
                }
                SeriesTuple fz = sys.apply(nw.approximants[n]);
                if (!tuple_leq(nw.approximants[n], fz)) {
                    detail = name + ": chain not monotone at step " + std::to_string(n);
                    return false;
                }
                if (n + 1 < nw.approximants.size() &&
                    !tuple_leq(fz, nw.approximants[n + 1])) {
                    detail = name + ": applied map escapes the next approximant";
                    return false;
                }
            }
        }
        return true;
    });

    total += run_criterion("quadratic rate at degree 63: exponents double each step, newton within 8 steps, kleene needs at least 32, under 10s", [](std::string& detail) {
        auto t0 = std::chrono::steady_clock::now();
        // constant-free nilpotent corpus systems
        for (const char* path : {"data/btree.eqn", "data/pair.eqn"}) {
            EquationSystem sys = parse_system(slurp(path), nullptr, 63);
            NewtonReport nw = newton_solve(sys);
            if (!nw.rate_applicable) {
                detail = std::string(path) + ": rate hypotheses not established";
                return false;
            }
            for (std::size_t i = 0; i < nw.rate_check.size(); ++i)
                if (!nw.rate_check[i]) {
                    detail = std::string(path) + ": doubling fails at step " +
                             std::to_string(i);
                    return false;
                }
            if (nw.steps() > 8) {
                detail = std::string(path) + ": newton used " +
                         std::to_string(nw.steps()) + " steps";
                return false;
            }
            if (nw.kleene_baseline_iterations < 32) {
                detail = std::string(path) + ": kleene finished in " +
                         std::to_string(nw.kleene_baseline_iterations);
                return false;
            }
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (elapsed >= 10.0) {
            detail = "runtime " + std::to_string(elapsed) + "s over budget";
            return false;
        }
        return true;
    });

    total += run_criterion("linearity lemmas: 100 linear systems stay linear, 100 linear-in-unknowns systems vanish", [](std::string& detail) {
        return reports_pass(
            check_linearity_lemmas(config(Semiring::natural(), 100, 5)), detail,
            100);
    });

    total += run_criterion("relational cross-check: isomorphism commutes with composition, derivative and fixpoint; comonad laws exhaustive on tiny instances, under 60s", [](std::string& detail) {
        auto t0 = std::chrono::steady_clock::now();
        for (const Semiring* sr : {&Semiring::natural(), &Semiring::boolean()})
            if (!reports_pass(check_relmodel(config(*sr, 50, 4)), detail, 50))
                return false;

        // exhaustive comonad laws on the tiniest shapes
        auto boolean_relations = [](std::uint32_t source, std::uint32_t target,
                                    std::uint32_t cap, std::uint32_t key_bound,
                                    std::uint32_t min_key) {
            std::vector<std::pair<Multiset, std::uint32_t>> keys;
            Multiset m(source, 0);
            std::function<void(std::size_t)> walk = [&](std::size_t i) {
                if (i == source) {
                    auto t = multiset_total(m);
                    if (t <= key_bound && t >= min_key)
                        for (std::uint32_t tt = 0; tt < target; ++tt)
                            keys.push_back({m, tt});
                    return;
                }
                for (std::uint32_t c = 0; c <= key_bound; ++c) {
                    m[i] = c;
                    if (multiset_total(m) <= key_bound) walk(i + 1);
                }
                m[i] = 0;
            };
            walk(0);
            std::vector<WeightedRelation> out;
            for (std::uint64_t mask = 0; mask < (1ull << keys.size()); ++mask) {
                WeightedRelation r(Semiring::boolean(), source, target, cap);
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (mask & (1ull << i))
                        r.accumulate(keys[i].first, keys[i].second,
                                     Value::boolean(true));
                out.push_back(std::move(r));
            }
            return out;
        };
        for (auto [source, cap] :
             {std::pair<std::uint32_t, std::uint32_t>{1, 3}, {2, 2}}) {
            WeightedRelation dl =
                WeightedRelation::dereliction(Semiring::boolean(), source, cap);
            for (const auto& r : boolean_relations(source, source, cap, cap, 0))
                if (cokleisli_compose(dl, r) != r || cokleisli_compose(r, dl) != r) {
                    detail = "unit law failed";
                    return false;
                }
        }
        auto assoc_pool = boolean_relations(1, 1, 2, 2, 1);
        for (const auto& a : assoc_pool)
            for (const auto& b : assoc_pool)
                for (const auto& c : assoc_pool)
                    if (cokleisli_compose(cokleisli_compose(a, b), c) !=
                        cokleisli_compose(a, cokleisli_compose(b, c))) {
                        detail = "associativity failed";
                        return false;
                    }
        auto assoc_big = boolean_relations(1, 1, 8, 2, 0);
        for (const auto& a : assoc_big)
            for (const auto& b : assoc_big)
                for (const auto& c : assoc_big)
                    if (cokleisli_compose(cokleisli_compose(a, b), c) !=
                        cokleisli_compose(a, cokleisli_compose(b, c))) {
                        detail = "associativity failed below the cap";
                        return false;
                    }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (elapsed >= 60.0) {
            detail = "runtime " + std::to_string(elapsed) + "s over budget";
            return false;
        }
        return true;
    });

    total += run_criterion("grammar corpus: ambiguity counts match tree enumeration up to length 8; tropical shortest words match breadth-first search", [](std::string& detail) {
        // ambiguity counts over nat
        std::string catalan = slurp("data/catalan.cfg");
        GrammarFile gf = parse_grammar_file(catalan);
        oracles::TreeCounter counter(gf);
        EquationSystem sys = parse_grammar(catalan, Semiring::natural(), 8);
        SeriesTuple sol = kleene_fixpoint(sys).solution;
        for (std::uint32_t n = 1; n <= 8; ++n) {
            if (!value_eq(sol[0].coefficient({n}),
                          Value::natural(counter.trees("S", n)))) {
                detail = "count mismatch at length " + std::to_string(n);
                return false;
            }
        }
        // shortest words over tropical
        for (const char* path :
             {"data/catalan.cfg", "data/dyck.cfg", "data/weighted.cfg"}) {
            std::string text = slurp(path);
            GrammarFile g = parse_grammar_file(text);
            EquationSystem ts = parse_grammar(text, Semiring::tropical(), 8);
            SeriesTuple tsol = kleene_fixpoint(ts).solution;
            std::uint32_t via_series = 9;
            for (std::uint32_t n = 0; n <= 8; ++n)
                if (!tsol[0].coefficient({n}).is_zero()) {
                    via_series = n;
                    break;
                }
            if (via_series != oracles::bfs_shortest_word(g, 8)) {
                detail = std::string(path) + ": shortest word disagrees";
                return false;
            }
        }
        return true;
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED: ")
              << (failures == 0 ? "" : std::to_string(failures)) << " [total "
              << std::fixed << total << "s]" << std::endl;
    return failures;
}
