#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "fixdiff/laws.hpp"
#include "fixdiff/newton.hpp"
#include "fixdiff/textio.hpp"

namespace py = pybind11;
using namespace fixdiff;

namespace {

py::dict solution_dict(const EquationSystem& sys, const SeriesTuple& solution) {
    py::dict table;
    for (std::size_t i = 0; i < sys.unknowns().size(); ++i) {
        py::dict terms;
        for (const auto& [e, c] : solution[i].terms()) {
            std::ostringstream mono;
            if (total_degree(e) == 0) {
                mono << "1";
            } else {
                bool first = true;
                for (std::size_t v = 0; v < e.size(); ++v) {
                    if (e[v] == 0) continue;
                    if (!first) mono << "*";
                    mono << solution[i].variables()[v];
                    if (e[v] > 1) mono << "^" << e[v];
                    first = false;
                }
            }
            terms[py::str(mono.str())] = c.str();
        }
        table[py::str(sys.unknowns()[i])] = terms;
    }
    return table;
}

py::dict solve_system(const EquationSystem& sys, const std::string& method) {
    py::dict out;
    out["semiring"] = std::string(sys.semiring().name());
    out["degree"] = sys.degree();
    out["guarded"] = sys.guarded();
    out["method"] = method;
    if (method == "newton") {
        NewtonReport rep = newton_solve(sys);
        out["solution"] = solution_dict(sys, rep.solution);
        out["steps"] = rep.steps();
        out["kleene_baseline_iterations"] = rep.kleene_baseline_iterations;
        out["rate_applicable"] = rep.rate_applicable;
        out["trace_csv"] = rep.trace_csv();
    } else if (method == "kleene") {
        SolveReport rep = kleene_fixpoint(sys);
        out["solution"] = solution_dict(sys, rep.solution);
        out["iterations"] = rep.iterations;
        out["trace_csv"] = rep.trace_csv();
    } else {
        throw std::invalid_argument("method must be 'kleene' or 'newton'");
    }
    return out;
}

py::list law_reports(const std::vector<LawReport>& reports) {
    py::list out;
    for (const auto& rep : reports) {
        py::dict d;
        d["name"] = rep.law_name;
        d["cases"] = rep.cases_run;
        d["skipped"] = rep.skipped;
        d["failures"] = rep.failures;
        d["passed"] = rep.passed();
        d["tolerance"] = rep.tolerance ? py::cast(*rep.tolerance)
                                       : py::cast("exact");
        d["line"] = rep.str();
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_fixdiff, m) {
    m.doc() = "Exact semiring fixpoint solver with differentiation";

    m.def(
        "solve",
        [](const std::string& text, const std::string& method,
           std::optional<std::string> semiring, std::optional<std::uint32_t> degree) {
            const Semiring* sr =
                semiring ? &Semiring::by_name(*semiring) : nullptr;
            EquationSystem sys = parse_system(text, sr, degree);
            return solve_system(sys, method);
        },
        py::arg("text"), py::arg("method") = "kleene",
        py::arg("semiring") = py::none(), py::arg("degree") = py::none(),
        "Solve an equation file given as text; returns the coefficient table "
        "plus solver statistics.");

    m.def(
        "solve_grammar",
        [](const std::string& text, const std::string& semiring,
           std::uint32_t degree, const std::string& method) {
            EquationSystem sys =
                parse_grammar(text, Semiring::by_name(semiring), degree);
            return solve_system(sys, method);
        },
        py::arg("text"), py::arg("semiring") = "nat", py::arg("degree") = 8,
        py::arg("method") = "kleene",
        "Translate a grammar file given as text into its generating system "
        "and solve it.");

    m.def(
        "laws",
        [](const std::string& suite, std::uint64_t seed, std::uint32_t cases,
           const std::string& semiring, std::uint32_t degree) {
            LawConfig cfg;
            cfg.seed = seed;
            cfg.cases = cases;
            cfg.semiring = &Semiring::by_name(semiring);
            cfg.degree = degree;
            std::vector<LawReport> reports;
            auto append = [&](std::vector<LawReport> more) {
                for (auto& r : more) reports.push_back(std::move(r));
            };
            if (suite == "cd" || suite == "all") append(check_cd_axioms(cfg));
            if (suite == "fixrules" || suite == "all")
                append(check_fixpoint_rules(cfg));
            if (suite == "conway" || suite == "all") append(check_conway(cfg));
            if (suite == "linearity" || suite == "all") {
                append(check_linearity_lemmas(cfg));
                append(check_repetition(cfg));
            }
            if (suite == "monus" || suite == "all") append(check_monus_laws(cfg));
            if (suite == "relmodel" || suite == "all") append(check_relmodel(cfg));
            if (reports.empty())
                throw std::invalid_argument("unknown law suite '" + suite + "'");
            return law_reports(reports);
        },
        py::arg("suite") = "all", py::arg("seed") = 1, py::arg("cases") = 100,
        py::arg("semiring") = "nat", py::arg("degree") = 4,
        "Run a law suite and return one report per law.");

    m.def(
        "derivative",
        [](const std::string& poly, const std::vector<std::string>& variables,
           const std::string& semiring, std::uint32_t degree) {
            const Semiring& sr = Semiring::by_name(semiring);
            return to_string(derivative(parse_series(poly, sr, variables, degree)));
        },
        py::arg("poly"), py::arg("variables"), py::arg("semiring") = "nat",
        py::arg("degree") = 8,
        "Total derivative of a polynomial text over the doubled context.");

    m.def(
        "star",
        [](const std::string& poly, const std::vector<std::string>& variables,
           const std::string& semiring, std::uint32_t degree) {
            const Semiring& sr = Semiring::by_name(semiring);
            return to_string(series_star(parse_series(poly, sr, variables, degree)));
        },
        py::arg("poly"), py::arg("variables"), py::arg("semiring") = "nat",
        py::arg("degree") = 8,
        "Least solution of s = 1 + p*s, truncated at the degree.");
}
