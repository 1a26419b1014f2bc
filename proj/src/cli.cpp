#include "fixdiff/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fixdiff/laws.hpp"
#include "fixdiff/newton.hpp"
#include "fixdiff/textio.hpp"

namespace fixdiff::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

struct SolveOptions {
    std::string input;
    std::string method = "kleene";
    std::string semiring;
    std::uint32_t degree = 0;
    bool has_degree = false;
    std::string trace_path;
};

int run_solve_on(const EquationSystem& sys, const SolveOptions& opt,
                 std::ostream& out, std::ostream& err) {
    out << "# semiring=" << sys.semiring().name() << " degree=" << sys.degree()
        << " method=" << opt.method << " guarded=" << (sys.guarded() ? 1 : 0)
        << "\n";
    try {
        if (opt.method == "newton") {
            NewtonReport rep = newton_solve(sys);
            out << "# newton_steps=" << rep.steps()
                << " kleene_baseline_iterations=" << rep.kleene_baseline_iterations
                << " rate=" << (rep.rate_applicable ? "checked" : "na") << "\n";
            out << solution_table(sys.unknowns(), rep.solution);
            if (!opt.trace_path.empty()) write_file(opt.trace_path, rep.trace_csv());
        } else {
            SolveReport rep = kleene_fixpoint(sys);
            out << "# iterations=" << rep.iterations << " stabilized=1\n";
            out << solution_table(sys.unknowns(), rep.solution);
            if (!opt.trace_path.empty()) write_file(opt.trace_path, rep.trace_csv());
        }
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << "\n";
        out << "# diverged after " << e.iterations << " iterations; last iterate:\n";
        out << solution_table(sys.unknowns(), e.last_iterate);
        return kExitDivergence;
    }
    return kExitOk;
}

int run_laws(const std::string& suite, std::uint64_t seed, std::uint32_t cases,
             const Semiring& sr, std::uint32_t degree, std::ostream& out) {
    LawConfig cfg;
    cfg.seed = seed;
    cfg.cases = cases;
    cfg.semiring = &sr;
    cfg.degree = degree;

    std::vector<LawReport> reports;
    auto append = [&](std::vector<LawReport> more) {
        for (auto& r : more) reports.push_back(std::move(r));
    };
    if (suite == "cd" || suite == "all") append(check_cd_axioms(cfg));
    if (suite == "fixrules" || suite == "all") append(check_fixpoint_rules(cfg));
    if (suite == "conway" || suite == "all") append(check_conway(cfg));
    if (suite == "linearity" || suite == "all") {
        append(check_linearity_lemmas(cfg));
        append(check_repetition(cfg));
    }
    if (suite == "monus" || suite == "all") append(check_monus_laws(cfg));
    if (suite == "relmodel" || suite == "all") append(check_relmodel(cfg));

    bool all_pass = true;
    for (const auto& rep : reports) {
        out << rep.str() << "\n";
        for (const auto& f : rep.failures) out << "  " << f << "\n";
        if (!rep.passed()) all_pass = false;
    }
    if ((suite == "monus" || suite == "all") && sr.idempotent_add())
        out << "note: truncated subtraction on an idempotent carrier is "
               "residuation; tropical a-b keeps a when b is strictly cheaper, "
               "and returns the zero (+inf) otherwise\n";
    return all_pass ? kExitOk : kExitLawFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"semiring fixpoint solver with differentiation"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "solve an equation file");
    solve->add_option("input", solve_opt.input, "equation file")->required();
    solve->add_option("--method", solve_opt.method, "kleene | newton")
        ->check(CLI::IsMember({"kleene", "newton"}));
    solve->add_option("--semiring", solve_opt.semiring, "override the file's semiring");
    solve->add_option("--degree", solve_opt.degree, "override the truncation degree");
    solve->add_option("--trace", solve_opt.trace_path, "write a CSV convergence trace");

    SolveOptions grammar_opt;
    grammar_opt.degree = 8;
    std::string grammar_semiring = "nat";
    CLI::App* grammar =
        app.add_subcommand("grammar", "translate a grammar file and solve it");
    grammar->add_option("input", grammar_opt.input, "grammar file")->required();
    grammar->add_option("--method", grammar_opt.method, "kleene | newton")
        ->check(CLI::IsMember({"kleene", "newton"}));
    grammar->add_option("--semiring", grammar_semiring, "carrier (default nat)");
    grammar->add_option("--degree", grammar_opt.degree,
                        "truncation degree (default 8)");
    grammar->add_option("--trace", grammar_opt.trace_path,
                        "write a CSV convergence trace");

    std::string suite;
    std::uint64_t seed = 1;
    std::uint32_t cases = 100;
    std::string laws_semiring = "nat";
    std::uint32_t laws_degree = 4;
    CLI::App* laws = app.add_subcommand("laws", "run a law suite");
    laws->add_option("--suite", suite, "cd|fixrules|conway|linearity|monus|relmodel|all")
        ->required()
        ->check(CLI::IsMember(
            {"cd", "fixrules", "conway", "linearity", "monus", "relmodel", "all"}));
    laws->add_option("--seed", seed, "generator seed (default 1)");
    laws->add_option("--cases", cases, "cases per law (default 100)");
    laws->add_option("--semiring", laws_semiring, "carrier (default nat)");
    laws->add_option("--degree", laws_degree, "truncation degree (default 4)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help lands here
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            const Semiring* override_sr =
                solve_opt.semiring.empty() ? nullptr
                                           : &Semiring::by_name(solve_opt.semiring);
            std::optional<std::uint32_t> override_deg;
            if (solve->count("--degree")) override_deg = solve_opt.degree;
            EquationSystem sys =
                parse_system(read_file(solve_opt.input), override_sr, override_deg);
            return run_solve_on(sys, solve_opt, out, err);
        }
        if (grammar->parsed()) {
            const Semiring& sr = Semiring::by_name(grammar_semiring);
            EquationSystem sys =
                parse_grammar(read_file(grammar_opt.input), sr, grammar_opt.degree);
            return run_solve_on(sys, grammar_opt, out, err);
        }
        if (laws->parsed()) {
            if (cases < 1) {
                err << "usage error: --cases must be at least 1\n";
                return kExitUsage;
            }
            return run_laws(suite, seed, cases, Semiring::by_name(laws_semiring),
                            laws_degree, out);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainMismatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fixdiff::cli
