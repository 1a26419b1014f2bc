#include "fixdiff/newton.hpp"

#include <sstream>

namespace fixdiff {

SemiringMatrix jacobian(const EquationSystem& sys, const SeriesTuple& at) {
    if (at.size() != sys.unknowns().size())
        throw DomainMismatchError("jacobian: one series per unknown expected");
    for (const auto& comp : at.components)
        if (comp.variables() != sys.params())
            throw DomainMismatchError("jacobian: point must live over the parameters");
    const std::size_t n = sys.unknowns().size();
    const std::size_t np = sys.params().size();
    std::vector<Series> bind;
    bind.reserve(np + n);
    for (std::size_t i = 0; i < np; ++i)
        bind.push_back(Series::variable(sys.semiring(), sys.params(), sys.degree(), i));
    for (const auto& comp : at.components) bind.push_back(comp);

    SemiringMatrix j = SemiringMatrix::zero(sys.semiring(), sys.params(),
                                            sys.degree(), n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            j.at(r, c) = substitute(partial(sys.rhs()[r], np + c), bind);
    return j;
}

SeriesTuple newton_step(const EquationSystem& sys, const SeriesTuple& z) {
    SemiringMatrix star = matrix_star(jacobian(sys, z));
    SeriesTuple residual = tuple_monus(sys.apply(z), z);
    return z + mat_apply(star, residual);
}

NilpotenceCertificate check_nilpotent(const EquationSystem& sys,
                                      const SeriesTuple& at) {
    SemiringMatrix j = jacobian(sys, at);
    SemiringMatrix power = j;
    for (std::uint32_t p = 1; p <= sys.degree() + 1; ++p) {
        if (mat_is_zero(power)) return NilpotenceCertificate{p};
        power = power * j;
    }
    return NilpotenceCertificate{std::nullopt};
}

namespace {

bool constant_free(const EquationSystem& sys) {
    for (const auto& comp : sys.rhs().components)
        if (!comp.constant_term().is_zero()) return false;
    return true;
}

}  // namespace

std::string NewtonReport::trace_csv() const {
    std::ostringstream out;
    out << "step,distance_exponent,rate_ok\n";
    for (std::size_t i = 0; i < distances.size(); ++i) {
        out << i << "," << distances[i].str() << ",";
        if (rate_applicable && i >= 1 && i - 1 < rate_check.size())
            out << (rate_check[i - 1] ? "1" : "0");
        else
            out << "na";
        out << "\n";
    }
    return out.str();
}

NewtonReport newton_solve(const EquationSystem& sys) {
    // The plain Kleene solution is the reference everything is scored
    // against.
    SolveReport baseline = kleene_fixpoint(sys);

    NewtonReport report;
    report.kleene_baseline_iterations = baseline.iterations;

    SeriesTuple z = SeriesTuple::zero(sys.semiring(), sys.params(), sys.degree(),
                                      sys.unknowns().size());
    report.approximants.push_back(z);
    const std::uint32_t cap = sys.iteration_cap();
    bool stabilized = false;
    for (std::uint32_t k = 0; k < cap; ++k) {
        SeriesTuple next = newton_step(sys, z);
        if (next == z) {
            stabilized = true;
            break;
        }
        z = std::move(next);
        report.approximants.push_back(z);
    }
    if (!stabilized)
        throw DivergenceError("newton iteration exceeded its cap of " +
                                  std::to_string(cap) + " steps",
                              z, cap);
    report.solution = z;
    for (const auto& approx : report.approximants)
        report.distances.push_back(tuple_distance(approx, baseline.solution));

    // Quadratic-rate hypotheses: the variable-free constant term of the map
    // vanishes and the Jacobian is certified nilpotent along the chain and
    // at the solution.
    bool hypotheses = constant_free(sys);
    if (hypotheses) {
        for (const auto& approx : report.approximants)
            if (!check_nilpotent(sys, approx).nilpotent()) {
                hypotheses = false;
                break;
            }
        if (hypotheses && !check_nilpotent(sys, baseline.solution).nilpotent())
            hypotheses = false;
    }
    report.rate_applicable = hypotheses;
    if (hypotheses) {
        for (std::size_t i = 0; i + 1 < report.distances.size(); ++i) {
            const TaylorDistance& cur = report.distances[i];
            const TaylorDistance& nxt = report.distances[i + 1];
            bool ok;
            if (cur.identical())
                ok = nxt.identical();
            else if (nxt.identical())
                ok = true;
            else
                ok = *nxt.exponent >= 2 * *cur.exponent;
            report.rate_check.push_back(ok);
        }
    }
    return report;
}

}  // namespace fixdiff
