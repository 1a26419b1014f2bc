#include "fixdiff/laws.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "fixdiff/differential.hpp"
#include "fixdiff/fixpoint.hpp"
#include "fixdiff/newton.hpp"
#include "fixdiff/relmodel.hpp"

namespace fixdiff {

namespace {

// mt19937_64 with modulo draws: identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next(std::uint64_t bound) { return gen_() % bound; }

private:
    std::mt19937_64 gen_;
};

std::optional<double> tolerance_of(const Semiring& sr) {
    if (sr.exact()) return std::nullopt;
    return kRealTolerance;
}

LawReport make_report(std::string name, const Semiring& sr) {
    LawReport r;
    r.law_name = std::move(name);
    r.tolerance = tolerance_of(sr);
    return r;
}

void record_failure(LawReport& rep, std::uint32_t case_index,
                    const std::string& inputs, const std::string& lhs,
                    const std::string& rhs) {
    rep.failures.push_back("case " + std::to_string(case_index) + ": inputs [" +
                           inputs + "] lhs [" + lhs + "] rhs [" + rhs + "]");
}

Value rnd_value(Rng& rng, const Semiring& sr) {
    switch (sr.id()) {
        case SemiringId::boolean: return Value::boolean(rng.next(2));
        case SemiringId::natural: return Value::natural(rng.next(3));
        case SemiringId::real: return Value::real(static_cast<double>(rng.next(3)));
        case SemiringId::tropical: {
            std::uint64_t pick = rng.next(4);
            return pick == 0 ? Value::tropical_zero()
                             : Value::tropical_weight(static_cast<std::int64_t>(pick) - 1);
        }
        case SemiringId::viterbi:
            return Value::viterbi(static_cast<double>(rng.next(3)) / 2.0);
    }
    std::abort();
}

struct SeriesOpts {
    std::uint32_t max_terms = 6;
    std::uint32_t max_exp = 3;
    bool zero_constant = false;
};

Series rnd_series(Rng& rng, const Semiring& sr, const std::vector<std::string>& vars,
                  std::uint32_t degree, const SeriesOpts& opts = {}) {
    Series p(sr, vars, degree);
    std::uint32_t nterms = 1 + static_cast<std::uint32_t>(rng.next(opts.max_terms));
    for (std::uint32_t t = 0; t < nterms; ++t) {
        Exponents e(vars.size(), 0);
        for (auto& k : e)
            k = static_cast<std::uint32_t>(rng.next(opts.max_exp + 1));
        if (opts.zero_constant && total_degree(e) == 0)
            e[rng.next(e.size())] += 1;
        p.accumulate(e, rnd_value(rng, sr));
    }
    return p;
}

// Guarded, constant-free system: terms touching an unknown carry the first
// parameter, and no term is constant (constants would let truncation escape
// the degree-D quotient in composite identities).
EquationSystem rnd_guarded_system(Rng& rng, const Semiring& sr,
                                  std::vector<std::string> params,
                                  std::vector<std::string> unknowns,
                                  std::uint32_t degree) {
    std::vector<std::string> ctx = params;
    ctx.insert(ctx.end(), unknowns.begin(), unknowns.end());
    std::vector<Series> rhs;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        Series p(sr, ctx, degree);
        std::uint32_t nterms = 1 + static_cast<std::uint32_t>(rng.next(4));
        for (std::uint32_t t = 0; t < nterms; ++t) {
            Exponents e(ctx.size(), 0);
            for (auto& k : e) k = static_cast<std::uint32_t>(rng.next(2));
            bool has_unknown = false;
            for (std::size_t i = params.size(); i < ctx.size(); ++i)
                if (e[i] > 0) has_unknown = true;
            if (has_unknown || total_degree(e) == 0) e[0] += 1;
            p.accumulate(e, rnd_value(rng, sr));
        }
        rhs.push_back(std::move(p));
    }
    return EquationSystem(std::move(params), std::move(unknowns),
                          SeriesTuple(std::move(rhs)));
}

std::string tuple_str(const SeriesTuple& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out << "; ";
        out << to_string(t[i]);
    }
    return out.str();
}

}  // namespace

std::string LawReport::str() const {
    std::ostringstream out;
    out << law_name << ": cases=" << cases_run;
    if (skipped) out << " skipped=" << skipped;
    out << " failures=" << failures.size() << " tolerance=";
    if (tolerance)
        out << *tolerance;
    else
        out << "exact";
    out << (passed() ? " PASS" : " FAIL");
    return out.str();
}

std::vector<LawReport> check_cd_axioms(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t d = cfg.degree;
    Rng rng(cfg.seed);
    const std::vector<std::string> xs = {"x1", "x2"};
    const std::vector<std::string> cs = {"c1", "c2"};

    LawReport cd1 = make_report("cd1-derivative-additivity", sr);
    LawReport cd2 = make_report("cd2-direction-additivity", sr);
    LawReport cd3 = make_report("cd3-identity-projections", sr);
    LawReport cd4 = make_report("cd4-pairing", sr);
    LawReport cd5 = make_report("cd5-chain-rule", sr);
    LawReport cd6 = make_report("cd6-direction-linearity", sr);
    LawReport cd7 = make_report("cd7-partial-symmetry", sr);

    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        // CD.1
        {
            Series p = rnd_series(rng, sr, xs, d), q = rnd_series(rng, sr, xs, d);
            Series zero(sr, xs, d);
            ++cd1.cases_run;
            if (!(derivative(p + q) == derivative(p) + derivative(q)) ||
                !derivative(zero).is_zero())
                record_failure(cd1, n, to_string(p) + " | " + to_string(q),
                               to_string(derivative(p + q)),
                               to_string(derivative(p) + derivative(q)));
        }
        // CD.2
        {
            Series p = rnd_series(rng, sr, xs, d);
            Series dp = derivative(p);
            std::vector<Series> x = {rnd_series(rng, sr, cs, d),
                                     rnd_series(rng, sr, cs, d)};
            std::vector<Series> u = {rnd_series(rng, sr, cs, d),
                                     rnd_series(rng, sr, cs, d)};
            std::vector<Series> v = {rnd_series(rng, sr, cs, d),
                                     rnd_series(rng, sr, cs, d)};
            Series zero(sr, cs, d);
            Series at_zero = substitute(dp, {x[0], x[1], zero, zero});
            Series at_sum = substitute(dp, {x[0], x[1], u[0] + v[0], u[1] + v[1]});
            Series split = substitute(dp, {x[0], x[1], u[0], u[1]}) +
                           substitute(dp, {x[0], x[1], v[0], v[1]});
            ++cd2.cases_run;
            if (!at_zero.is_zero() || !(at_sum == split))
                record_failure(cd2, n, to_string(p), to_string(at_sum),
                               to_string(split));
        }
        // CD.3: derivatives of identity components are the direction slots
        {
            std::size_t arity = 1 + rng.next(4);
            std::vector<std::string> vars;
            for (std::size_t i = 0; i < arity; ++i)
                vars.push_back("x" + std::to_string(i + 1));
            std::size_t i = rng.next(arity);
            Series xi = Series::variable(sr, vars, d, i);
            Series dxi = derivative(xi);
            Series expect(sr, dxi.variables(), d);
            Exponents e(dxi.variables().size(), 0);
            e[arity + i] = 1;
            expect.accumulate(e, sr.one());
            ++cd3.cases_run;
            if (!(dxi == expect))
                record_failure(cd3, n, vars[i], to_string(dxi), to_string(expect));
        }
        // CD.4: the derivative of a pairing is the pairing of derivatives
        {
            SeriesTuple f(std::vector<Series>{rnd_series(rng, sr, xs, d),
                                              rnd_series(rng, sr, xs, d)});
            TangentSeries t = tangent(f);
            bool ok = true;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (t.fiber[i] != derivative(f[i])) ok = false;
            ++cd4.cases_run;
            if (!ok)
                record_failure(cd4, n, tuple_str(f), tuple_str(t.fiber), "-");
        }
        // CD.5 chain rule
        {
            Series g = rnd_series(rng, sr, {"y1", "y2"}, d);
            std::vector<Series> f = {rnd_series(rng, sr, xs, d),
                                     rnd_series(rng, sr, xs, d)};
            Series lhs = derivative(substitute(g, f));
            std::vector<std::string> dvars = lhs.variables();
            std::vector<Series> bind = {embed(f[0], dvars, d), embed(f[1], dvars, d),
                                        derivative(f[0]), derivative(f[1])};
            Series rhs = substitute(derivative(g), bind);
            ++cd5.cases_run;
            if (!(lhs == rhs))
                record_failure(cd5, n,
                               to_string(g) + " | " + to_string(f[0]) + " | " +
                                   to_string(f[1]),
                               to_string(lhs), to_string(rhs));
        }
        // CD.6
        {
            Series p = rnd_series(rng, sr, {"x1"}, d);
            Series dd = derivative(derivative(p));
            Series xv = rnd_series(rng, sr, cs, d);
            Series yv = rnd_series(rng, sr, cs, d);
            Series zv = rnd_series(rng, sr, cs, d);
            Series zero(sr, cs, d);
            Series lhs = substitute(dd, {xv, yv, zero, zv});
            Series rhs = substitute(derivative(p), {xv, zv});
            ++cd6.cases_run;
            if (!(lhs == rhs))
                record_failure(cd6, n, to_string(p), to_string(lhs), to_string(rhs));
        }
        // CD.7
        {
            Series p = rnd_series(rng, sr, {"x1"}, d);
            Series dd = derivative(derivative(p));
            Series xv = rnd_series(rng, sr, cs, d);
            Series yv = rnd_series(rng, sr, cs, d);
            Series zv = rnd_series(rng, sr, cs, d);
            Series zero(sr, cs, d);
            Series lhs = substitute(dd, {xv, yv, zv, zero});
            Series rhs = substitute(dd, {xv, zv, yv, zero});
            ++cd7.cases_run;
            if (!(lhs == rhs))
                record_failure(cd7, n, to_string(p), to_string(lhs), to_string(rhs));
        }
    }
    return {cd1, cd2, cd3, cd4, cd5, cd6, cd7};
}

std::vector<LawReport> check_fixpoint_rules(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t d = cfg.degree;
    Rng rng(cfg.seed);

    LawReport diff_rule = make_report("differential-fixpoint-rule", sr);
    LawReport tangent_rule = make_report("tangent-fixpoint-rule", sr);
    LawReport strong_rule = make_report("strong-differential-fixpoint-rule", sr);

    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        std::size_t nunk = 1 + rng.next(2);
        std::vector<std::string> unknowns;
        for (std::size_t i = 0; i < nunk; ++i)
            unknowns.push_back("x" + std::to_string(i + 1));
        EquationSystem sys = rnd_guarded_system(rng, sr, {"z"}, unknowns, d);
        try {
            SeriesTuple y = kleene_fixpoint(sys).solution;  // over (z)
            std::vector<Series> dy;
            for (const auto& comp : y.components) dy.push_back(derivative(comp));
            // direction names shared by all three routes
            std::vector<std::string> dparams = dy[0].variables();  // (z, a_z)
            std::vector<std::string> dir_unknowns =
                direction_names(sys.context());  // (a_z, a_x1, ...)
            std::vector<std::string> params2 = {dparams[0], dparams[1]};
            std::vector<std::string> unknowns2 = unknowns;
            for (std::size_t i = 0; i < nunk; ++i)
                unknowns2.push_back(dir_unknowns[1 + i]);
            std::vector<std::string> ctx2 = params2;
            ctx2.insert(ctx2.end(), unknowns2.begin(), unknowns2.end());

            // tangent route: joint system (x = f, a_x = D[f])
            std::vector<Series> rhs2;
            for (std::size_t i = 0; i < nunk; ++i)
                rhs2.push_back(embed(sys.rhs()[i], ctx2, d));
            for (std::size_t i = 0; i < nunk; ++i)
                rhs2.push_back(embed(derivative(sys.rhs()[i]), ctx2, d));
            EquationSystem tangent_sys(params2, unknowns2,
                                       SeriesTuple(std::move(rhs2)));
            SeriesTuple joint = kleene_fixpoint(tangent_sys).solution;

            // strong route: mu y. D[f](z, Y(z), a_z, y)
            std::vector<std::string> ctx3 = params2;
            for (std::size_t i = 0; i < nunk; ++i) ctx3.push_back(unknowns2[nunk + i]);
            std::vector<Series> rhs3;
            for (std::size_t i = 0; i < nunk; ++i) {
                // derivative(f_i) lives over (z, x..., a_z, a_x...)
                std::vector<Series> bind;
                bind.push_back(Series::variable(sr, ctx3, d, 0));  // z
                for (std::size_t j = 0; j < nunk; ++j)
                    bind.push_back(embed(y[j], ctx3, d));
                bind.push_back(Series::variable(sr, ctx3, d, 1));  // a_z
                for (std::size_t j = 0; j < nunk; ++j)
                    bind.push_back(Series::variable(sr, ctx3, d, 2 + j));
                rhs3.push_back(substitute(derivative(sys.rhs()[i]), bind));
            }
            EquationSystem strong_sys(
                params2,
                std::vector<std::string>(unknowns2.begin() +
                                             static_cast<std::ptrdiff_t>(nunk),
                                         unknowns2.end()),
                SeriesTuple(std::move(rhs3)));
            SeriesTuple strong = kleene_fixpoint(strong_sys).solution;

            ++diff_rule.cases_run;
            ++tangent_rule.cases_run;
            ++strong_rule.cases_run;
            for (std::size_t i = 0; i < nunk; ++i) {
                if (joint[nunk + i] != dy[i]) {
                    record_failure(diff_rule, n, tuple_str(sys.rhs()),
                                   to_string(dy[i]), to_string(joint[nunk + i]));
                    break;
                }
            }
            for (std::size_t i = 0; i < nunk; ++i) {
                if (joint[i] != embed(y[i], params2, d)) {
                    record_failure(tangent_rule, n, tuple_str(sys.rhs()),
                                   to_string(y[i]), to_string(joint[i]));
                    break;
                }
            }
            for (std::size_t i = 0; i < nunk; ++i) {
                if (strong[i] != dy[i]) {
                    record_failure(strong_rule, n, tuple_str(sys.rhs()),
                                   to_string(dy[i]), to_string(strong[i]));
                    break;
                }
            }
        } catch (const DivergenceError&) {
            ++diff_rule.skipped;
            ++tangent_rule.skipped;
            ++strong_rule.skipped;
        }
    }
    return {diff_rule, tangent_rule, strong_rule};
}

std::vector<LawReport> check_conway(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t d = cfg.degree;
    Rng rng(cfg.seed);

    LawReport dinat = make_report("dinaturality", sr);
    LawReport bekic = make_report("bekic-nested-elimination", sr);

    const SeriesOpts nc{3, 1, true};  // small, constant-free
    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        // dinaturality: f : params x X -> Y guarded, g : Y -> X constant-free
        {
            std::vector<std::string> fctx = {"z", "x1", "x2"};
            std::vector<std::string> yctx = {"y1", "y2"};
            std::vector<Series> fcomps, gcomps;
            for (int i = 0; i < 2; ++i) {
                Series p(sr, fctx, d);
                std::uint32_t nterms = 1 + static_cast<std::uint32_t>(rng.next(3));
                for (std::uint32_t t = 0; t < nterms; ++t) {
                    Exponents e(fctx.size(), 0);
                    for (auto& k : e) k = static_cast<std::uint32_t>(rng.next(2));
                    if (e[1] + e[2] > 0 || total_degree(e) == 0) e[0] += 1;
                    p.accumulate(e, rnd_value(rng, sr));
                }
                fcomps.push_back(std::move(p));
                gcomps.push_back(rnd_series(rng, sr, yctx, d, nc));
            }
            SeriesTuple f(fcomps), g(gcomps);
            try {
                std::vector<Series> gof = {substitute(g[0], f.components),
                                           substitute(g[1], f.components)};
                EquationSystem left({"z"}, {"x1", "x2"}, SeriesTuple(gof));
                SeriesTuple lhs = kleene_fixpoint(left).solution;

                std::vector<std::string> fyctx = {"z", "y1", "y2"};
                std::vector<Series> bind = {Series::variable(sr, fyctx, d, 0),
                                            embed(g[0], fyctx, d),
                                            embed(g[1], fyctx, d)};
                EquationSystem right({"z"}, {"y1", "y2"}, substitute(f, bind));
                SeriesTuple yhat = kleene_fixpoint(right).solution;
                SeriesTuple rhs = substitute(g, yhat.components);
                ++dinat.cases_run;
                if (lhs != rhs)
                    record_failure(dinat, n, tuple_str(f) + " || " + tuple_str(g),
                                   tuple_str(lhs), tuple_str(rhs));
            } catch (const DivergenceError&) {
                ++dinat.skipped;
            }
        }
        // two-unknown nested elimination
        {
            EquationSystem joint = rnd_guarded_system(rng, sr, {"z"}, {"x", "y"}, d);
            try {
                SeriesTuple both = kleene_fixpoint(joint).solution;
                const Series& f = joint.rhs()[0];
                const Series& g = joint.rhs()[1];
                EquationSystem inner({"z", "x"}, {"y"}, SeriesTuple({g}));
                Series gfix = kleene_fixpoint(inner).solution[0];
                std::vector<std::string> zx = {"z", "x"};
                std::vector<Series> bindf = {Series::variable(sr, zx, d, 0),
                                             Series::variable(sr, zx, d, 1), gfix};
                EquationSystem louter({"z"}, {"x"},
                                      SeriesTuple({substitute(f, bindf)}));
                Series l = kleene_fixpoint(louter).solution[0];
                std::vector<std::string> zy = {"z", "y"};
                std::vector<Series> bindg = {Series::variable(sr, zy, d, 0),
                                             embed(l, zy, d),
                                             Series::variable(sr, zy, d, 1)};
                EquationSystem router({"z"}, {"y"},
                                      SeriesTuple({substitute(g, bindg)}));
                Series r = kleene_fixpoint(router).solution[0];
                ++bekic.cases_run;
                if (both[0] != l || both[1] != r)
                    record_failure(bekic, n, tuple_str(joint.rhs()),
                                   tuple_str(both),
                                   to_string(l) + "; " + to_string(r));
            } catch (const DivergenceError&) {
                ++bekic.skipped;
            }
        }
    }
    return {dinat, bekic};
}

std::vector<LawReport> check_linearity_lemmas(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t d = cfg.degree;
    Rng rng(cfg.seed);

    LawReport lin_fix = make_report("linear-fixpoint-is-linear", sr);
    LawReport linx_zero = make_report("linear-in-unknowns-fixpoint-is-zero", sr);
    LawReport uniform = make_report("linear-uniformity", sr);

    const std::vector<std::string> ctx = {"z", "a1", "a2", "x1", "x2"};
    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        // linear map in the (a, x) block, weight variable z keeps it guarded
        {
            std::vector<Series> rhs;
            for (int i = 0; i < 2; ++i) {
                Series p(sr, ctx, d);
                std::uint32_t nterms = 1 + static_cast<std::uint32_t>(rng.next(3));
                for (std::uint32_t t = 0; t < nterms; ++t) {
                    Exponents e(ctx.size(), 0);
                    std::size_t slot = 1 + rng.next(4);  // one a- or x-factor
                    e[slot] = 1;
                    if (slot >= 3) e[0] = 1 + static_cast<std::uint32_t>(rng.next(2));
                    else e[0] = static_cast<std::uint32_t>(rng.next(2));
                    p.accumulate(e, rnd_value(rng, sr));
                }
                rhs.push_back(std::move(p));
            }
            EquationSystem sys({"z", "a1", "a2"}, {"x1", "x2"},
                               SeriesTuple(std::move(rhs)));
            try {
                SeriesTuple fix = kleene_fixpoint(sys).solution;  // over (z, a1, a2)
                ++lin_fix.cases_run;
                bool ok = true;
                for (const auto& comp : fix.components)
                    if (!is_linear_in(comp, {1, 2})) ok = false;
                if (!ok)
                    record_failure(lin_fix, n, tuple_str(sys.rhs()), tuple_str(fix),
                                   "a linear series");
            } catch (const DivergenceError&) {
                ++lin_fix.skipped;
            }
        }
        // linear in the unknown block: fixpoint vanishes
        {
            std::vector<Series> rhs;
            for (int i = 0; i < 2; ++i) {
                Series p(sr, ctx, d);
                std::uint32_t nterms = 1 + static_cast<std::uint32_t>(rng.next(3));
                for (std::uint32_t t = 0; t < nterms; ++t) {
                    Exponents e(ctx.size(), 0);
                    e[3 + rng.next(2)] = 1;  // exactly one unknown factor
                    e[0] = static_cast<std::uint32_t>(rng.next(2));
                    e[1] = static_cast<std::uint32_t>(rng.next(3));
                    e[2] = static_cast<std::uint32_t>(rng.next(2));
                    p.accumulate(e, rnd_value(rng, sr));
                }
                rhs.push_back(std::move(p));
            }
            EquationSystem sys({"z", "a1", "a2"}, {"x1", "x2"},
                               SeriesTuple(std::move(rhs)));
            SeriesTuple fix = kleene_fixpoint(sys).solution;
            ++linx_zero.cases_run;
            if (!fix[0].is_zero() || !fix[1].is_zero())
                record_failure(linx_zero, n, tuple_str(sys.rhs()), tuple_str(fix),
                               "0");
        }
        // uniformity: h linear, f = r o (1 x h), g = h o r commute by
        // construction; strictness says h carries fix(f) to fix(g)
        {
            std::vector<std::string> xvars = {"x1", "x2"};
            std::vector<std::string> yvars = {"y1", "y2"};
            // h : X -> Y with scalar coefficients
            std::vector<Series> h;
            for (int j = 0; j < 2; ++j) {
                Series hj(sr, xvars, d);
                for (std::size_t k = 0; k < 2; ++k) {
                    Exponents e = {0u, 0u};
                    e[k] = 1;
                    hj.accumulate(e, rnd_value(rng, sr));
                }
                h.push_back(std::move(hj));
            }
            // r : params x Y -> X, guarded and constant-free
            EquationSystem rsys =
                rnd_guarded_system(rng, sr, {"z"}, yvars, d);
            const SeriesTuple& r = rsys.rhs();  // over (z, y1, y2)

            std::vector<std::string> fctx = {"z", "x1", "x2"};
            std::vector<Series> bindr = {Series::variable(sr, fctx, d, 0),
                                         embed(h[0], fctx, d),
                                         embed(h[1], fctx, d)};
            EquationSystem fsys({"z"}, xvars, substitute(r, bindr));

            std::vector<std::string> gctx = {"z", "y1", "y2"};
            std::vector<Series> gcomps;
            for (int j = 0; j < 2; ++j) {
                std::vector<Series> bindh = {
                    embed(r[0], gctx, d),
                    embed(r[1], gctx, d)};
                gcomps.push_back(substitute(h[j], bindh));
            }
            EquationSystem gsys({"z"}, yvars, SeriesTuple(std::move(gcomps)));
            try {
                SeriesTuple fixf = kleene_fixpoint(fsys).solution;  // over (z)
                SeriesTuple fixg = kleene_fixpoint(gsys).solution;
                std::vector<Series> bindfix(fixf.components.begin(),
                                            fixf.components.end());
                ++uniform.cases_run;
                bool ok = true;
                for (int j = 0; j < 2; ++j)
                    if (substitute(h[j], bindfix) != fixg[j]) ok = false;
                if (!ok)
                    record_failure(uniform, n,
                                   tuple_str(SeriesTuple(h)) + " || " + tuple_str(r),
                                   tuple_str(fixf), tuple_str(fixg));
            } catch (const DivergenceError&) {
                ++uniform.skipped;
            }
        }
    }
    return {lin_fix, linx_zero, uniform};
}

namespace {

SemiringMatrix rnd_matrix(Rng& rng, const Semiring& sr, std::size_t dim,
                          std::uint32_t degree, bool with_variable) {
    SemiringMatrix m = SemiringMatrix::zero(sr, {"z"}, degree, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            Series e(sr, {"z"}, degree);
            if (rng.next(2)) e.accumulate({0}, rnd_value(rng, sr));
            if (with_variable && rng.next(2)) e.accumulate({1}, rnd_value(rng, sr));
            m.at(i, j) = e;
        }
    return m;
}

bool mat_leq(const SemiringMatrix& a, const SemiringMatrix& b) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (!series_leq(a.at(i, j), b.at(i, j))) return false;
    return true;
}

std::string mat_str(const SemiringMatrix& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (i) out << " | ";
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j) out << ", ";
            out << to_string(m.at(i, j));
        }
    }
    return out.str();
}

std::vector<std::vector<Value>> fw_oracle(const std::vector<std::vector<Value>>& w) {
    std::size_t n = w.size();
    auto d = w;
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = add(d[i][i], Value::tropical_weight(0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = add(d[i][j], mul(d[i][k], d[k][j]));
    return d;
}

}  // namespace

std::vector<LawReport> check_repetition(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t d = cfg.degree;
    Rng rng(cfg.seed);

    LawReport fixax = make_report("repetition-fixpoint-axiom", sr);
    LawReport addax = make_report("repetition-addition-axiom", sr);
    LawReport dinax = make_report("repetition-dinaturality-axiom", sr);
    LawReport induction = make_report("repetition-induction", sr);
    LawReport agree = make_report("repetition-equals-elimination-star", sr);
    LawReport fw = make_report("tropical-star-vs-floyd-warshall", sr);

    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        std::size_t dim = 1 + rng.next(4);
        SemiringMatrix f = rnd_matrix(rng, sr, dim, d, true);
        SemiringMatrix g = rnd_matrix(rng, sr, dim, d, true);
        SemiringMatrix id = SemiringMatrix::identity(sr, {"z"}, d, dim);

        SemiringMatrix fs = matrix_star(f);
        SemiringMatrix gs = matrix_star(g);

        ++fixax.cases_run;
        if (fs != id + f * fs)
            record_failure(fixax, n, mat_str(f), mat_str(fs), mat_str(id + f * fs));

        ++addax.cases_run;
        SemiringMatrix lhs_add = matrix_star(f + g);
        SemiringMatrix rhs_add = matrix_star(fs * g) * fs;
        if (lhs_add != rhs_add)
            record_failure(addax, n, mat_str(f) + " // " + mat_str(g),
                           mat_str(lhs_add), mat_str(rhs_add));

        ++dinax.cases_run;
        SemiringMatrix lhs_din = matrix_star(f * g) * f;
        SemiringMatrix rhs_din = f * matrix_star(g * f);
        if (lhs_din != rhs_din)
            record_failure(dinax, n, mat_str(f) + " // " + mat_str(g),
                           mat_str(lhs_din), mat_str(rhs_din));

        // induction: build k = j*(h + s), so h + j k <= k holds, then check
        // j* h <= k
        {
            SemiringMatrix h = rnd_matrix(rng, sr, dim, d, true);
            SemiringMatrix j = rnd_matrix(rng, sr, dim, d, true);
            SemiringMatrix s = rnd_matrix(rng, sr, dim, d, true);
            SemiringMatrix k = matrix_star(j) * (h + s);
            ++induction.cases_run;
            if (mat_leq(h + j * k, k)) {
                if (!mat_leq(matrix_star(j) * h, k))
                    record_failure(induction, n,
                                   mat_str(h) + " // " + mat_str(j) + " // " +
                                       mat_str(s),
                                   mat_str(matrix_star(j) * h), mat_str(k));
            } else {
                // the constructed premise can only fail on inexact carriers
                ++induction.skipped;
            }
        }

        // agreement between the two derivations of the star
        {
            ++agree.cases_run;
            try {
                SemiringMatrix it = repetition(f);
                if (it != fs)
                    record_failure(agree, n, mat_str(f), mat_str(it), mat_str(fs));
            } catch (const DivergenceError&) {
                ++agree.skipped;
            }
        }
    }

    if (sr.id() == SemiringId::tropical) {
        std::uint32_t fw_cases = std::min<std::uint32_t>(cfg.cases, 50);
        for (std::uint32_t n = 0; n < fw_cases; ++n) {
            std::size_t dim = 8;
            std::vector<std::vector<Value>> w(dim, std::vector<Value>(dim, sr.zero()));
            for (auto& row : w)
                for (auto& cell : row)
                    if (rng.next(3))
                        cell = Value::tropical_weight(
                            static_cast<std::int64_t>(rng.next(9)));
            SemiringMatrix m = SemiringMatrix::zero(sr, {"z"}, d, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    m.at(i, j) = Series::constant(sr, {"z"}, d, w[i][j]);
            auto oracle = fw_oracle(w);
            SemiringMatrix star = matrix_star(m);
            ++fw.cases_run;
            bool ok = true;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    if (!value_eq(star.at(i, j).constant_term(), oracle[i][j]))
                        ok = false;
            if (ok && repetition(m) != star) ok = false;
            if (!ok)
                record_failure(fw, n, mat_str(m), mat_str(star), "floyd-warshall");
        }
    }
    return {fixax, addax, dinax, induction, agree, fw};
}

std::vector<LawReport> check_monus_laws(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    Rng rng(cfg.seed);

    LawReport adjunction = make_report("monus-adjunction", sr);
    LawReport assoc = make_report("monus-sum-assoc", sr);
    LawReport cancel = make_report("monus-add-cancel", sr);
    LawReport counit = make_report("monus-counit", sr);
    LawReport triangle = make_report("monus-triangle", sr);
    LawReport scaling = make_report("monus-scaling", sr);

    auto check_triple = [&](std::uint32_t n, const Value& a, const Value& b,
                            const Value& c) {
        ++adjunction.cases_run;
        // against both readings of the adjoint
        bool adj_ok = true;
        for (const Value& h : {a, b, c}) {
            if (leq(monus(a, b), h) != leq(a, add(b, h))) adj_ok = false;
        }
        if (!adj_ok)
            record_failure(adjunction, n, a.str() + "," + b.str() + "," + c.str(),
                           monus(a, b).str(), "-");

        ++assoc.cases_run;
        if (!value_eq(monus(a, add(b, c)), monus(monus(a, b), c)))
            record_failure(assoc, n, a.str() + "," + b.str() + "," + c.str(),
                           monus(a, add(b, c)).str(), monus(monus(a, b), c).str());

        ++cancel.cases_run;
        if (!leq(monus(add(a, b), b), a))
            record_failure(cancel, n, a.str() + "," + b.str(),
                           monus(add(a, b), b).str(), a.str());

        ++counit.cases_run;
        bool cu = leq(a, add(monus(a, b), b));
        if (cu && leq(b, a)) cu = value_eq(a, add(monus(a, b), b));
        if (!cu)
            record_failure(counit, n, a.str() + "," + b.str(),
                           add(monus(a, b), b).str(), a.str());

        ++triangle.cases_run;
        if (!leq(monus(a, b), add(monus(a, c), monus(c, b))))
            record_failure(triangle, n, a.str() + "," + b.str() + "," + c.str(),
                           monus(a, b).str(),
                           add(monus(a, c), monus(c, b)).str());

        ++scaling.cases_run;
        if (!leq(monus(mul(c, a), mul(c, b)), mul(c, monus(a, b))))
            record_failure(scaling, n, a.str() + "," + b.str() + "," + c.str(),
                           monus(mul(c, a), mul(c, b)).str(),
                           mul(c, monus(a, b)).str());
    };

    if (sr.id() == SemiringId::boolean) {
        std::uint32_t n = 0;
        for (bool a : {false, true})
            for (bool b : {false, true})
                for (bool c : {false, true})
                    check_triple(n++, Value::boolean(a), Value::boolean(b),
                                 Value::boolean(c));
    } else {
        for (std::uint32_t n = 0; n < cfg.cases; ++n)
            check_triple(n, rnd_value(rng, sr), rnd_value(rng, sr),
                         rnd_value(rng, sr));
    }
    return {adjunction, assoc, cancel, counit, triangle, scaling};
}

std::vector<LawReport> check_relmodel(const LawConfig& cfg) {
    if (cfg.cases < 1) throw DomainMismatchError("law check needs cases >= 1");
    const Semiring& sr = *cfg.semiring;
    const std::uint32_t cap = std::min<std::uint32_t>(cfg.degree, 4);
    Rng rng(cfg.seed);

    LawReport iso_comp = make_report("relmodel-iso-composition", sr);
    LawReport iso_deriv = make_report("relmodel-iso-derivative", sr);
    LawReport iso_fix = make_report("relmodel-iso-fixpoint", sr);
    LawReport units = make_report("relmodel-comonad-units", sr);
    LawReport assoc = make_report("relmodel-comonad-assoc", sr);

    auto rnd_rel = [&](std::uint32_t source, std::uint32_t target,
                       bool constant_free) {
        WeightedRelation r(sr, source, target, cap);
        std::uint32_t entries = 1 + static_cast<std::uint32_t>(rng.next(4));
        for (std::uint32_t i = 0; i < entries; ++i) {
            Multiset m(source, 0);
            for (auto& c : m) c = static_cast<std::uint32_t>(rng.next(3));
            if (constant_free && multiset_total(m) == 0) m[rng.next(source)] = 1;
            if (multiset_total(m) > cap) continue;
            r.accumulate(m, static_cast<std::uint32_t>(rng.next(target)),
                         rnd_value(rng, sr));
        }
        return r;
    };

    for (std::uint32_t n = 0; n < cfg.cases; ++n) {
        // composition vs substitution
        {
            WeightedRelation a = rnd_rel(2, 2, false);
            WeightedRelation b = rnd_rel(2, 1, false);
            SeriesTuple pa = series_of_relation(a);
            SeriesTuple pb = series_of_relation(b);
            SeriesTuple lhs = series_of_relation(cokleisli_compose(a, b));
            ++iso_comp.cases_run;
            if (lhs[0] != substitute(pb[0], pa.components))
                record_failure(iso_comp, n, tuple_str(pa) + " || " + tuple_str(pb),
                               tuple_str(lhs),
                               to_string(substitute(pb[0], pa.components)));
        }
        // derivative through the isomorphism
        {
            WeightedRelation r = rnd_rel(2, 2, false);
            SeriesTuple p = series_of_relation(r, {"x1", "x2"});
            SeriesTuple dp = series_of_relation(rel_derivative(r),
                                                {"x1", "x2", "a_x1", "a_x2"});
            ++iso_deriv.cases_run;
            bool ok = true;
            for (std::uint32_t j = 0; j < r.target_size(); ++j)
                if (dp[j] != derivative(p[j])) ok = false;
            if (!ok)
                record_failure(iso_deriv, n, tuple_str(p), tuple_str(dp), "-");
        }
        // fixpoint through the isomorphism, guarded encodings
        {
            WeightedRelation r(sr, 2, 1, cap);
            std::uint32_t entries = 1 + static_cast<std::uint32_t>(rng.next(3));
            for (std::uint32_t i = 0; i < entries; ++i) {
                Multiset m = {static_cast<std::uint32_t>(rng.next(3)),
                              static_cast<std::uint32_t>(rng.next(2))};
                if (m[1] > 0 || multiset_total(m) == 0) m[0] += 1;
                if (multiset_total(m) > cap) continue;
                r.accumulate(m, 0, rnd_value(rng, sr));
            }
            try {
                WeightedRelation fix = rel_fixpoint(r, 1);
                EquationSystem sys({"z"}, {"B"}, series_of_relation(r, {"z", "B"}));
                SeriesTuple kl = kleene_fixpoint(sys).solution;
                ++iso_fix.cases_run;
                if (series_of_relation(fix, {"z"}) != kl)
                    record_failure(iso_fix, n,
                                   tuple_str(series_of_relation(r, {"z", "B"})),
                                   tuple_str(series_of_relation(fix, {"z"})),
                                   tuple_str(kl));
            } catch (const DivergenceError&) {
                ++iso_fix.skipped;
            }
        }
        // comonad laws at tiny size: units on arbitrary relations, and
        // associativity on constant-free ones (the capped mirror of the
        // series quotient condition)
        {
            WeightedRelation r = rnd_rel(2, 2, false);
            WeightedRelation dl = WeightedRelation::dereliction(sr, 2, cap);
            ++units.cases_run;
            if (cokleisli_compose(dl, r) != r || cokleisli_compose(r, dl) != r)
                record_failure(units, n, tuple_str(series_of_relation(r)), "-", "-");

            WeightedRelation a = rnd_rel(2, 2, true);
            WeightedRelation b = rnd_rel(2, 2, true);
            WeightedRelation c = rnd_rel(2, 2, true);
            ++assoc.cases_run;
            if (cokleisli_compose(cokleisli_compose(a, b), c) !=
                cokleisli_compose(a, cokleisli_compose(b, c)))
                record_failure(assoc, n,
                               tuple_str(series_of_relation(a)) + " || " +
                                   tuple_str(series_of_relation(b)) + " || " +
                                   tuple_str(series_of_relation(c)),
                               "-", "-");
        }
    }
    return {iso_comp, iso_deriv, iso_fix, units, assoc};
}

}  // namespace fixdiff
