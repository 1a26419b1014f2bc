#include "fixdiff/fixpoint.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <sstream>

namespace fixdiff {

namespace {

std::vector<std::string> concat(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

EquationSystem::EquationSystem(std::vector<std::string> params,
                               std::vector<std::string> unknowns, SeriesTuple rhs)
    : params_(std::move(params)),
      unknowns_(std::move(unknowns)),
      context_(concat(params_, unknowns_)),
      rhs_(std::move(rhs)),
      guarded_(false) {
    if (rhs_.size() != unknowns_.size())
        throw DomainMismatchError("equation system: one right-hand side per unknown");
    if (rhs_.size() == 0)
        throw DomainMismatchError("equation system: at least one unknown");
    if (rhs_[0].variables() != context_)
        throw DomainMismatchError(
            "equation system: right-hand sides must live over (params, unknowns)");

    // Syntactic guardedness: every term touching an unknown also carries a
    // parameter factor.
    const std::size_t np = params_.size();
    bool syntactic = true;
    for (const auto& comp : rhs_.components) {
        for (const auto& [e, c] : comp.terms()) {
            std::uint64_t du = 0, dp = 0;
            for (std::size_t i = 0; i < e.size(); ++i)
                (i < np ? dp : du) += e[i];
            if (du > 0 && dp == 0) syntactic = false;
        }
    }
    if (syntactic) {
        guarded_ = true;
        return;
    }
    // Otherwise probe the parameter-free constant part: zero the parameters
    // and watch whether that subsystem settles within one pass per unknown.
    std::vector<Series> probe_bind;
    std::vector<std::string> uvars = unknowns_;
    for (std::size_t i = 0; i < np; ++i)
        probe_bind.emplace_back(semiring(), uvars, degree());
    for (std::size_t i = 0; i < unknowns_.size(); ++i)
        probe_bind.push_back(Series::variable(semiring(), uvars, degree(), i));
    SeriesTuple constant_part = substitute(rhs_, probe_bind);
    bool settled = false;
    SeriesTuple cur = SeriesTuple::zero(semiring(), uvars, degree(), unknowns_.size());
    for (std::size_t k = 0; k <= unknowns_.size(); ++k) {
        std::vector<Series> bind(cur.components.begin(), cur.components.end());
        SeriesTuple next = substitute(constant_part, bind);
        if (next == cur) {
            settled = true;
            break;
        }
        cur = next;
    }
    guarded_ = settled;
}

std::uint32_t EquationSystem::iteration_cap() const {
    return 4 * (degree() + 1) *
           static_cast<std::uint32_t>(std::max<std::size_t>(1, unknowns_.size()));
}

SeriesTuple EquationSystem::apply(const SeriesTuple& z) const {
    if (z.size() != unknowns_.size())
        throw DomainMismatchError("apply: one series per unknown expected");
    std::vector<Series> bind;
    bind.reserve(context_.size());
    for (std::size_t i = 0; i < params_.size(); ++i)
        bind.push_back(Series::variable(semiring(), params_, degree(), i));
    for (const auto& comp : z.components) bind.push_back(comp);
    return substitute(rhs_, bind);
}

std::string SolveReport::trace_csv() const {
    std::ostringstream out;
    out << "step,distance_exponent,rate_ok\n";
    for (std::size_t i = 0; i < per_iteration_distance.size(); ++i)
        out << i << "," << per_iteration_distance[i].str() << ",na\n";
    return out.str();
}

std::vector<SeriesTuple> kleene_chain(const EquationSystem& sys, std::uint32_t steps) {
    std::vector<SeriesTuple> chain;
    chain.push_back(SeriesTuple::zero(sys.semiring(), sys.params(), sys.degree(),
                                      sys.unknowns().size()));
    for (std::uint32_t k = 0; k < steps; ++k)
        chain.push_back(sys.apply(chain.back()));
    return chain;
}

SolveReport kleene_fixpoint(const EquationSystem& sys) {
    SeriesTuple z = SeriesTuple::zero(sys.semiring(), sys.params(), sys.degree(),
                                      sys.unknowns().size());
    std::vector<SeriesTuple> iterates{z};
    const std::uint32_t cap = sys.iteration_cap();
    for (std::uint32_t k = 0; k < cap; ++k) {
        SeriesTuple next = sys.apply(z);
        if (next == z) {
            SolveReport report;
            report.solution = std::move(next);
            report.iterations = k + 1;
            report.stabilized = true;
            for (const auto& it : iterates)
                report.per_iteration_distance.push_back(
                    tuple_distance(it, report.solution));
            report.per_iteration_distance.push_back(TaylorDistance{std::nullopt});
            return report;
        }
        z = std::move(next);
        iterates.push_back(z);
    }
    throw DivergenceError("kleene iteration exceeded its cap of " +
                              std::to_string(cap) + " steps",
                          z, cap);
}

SemiringMatrix::SemiringMatrix(std::size_t dim, Series fill)
    : dim_(dim), entries_(dim * dim, std::move(fill)) {
    assert(dim > 0);
}

SemiringMatrix SemiringMatrix::zero(const Semiring& sr, std::vector<std::string> vars,
                                    std::uint32_t degree, std::size_t dim) {
    return SemiringMatrix(dim, Series(sr, std::move(vars), degree));
}

SemiringMatrix SemiringMatrix::identity(const Semiring& sr,
                                        std::vector<std::string> vars,
                                        std::uint32_t degree, std::size_t dim) {
    SemiringMatrix m = zero(sr, vars, degree, dim);
    for (std::size_t i = 0; i < dim; ++i)
        m.at(i, i) = Series::constant(sr, m.variables(), degree, sr.one());
    return m;
}

const Series& SemiringMatrix::at(std::size_t i, std::size_t j) const {
    assert(i < dim_ && j < dim_);
    return entries_[i * dim_ + j];
}

Series& SemiringMatrix::at(std::size_t i, std::size_t j) {
    assert(i < dim_ && j < dim_);
    return entries_[i * dim_ + j];
}

SemiringMatrix operator+(const SemiringMatrix& a, const SemiringMatrix& b) {
    if (a.dim() != b.dim()) throw DomainMismatchError("matrix dimension mismatch");
    SemiringMatrix r = a;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

SemiringMatrix operator*(const SemiringMatrix& a, const SemiringMatrix& b) {
    if (a.dim() != b.dim()) throw DomainMismatchError("matrix dimension mismatch");
    SemiringMatrix r = SemiringMatrix::zero(a.semiring(), a.variables(), a.degree(),
                                            a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < a.dim(); ++j)
                r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return r;
}

bool operator==(const SemiringMatrix& a, const SemiringMatrix& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (a.at(i, j) != b.at(i, j)) return false;
    return true;
}

SeriesTuple mat_apply(const SemiringMatrix& m, const SeriesTuple& v) {
    if (v.size() != m.dim()) throw DomainMismatchError("matrix/vector size mismatch");
    std::vector<Series> out;
    out.reserve(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Series acc(m.semiring(), m.variables(), m.degree());
        for (std::size_t j = 0; j < m.dim(); ++j) acc = acc + m.at(i, j) * v[j];
        out.push_back(std::move(acc));
    }
    return SeriesTuple(std::move(out));
}

bool mat_is_zero(const SemiringMatrix& m) {
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (!m.at(i, j).is_zero()) return false;
    return true;
}

namespace {

SemiringMatrix submatrix(const SemiringMatrix& m, std::size_t r0, std::size_t c0,
                         std::size_t n) {
    SemiringMatrix out = SemiringMatrix::zero(m.semiring(), m.variables(),
                                              m.degree(), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = m.at(r0 + i, c0 + j);
    return out;
}

// rectangular block helpers stored as dense vectors of series
struct Block {
    std::size_t rows, cols;
    std::vector<Series> e;
    const Series& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
    Series& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
};

Block take(const SemiringMatrix& m, std::size_t r0, std::size_t c0, std::size_t rows,
           std::size_t cols) {
    Block b{rows, cols, {}};
    b.e.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) b.e.push_back(m.at(r0 + i, c0 + j));
    return b;
}

Block mulb(const Block& a, const Block& b) {
    assert(a.cols == b.rows);
    Series zero(a.e[0].semiring(), a.e[0].variables(), a.e[0].degree());
    Block r{a.rows, b.cols, std::vector<Series>(a.rows * b.cols, zero)};
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return r;
}

Block addb(const Block& a, const Block& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    Block r = a;
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

Block as_block(const SemiringMatrix& m) { return take(m, 0, 0, m.dim(), m.dim()); }

SemiringMatrix square_of(const Block& b, const Semiring& sr,
                         const std::vector<std::string>& vars, std::uint32_t degree) {
    assert(b.rows == b.cols);
    SemiringMatrix m = SemiringMatrix::zero(sr, vars, degree, b.rows);
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) m.at(i, j) = b.at(i, j);
    return m;
}

SemiringMatrix assemble(const Block& tl, const Block& tr, const Block& bl,
                        const Block& br, const Semiring& sr,
                        const std::vector<std::string>& vars, std::uint32_t degree) {
    std::size_t n = tl.rows + br.rows;
    SemiringMatrix m = SemiringMatrix::zero(sr, vars, degree, n);
    for (std::size_t i = 0; i < tl.rows; ++i)
        for (std::size_t j = 0; j < tl.cols; ++j) m.at(i, j) = tl.at(i, j);
    for (std::size_t i = 0; i < tr.rows; ++i)
        for (std::size_t j = 0; j < tr.cols; ++j) m.at(i, tl.cols + j) = tr.at(i, j);
    for (std::size_t i = 0; i < bl.rows; ++i)
        for (std::size_t j = 0; j < bl.cols; ++j) m.at(tl.rows + i, j) = bl.at(i, j);
    for (std::size_t i = 0; i < br.rows; ++i)
        for (std::size_t j = 0; j < br.cols; ++j)
            m.at(tl.rows + i, tl.cols + j) = br.at(i, j);
    return m;
}

}  // namespace

SemiringMatrix matrix_star(const SemiringMatrix& m) {
    if (m.dim() == 1) {
        SemiringMatrix r = m;
        r.at(0, 0) = series_star(m.at(0, 0));
        return r;
    }
    // Split into a balanced 2x2 block structure and eliminate: the top-left
    // star absorbs the feedback through the bottom block and back.
    const std::size_t k = (m.dim() + 1) / 2;
    const std::size_t l = m.dim() - k;
    Block a = take(m, 0, 0, k, k), b = take(m, 0, k, k, l);
    Block c = take(m, k, 0, l, k);

    Block ds = as_block(matrix_star(submatrix(m, k, k, l)));
    Block schur = addb(a, mulb(mulb(b, ds), c));
    Block ss = as_block(
        matrix_star(square_of(schur, m.semiring(), m.variables(), m.degree())));

    Block tr = mulb(mulb(ss, b), ds);
    Block bl = mulb(mulb(ds, c), ss);
    Block br = addb(ds, mulb(mulb(ds, c), tr));
    return assemble(ss, tr, bl, br, m.semiring(), m.variables(), m.degree());
}

SemiringMatrix repetition(const SemiringMatrix& m) {
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            for (const auto& [e, c] : m.at(i, j).terms())
                if (total_degree(e) > 1)
                    throw DomainMismatchError(
                        "repetition expects linear or constant entries");

    const SemiringMatrix id = SemiringMatrix::identity(m.semiring(), m.variables(),
                                                       m.degree(), m.dim());
    const std::uint32_t cap =
        4 * (m.degree() + 1) * static_cast<std::uint32_t>(m.dim());
    const std::size_t window = m.dim() + 1;
    std::deque<SemiringMatrix> recent{id};  // iterate after one step from zero
    SemiringMatrix cur = id;
    for (std::uint32_t k = 0; k < cap; ++k) {
        SemiringMatrix next = id + m * cur;
        if (next == cur) return cur;
        cur = next;
        recent.push_back(cur);
        if (recent.size() > window + 1) recent.pop_front();
    }

    // Coefficients still moving across the last window belong to diverging
    // geometric sums; pin them to the saturation value of the carrier and
    // verify the fixpoint identity afterwards.
    const Semiring& sr = m.semiring();
    Value saturated = sr.zero();
    switch (sr.id()) {
        case SemiringId::natural: saturated = Value::natural_infinity(); break;
        case SemiringId::real:
            saturated = Value::real(std::numeric_limits<double>::infinity());
            break;
        case SemiringId::tropical: saturated = Value::tropical_bottomless(); break;
        default: break;  // bounded carriers cannot reach this path
    }
    const SemiringMatrix& old = recent.front();
    SemiringMatrix pinned = cur;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            Series fixed(sr, m.variables(), m.degree());
            const Series& now = cur.at(i, j);
            const Series& before = old.at(i, j);
            for (const auto& [e, c] : now.terms())
                fixed.accumulate(
                    e, value_eq(c, before.coefficient(e)) ? c : saturated);
            pinned.at(i, j) = std::move(fixed);
        }
    SemiringMatrix check = id + m * pinned;
    if (check == pinned) return pinned;
    std::vector<Series> flat;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) flat.push_back(pinned.at(i, j));
    throw DivergenceError("repetition iteration exceeded its cap of " +
                              std::to_string(cap) + " steps",
                          SeriesTuple(std::move(flat)), cap);
}

SeriesTuple trace(const SeriesTuple& f, std::size_t split,
                  const std::vector<std::string>& params,
                  const std::vector<std::string>& traced) {
    if (split > f.size())
        throw DomainMismatchError("trace: split index out of range");
    if (f.size() - split != traced.size())
        throw DomainMismatchError("trace: one loop component per traced variable");
    std::vector<Series> loop(f.components.begin() + static_cast<std::ptrdiff_t>(split),
                             f.components.end());
    EquationSystem inner(params, traced, SeriesTuple(std::move(loop)));
    SolveReport fixed = kleene_fixpoint(inner);

    std::vector<Series> bind;
    const Semiring& sr = f[0].semiring();
    for (std::size_t i = 0; i < params.size(); ++i)
        bind.push_back(Series::variable(sr, params, f[0].degree(), i));
    for (const auto& comp : fixed.solution.components) bind.push_back(comp);
    std::vector<Series> out;
    out.reserve(split);
    for (std::size_t i = 0; i < split; ++i)
        out.push_back(substitute(f[i], bind));
    return SeriesTuple(std::move(out));
}

}  // namespace fixdiff
