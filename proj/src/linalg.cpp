#include "qtop/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qtop {

ExactMatrix ExactMatrix::identity(const FieldCtx* ctx, long n) {
    ExactMatrix m(n, n);
    for (long i = 0; i < n; ++i) m.add(i, i, ctx->one());
    m.finalize();
    return m;
}

void ExactMatrix::add(long r, long c, CycloNum v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw Error("MATH", "entry out of range");
    if (v.is_zero()) return;
    e_.push_back({r, c, std::move(v)});
    finalized_ = false;
}

void ExactMatrix::finalize() {
    if (finalized_) return;
    std::sort(e_.begin(), e_.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    std::vector<Entry> merged;
    merged.reserve(e_.size());
    for (auto& en : e_) {
        if (!merged.empty() && merged.back().r == en.r && merged.back().c == en.c)
            merged.back().v += en.v;
        else
            merged.push_back(std::move(en));
    }
    e_.clear();
    for (auto& en : merged)
        if (!en.v.is_zero()) e_.push_back(std::move(en));
    finalized_ = true;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || e_.size() != o.e_.size()) return false;
    for (size_t k = 0; k < e_.size(); ++k)
        if (e_[k].r != o.e_[k].r || e_[k].c != o.e_[k].c || e_[k].v != o.e_[k].v)
            return false;
    return true;
}

CycloNum ExactMatrix::at(const FieldCtx* ctx, long r, long c) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), std::make_pair(r, c),
                               [](const Entry& a, const std::pair<long, long>& key) {
                                   return a.r != key.first ? a.r < key.first
                                                           : a.c < key.second;
                               });
    if (it != e_.end() && it->r == r && it->c == c) return it->v;
    return ctx->zero();
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("MATH", "shape mismatch in add");
    ExactMatrix out(rows_, cols_);
    out.e_.reserve(e_.size() + o.e_.size());
    for (const auto& en : e_) out.e_.push_back(en);
    for (const auto& en : o.e_) out.e_.push_back(en);
    out.finalized_ = false;
    out.finalize();
    return out;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("MATH", "shape mismatch in sub");
    ExactMatrix out(rows_, cols_);
    out.e_.reserve(e_.size() + o.e_.size());
    for (const auto& en : e_) out.e_.push_back(en);
    for (const auto& en : o.e_) out.e_.push_back({en.r, en.c, -en.v});
    out.finalized_ = false;
    out.finalize();
    return out;
}

std::vector<std::pair<size_t, size_t>> ExactMatrix::row_spans() const {
    std::vector<std::pair<size_t, size_t>> spans(rows_, {0, 0});
    size_t k = 0;
    for (long r = 0; r < rows_; ++r) {
        size_t start = k;
        while (k < e_.size() && e_[k].r == r) ++k;
        spans[r] = {start, k};
    }
    return spans;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (cols_ != o.rows_) throw Error("MATH", "shape mismatch in mul");
    auto ospans = o.row_spans();
    ExactMatrix out(rows_, o.cols_);
    // row-by-row accumulation into a sorted merge buffer
    std::vector<Entry> acc;
    size_t k = 0;
    for (long r = 0; r < rows_; ++r) {
        std::map<long, CycloNum> rowacc;
        while (k < e_.size() && e_[k].r == r) {
            const Entry& a = e_[k];
            auto [s, t] = ospans[a.c];
            for (size_t j = s; j < t; ++j) {
                const Entry& b = o.e_[j];
                auto it = rowacc.find(b.c);
                if (it == rowacc.end())
                    rowacc.emplace(b.c, a.v * b.v);
                else
                    it->second += a.v * b.v;
            }
            ++k;
        }
        for (auto& [c, v] : rowacc)
            if (!v.is_zero()) acc.push_back({r, c, std::move(v)});
    }
    out.e_ = std::move(acc);
    return out;
}

ExactMatrix ExactMatrix::scaled(const CycloNum& s) const {
    ExactMatrix out(rows_, cols_);
    if (s.is_zero()) return out;
    out.e_.reserve(e_.size());
    for (const auto& en : e_) {
        CycloNum v = en.v * s;
        if (!v.is_zero()) out.e_.push_back({en.r, en.c, std::move(v)});
    }
    return out;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix out(cols_, rows_);
    out.e_.reserve(e_.size());
    for (const auto& en : e_) out.e_.push_back({en.c, en.r, en.v});
    out.finalized_ = false;
    out.finalize();
    return out;
}

ExactMatrix ExactMatrix::kron(const ExactMatrix& o) const {
    ExactMatrix out(rows_ * o.rows_, cols_ * o.cols_);
    out.e_.reserve(e_.size() * o.e_.size());
    for (const auto& a : e_)
        for (const auto& b : o.e_)
            out.e_.push_back({a.r * o.rows_ + b.r, a.c * o.cols_ + b.c, a.v * b.v});
    out.finalized_ = false;
    out.finalize();
    return out;
}

ExactMatrix ExactMatrix::pow(const FieldCtx* ctx, long e) const {
    if (rows_ != cols_) throw Error("MATH", "pow of non-square matrix");
    ExactMatrix acc = identity(ctx, rows_);
    ExactMatrix base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

CycloNum ExactMatrix::trace(const FieldCtx* ctx) const {
    CycloNum t = ctx->zero();
    for (const auto& en : e_)
        if (en.r == en.c) t += en.v;
    return t;
}

namespace {

using SparseRow = std::vector<std::pair<long, CycloNum>>;  // sorted by col

SparseRow axpy(const SparseRow& x, const CycloNum& a, const SparseRow& y) {
    // x + a*y, merged
    SparseRow out;
    out.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i]);
            ++i;
        } else if (i >= x.size() || y[j].first < x[i].first) {
            CycloNum v = a * y[j].second;
            if (!v.is_zero()) out.emplace_back(y[j].first, std::move(v));
            ++j;
        } else {
            CycloNum v = x[i].second + a * y[j].second;
            if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

struct Eliminator {
    const FieldCtx* ctx;
    std::vector<SparseRow> rows;    // echelon rows, leading cols strictly increasing order of insertion
    std::vector<long> lead;         // leading column per row
    // Optional right-hand-side bookkeeping rows reduced alongside.
    std::vector<SparseRow> aug;
    bool track_aug = false;

    // Reduce r (and its augmented part) against current rows; if nonzero left,
    // normalize and insert. Returns pivot col or -1 if reduced to zero.
    long insert(SparseRow r, SparseRow a = {}) {
        for (size_t k = 0; k < rows.size(); ++k) {
            if (r.empty()) break;
            // find coefficient of lead[k] in r
            auto it = std::lower_bound(
                r.begin(), r.end(), lead[k],
                [](const std::pair<long, CycloNum>& p, long c) { return p.first < c; });
            if (it == r.end() || it->first != lead[k]) continue;
            CycloNum f = -it->second;
            r = axpy(r, f, rows[k]);
            if (track_aug) a = axpy(a, f, aug[k]);
        }
        if (r.empty()) {
            if (track_aug) aug_of_zero = std::move(a);
            return -1;
        }
        CycloNum piv = r.front().second.inv();
        for (auto& p : r) p.second = p.second * piv;
        if (track_aug)
            for (auto& p : a) p.second = p.second * piv;
        // back-substitute into existing rows to reach reduced form
        for (size_t k = 0; k < rows.size(); ++k) {
            auto it = std::lower_bound(
                rows[k].begin(), rows[k].end(), r.front().first,
                [](const std::pair<long, CycloNum>& p, long c) { return p.first < c; });
            if (it == rows[k].end() || it->first != r.front().first) continue;
            CycloNum f = -it->second;
            rows[k] = axpy(rows[k], f, r);
            if (track_aug) aug[k] = axpy(aug[k], f, a);
        }
        long pc = r.front().first;
        rows.push_back(std::move(r));
        lead.push_back(pc);
        if (track_aug) aug.push_back(std::move(a));
        return pc;
    }

    SparseRow aug_of_zero;  // augmented part of the last row that vanished
};

SparseRow matrix_row(const ExactMatrix& m, size_t from, size_t to) {
    SparseRow r;
    r.reserve(to - from);
    const auto& e = m.entries();
    for (size_t k = from; k < to; ++k) r.emplace_back(e[k].c, e[k].v);
    return r;
}

}  // namespace

RrefResult rref(const ExactMatrix& m, const FieldCtx* ctx) {
    Eliminator el{ctx};
    auto spans = m.row_spans();
    for (long r = 0; r < m.rows(); ++r) {
        auto [s, t] = spans[r];
        if (s == t) continue;
        el.insert(matrix_row(m, s, t));
    }
    // order rows by pivot column for a canonical result
    std::vector<size_t> order(el.rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return el.lead[a] < el.lead[b]; });
    RrefResult out;
    for (size_t i : order) {
        out.rows.push_back(std::move(el.rows[i]));
        out.pivot_cols.push_back(el.lead[i]);
    }
    out.rank = static_cast<long>(out.rows.size());
    return out;
}

long rank(const ExactMatrix& m, const FieldCtx* ctx) { return rref(m, ctx).rank; }

std::vector<std::vector<CycloNum>> nullspace(const ExactMatrix& m, const FieldCtx* ctx) {
    RrefResult rr = rref(m, ctx);
    std::vector<bool> is_pivot(m.cols(), false);
    for (long c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<CycloNum>> basis;
    for (long free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<CycloNum> v(m.cols(), ctx->zero());
        v[free] = ctx->one();
        for (size_t k = 0; k < rr.rows.size(); ++k) {
            auto it = std::lower_bound(
                rr.rows[k].begin(), rr.rows[k].end(), free,
                [](const std::pair<long, CycloNum>& p, long c) { return p.first < c; });
            if (it != rr.rows[k].end() && it->first == free)
                v[rr.pivot_cols[k]] = -it->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

ExactMatrix inverse(const ExactMatrix& m, const FieldCtx* ctx) {
    if (m.rows() != m.cols()) throw Error("MATH", "inverse of non-square matrix");
    long n = m.rows();
    Eliminator el{ctx};
    el.track_aug = true;
    auto spans = m.row_spans();
    for (long r = 0; r < n; ++r) {
        auto [s, t] = spans[r];
        SparseRow row = matrix_row(m, s, t);
        SparseRow a = {{r, ctx->one()}};
        if (row.empty())
            throw Error("MATH", "singular matrix (rank " +
                                    std::to_string(rank(m, ctx)) + " of " +
                                    std::to_string(n) + ")");
        el.insert(std::move(row), std::move(a));
    }
    if (static_cast<long>(el.rows.size()) != n)
        throw Error("MATH", "singular matrix (rank " + std::to_string(el.rows.size()) +
                                " of " + std::to_string(n) + ")");
    // rows are fully reduced; row with lead c holds e_c in the span, so the
    // augmented row is row c of the inverse.
    ExactMatrix out(n, n);
    for (size_t k = 0; k < el.rows.size(); ++k)
        for (auto& [c, v] : el.aug[k]) out.add(el.lead[k], c, v);
    out.finalize();
    return out;
}

std::optional<std::vector<CycloNum>> solve(const ExactMatrix& m,
                                           const std::vector<CycloNum>& b,
                                           const FieldCtx* ctx) {
    if (static_cast<long>(b.size()) != m.rows()) throw Error("MATH", "rhs length mismatch");
    // Reduce the transposed-augmented system: eliminate rows of [m | b].
    Eliminator el{ctx};
    el.track_aug = true;
    auto spans = m.row_spans();
    for (long r = 0; r < m.rows(); ++r) {
        auto [s, t] = spans[r];
        SparseRow row = matrix_row(m, s, t);
        SparseRow a;
        if (!b[r].is_zero()) a.emplace_back(0, b[r]);
        if (row.empty()) {
            if (!a.empty()) return std::nullopt;  // 0 = b_r != 0
            continue;
        }
        el.insert(std::move(row), std::move(a));
        if (!el.rows.empty() && el.rows.size() != el.lead.size())
            throw Error("MATH", "internal elimination bookkeeping");
    }
    // Check for inconsistent vanished rows: re-run detection by testing the
    // candidate solution at the end (cheap and exact).
    std::vector<CycloNum> x(m.cols(), ctx->zero());
    for (size_t k = 0; k < el.rows.size(); ++k) {
        // after full reduction each echelon row r_k has value aug_k on the rhs;
        // rows are reduced against each other so x[lead_k] = rhs component.
        CycloNum rhs = ctx->zero();
        for (auto& [c, v] : el.aug[k])
            if (c == 0) rhs = v;
        // row: lead + trailing free columns; set free vars to zero
        x[el.lead[k]] = rhs;
    }
    // verify m x = b exactly
    const auto& e = m.entries();
    std::vector<CycloNum> mx(m.rows(), ctx->zero());
    for (const auto& en : e)
        if (!x[en.c].is_zero()) mx[en.r] += en.v * x[en.c];
    for (long r = 0; r < m.rows(); ++r)
        if (mx[r] != b[r]) return std::nullopt;
    return x;
}

std::string FieldPoly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (long d = degree(); d >= 0; --d) {
        const CycloNum& c = coeffs[d];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (d > 0) os << "*x^" << d;
    }
    if (first) os << "0";
    return os.str();
}

FieldPoly min_poly(const ExactMatrix& m, const FieldCtx* ctx) {
    if (m.rows() != m.cols()) throw Error("MATH", "min_poly of non-square matrix");
    long n = m.rows();
    // Krylov on flattened powers: first linear dependence among I, A, A^2, ...
    Eliminator el{ctx};
    el.track_aug = true;
    ExactMatrix p = ExactMatrix::identity(ctx, n);
    for (long k = 0; k <= n; ++k) {
        SparseRow flat;
        flat.reserve(p.entries().size());
        for (const auto& en : p.entries()) flat.emplace_back(en.r * n + en.c, en.v);
        SparseRow a = {{k, ctx->one()}};
        long piv = el.insert(std::move(flat), std::move(a));
        if (piv < 0) {
            // dependence found: aug_of_zero holds the polynomial coefficients
            std::vector<CycloNum> coeffs(k + 1, ctx->zero());
            for (auto& [c, v] : el.aug_of_zero) coeffs[c] = v;
            // normalize monic (leading coeff is that of x^k)
            CycloNum leadc = coeffs[k];
            if (leadc.is_zero()) throw Error("MATH", "min_poly lost leading term");
            CycloNum inv = leadc.inv();
            for (auto& c : coeffs) c = c * inv;
            return FieldPoly{std::move(coeffs)};
        }
        p = p * m;
    }
    throw Error("MATH", "min_poly did not terminate");
}

FieldPoly poly_derivative(const FieldPoly& p, const FieldCtx* ctx) {
    if (p.coeffs.size() <= 1) return FieldPoly{{ctx->zero()}};
    std::vector<CycloNum> out(p.coeffs.size() - 1, ctx->zero());
    for (size_t k = 1; k < p.coeffs.size(); ++k)
        out[k - 1] = p.coeffs[k].scaled(mpq_class(static_cast<long>(k)));
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return FieldPoly{std::move(out)};
}

namespace {
void poly_trim(std::vector<CycloNum>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}
}  // namespace

FieldPoly poly_gcd(FieldPoly a, FieldPoly b, const FieldCtx* ctx) {
    std::vector<CycloNum> x = a.coeffs, y = b.coeffs;
    poly_trim(x);
    poly_trim(y);
    while (!y.empty()) {
        // x mod y
        while (x.size() >= y.size() && !x.empty()) {
            CycloNum c = x.back() / y.back();
            size_t shift = x.size() - y.size();
            for (size_t j = 0; j < y.size(); ++j) x[shift + j] -= c * y[j];
            poly_trim(x);
        }
        std::swap(x, y);
    }
    if (x.empty()) return FieldPoly{{ctx->zero()}};
    CycloNum inv = x.back().inv();
    for (auto& c : x) c = c * inv;
    return FieldPoly{std::move(x)};
}

ExactMatrix poly_eval_matrix(const FieldPoly& p, const ExactMatrix& m, const FieldCtx* ctx) {
    long n = m.rows();
    ExactMatrix acc(n, n);
    for (long d = p.degree(); d >= 0; --d) {
        acc = acc * m;
        if (!p.coeffs[d].is_zero()) {
            ExactMatrix diag(n, n);
            for (long i = 0; i < n; ++i) diag.add(i, i, p.coeffs[d]);
            diag.finalize();
            acc = acc + diag;
        }
    }
    return acc;
}

CoordSolver::CoordSolver(std::vector<std::vector<CycloNum>> basis, const FieldCtx* ctx)
    : ctx_(ctx), k_(static_cast<long>(basis.size())) {
    dim_ = basis.empty() ? 0 : static_cast<long>(basis[0].size());
    for (long j = 0; j < k_; ++j) {
        std::vector<CycloNum> v = basis[j];
        std::vector<CycloNum> combo(k_, ctx->zero());
        combo[j] = ctx->one();
        // reduce against existing
        for (size_t t = 0; t < red_rows_.size(); ++t) {
            const CycloNum& lead = v[pivots_[t]];
            if (lead.is_zero()) continue;
            CycloNum f = lead;
            for (long c = 0; c < dim_; ++c) v[c] -= f * red_rows_[t][c];
            for (long c = 0; c < k_; ++c) combo[c] -= f * red_combo_[t][c];
        }
        long piv = -1;
        for (long c = 0; c < dim_; ++c)
            if (!v[c].is_zero()) {
                piv = c;
                break;
            }
        if (piv < 0) throw Error("MATH", "basis vectors are linearly dependent");
        CycloNum inv = v[piv].inv();
        for (long c = 0; c < dim_; ++c) v[c] = v[c] * inv;
        for (long c = 0; c < k_; ++c) combo[c] = combo[c] * inv;
        // back-substitute
        for (size_t t = 0; t < red_rows_.size(); ++t) {
            const CycloNum& lead = red_rows_[t][piv];
            if (lead.is_zero()) continue;
            CycloNum f = lead;
            for (long c = 0; c < dim_; ++c) red_rows_[t][c] -= f * v[c];
            for (long c = 0; c < k_; ++c) red_combo_[t][c] -= f * combo[c];
        }
        red_rows_.push_back(std::move(v));
        red_combo_.push_back(std::move(combo));
        pivots_.push_back(piv);
    }
}

std::vector<CycloNum> CoordSolver::coords(const std::vector<CycloNum>& t) const {
    if (static_cast<long>(t.size()) != dim_) throw Error("MATH", "vector length mismatch");
    std::vector<CycloNum> v = t;
    std::vector<CycloNum> out(k_, ctx_->zero());
    for (size_t k = 0; k < red_rows_.size(); ++k) {
        const CycloNum& lead = v[pivots_[k]];
        if (lead.is_zero()) continue;
        CycloNum f = lead;
        for (long c = 0; c < dim_; ++c) v[c] -= f * red_rows_[k][c];
        for (long c = 0; c < k_; ++c) out[c] += f * red_combo_[k][c];
    }
    for (long c = 0; c < dim_; ++c)
        if (!v[c].is_zero()) throw Error("MATH", "vector outside span of basis");
    return out;
}

}  // namespace qtop
