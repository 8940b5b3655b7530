#include "qtop/cyclo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qtop {

namespace {

// Dense polynomial helpers over Q, ascending coefficients.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly out(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    trim(out);
    return out;
}

// Exact division; throws if the remainder is nonzero.
QPoly poly_divexact(QPoly num, const QPoly& den) {
    if (den.empty()) throw Error("MATH", "polynomial division by zero");
    QPoly quo(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, mpq_class(0));
    while (num.size() >= den.size() && !num.empty()) {
        mpq_class c = num.back() / den.back();
        size_t shift = num.size() - den.size();
        quo[shift] = c;
        for (size_t j = 0; j < den.size(); ++j) num[shift + j] -= c * den[j];
        trim(num);
        if (!num.empty() && num.size() >= den.size() &&
            num.size() - den.size() + 1 > quo.size())
            throw Error("MATH", "polynomial division overflow");
    }
    if (!num.empty()) throw Error("MATH", "inexact polynomial division");
    return quo;
}

QPoly poly_rem(QPoly num, const QPoly& den) {
    while (num.size() >= den.size() && !num.empty()) {
        mpq_class c = num.back() / den.back();
        size_t shift = num.size() - den.size();
        for (size_t j = 0; j < den.size(); ++j) num[shift + j] -= c * den[j];
        trim(num);
    }
    return num;
}

QPoly x_pow_minus_one(long d) {
    QPoly p(d + 1, mpq_class(0));
    p[0] = -1;
    p[d] = 1;
    return p;
}

// Phi_n by recursive division: Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d.
QPoly cyclotomic(long n) {
    QPoly num = x_pow_minus_one(n);
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        num = poly_divexact(num, cyclotomic(d));
    }
    return num;
}

}  // namespace

std::shared_ptr<const FieldCtx> FieldCtx::make(long r) {
    if (r < 3 || r % 2 == 0)
        throw Error("ARG", "field requires an odd integer r >= 3, got " + std::to_string(r));
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->r_ = r;
    ctx->n_ = 4 * r;
    ctx->phi_poly_ = cyclotomic(ctx->n_);
    ctx->phi_ = static_cast<long>(ctx->phi_poly_.size()) - 1;

    // Phi_n divides x^n - 1 exactly; guard against construction bugs.
    QPoly rem = poly_rem(x_pow_minus_one(ctx->n_), ctx->phi_poly_);
    if (!rem.empty()) throw Error("MATH", "cyclotomic polynomial does not divide x^n - 1");

    long phi = ctx->phi_;
    // zeta^e for e = 0..n-1 by repeated shift-and-reduce.
    ctx->zeta_rows_.assign(ctx->n_, std::vector<mpq_class>(phi, mpq_class(0)));
    std::vector<mpq_class> cur(phi, mpq_class(0));
    cur[0] = 1;
    for (long e = 0; e < ctx->n_; ++e) {
        ctx->zeta_rows_[e] = cur;
        // multiply by zeta
        mpq_class top = cur[phi - 1];
        for (long j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top != 0)
            for (long j = 0; j < phi; ++j) cur[j] -= top * ctx->phi_poly_[j];
    }
    ctx->red_rows_.assign(phi - 1, std::vector<mpq_class>(phi, mpq_class(0)));
    for (long e = phi; e <= 2 * phi - 2; ++e)
        ctx->red_rows_[e - phi] = ctx->zeta_rows_[e % ctx->n_];  // e < n always here

    // sqrt(r) via the Gauss sum G = sum_k q^{k^2}; G = sqrt(r) for r = 1 mod 4
    // and G = i*sqrt(r) for r = 3 mod 4.
    std::vector<mpq_class> gauss(phi, mpq_class(0));
    for (long k = 0; k < r; ++k) {
        long e = (4 * ((k * k) % r)) % ctx->n_;
        const auto& row = ctx->zeta_rows_[e];
        for (long j = 0; j < phi; ++j) gauss[j] += row[j];
    }
    CycloNum g(ctx.get(), gauss);
    CycloNum sr = (r % 4 == 1) ? g : -(ctx->i_unit() * g);
    ctx->sqrt_r_coeffs_ = sr.coeffs();

    // Sign sanity via the floating-point embedding (never an equality decision).
    double emb = sr.embed().real();
    if (!(emb > 0) || std::abs(emb - std::sqrt(double(r))) > 1e-6)
        throw Error("MATH", "Gauss-sum square root has wrong embedding sign");
    return ctx;
}

CycloNum FieldCtx::zeta_pow(long e) const {
    long m = e % n_;
    if (m < 0) m += n_;
    return CycloNum(this, zeta_rows_[m]);
}

// Members used during construction, before shared_ptr is finalized.
CycloNum FieldCtx::q_pow(long e) const { return zeta_pow(4 * e); }

CycloNum FieldCtx::from_int(long v) const {
    std::vector<mpq_class> c(phi_, mpq_class(0));
    c[0] = v;
    return CycloNum(this, std::move(c));
}

CycloNum FieldCtx::from_mpq(const mpq_class& v) const {
    std::vector<mpq_class> c(phi_, mpq_class(0));
    c[0] = v;
    return CycloNum(this, std::move(c));
}

CycloNum FieldCtx::zero() const { return from_int(0); }
CycloNum FieldCtx::one() const { return from_int(1); }
CycloNum FieldCtx::i_unit() const { return zeta_pow(r_); }
CycloNum FieldCtx::sqrt_r() const { return CycloNum(this, sqrt_r_coeffs_); }

const std::vector<mpq_class>& FieldCtx::reduction_row(long e) const {
    return red_rows_[e - phi_];
}

CycloNum::CycloNum(const FieldCtx* ctx, std::vector<mpq_class> coeffs)
    : ctx_(ctx), c_(std::move(coeffs)) {
    if (static_cast<long>(c_.size()) != ctx->phi_n())
        throw Error("MATH", "coefficient vector has wrong length");
}

bool CycloNum::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycloNum::is_rational() const {
    for (size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) return false;
    return true;
}

mpq_class CycloNum::rational_part() const { return c_[0]; }

CycloNum CycloNum::operator-() const {
    std::vector<mpq_class> out(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) out[j] = -c_[j];
    return CycloNum(ctx_, std::move(out));
}

CycloNum CycloNum::operator+(const CycloNum& o) const {
    std::vector<mpq_class> out(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) out[j] = c_[j] + o.c_[j];
    return CycloNum(ctx_, std::move(out));
}

CycloNum CycloNum::operator-(const CycloNum& o) const {
    std::vector<mpq_class> out(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) out[j] = c_[j] - o.c_[j];
    return CycloNum(ctx_, std::move(out));
}

CycloNum& CycloNum::operator+=(const CycloNum& o) {
    for (size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
    for (size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

CycloNum CycloNum::operator*(const CycloNum& o) const {
    long phi = ctx_->phi_n();
    // Convolution skipping zeros; most scalars in practice are near-monomials.
    std::vector<mpq_class> tmp(2 * phi - 1, mpq_class(0));
    for (long a = 0; a < phi; ++a) {
        if (c_[a] == 0) continue;
        for (long b = 0; b < phi; ++b) {
            if (o.c_[b] == 0) continue;
            tmp[a + b] += c_[a] * o.c_[b];
        }
    }
    std::vector<mpq_class> out(tmp.begin(), tmp.begin() + phi);
    for (long e = phi; e <= 2 * phi - 2; ++e) {
        if (tmp[e] == 0) continue;
        const auto& row = ctx_->reduction_row(e);
        for (long j = 0; j < phi; ++j)
            if (row[j] != 0) out[j] += tmp[e] * row[j];
    }
    return CycloNum(ctx_, std::move(out));
}

CycloNum& CycloNum::operator*=(const CycloNum& o) {
    *this = *this * o;
    return *this;
}

bool CycloNum::operator==(const CycloNum& o) const {
    for (size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != o.c_[j]) return false;
    return true;
}

CycloNum CycloNum::inv() const {
    if (is_zero()) throw Error("MATH", "inverse of zero");
    // Extended Euclid for gcd(a, Phi_n) = 1 over Q[x].
    QPoly a(c_.begin(), c_.end());
    trim(a);
    QPoly b = ctx_->phi_poly();
    QPoly s0 = {mpq_class(1)}, s1 = {};  // s-coefficients track a-multiplier
    while (!b.empty()) {
        // quotient/remainder of a by b
        QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, mpq_class(0));
        QPoly rem = a;
        while (rem.size() >= b.size() && !rem.empty()) {
            mpq_class c = rem.back() / b.back();
            size_t shift = rem.size() - b.size();
            q[shift] += c;
            for (size_t j = 0; j < b.size(); ++j) rem[shift + j] -= c * b[j];
            trim(rem);
        }
        QPoly s2 = s0;  // s2 = s0 - q*s1
        {
            QPoly qs = poly_mul(q, s1);
            if (qs.size() > s2.size()) s2.resize(qs.size(), mpq_class(0));
            for (size_t j = 0; j < qs.size(); ++j) s2[j] -= qs[j];
            trim(s2);
        }
        a = b;
        b = rem;
        s0 = s1;
        s1 = s2;
    }
    if (a.size() != 1) throw Error("MATH", "element not invertible (gcd not constant)");
    mpq_class lead = a[0];
    std::vector<mpq_class> out(ctx_->phi_n(), mpq_class(0));
    QPoly s = poly_rem(s0, ctx_->phi_poly());
    for (size_t j = 0; j < s.size(); ++j) out[j] = s[j] / lead;
    return CycloNum(ctx_, std::move(out));
}

CycloNum CycloNum::operator/(const CycloNum& o) const { return *this * o.inv(); }

CycloNum CycloNum::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    CycloNum acc = ctx_->one();
    CycloNum base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

CycloNum CycloNum::scaled(const mpq_class& s) const {
    std::vector<mpq_class> out(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) out[j] = c_[j] * s;
    return CycloNum(ctx_, std::move(out));
}

std::string CycloNum::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (long j = ctx_->phi_n() - 1; j >= 0; --j) {
        if (c_[j] == 0) continue;
        mpq_class v = c_[j];
        bool neg = v < 0;
        mpq_class av = neg ? mpq_class(-v) : v;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool unit = (av == 1);
        if (!unit || j == 0) os << av.get_str();
        if (j > 0) {
            if (!unit) os << "*";
            os << "z";
            if (j > 1) os << "^" << j;
        }
    }
    if (first) return "0";
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
};

}  // namespace

CycloNum CycloNum::parse(const FieldCtx* ctx, const std::string& text) {
    std::vector<mpq_class> out(ctx->phi_n(), mpq_class(0));
    Cursor cur{text};
    bool any = false;
    int sign = 1;
    if (cur.peek() == '+' || cur.peek() == '-') {
        sign = (cur.s[cur.pos] == '-') ? -1 : 1;
        ++cur.pos;
    }
    while (!cur.done()) {
        // term: [number[/number]] [*] [z[^k]]
        mpq_class coef(1);
        bool saw_num = false;
        cur.skip_ws();
        size_t start = cur.pos;
        while (cur.pos < cur.s.size() && (isdigit(cur.s[cur.pos]) || cur.s[cur.pos] == '/'))
            ++cur.pos;
        if (cur.pos > start) {
            std::string num = cur.s.substr(start, cur.pos - start);
            try {
                coef = mpq_class(num);
                coef.canonicalize();
            } catch (...) {
                throw Error("PARSE", "bad rational '" + num + "' at position " +
                                         std::to_string(start));
            }
            saw_num = true;
        }
        cur.skip_ws();
        if (cur.pos < cur.s.size() && cur.s[cur.pos] == '*') ++cur.pos;
        cur.skip_ws();
        long deg = 0;
        bool saw_z = false;
        if (cur.pos < cur.s.size() && cur.s[cur.pos] == 'z') {
            saw_z = true;
            ++cur.pos;
            deg = 1;
            if (cur.pos < cur.s.size() && cur.s[cur.pos] == '^') {
                ++cur.pos;
                size_t ds = cur.pos;
                while (cur.pos < cur.s.size() && isdigit(cur.s[cur.pos])) ++cur.pos;
                if (cur.pos == ds)
                    throw Error("PARSE", "missing exponent at position " + std::to_string(ds));
                deg = std::stol(cur.s.substr(ds, cur.pos - ds));
            }
        }
        if (!saw_num && !saw_z)
            throw Error("PARSE", "empty term at position " + std::to_string(cur.pos));
        if (sign < 0) coef = -coef;
        // permissive on high powers: fold through zeta_pow
        if (deg >= ctx->phi_n()) {
            CycloNum zp = ctx->zeta_pow(deg);
            for (long j = 0; j < ctx->phi_n(); ++j) out[j] += coef * zp.coeffs()[j];
        } else {
            out[deg] += coef;
        }
        any = true;
        if (cur.done()) break;
        char c = cur.peek();
        if (c == '+' || c == '-') {
            sign = (c == '-') ? -1 : 1;
            ++cur.pos;
            if (cur.done())
                throw Error("PARSE", "dangling operator at position " +
                                         std::to_string(cur.pos));
        } else {
            throw Error("PARSE", "expected '+' or '-' at position " + std::to_string(cur.pos));
        }
    }
    if (!any) throw Error("PARSE", "empty scalar");
    return CycloNum(ctx, std::move(out));
}

std::complex<double> CycloNum::embed() const {
    std::complex<double> acc(0.0, 0.0);
    const double pi = 3.14159265358979323846;
    for (long j = 0; j < ctx_->phi_n(); ++j) {
        if (c_[j] == 0) continue;
        double v = c_[j].get_d();
        double ang = 2.0 * pi * double(j) / double(ctx_->n());
        acc += v * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

}  // namespace qtop
