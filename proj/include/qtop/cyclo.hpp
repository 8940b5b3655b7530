// Exact arithmetic in the cyclotomic field Q(zeta_{4r}) for odd r >= 3.
//
// The field contains q = zeta^4 (a primitive r-th root of unity), i = zeta^r,
// and sqrt(r) realized as a Gauss sum, so every scalar appearing in the
// small quantum group and its invariants lives here. Elements are dense
// coefficient vectors over Q in the power basis 1, zeta, ..., zeta^{phi-1}
// modulo the cyclotomic polynomial Phi_{4r}.

#ifndef QTOP_CYCLO_HPP
#define QTOP_CYCLO_HPP

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtop {

// Error with a short machine-readable code ("PARSE", "TYPE", "MATH", ...).
class Error : public std::runtime_error {
   public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

   private:
    std::string code_;
};

class CycloNum;

class FieldCtx {
   public:
    // r odd, r >= 3; throws Error("ARG") otherwise.
    static std::shared_ptr<const FieldCtx> make(long r);

    long r() const { return r_; }
    long n() const { return n_; }            // n = 4r
    long phi_n() const { return phi_; }      // deg Phi_n
    const std::vector<mpq_class>& phi_poly() const { return phi_poly_; }

    // zeta^e reduced into the power basis, any e (negative allowed).
    CycloNum zeta_pow(long e) const;
    CycloNum q_pow(long e) const;            // q = zeta^4
    CycloNum from_int(long v) const;
    CycloNum from_mpq(const mpq_class& v) const;
    CycloNum zero() const;
    CycloNum one() const;
    CycloNum i_unit() const;                 // i = zeta^r
    CycloNum sqrt_r() const;                 // Gauss-sum square root, positive embedding

    // Reduction row for zeta^e, phi <= e <= 2*phi-2.
    const std::vector<mpq_class>& reduction_row(long e) const;

   private:
    FieldCtx() = default;
    long r_ = 0, n_ = 0, phi_ = 0;
    std::vector<mpq_class> phi_poly_;                  // monic, ascending, degree phi_
    std::vector<std::vector<mpq_class>> red_rows_;     // zeta^{phi..2phi-2} in basis
    std::vector<std::vector<mpq_class>> zeta_rows_;    // zeta^{0..n-1} in basis
    std::vector<mpq_class> sqrt_r_coeffs_;
};

// An element of Q(zeta_{4r}). Immutable value type; all operations are pure.
class CycloNum {
   public:
    CycloNum() : ctx_(nullptr) {}
    CycloNum(const FieldCtx* ctx, std::vector<mpq_class> coeffs);

    const FieldCtx* ctx() const { return ctx_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational_part() const;  // coefficient of zeta^0

    CycloNum operator-() const;
    CycloNum operator+(const CycloNum& o) const;
    CycloNum operator-(const CycloNum& o) const;
    CycloNum operator*(const CycloNum& o) const;
    CycloNum operator/(const CycloNum& o) const;
    CycloNum& operator+=(const CycloNum& o);
    CycloNum& operator-=(const CycloNum& o);
    CycloNum& operator*=(const CycloNum& o);
    bool operator==(const CycloNum& o) const;
    bool operator!=(const CycloNum& o) const { return !(*this == o); }

    CycloNum inv() const;             // throws Error("MATH") on zero
    CycloNum pow(long e) const;       // e may be negative for nonzero base
    CycloNum scaled(const mpq_class& s) const;

    // Canonical text form, e.g. "1/3*z^2 - 2". Parsed and printed bit-exactly.
    std::string to_string() const;
    static CycloNum parse(const FieldCtx* ctx, const std::string& text);

    // Approximate complex value under zeta -> exp(2*pi*i/n). Reporting and
    // sign checks only, never equality decisions.
    std::complex<double> embed() const;

   private:
    friend class FieldCtx;
    const FieldCtx* ctx_;
    std::vector<mpq_class> c_;
};

}  // namespace qtop

#endif
