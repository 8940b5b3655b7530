// Finite-dimensional factorizable ribbon Hopf algebras as structure tensors,
// with the small quantum group u_q(sl2) at odd roots of unity as built-in
// constructor: PBW multiplication, coproduct, antipode, R-matrix, ribbon and
// pivotal elements, integrals, Drinfeld map, and stabilization parameters.

#ifndef QTOP_HOPF_HPP
#define QTOP_HOPF_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qtop/linalg.hpp"

namespace qtop {

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};
using Report = std::vector<Check>;

// Sparse element of H^{otimes k}; indices flattened left-major, sorted.
struct AlgElt {
    std::vector<std::pair<long long, CycloNum>> t;

    bool is_zero() const { return t.empty(); }
    void add_term(long long idx, CycloNum v);
    void canonicalize();
    AlgElt scaled(const CycloNum& s) const;
    AlgElt operator+(const AlgElt& o) const;
    AlgElt operator-(const AlgElt& o) const;
    bool operator==(const AlgElt& o) const;
    static AlgElt mono(long long idx, CycloNum v);
};

class HopfData {
   public:
    std::shared_ptr<const FieldCtx> ctx;
    long dim = 0;
    std::vector<std::string> basis_labels;

    std::vector<AlgElt> mult_table;     // size dim*dim, e_i e_j at i*dim+j
    std::vector<AlgElt> comult_table;   // size dim, elements of H (x) H
    std::vector<CycloNum> counit_vec;   // size dim
    std::vector<AlgElt> antipode_cols;  // S(e_i)
    std::vector<AlgElt> antipode_inv_cols;
    AlgElt unit;             // eta(1)
    AlgElt r_matrix;         // element of H (x) H
    AlgElt r_matrix_inv;
    AlgElt ribbon_v;
    AlgElt ribbon_v_inv;
    AlgElt pivotal_g;
    AlgElt pivotal_g_inv;
    std::vector<CycloNum> integral_lambda;  // covector
    AlgElt cointegral;
    std::vector<long> generator_indices;  // algebra generators, empty = use all

    const FieldCtx* F() const { return ctx.get(); }

    const AlgElt& mul(long i, long j) const { return mult_table[i * dim + j]; }
    AlgElt mul(const AlgElt& a, const AlgElt& b) const;       // in H
    AlgElt mul2(const AlgElt& a, const AlgElt& b) const;      // in H (x) H
    AlgElt comult(const AlgElt& a) const;
    AlgElt antipode(const AlgElt& a) const;
    AlgElt antipode_inv(const AlgElt& a) const;
    CycloNum counit(const AlgElt& a) const;
    CycloNum lambda(const AlgElt& a) const;

    ExactMatrix left_mult_matrix(const AlgElt& a) const;   // x -> a x
    ExactMatrix right_mult_matrix(const AlgElt& a) const;  // x -> x a
    ExactMatrix antipode_matrix() const;
    ExactMatrix antipode_inv_matrix() const;
};

// The small quantum group u_q(sl2): r^3-dimensional PBW basis E^a F^b K^c.
std::shared_ptr<const HopfData> small_qsl2(std::shared_ptr<const FieldCtx> ctx);

// PBW index helpers for u_q(sl2).
long qsl2_index(long r, long a, long b, long c);

// Quantum integer scalars in the given field: {k}, [k], [k]!.
CycloNum q_brace(const FieldCtx* ctx, long k);
CycloNum q_int(const FieldCtx* ctx, long k);
CycloNum q_factorial(const FieldCtx* ctx, long k);

// Exhaustive exact verification of the Hopf/ribbon axioms.
Report verify_hopf_axioms(const HopfData& H);

// Drinfeld element u = S(R'')R' and pivotal compatibility g = u v^{-1}.
AlgElt drinfeld_element(const HopfData& H);
bool pivotal_consistency(const HopfData& H);

// Monodromy matrix M = R21 R12 in H (x) H.
AlgElt m_matrix(const HopfData& H);

// u_q(sl2) closed-form monodromy matrix (quadruple sum), for cross-checking.
AlgElt m_matrix_closed_form_qsl2(const HopfData& H);

// Drinfeld map D : H* -> H as a dim x dim matrix in dual/primal bases.
ExactMatrix drinfeld_map(const HopfData& H);
// Inverse by exact matrix inversion; Error("MATH") if singular (non-factorizable).
ExactMatrix drinfeld_map_inv(const HopfData& H);
// Closed form, D^{-1}(x) = zeta^{-1} lambda(S^{-1}(x)S(R')S^2(M'')S(u)^{-1}R'') lambda(M'_).
ExactMatrix drinfeld_map_inv_closed(const HopfData& H);

// Integral identities: right integral, two-sided cointegral, lambda(xy) = lambda(S^2(y)x).
Report integral_checks(const HopfData& H);

enum class SqrtChoice { positive, negative };

struct StabilizationParams {
    CycloNum delta_minus;  // lambda(v)
    CycloNum delta_plus;   // lambda(v^{-1})
    CycloNum zeta;         // delta_plus * delta_minus
    CycloNum script_d;     // chosen square root of zeta
    CycloNum small_delta;  // delta_plus / script_d
};

StabilizationParams stabilization_params(const HopfData& H,
                                         SqrtChoice choice = SqrtChoice::positive);

// Structure-tensor text format: one line per nonzero entry "NAME i [j [k]] VALUE".
void dump_structure(const HopfData& H, std::ostream& os);
std::shared_ptr<const HopfData> load_structure(std::istream& is);

}  // namespace qtop

#endif
