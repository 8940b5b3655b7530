#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qtop/hopf.hpp"

using namespace qtop;

namespace {
std::shared_ptr<const HopfData> H3() {
    static std::shared_ptr<const HopfData> h = small_qsl2(FieldCtx::make(3));
    return h;
}
}  // namespace

TEST_CASE("small quantum group at r=3: dimensions and integral values") {
    auto H = H3();
    const FieldCtx* F = H->F();
    CHECK(H->dim == 27);

    // lambda(E^2 F^2 K) = 27/{1}^4 = 3 at r=3
    CHECK(H->integral_lambda[qsl2_index(3, 2, 2, 1)] == F->from_int(3));
    // lambda(1) = 0
    CHECK(H->integral_lambda[qsl2_index(3, 0, 0, 0)].is_zero());

    // quantum integers: [1] = 1, [2] = q + q^{-1}, [3] = 0 at r=3
    CHECK(q_int(F, 1) == F->one());
    CHECK(q_int(F, 3).is_zero());
}

TEST_CASE("hopf axiom suite passes at r=3") {
    auto rep = verify_hopf_axioms(*H3());
    for (const auto& c : rep) {
        INFO(c.name, " ", c.detail);
        CHECK(c.pass);
    }
}

TEST_CASE("corrupted antipode is detected, other axioms unaffected") {
    HopfData bad = *H3();
    const FieldCtx* F = bad.F();
    // corrupt one antipode column
    bad.antipode_cols[qsl2_index(3, 1, 0, 0)] =
        AlgElt::mono(qsl2_index(3, 1, 0, 0), F->from_int(7));
    auto rep = verify_hopf_axioms(bad);
    bool antipode_failed = false, assoc_ok = false, coassoc_ok = false;
    for (const auto& c : rep) {
        if (c.name == "antipode") antipode_failed = !c.pass;
        if (c.name == "associativity") assoc_ok = c.pass;
        if (c.name == "coassociativity") coassoc_ok = c.pass;
    }
    CHECK(antipode_failed);
    CHECK(assoc_ok);
    CHECK(coassoc_ok);
}

TEST_CASE("drinfeld element and pivotal compatibility") {
    auto H = H3();
    const FieldCtx* F = H->F();
    AlgElt u = drinfeld_element(*H);
    CHECK(H->counit(u) == F->one());
    // g = u v^{-1} = K
    CHECK(pivotal_consistency(*H));
}

TEST_CASE("monodromy matrix properties and closed form") {
    auto H = H3();
    const FieldCtx* F = H->F();
    AlgElt M = m_matrix(*H);
    long long d = H->dim;

    // (eps (x) eps)(M) = 1
    CycloNum s = F->zero();
    for (const auto& [m, v] : M.t)
        s += v * H->counit_vec[m / d] * H->counit_vec[m % d];
    CHECK(s == F->one());

    // (eps (x) id)(M) = 1 in H
    AlgElt contracted;
    for (const auto& [m, v] : M.t)
        contracted.add_term(m % d, v * H->counit_vec[m / d]);
    contracted.canonicalize();
    CHECK(contracted == H->unit);

    // quadruple-sum closed form reproduces R21 R12 term by term
    CHECK(m_matrix_closed_form_qsl2(*H) == M);
}

TEST_CASE("drinfeld map is invertible and matches the closed-form inverse") {
    auto H = H3();
    const FieldCtx* F = H->F();
    ExactMatrix D = drinfeld_map(*H);
    CHECK(rank(D, F) == 27);
    ExactMatrix Dinv = drinfeld_map_inv(*H);
    CHECK(D * Dinv == ExactMatrix::identity(F, 27));
    CHECK(drinfeld_map_inv_closed(*H) == Dinv);
}

TEST_CASE("integral identities at r=3") {
    auto rep = integral_checks(*H3());
    for (const auto& c : rep) {
        INFO(c.name, " ", c.detail);
        CHECK(c.pass);
    }
    // lambda(cointegral) evaluates to exactly 1 with the chosen normalizations
    auto H = H3();
    CHECK(H->lambda(H->cointegral) == H->F()->one());
}

TEST_CASE("stabilization parameters match the closed forms") {
    auto H = H3();
    const FieldCtx* F = H->F();
    auto p = stabilization_params(*H);

    // zeta = r^3 exactly
    CHECK(p.zeta == F->from_int(27));
    // Delta_- = lambda(v) = i * 3^{3/2} * q^3 = 3 sqrt(3) i at r=3
    CHECK(p.delta_minus == F->i_unit() * F->sqrt_r().scaled(3));
    // delta = i^{-1} q^0 = -i at r=3
    CHECK(p.small_delta == -F->i_unit());
    // script D = r^{3/2}
    CHECK(p.script_d == F->sqrt_r().scaled(3));
    CHECK(p.script_d * p.script_d == p.zeta);
    CHECK(p.delta_minus == p.script_d / p.small_delta);
    CHECK(p.delta_plus == p.script_d * p.small_delta);

    auto pn = stabilization_params(*H, SqrtChoice::negative);
    CHECK(pn.script_d == -p.script_d);
}

TEST_CASE("general closed forms for stabilization data hold for r in {3,5,7}") {
    for (long r : {3L, 5L, 7L}) {
        auto ctx = FieldCtx::make(r);
        auto H = small_qsl2(ctx);
        const FieldCtx* F = ctx.get();
        auto p = stabilization_params(*H);
        CycloNum rsqrt3 = F->sqrt_r().scaled(r);  // r^{3/2}
        CycloNum ipow = F->i_unit().pow((r - 1) / 2);
        CHECK(p.delta_minus == ipow * rsqrt3 * F->q_pow((r + 3) / 2));
        CHECK(p.delta_plus == ipow.inv() * rsqrt3 * F->q_pow((r - 3) / 2));
        CHECK(p.zeta == F->from_int(r * r * r));
        CHECK(p.small_delta == ipow.inv() * F->q_pow((r - 3) / 2));
    }
}

TEST_CASE("structure dump and load round trip") {
    auto H = H3();
    std::ostringstream os;
    dump_structure(*H, os);
    std::istringstream is(os.str());
    auto H2 = load_structure(is);
    CHECK(H2->dim == H->dim);
    CHECK(H2->r_matrix == H->r_matrix);
    CHECK(H2->ribbon_v == H->ribbon_v);
    CHECK(H2->cointegral == H->cointegral);
    for (long i = 0; i < H->dim; ++i) {
        CHECK(H2->comult_table[i] == H->comult_table[i]);
        CHECK(H2->integral_lambda[i] == H->integral_lambda[i]);
    }
    for (long i = 0; i < H->dim * H->dim; ++i)
        CHECK(H2->mult_table[i] == H->mult_table[i]);
    // byte-identical second dump
    std::ostringstream os2;
    dump_structure(*H2, os2);
    CHECK(os.str() == os2.str());
}

TEST_CASE("antipode composed with its inverse is the identity") {
    auto H = H3();
    const FieldCtx* F = H->F();
    for (long i = 0; i < H->dim; ++i)
        CHECK(H->antipode_inv(H->antipode_cols[i]) == AlgElt::mono(i, F->one()));
}
