#include "modsurf/pell.hpp"

#include <cassert>

namespace modsurf {

Form principal_form(const mpz_class& D) {
    require_discriminant(D);
    if (mod(D, 4) == 0) return Form(1, 0, -D / 4);
    return Form(1, 1, (1 - D) / 4);
}

namespace {

struct AutomorphData {
    IntMatrix2 period_matrix;  // digit product over one period, det (-1)^L
    mpz_class reduced_A;       // leading coefficient of the reduced form
    bool odd_period;
};

AutomorphData automorph(const mpz_class& D) {
    if (sgn(D) <= 0) throw Error("bad_discriminant", "Pell equations need D > 0");
    IndefiniteReduction rd = reduce_indefinite(principal_form(D));
    IntMatrix2 m = cf_to_matrix(rd.period);
    return {m, rd.reduced.A, rd.period.size() % 2 == 1};
}

PellSolution from_matrix(const IntMatrix2& m, const mpz_class& A, const mpz_class& D, int sign) {
    mpz_class t = m.trace();
    assert(m.c % A == 0);
    mpz_class s = m.c / A;
    assert(t * t - D * s * s == sign);
    QuadSurd eps = QuadSurd::with_coefficient(t, s, D, 2);
    return {t, s, sign, eps};
}

}  // namespace

PellSolution solve_pell4(const mpz_class& D) {
    AutomorphData a = automorph(D);
    IntMatrix2 m = a.period_matrix;
    if (a.odd_period) m = m * m;
    return from_matrix(m, a.reduced_A, D, 4);
}

std::optional<PellSolution> solve_pell_neg4(const mpz_class& D) {
    AutomorphData a = automorph(D);
    if (!a.odd_period) return std::nullopt;
    return from_matrix(a.period_matrix, a.reduced_A, D, -4);
}

QuadSurd unit(const mpz_class& D) { return solve_pell4(D).epsilon; }

}  // namespace modsurf
