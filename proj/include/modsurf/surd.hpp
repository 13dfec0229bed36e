// Exact arithmetic for real quadratic irrationals and their periodic
// continued fractions.
//
// A QuadSurd stores (P + sqrt(D)) / Q with integer P, Q != 0 and D > 0 not a
// perfect square, normalized so Q divides D - P^2.  That normalization makes
// the classical continued-fraction recurrence integer-only and is preserved
// by every operation here, so representations never grow under Moebius maps.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "modsurf/numtheory.hpp"

namespace modsurf {

// Integral 2x2 matrix; group/semigroup elements carry determinant +-1.
struct IntMatrix2 {
    mpz_class a, b, c, d;

    IntMatrix2() : a(0), b(0), c(0), d(0) {}
    IntMatrix2(mpz_class a_, mpz_class b_, mpz_class c_, mpz_class d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static IntMatrix2 identity() { return {1, 0, 0, 1}; }

    mpz_class det() const { return a * d - b * c; }
    mpz_class trace() const { return a + d; }

    IntMatrix2 operator*(const IntMatrix2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    // Exact inverse; requires det == +-1.
    IntMatrix2 inverse() const;

    bool operator==(const IntMatrix2&) const = default;
};

// sign of u + v*sqrt(D), D > 0 non-square, (u,v) != (0,0) unless both zero.
int sign_of_quadratic(const mpz_class& u, const mpz_class& v, const mpz_class& D);

class QuadSurd {
public:
    // (P + sqrt(D)) / Q.  Throws square_discriminant if D <= 0 or a perfect
    // square, zero_denominator if Q == 0.  Rescales to the normalized form.
    QuadSurd(mpz_class P, mpz_class Q, mpz_class D);

    // (p + c*sqrt(d)) / r with an explicit coefficient; c, r nonzero.
    static QuadSurd with_coefficient(const mpz_class& p, const mpz_class& c,
                                     const mpz_class& d, const mpz_class& r);

    const mpz_class& p() const noexcept { return p_; }
    const mpz_class& q() const noexcept { return q_; }
    const mpz_class& d() const noexcept { return d_; }

    QuadSurd galois_conjugate() const;

    mpz_class floor() const;

    // sign(value - num/den), den != 0.  Exact.
    int compare(const mpz_class& num, const mpz_class& den) const;

    // Reduced in the classical sense: x > 1 and -1 < conjugate < 0.
    bool is_reduced() const;

    // Value equality (independent of representation).
    bool operator==(const QuadSurd& o) const;
    bool operator!=(const QuadSurd& o) const { return !(*this == o); }

    // Product of two surds in the same real quadratic field.  Throws
    // different_field if the fields differ, rational_result if the product
    // collapses to a rational.
    QuadSurd mul(const QuadSurd& o) const;

    // x * conj(x) = (P^2 - D) / Q^2, exact.
    mpq_class norm() const;

    double to_double() const;

private:
    mpz_class p_, q_, d_;
    void normalize();
};

// Eventually periodic continued fraction: preperiod digits (first may be any
// integer, the rest positive), then a nonempty primitive period.
struct CFExpansion {
    std::vector<mpz_class> preperiod;
    std::vector<mpz_class> period;

    bool purely_periodic() const { return preperiod.empty(); }
    bool operator==(const CFExpansion&) const = default;
};

// Moebius action (a*x + b) / (c*x + d); requires det g == +-1.
QuadSurd mobius_apply(const IntMatrix2& g, const QuadSurd& x);

// Exact expansion with minimal preperiod and primitive period, detected by
// recurrence of the (P, Q) state pair.  max_steps guards runaway periods.
CFExpansion cf_expand(const QuadSurd& x, std::size_t max_steps = 10'000'000);

// Unique surd with the given expansion.  Digit validity checked.
QuadSurd cf_eval(const CFExpansion& e);

// 1 / (x - floor(x)): eat the first digit.
QuadSurd cf_shift(const QuadSurd& x);

// Product of (a_j 1; 1 0) over the digits; digits must be positive.
// Determinant is (-1)^length.
IntMatrix2 cf_to_matrix(const std::vector<mpz_class>& digits);

// Single digit matrix (a 1; 1 0), any integer a (used for preperiod steps).
IntMatrix2 digit_matrix(const mpz_class& a);

}  // namespace modsurf
