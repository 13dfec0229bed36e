#include "modsurf/surd.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <utility>

namespace modsurf {

IntMatrix2 IntMatrix2::inverse() const {
    mpz_class dt = det();
    if (dt == 1) return {d, -b, -c, a};
    if (dt == -1) return {-d, b, c, -a};
    throw Error("not_unimodular", "matrix inverse requires determinant +-1");
}

int sign_of_quadratic(const mpz_class& u, const mpz_class& v, const mpz_class& D) {
    int su = sgn(u), sv = sgn(v);
    if (sv == 0) return su;
    if (su == 0) return sv;
    if (su == sv) return su;
    // Opposite signs: compare u^2 against v^2 D; equality would force D square.
    int c = cmp(u * u, v * v * D);
    if (c == 0) throw Error("square_discriminant", "sign comparison hit a square discriminant");
    return (c > 0) ? su : sv;
}

QuadSurd::QuadSurd(mpz_class P, mpz_class Q, mpz_class D)
    : p_(std::move(P)), q_(std::move(Q)), d_(std::move(D)) {
    if (sgn(d_) <= 0 || is_perfect_square(d_))
        throw Error("square_discriminant", "D must be positive and not a perfect square");
    if (sgn(q_) == 0) throw Error("zero_denominator", "Q must be nonzero");
    normalize();
}

void QuadSurd::normalize() {
    if (mod(d_ - p_ * p_, q_) != 0) {
        mpz_class aq = abs(q_);
        p_ *= aq;
        d_ *= aq * aq;
        q_ *= aq;
    }
    assert(mod(d_ - p_ * p_, q_) == 0);
}

QuadSurd QuadSurd::with_coefficient(const mpz_class& p, const mpz_class& c,
                                    const mpz_class& d, const mpz_class& r) {
    if (sgn(c) == 0) throw Error("bad_argument", "coefficient must be nonzero");
    if (sgn(r) == 0) throw Error("zero_denominator", "denominator must be nonzero");
    mpz_class D = c * c * d;
    if (sgn(c) > 0) return QuadSurd(p, r, D);
    return QuadSurd(-p, -r, D);
}

QuadSurd QuadSurd::galois_conjugate() const {
    // (P - sqrt(D))/Q = (-P + sqrt(D))/(-Q); stays normalized.
    QuadSurd r = *this;
    r.p_ = -p_;
    r.q_ = -q_;
    return r;
}

mpz_class QuadSurd::floor() const {
    mpz_class t = p_ + isqrt(d_);
    if (sgn(q_) > 0) return fdiv(t, q_);
    // x irrational: floor(x) = -ceil(-x) = -floor(-x) - 1 with -x over |Q|.
    return -fdiv(t, -q_) - 1;
}

int QuadSurd::compare(const mpz_class& num, const mpz_class& den) const {
    if (sgn(den) == 0) throw Error("zero_denominator", "comparison denominator is zero");
    mpz_class m = abs(den);
    mpz_class n = sgn(den) > 0 ? num : mpz_class(-num);
    // value - n/m = ((mP - nQ) + m sqrt(D)) / (mQ)
    int s = sign_of_quadratic(m * p_ - n * q_, m, d_);
    return s * sgn(q_);
}

bool QuadSurd::is_reduced() const {
    if (compare(1, 1) <= 0) return false;
    QuadSurd bar = galois_conjugate();
    return bar.compare(-1, 1) > 0 && bar.compare(0, 1) < 0;
}

bool QuadSurd::operator==(const QuadSurd& o) const {
    // Rational parts agree, irrational parts agree (same sign of 1/Q and
    // same square class of D scaled by Q^2).
    if (sgn(q_) != sgn(o.q_)) return false;
    if (p_ * o.q_ != o.p_ * q_) return false;
    return d_ * o.q_ * o.q_ == o.d_ * q_ * q_;
}

QuadSurd QuadSurd::mul(const QuadSurd& o) const {
    mpz_class prod = d_ * o.d_;
    if (!is_perfect_square(prod))
        throw Error("different_field", "product of surds from different quadratic fields");
    mpz_class g = isqrt(prod);  // sqrt(D1) * sqrt(D2)
    // Rewrite o over sqrt(D1): o = (P2 D1 + g sqrt(D1)) / (Q2 D1).
    mpz_class U = d_ * (p_ * o.p_ + g);
    mpz_class V = p_ * g + o.p_ * d_;  // coefficient of sqrt(D1)
    mpz_class W = q_ * o.q_ * d_;
    if (sgn(V) == 0) throw Error("rational_result", "product of surds is rational");
    return with_coefficient(U, V, d_, W);
}

mpq_class QuadSurd::norm() const {
    mpq_class r(p_ * p_ - d_, q_ * q_);
    r.canonicalize();
    return r;
}

double QuadSurd::to_double() const {
    return (p_.get_d() + std::sqrt(d_.get_d())) / q_.get_d();
}

QuadSurd mobius_apply(const IntMatrix2& g, const QuadSurd& x) {
    mpz_class det = g.det();
    if (det != 1 && det != -1)
        throw Error("not_unimodular", "mobius_apply requires determinant +-1");
    // With x = (P + sqrt(D))/Q normalized, g.x = (U + det*Q*sqrt(D))/N where
    // Q | U and Q | N, so the result keeps the same D.
    mpz_class ap = g.a * x.p() + g.b * x.q();
    mpz_class cp = g.c * x.p() + g.d * x.q();
    mpz_class U = ap * cp - g.a * g.c * x.d();
    mpz_class N = cp * cp - g.c * g.c * x.d();
    mpz_class P = det * (U / x.q());
    mpz_class Q = det * (N / x.q());
    return QuadSurd(std::move(P), std::move(Q), x.d());
}

QuadSurd cf_shift(const QuadSurd& x) {
    mpz_class a = x.floor();
    mpz_class P = a * x.q() - x.p();
    mpz_class Q = (x.d() - P * P) / x.q();
    return QuadSurd(std::move(P), std::move(Q), x.d());
}

CFExpansion cf_expand(const QuadSurd& x, std::size_t max_steps) {
    std::vector<mpz_class> digits;
    std::map<std::pair<mpz_class, mpz_class>, std::size_t> seen;
    mpz_class P = x.p(), Q = x.q();
    const mpz_class& D = x.d();
    mpz_class s = isqrt(D);
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto [it, fresh] = seen.emplace(std::make_pair(P, Q), i);
        if (!fresh) {
            std::size_t start = it->second;
            CFExpansion e;
            e.preperiod.assign(digits.begin(), digits.begin() + start);
            e.period.assign(digits.begin() + start, digits.end());
            // State-cycle detection already yields a primitive period and a
            // minimal preperiod; the divisor check below is a cheap guard.
            std::size_t L = e.period.size();
            for (std::size_t l = 1; l <= L / 2; ++l) {
                if (L % l != 0) continue;
                bool rep = true;
                for (std::size_t j = l; j < L && rep; ++j)
                    rep = (e.period[j] == e.period[j % l]);
                if (rep) {
                    e.period.resize(l);
                    break;
                }
            }
            assert(e.preperiod.empty() || e.preperiod.back() != e.period.back());
            return e;
        }
        mpz_class t = P + s;
        mpz_class a = sgn(Q) > 0 ? fdiv(t, Q) : mpz_class(-fdiv(t, -Q) - 1);
        digits.push_back(a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    throw Error("limit_exceeded", "cf_expand exceeded the step limit");
}

IntMatrix2 digit_matrix(const mpz_class& a) { return {a, 1, 1, 0}; }

IntMatrix2 cf_to_matrix(const std::vector<mpz_class>& digits) {
    if (digits.empty()) throw Error("invalid_digit", "digit list must be nonempty");
    IntMatrix2 m = IntMatrix2::identity();
    for (const mpz_class& a : digits) {
        if (sgn(a) <= 0) throw Error("invalid_digit", "partial quotients must be positive");
        m = m * digit_matrix(a);
    }
    return m;
}

QuadSurd cf_eval(const CFExpansion& e) {
    if (e.period.empty()) throw Error("invalid_digit", "period must be nonempty");
    for (const mpz_class& a : e.period)
        if (sgn(a) <= 0) throw Error("invalid_digit", "period digits must be positive");
    for (std::size_t i = 1; i < e.preperiod.size(); ++i)
        if (sgn(e.preperiod[i]) <= 0)
            throw Error("invalid_digit", "preperiod digits after the first must be positive");

    // Purely periodic value: fixed point of the period's digit product.
    IntMatrix2 m = cf_to_matrix(e.period);
    mpz_class disc = m.trace() * m.trace() - 4 * m.det();
    QuadSurd y(m.a - m.d, 2 * m.c, disc);
    if (e.preperiod.empty()) return y;

    IntMatrix2 pre = IntMatrix2::identity();
    for (const mpz_class& a : e.preperiod) pre = pre * digit_matrix(a);
    return mobius_apply(pre, y);
}

}  // namespace modsurf
