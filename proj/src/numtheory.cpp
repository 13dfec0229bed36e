#include "modsurf/numtheory.hpp"

#include <algorithm>
#include <map>

namespace modsurf {

mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const mpz_class& n) {
    if (sgn(n) < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

mpz_class fdiv(const mpz_class& n, const mpz_class& d) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

mpz_class mod(const mpz_class& n, const mpz_class& d) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return r;
}

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

namespace {

bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Pollard-Brent rho; n odd composite, not a prime power of a small prime.
mpz_class pollard_brent(const mpz_class& n) {
    if (n % 2 == 0) return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1, q = 1, ys = 0;
        const unsigned long m = 128;
        unsigned long r = 1;
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            for (unsigned long k = 0; k < r && d == 1; k += m) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = (y * y + c) % n;
                    q = q * (x > y ? x - y : y - x) % n;
                }
                d = gcd(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            // Backtrack one step at a time.
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                d = gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
    }
}

void factor_into(const mpz_class& n, std::map<mpz_class, int>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n]++;
        return;
    }
    if (is_perfect_square(n)) {
        mpz_class r = isqrt(n);
        factor_into(r, out);
        factor_into(r, out);
        return;
    }
    mpz_class d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<mpz_class, int>> factorize(const mpz_class& n) {
    if (n == 0) throw Error("bad_argument", "factorize: n must be nonzero");
    mpz_class m = abs(n);
    std::map<mpz_class, int> acc;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            acc[mpz_class(p)]++;
            m /= p;
        }
    }
    for (unsigned long p = 17; p < 10000 && m > 1; p += 2) {
        if (mpz_class(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            acc[mpz_class(p)]++;
            m /= p;
        }
    }
    if (m > 1) factor_into(m, acc);
    return {acc.begin(), acc.end()};
}

bool is_squarefree(const mpz_class& n) {
    if (n == 0) return false;
    for (const auto& [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

std::pair<mpz_class, mpz_class> squarefree_decomposition(const mpz_class& n) {
    if (sgn(n) <= 0) throw Error("bad_argument", "squarefree_decomposition: n must be positive");
    mpz_class kernel = 1, root = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e & 1) kernel *= p;
        for (int i = 0; i < e / 2; ++i) root *= p;
    }
    return {kernel, root};
}

mpz_class squarefree_kernel(const mpz_class& n) {
    return squarefree_decomposition(n).first;
}

mpq_class euler_factor_product(const mpz_class& n) {
    if (sgn(n) <= 0) throw Error("bad_argument", "euler_factor_product: n must be positive");
    mpq_class prod = 1;
    for (const auto& [p, e] : factorize(n)) prod *= mpq_class(p - 1, p);
    prod.canonicalize();
    return prod;
}

}  // namespace modsurf
