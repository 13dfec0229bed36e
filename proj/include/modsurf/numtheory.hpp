// Shared integer utilities: errors, exact square roots, factorization.
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modsurf {

// Domain error with a short machine-readable code ("bad_discriminant", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// floor(sqrt(n)), n >= 0.
mpz_class isqrt(const mpz_class& n);

bool is_perfect_square(const mpz_class& n);

// Floor division (quotient rounded toward -inf), d != 0.
mpz_class fdiv(const mpz_class& n, const mpz_class& d);

// Mathematical residue in [0, |d|).
mpz_class mod(const mpz_class& n, const mpz_class& d);

mpz_class gcd(const mpz_class& a, const mpz_class& b);

// Prime factorization of |n|, n != 0, as (prime, exponent) sorted by prime.
// Trial division for small factors, Pollard-Brent rho beyond.
std::vector<std::pair<mpz_class, int>> factorize(const mpz_class& n);

bool is_squarefree(const mpz_class& n);

// n = kernel * square with kernel squarefree; returns (kernel, sqrt(square)).
// Requires n > 0.
std::pair<mpz_class, mpz_class> squarefree_decomposition(const mpz_class& n);

mpz_class squarefree_kernel(const mpz_class& n);

// prod_{p | n} (1 - 1/p) as an exact rational, n >= 1.
mpq_class euler_factor_product(const mpz_class& n);

}  // namespace modsurf
