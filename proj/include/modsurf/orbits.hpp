// The thin semigroup of even-length products of (a 1; 1 0) with digits
// a <= A: ball enumeration, growth exponents, multiplicities of linear
// functionals, admissibility mod q, bounded-quotient expansions of
// rationals, and the related searches.
//
// The ball norm is the maximum absolute entry, which on this semigroup is
// always the top-left entry; appending a generator never decreases it, so
// the enumeration tree prunes exactly.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "modsurf/surd.hpp"

namespace modsurf {

struct OrbitQuery {
    uint32_t A;  // alphabet bound, >= 1 (>= 2 for growth/admissibility)
    uint64_t X;  // ball radius in max-entry norm
};

// Entries of semigroup elements are nonnegative and bounded by X <= 2^62.
struct Mat64 {
    uint64_t a, b, c, d;
    bool operator==(const Mat64&) const = default;
};

using Word = std::vector<uint32_t>;

IntMatrix2 to_int_matrix(const Mat64& m);

// Visit every even-length word over {1..A} whose product has max entry <= X,
// exactly once, in lexicographic word order.  Serial.
void enumerate(const OrbitQuery& q, const std::function<void(const Mat64&, const Word&)>& fn);

// #(ball of radius X) for each X in grid (ascending).  Identity excluded.
std::vector<uint64_t> ball_counts(uint32_t A, const std::vector<uint64_t>& grid,
                                  unsigned workers = 0);

struct GrowthFit {
    double slope;                  // least-squares slope of log N vs log X
    std::vector<uint64_t> grid;
    std::vector<uint64_t> counts;
};

// Fit of log N(X) against log X over a geometric grid (>= 5 points).
GrowthFit growth_exponent(uint32_t A, std::vector<uint64_t> grid, unsigned workers = 0);

// F(a b; c d) = alpha a + beta b + gamma c + delta d.
struct LinearFunctional {
    int64_t alpha, beta, gamma, delta;

    LinearFunctional(int64_t al, int64_t be, int64_t ga, int64_t de);
    static LinearFunctional top_left() { return {1, 0, 0, 0}; }
    static LinearFunctional trace() { return {1, 0, 0, 1}; }

    bool bilinear_type() const { return alpha * delta - beta * gamma == 0; }
    bool is_top_left() const { return alpha == 1 && !beta && !gamma && !delta; }
    int64_t eval(const Mat64& m) const;
};

struct MultiplicityReport {
    int64_t n;
    uint64_t count;
    uint64_t X;
    bool admissible;
    std::vector<Word> witnesses;  // filled only on request
};

// mult_X(n) = #{gamma in ball : F(gamma) = n}, by filtered enumeration; the
// top-left functional prunes on the continuant directly.
MultiplicityReport multiplicity(const OrbitQuery& q, const LinearFunctional& F, int64_t n,
                                bool keep_witnesses = false, uint32_t q_bound = 60);

// n in F(semigroup) mod q for every q <= q_bound, each modulus decided
// exactly by closing the generator pair products under multiplication.
bool admissible(uint32_t A, const LinearFunctional& F, int64_t n, uint32_t q_bound = 60);

// A continued fraction b/d = [0; a1, ..., al] with all digits <= A, found by
// descending digit-first search over continuant pairs.  d = 1 yields (0, []).
std::optional<std::pair<uint64_t, Word>> zaremba_check(uint64_t d, uint32_t A);

struct ZarembaScan {
    std::vector<uint64_t> exceptions;  // d <= N with no bounded expansion
    double density;                    // fraction of d <= N with one
    // witness per d (b and digits), index d; empty digits means exception.
    std::vector<std::pair<uint64_t, Word>> witnesses;  // filled on request
};
ZarembaScan zaremba_scan(uint64_t N, uint32_t A, bool keep_witnesses = false);

struct CohenRow {
    uint64_t n;
    uint64_t mult;
    double predicted;
    double ratio;
};

// Multiplicity of the top-left functional at X = n against the predicted
// density 2 delta N(n)/n * (pi^2/6) * prod_{p|n} (1 - 1/p); the Euler factor
// is exact, delta comes from the growth fit unless supplied.
std::vector<CohenRow> cohen_ratio(uint32_t A, uint64_t n_lo, uint64_t n_hi,
                                  std::optional<double> delta = std::nullopt,
                                  unsigned workers = 0);

// Primitive cyclic words over {1..A} of length <= max_period (canonical up
// to rotation and reversal) whose fixed surd lies in Q(sqrt kernel); odd
// words are doubled to land in the determinant +1 semigroup.
struct McMullenHit {
    Word word;
    QuadSurd value;
};
std::vector<McMullenHit> mcmullen_search(uint32_t A, const mpz_class& kernel,
                                         uint32_t max_period);

}  // namespace modsurf
