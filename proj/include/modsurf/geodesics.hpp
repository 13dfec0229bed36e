// Hyperbolic matrices as closed geodesics on the modular surface: eigendata,
// visual points, the correspondence with form classes, reduction, cutting
// sequences, and fundamental-domain sampling.
//
// Algebraic maps are exact (integer/surd); only the frame, folding and
// sampling use floating point, at the stated tolerances.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "modsurf/forms.hpp"
#include "modsurf/pell.hpp"

namespace modsurf {

// Integer 2x2, det 1, |trace| > 2, stored with trace > 0 (PSL2 convention).
class HyperbolicMatrix {
public:
    explicit HyperbolicMatrix(IntMatrix2 m);
    const IntMatrix2& m() const noexcept { return m_; }
    bool operator==(const HyperbolicMatrix&) const = default;

private:
    IntMatrix2 m_;
};

// lambda = (tr M + sqrt(tr^2 M - 4)) / 2 > 1, exact.
QuadSurd expanding_eigenvalue(const HyperbolicMatrix& M);

// l = 2 log lambda.
double geodesic_length(const HyperbolicMatrix& M);

// Attracting fixed point (a - d + sqrt(tr^2 - 4)) / (2c); throws
// parabolic_axis when c = 0.
QuadSurd visual_point(const HyperbolicMatrix& M);

// Eigenvector frame g with det 1 and g^{-1} M g = diag(lambda, 1/lambda),
// plus the base tangent data under g <-> g(i, up).  The base point is the
// apex of the geodesic semicircle, so x and y^2 are exact rationals and the
// tangent is horizontal: zeta = zeta_sign * y.
struct Frame {
    std::array<std::array<double, 2>, 2> g;
    std::complex<double> z;
    double zeta;
    mpq_class x;          // (a - d) / (2c)
    mpq_class y_squared;  // (tr^2 - 4) / (4 c^2)
    int zeta_sign;        // sign of c
};
Frame frame(const HyperbolicMatrix& M);

// sgn(tr M)/s * [c, d-a, -b] with s = gcd(c, d-a, b); primitive, constant
// on +-M, discriminant (tr^2 M - 4) / s^2.
Form matrix_to_form(const HyperbolicMatrix& M);

// Inverse correspondences: via the Pell solution, and via the CF period of
// the root (odd periods squared).  Same conjugacy class, equal traces.
HyperbolicMatrix form_to_matrix_pell(const Form& f);
HyperbolicMatrix form_to_matrix_cf(const Form& f);

// Conjugate M~ = gamma M gamma^{-1} with reduced visual point, by eating an
// even number of CF digits; gamma has det 1.
std::pair<HyperbolicMatrix, IntMatrix2> reduce_matrix(const HyperbolicMatrix& M);

// Fold z into the standard fundamental domain.  word entries: n -> T^n
// applied, 0 -> S applied; g is their product, z_out = g . z_in.
struct FoldResult {
    std::complex<double> z;
    IntMatrix2 g;
    std::vector<long> word;
};
FoldResult fold(std::complex<double> z, double tol = 1e-12);

enum class Letter { T, TInv, S };

// Letters as "T S T- T- S ..." per the CLI format.
std::string letters_to_string(const std::vector<Letter>& letters);

struct CuttingSequence {
    std::vector<Letter> letters;
    std::vector<unsigned long> runs;  // run lengths of T/T- blocks
};

// First n letters of the periodic cutting sequence, traced numerically from
// the frame base point.  Near-corner passes throw degenerate_hit rather than
// guessing a wall.  The run compression codes the CF period of the visual
// point up to the rewriting T^b S T^{+-1} S T^c -> T^{b+1} S T^{c+1} that
// (ST)^3 = 1 forces when a unit excursion passes the far side of the corner.
CuttingSequence cutting_sequence(const HyperbolicMatrix& M, std::size_t n_letters,
                                 double tol = 1e-9);

struct GeodesicSample {
    std::vector<std::pair<double, double>> points;  // folded, |x|<=1/2, x^2+y^2>=1
    double step;
};

// One sample run per class of discriminant D, at arclength spacing step over
// one full period.  Keyed in class_group(D) listing order.
struct ClassSampling {
    ClassGroupListing listing;
    std::vector<GeodesicSample> samples;
};
ClassSampling sample_class(const mpz_class& D, double step, unsigned workers = 0);

struct Rect {
    double x1, x2, y1, y2;
};

// Average fraction of geodesic time spent in rect (clipped to the
// fundamental domain), averaged over the classes of D.
double duke_statistic(const mpz_class& D, const Rect& region, double step = 0.01);
double duke_statistic(const ClassSampling& sampling, const Rect& region);

// Hyperbolic area of rect clipped to the fundamental domain, divided by
// vol(F).  Both integrals are numeric.
double normalized_hyperbolic_area(const Rect& region);
double fundamental_domain_volume();

// Number of distinct unoriented curves among the classes: orientation pairs
// are detected by CF-word reversal up to rotation.
std::size_t unoriented_geodesic_count(const ClassGroupListing& listing);

}  // namespace modsurf
