#include <doctest.h>

#include <cmath>

#include "modsurf/geodesics.hpp"
#include "oracles.hpp"

using namespace modsurf;

namespace {
Form form(long a, long b, long c) { return Form(mpz_class(a), mpz_class(b), mpz_class(c)); }

IntMatrix2 mat(long a, long b, long c, long d) { return {mpz_class(a), mpz_class(b), mpz_class(c), mpz_class(d)}; }
HyperbolicMatrix hyp(long a, long b, long c, long d) { return HyperbolicMatrix{mat(a, b, c, d)}; }

const HyperbolicMatrix kM = hyp(12, 5, -5, -2);
const HyperbolicMatrix kMTilde = hyp(7, 5, 4, 3);

std::vector<mpz_class> digits(std::initializer_list<long> v) {
    return std::vector<mpz_class>(v.begin(), v.end());
}
}  // namespace

TEST_CASE("hyperbolic matrix validation") {
    CHECK_THROWS_AS(hyp(1, 1, 0, 1), Error);   // parabolic
    CHECK_THROWS_AS(hyp(0, -1, 1, 0), Error);  // elliptic
    CHECK_THROWS_AS(hyp(2, 0, 0, 2), Error);   // det 4
    // trace normalized positive
    HyperbolicMatrix neg = hyp(-12, -5, 5, 2);
    CHECK(neg.m() == mat(12, 5, -5, -2));
}

TEST_CASE("expanding eigenvalue") {
    CHECK(expanding_eigenvalue(kM) == QuadSurd::with_coefficient(5, 2, 6, 1));
    CHECK(expanding_eigenvalue(kMTilde) == QuadSurd::with_coefficient(5, 2, 6, 1));
    CHECK(expanding_eigenvalue(hyp(2, 1, 1, 1)) == QuadSurd(3, 2, 5));
    CHECK(geodesic_length(kM) == doctest::Approx(4.5848633).epsilon(1e-6));
}

TEST_CASE("visual point") {
    CHECK(visual_point(kM) == QuadSurd::with_coefficient(-7, -2, 6, 5));
    CHECK(visual_point(kMTilde) == QuadSurd(1, 2, 6));
    CHECK(visual_point(hyp(2, 1, 1, 1)) == QuadSurd(1, 2, 5));
    CHECK_THROWS_AS(hyp(3, 1, 0, 0), Error);  // det 0

    // Fixed point property.
    QuadSurd a = visual_point(kM);
    CHECK(mobius_apply(kM.m(), a) == a);

    // Backwards flow: the conjugate is the visual point of the inverse.
    CHECK(visual_point(HyperbolicMatrix{kM.m().inverse()}) ==
          visual_point(kM).galois_conjugate());
}

TEST_CASE("frame") {
    Frame fr = frame(kM);
    CHECK(fr.x == mpq_class(-7, 5));
    CHECK(fr.y_squared == mpq_class(24, 25));
    CHECK(fr.zeta_sign == -1);
    CHECK(fr.z.real() == doctest::Approx(-1.4).epsilon(1e-12));
    CHECK(fr.z.imag() == doctest::Approx(2.0 * std::sqrt(6.0) / 5.0).epsilon(1e-12));
    CHECK(fr.zeta == doctest::Approx(-2.0 * std::sqrt(6.0) / 5.0).epsilon(1e-12));

    // det g = 1 and g^{-1} M g = diag(lambda, 1/lambda), numerically.
    double det = fr.g[0][0] * fr.g[1][1] - fr.g[0][1] * fr.g[1][0];
    CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
    double lambda = expanding_eigenvalue(kM).to_double();
    // M g = g diag(lambda, 1/lambda)
    double m00 = 12, m01 = 5, m10 = -5, m11 = -2;
    CHECK(m00 * fr.g[0][0] + m01 * fr.g[1][0] ==
          doctest::Approx(lambda * fr.g[0][0]).epsilon(1e-9));
    CHECK(m10 * fr.g[0][0] + m11 * fr.g[1][0] ==
          doctest::Approx(lambda * fr.g[1][0]).epsilon(1e-9));
    CHECK(m00 * fr.g[0][1] + m01 * fr.g[1][1] ==
          doctest::Approx(fr.g[0][1] / lambda).epsilon(1e-9));

    Frame f2 = frame(hyp(2, 1, 1, 1));
    double det2 = f2.g[0][0] * f2.g[1][1] - f2.g[0][1] * f2.g[1][0];
    CHECK(det2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matrix_to_form") {
    CHECK(matrix_to_form(kMTilde) == form(4, -4, -5));
    CHECK(matrix_to_form(kM) == form(-5, -14, -5));
    CHECK(discriminant(matrix_to_form(kM)) == 96);
    CHECK(matrix_to_form(hyp(11, 9, 6, 5)) == form(2, -2, -3));
}

TEST_CASE("form_to_matrix both routes") {
    CHECK(form_to_matrix_pell(form(2, -2, -3)).m() == mat(11, 9, 6, 5));
    CHECK(form_to_matrix_pell(form(1, -1, -1)).m() == mat(2, 1, 1, 1));
    // The two D=1337 classes give transposed matrices with the displayed
    // entries; [4,-35,-7] carries b = 523561808 per M = ((t-Bs)/2, -Cs; As, ...).
    HyperbolicMatrix m1337 = form_to_matrix_pell(form(4, -35, -7));
    CHECK(m1337.m().a == mpz_class("2676336167"));
    CHECK(m1337.m().b == mpz_class("523561808"));
    CHECK(m1337.m().c == mpz_class("299178176"));
    CHECK(m1337.m().d == mpz_class("58527127"));
    // The partner class corresponds to the transpose.
    HyperbolicMatrix m2 = form_to_matrix_pell(form(7, -35, -4));
    CHECK(m2.m().a == m1337.m().a);
    CHECK(m2.m().b == m1337.m().c);
    CHECK(m2.m().c == m1337.m().b);
    CHECK(m2.m().d == m1337.m().d);

    CHECK(form_to_matrix_cf(form(2, -2, -3)).m() == mat(11, 9, 6, 5));
    CHECK(form_to_matrix_cf(form(1, -1, -1)).m() == mat(2, 1, 1, 1));
    CHECK(form_to_matrix_cf(form(4, -4, -5)).m() == mat(7, 5, 4, 3));
    CHECK(form_to_matrix_cf(form(4, -35, -7)).m().trace() == m1337.m().trace());

    // Round trip is the identity on forms.
    for (auto f : {form(2, -2, -3), form(7, -35, -4), form(1, -1, -1), form(4, -4, -5)})
        CHECK(matrix_to_form(form_to_matrix_pell(f)) == f);
}

TEST_CASE("reduce_matrix") {
    auto [red, gamma] = reduce_matrix(kM);
    CHECK(red.m() == mat(7, 5, 4, 3));
    CHECK(gamma == mat(2, 5, -3, -7));
    CHECK(gamma * kM.m() * gamma.inverse() == red.m());

    auto [red2, gamma2] = reduce_matrix(kMTilde);
    CHECK(red2.m() == kMTilde.m());
    CHECK(gamma2 == IntMatrix2::identity());

    auto [red3, gamma3] = reduce_matrix(hyp(11, 9, 6, 5));
    CHECK(red3.m() == mat(11, 9, 6, 5));
}

TEST_CASE("fold") {
    auto f1 = fold({5.0, 1.0});
    CHECK(f1.z.real() == doctest::Approx(0.0));
    CHECK(f1.z.imag() == doctest::Approx(1.0));
    CHECK(f1.g == mat(1, -5, 0, 1));
    REQUIRE(f1.word.size() == 1);
    CHECK(f1.word[0] == -5);

    auto f2 = fold({0.1, 2.0});
    CHECK(f2.g == IntMatrix2::identity());
    CHECK(f2.word.empty());

    // The frame base point of M folds inside F with first move T.
    Frame fr = frame(kM);
    auto f3 = fold(fr.z);
    REQUIRE(!f3.word.empty());
    CHECK(f3.word[0] == 1);  // T^1
    CHECK(std::abs(f3.z.real()) <= 0.5 + 1e-12);
    CHECK(std::norm(f3.z) >= 1.0 - 1e-12);

    // Applying the returned word reproduces z'.
    std::complex<double> z{0.37, 0.11};
    auto f4 = fold(z);
    std::complex<double> w = z;
    for (long step : f4.word) {
        if (step == 0)
            w = -1.0 / w;
        else
            w += static_cast<double>(step);
    }
    CHECK(std::abs(w - f4.z) < 1e-9);
}

TEST_CASE("cutting sequence of the worked example") {
    CuttingSequence cs = cutting_sequence(kM, 9);
    std::vector<Letter> expect = {Letter::T,    Letter::S, Letter::TInv,
                                  Letter::TInv, Letter::S, Letter::T,
                                  Letter::S,    Letter::TInv, Letter::S};
    CHECK(cs.letters == expect);
    CHECK(letters_to_string(cs.letters) == "T S T- T- S T S T- S");
    CHECK(cs.runs == std::vector<unsigned long>{1, 2, 1, 1});

    // M~ = (7 5; 4 3): runs over a period are a rotation of [1,1,2,1].
    CuttingSequence ct = cutting_sequence(kMTilde, 10);
    REQUIRE(ct.runs.size() >= 4);
    std::vector<unsigned long> r4(ct.runs.begin(), ct.runs.begin() + 4);
    bool is_rot = false;
    std::vector<unsigned long> target = {1, 1, 2, 1};
    for (int k = 0; k < 4; ++k) {
        std::vector<unsigned long> rot(target.begin() + k, target.end());
        rot.insert(rot.end(), target.begin(), target.begin() + k);
        if (rot == r4) is_rot = true;
    }
    CHECK(is_rot);
}

TEST_CASE("degenerate hit is reported") {
    // [(2)] = 1+sqrt(2): the geodesic passes through the elliptic point i.
    Form f(1, -2, -1);
    HyperbolicMatrix m = form_to_matrix_cf(f);
    CHECK_THROWS_WITH_AS(cutting_sequence(m, 20),
                         doctest::Contains("elliptic point"), Error);
}

TEST_CASE("sampling stays in the fundamental domain") {
    ClassSampling s = sample_class(5, 0.01);
    REQUIRE(s.samples.size() == 1);
    REQUIRE(!s.samples[0].points.empty());
    double ymax = 0;
    for (auto& [x, y] : s.samples[0].points) {
        CHECK(std::abs(x) <= 0.5 + 1e-9);
        CHECK(x * x + y * y >= 1.0 - 1e-9);
        ymax = std::max(ymax, y);
    }
    CHECK(ymax < 2.0);  // the D=5 geodesic is low-lying

    // Sample count matches one period.
    double ell = 2.0 * std::log(unit(5).to_double());
    CHECK(s.samples[0].points.size() == doctest::Approx(ell / 0.01).epsilon(0.01));

    // Consecutive samples are one step apart in hyperbolic distance.
    auto& pts = s.samples[0].points;
    for (std::size_t i = 1; i < std::min<std::size_t>(pts.size(), 40); ++i) {
        auto [x0, y0] = pts[i - 1];
        auto [x1, y1] = pts[i];
        double dx = x1 - x0, dy = y1 - y0;
        double cosh_d = 1.0 + (dx * dx + dy * dy) / (2.0 * y0 * y1);
        double dist = std::acosh(cosh_d);
        // Wall crossings teleport the representative, so only check the
        // continuous steps.
        if (dist < 0.1) CHECK(dist == doctest::Approx(0.01).epsilon(1e-4));
    }
}

TEST_CASE("unoriented pairing") {
    CHECK(unoriented_geodesic_count(class_group(1337)) == 1);
    CHECK(unoriented_geodesic_count(class_group(1365)) == 4);
    CHECK(unoriented_geodesic_count(class_group(5)) == 1);
}

TEST_CASE("duke statistic basics") {
    CHECK(normalized_hyperbolic_area({0, 0, 1.2, 2.0}) == 0.0);
    CHECK(fundamental_domain_volume() == doctest::Approx(3.14159265358979 / 3).epsilon(1e-9));

    // Rectangle fully inside F: closed form (x2-x1)(1/y1-1/y2)/vol.
    double a = normalized_hyperbolic_area({-0.5, 0.5, 1.2, 2.0});
    CHECK(a == doctest::Approx((1.0 / 1.2 - 0.5) / fundamental_domain_volume()).epsilon(1e-6));
    double quad = oracles::rect_hyperbolic_area_quadrature(-0.5, 0.5, 1.2, 2.0);
    CHECK(a == doctest::Approx(quad / fundamental_domain_volume()).epsilon(1e-4));

    // Truncated full domain approaches measure 1.
    double full = normalized_hyperbolic_area({-0.5, 0.5, 0.0, 300.0});
    CHECK(full == doctest::Approx(1.0).epsilon(1e-2));

    ClassSampling s = sample_class(1365, 0.01);
    double stat = duke_statistic(s, {-0.5, 0.5, 1.2, 2.0});
    double area = normalized_hyperbolic_area({-0.5, 0.5, 1.2, 2.0});
    CHECK(stat > 0.5 * area);
    CHECK(stat < 1.5 * area);

    // Empty region.
    CHECK(duke_statistic(s, {0.2, 0.2, 1.2, 1.2}) == 0.0);

    // The whole domain truncated far up catches every sample.
    CHECK(duke_statistic(s, {-0.5, 0.5, 0.0, 1e9}) == 1.0);

    // Samples respect the domain walls at every class of 1365.
    for (const GeodesicSample& gs : s.samples)
        for (auto& [x, y] : gs.points) {
            CHECK(std::abs(x) <= 0.5 + 1e-9);
            CHECK(x * x + y * y >= 1.0 - 1e-9);
        }
}
