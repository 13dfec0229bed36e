#include "modsurf/geodesics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace modsurf {

HyperbolicMatrix::HyperbolicMatrix(IntMatrix2 m) : m_(std::move(m)) {
    if (m_.det() != 1)
        throw Error("not_hyperbolic", "hyperbolic matrices have determinant 1");
    mpz_class tr = m_.trace();
    if (abs(tr) <= 2)
        throw Error("not_hyperbolic", "hyperbolic matrices have |trace| > 2");
    if (sgn(tr) < 0) {
        m_.a = -m_.a;
        m_.b = -m_.b;
        m_.c = -m_.c;
        m_.d = -m_.d;
    }
}

QuadSurd expanding_eigenvalue(const HyperbolicMatrix& M) {
    mpz_class tr = M.m().trace();
    return QuadSurd(tr, 2, tr * tr - 4);
}

double geodesic_length(const HyperbolicMatrix& M) {
    return 2.0 * std::log(expanding_eigenvalue(M).to_double());
}

QuadSurd visual_point(const HyperbolicMatrix& M) {
    const IntMatrix2& m = M.m();
    if (m.c == 0)
        throw Error("parabolic_axis", "visual point at infinity: c = 0");
    mpz_class tr = m.trace();
    return QuadSurd(m.a - m.d, 2 * m.c, tr * tr - 4);
}

Frame frame(const HyperbolicMatrix& M) {
    const IntMatrix2& m = M.m();
    if (m.c == 0)
        throw Error("parabolic_axis", "frame undefined: c = 0");
    mpz_class tr = m.trace();
    mpz_class disc = tr * tr - 4;

    Frame fr;
    fr.x = mpq_class(m.a - m.d, 2 * m.c);
    fr.x.canonicalize();
    fr.y_squared = mpq_class(disc, 4 * m.c * m.c);
    fr.y_squared.canonicalize();
    fr.zeta_sign = sgn(m.c);

    double lambda = expanding_eigenvalue(M).to_double();
    double c = m.c.get_d(), d = m.d.get_d();
    double scale = std::pow(c * c * disc.get_d(), -0.25);
    double col1 = lambda - d, col2 = 1.0 / lambda - d;
    double s1 = fr.zeta_sign < 0 ? -1.0 : 1.0;
    fr.g = {{{s1 * col1 * scale, col2 * scale}, {s1 * c * scale, c * scale}}};

    double y = std::sqrt(fr.y_squared.get_d());
    fr.z = {fr.x.get_d(), y};
    fr.zeta = fr.zeta_sign * y;
    return fr;
}

Form matrix_to_form(const HyperbolicMatrix& M) {
    const IntMatrix2& m = M.m();
    mpz_class s = gcd(gcd(m.c, m.d - m.a), m.b);
    int sg = sgn(m.trace());  // +1 after normalization; kept for clarity on +-M
    return Form(sg * m.c / s, sg * (m.d - m.a) / s, sg * -m.b / s);
}

HyperbolicMatrix form_to_matrix_pell(const Form& f) {
    mpz_class D = discriminant(f);
    require_discriminant(D);
    if (sgn(D) < 0) throw Error("bad_discriminant", "needs an indefinite form");
    PellSolution p = solve_pell4(D);
    return HyperbolicMatrix(IntMatrix2{(p.t - f.B * p.s) / 2, -f.C * p.s,
                                       f.A * p.s, (p.t + f.B * p.s) / 2});
}

HyperbolicMatrix form_to_matrix_cf(const Form& f) {
    mpz_class D = discriminant(f);
    require_discriminant(D);
    if (sgn(D) < 0) throw Error("bad_discriminant", "needs an indefinite form");
    IndefiniteReduction rd = reduce_indefinite(f);
    IntMatrix2 m = cf_to_matrix(rd.period);
    if (rd.period.size() % 2) m = m * m;  // odd period: square to reach SL2
    IntMatrix2 back = rd.transform * m * rd.transform.inverse();
    return HyperbolicMatrix(back);
}

std::pair<HyperbolicMatrix, IntMatrix2> reduce_matrix(const HyperbolicMatrix& M) {
    QuadSurd alpha = visual_point(M);
    CFExpansion e = cf_expand(alpha);
    std::size_t k = e.preperiod.size();
    if (k % 2) ++k;
    IntMatrix2 gamma = IntMatrix2::identity();
    for (std::size_t i = 0; i < k; ++i) {
        const mpz_class& a = i < e.preperiod.size()
                                 ? e.preperiod[i]
                                 : e.period[(i - e.preperiod.size()) % e.period.size()];
        gamma = IntMatrix2{0, 1, 1, -a} * gamma;
    }
    IntMatrix2 conj = gamma * M.m() * gamma.inverse();
    HyperbolicMatrix reduced{conj};
    assert(visual_point(reduced).is_reduced());
    return {reduced, gamma};
}

FoldResult fold(std::complex<double> z, double tol) {
    if (!(z.imag() > 0)) throw Error("bad_argument", "fold needs Im z > 0");
    if (!(std::abs(z.real()) < 1e15))
        throw Error("bad_argument", "fold input out of range");
    FoldResult res{z, IntMatrix2::identity(), {}};
    for (int iter = 0; iter < 1000000; ++iter) {
        double x = res.z.real();
        if (x < -0.5 - tol || x > 0.5 + tol) {
            long k = static_cast<long>(std::floor(x + 0.5));
            res.z -= static_cast<double>(k);
            res.g = IntMatrix2{1, -k, 0, 1} * res.g;
            res.word.push_back(-k);
            continue;
        }
        if (std::norm(res.z) < 1.0 - tol) {
            res.z = -1.0 / res.z;
            res.g = IntMatrix2{0, -1, 1, 0} * res.g;
            res.word.push_back(0);
            continue;
        }
        return res;
    }
    throw Error("limit_exceeded", "fold did not terminate");
}

std::string letters_to_string(const std::vector<Letter>& letters) {
    std::ostringstream os;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ' ';
        os << (letters[i] == Letter::T ? "T" : letters[i] == Letter::TInv ? "T-" : "S");
    }
    return os.str();
}

namespace {

constexpr double kCornerY = 0.8660254037844386;  // sqrt(3)/2

// Walks the geodesic from repelling endpoint u to attracting endpoint v
// through the fundamental domain.  Endpoints are exact; the position is
// tracked in doubles and refreshed from crossing geometry at every wall.
class GeodesicWalker {
public:
    GeodesicWalker(QuadSurd u, QuadSurd v, double tol, bool lenient)
        : u_(std::move(u)), v_(std::move(v)), tol_(tol), lenient_(lenient) {
        double m = (u_.to_double() + v_.to_double()) / 2.0;
        double r = std::abs(v_.to_double() - u_.to_double()) / 2.0;
        FoldResult f = fold({m, r});
        u_ = mobius_apply(f.g, u_);
        v_ = mobius_apply(f.g, v_);
        x_ = f.z.real();
        y_ = f.z.imag();
        // A start exactly on a wall moving outward has no forward crossing;
        // treat the wall transform as part of the folding.
        for (int guard = 0; guard < 4; ++guard) {
            double vd = v_.to_double(), ud = u_.to_double();
            double mm = (ud + vd) / 2.0, rr = std::abs(vd - ud) / 2.0;
            int dir = vd > x_ ? 1 : -1;
            double xp = x_ + dir * 1e-9;
            double yp2 = rr * rr - (xp - mm) * (xp - mm);
            if (yp2 <= 0) break;
            double yp = std::sqrt(yp2);
            if (xp < -0.5)
                apply({x_, y_, Letter::T});
            else if (xp > 0.5)
                apply({x_, y_, Letter::TInv});
            else if (xp * xp + yp * yp < 1.0)
                apply({x_, y_, Letter::S});
            else
                break;
        }
    }

    double x() const { return x_; }
    double y() const { return y_; }
    double center() const { return (u_.to_double() + v_.to_double()) / 2.0; }
    double radius() const { return std::abs(v_.to_double() - u_.to_double()) / 2.0; }

    struct Crossing {
        double x, y;
        Letter letter;
    };

    Crossing next_crossing() const {
        double ud = u_.to_double(), vd = v_.to_double();
        double m = (ud + vd) / 2.0, r = std::abs(vd - ud) / 2.0;
        int dir = vd > x_ ? 1 : -1;

        struct Cand {
            double dist, x, y;
            Letter letter;
        };
        std::vector<Cand> cands;
        auto add_wall = [&](double wx, Letter L) {
            double yy = r * r - (wx - m) * (wx - m);
            if (yy <= 0) return;
            double dist = (wx - x_) * dir;
            if (dist > tol_ * 0.001 && (vd - wx) * dir > 0)
                cands.push_back({dist, wx, std::sqrt(yy), L});
        };
        add_wall(-0.5, Letter::T);
        add_wall(0.5, Letter::TInv);
        double sum = ud + vd;
        if (sum != 0.0) {
            double xc = (1.0 + ud * vd) / sum;
            double yc2 = 1.0 - xc * xc;
            double on_geo = r * r - (xc - m) * (xc - m);
            if (yc2 > 0 && on_geo > 0) {
                double dist = (xc - x_) * dir;
                if (dist > tol_ * 0.001 && (vd - xc) * dir > 0)
                    cands.push_back({dist, xc, std::sqrt(yc2), Letter::S});
            }
        }
        if (cands.empty())
            throw Error("numerical", "geodesic walk found no forward wall crossing");
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.dist < b.dist; });

        const Cand* chosen = &cands.front();
        bool tie = cands.size() >= 2 && cands[1].dist - chosen->dist < tol_;
        if (!lenient_) {
            if (tie)
                throw Error("degenerate_hit",
                            "trajectory passes within tolerance of a corner; "
                            "retry from a start point perturbed by 1e-6");
            for (double cx : {-0.5, 0.5}) {
                double dx = chosen->x - cx, dy = chosen->y - kCornerY;
                if (dx * dx + dy * dy < tol_ * tol_)
                    throw Error("degenerate_hit",
                                "trajectory passes within tolerance of a corner; "
                                "retry from a start point perturbed by 1e-6");
            }
            if (chosen->letter == Letter::S && std::abs(chosen->x) < tol_)
                throw Error("degenerate_hit",
                            "trajectory passes within tolerance of the elliptic point i; "
                            "retry from a start point perturbed by 1e-6");
        } else if (tie) {
            // Resolve the corner by probing slightly past the crossing and
            // keeping the wall whose image continues inside F.
            for (const Cand& cand : cands) {
                if (cand.dist - cands.front().dist >= tol_) break;
                double xp = cand.x + dir * 1e-7;
                double yp2 = r * r - (xp - m) * (xp - m);
                if (yp2 <= 0) continue;
                double yp = std::sqrt(yp2);
                double ix = xp, iy = yp;
                if (cand.letter == Letter::T) ix += 1.0;
                if (cand.letter == Letter::TInv) ix -= 1.0;
                if (cand.letter == Letter::S) {
                    double n2 = xp * xp + yp * yp;
                    ix = -xp / n2;
                    iy = yp / n2;
                }
                if (std::abs(ix) <= 0.5 + 1e-9 && ix * ix + iy * iy >= 1.0 - 1e-9) {
                    chosen = &cand;
                    break;
                }
            }
        }
        return {chosen->x, chosen->y, chosen->letter};
    }

    void apply(const Crossing& c) {
        switch (c.letter) {
            case Letter::T:
                u_ = mobius_apply(IntMatrix2{1, 1, 0, 1}, u_);
                v_ = mobius_apply(IntMatrix2{1, 1, 0, 1}, v_);
                x_ = c.x + 1.0;
                y_ = c.y;
                break;
            case Letter::TInv:
                u_ = mobius_apply(IntMatrix2{1, -1, 0, 1}, u_);
                v_ = mobius_apply(IntMatrix2{1, -1, 0, 1}, v_);
                x_ = c.x - 1.0;
                y_ = c.y;
                break;
            case Letter::S: {
                u_ = mobius_apply(IntMatrix2{0, -1, 1, 0}, u_);
                v_ = mobius_apply(IntMatrix2{0, -1, 1, 0}, v_);
                double n2 = c.x * c.x + c.y * c.y;
                x_ = -c.x / n2;
                y_ = c.y / n2;
                break;
            }
        }
    }

private:
    QuadSurd u_, v_;
    double tol_;
    bool lenient_;
    double x_ = 0, y_ = 1;
};

// Arclength coordinate along the upper semicircle centered at m.
double arc_sigma(double m, double x, double y) {
    double theta = std::atan2(y, x - m);
    return std::log(std::tan(theta / 2.0));
}

}  // namespace

CuttingSequence cutting_sequence(const HyperbolicMatrix& M, std::size_t n_letters, double tol) {
    QuadSurd alpha = visual_point(M);
    GeodesicWalker walker(alpha.galois_conjugate(), alpha, tol, /*lenient=*/false);

    CuttingSequence cs;
    for (std::size_t i = 0; i < n_letters; ++i) {
        auto c = walker.next_crossing();
        if (!cs.letters.empty() && cs.letters.back() == Letter::S && c.letter == Letter::S)
            throw Error("numerical", "two consecutive S letters");
        cs.letters.push_back(c.letter);
        walker.apply(c);
    }
    unsigned long run = 0;
    for (Letter L : cs.letters) {
        if (L == Letter::S) {
            if (run) cs.runs.push_back(run);
            run = 0;
        } else {
            ++run;
        }
    }
    if (run) cs.runs.push_back(run);
    return cs;
}

namespace {

GeodesicSample sample_one_class(const Form& rep, double ell, double step) {
    QuadSurd alpha = root(rep);
    GeodesicSample out;
    out.step = step;
    GeodesicWalker walker(alpha.galois_conjugate(), alpha, 1e-9, /*lenient=*/true);
    double remaining = ell;
    double phase = 0;  // distance from current position to the next sample
    while (remaining > 0) {
        auto c = walker.next_crossing();
        double m = walker.center(), r = walker.radius();
        double s0 = arc_sigma(m, walker.x(), walker.y());
        double s1 = arc_sigma(m, c.x, c.y);
        double seg = std::abs(s1 - s0);
        double dirs = s1 > s0 ? 1.0 : -1.0;
        double limit = std::min(seg, remaining);
        while (phase < limit) {
            double sig = s0 + dirs * phase;
            double theta = 2.0 * std::atan(std::exp(sig));
            out.points.emplace_back(m + r * std::cos(theta), r * std::sin(theta));
            phase += step;
        }
        phase -= limit;
        remaining -= limit;
        if (remaining <= 0) break;
        walker.apply(c);
    }
    return out;
}

}  // namespace

ClassSampling sample_class(const mpz_class& D, double step, unsigned workers) {
    if (!(step > 0)) throw Error("bad_argument", "step must be positive");
    ClassSampling out{class_group(D), {}};
    if (sgn(D) < 0) throw Error("bad_discriminant", "sampling needs an indefinite discriminant");
    double ell = 2.0 * std::log(unit(D).to_double());

    std::size_t n = out.listing.classes.size();
    out.samples.resize(n);
    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            out.samples[i] = sample_one_class(out.listing.classes[i].rep, ell, step);
        return out;
    }
    std::vector<std::future<GeodesicSample>> futs;
    futs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        futs.push_back(std::async(std::launch::async, [&, i] {
            return sample_one_class(out.listing.classes[i].rep, ell, step);
        }));
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = futs[i].get();
    return out;
}

double duke_statistic(const ClassSampling& sampling, const Rect& region) {
    if (sampling.samples.empty()) return 0;
    double acc = 0;
    for (const GeodesicSample& gs : sampling.samples) {
        if (gs.points.empty()) continue;
        std::size_t inside = 0;
        for (auto& [x, y] : gs.points)
            if (x >= region.x1 && x <= region.x2 && y >= region.y1 && y <= region.y2) ++inside;
        acc += static_cast<double>(inside) / gs.points.size();
    }
    return acc / sampling.samples.size();
}

double duke_statistic(const mpz_class& D, const Rect& region, double step) {
    return duke_statistic(sample_class(D, step), region);
}

namespace {

// Simpson rule on [a, b].
template <class F>
double simpson(F f, double a, double b, int n) {
    if (b <= a) return 0;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

double fundamental_domain_volume() {
    // integral over F of dx dy / y^2 = integral of dx / sqrt(1 - x^2),
    // evaluated numerically once and cached.
    static const double vol = simpson(
        [](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -0.5, 0.5, 100000);
    return vol;
}

double normalized_hyperbolic_area(const Rect& region) {
    double x1 = std::max(region.x1, -0.5), x2 = std::min(region.x2, 0.5);
    if (x2 <= x1 || region.y2 <= region.y1) return 0;
    auto f = [&](double x) {
        double floor_y = std::sqrt(std::max(0.0, 1.0 - x * x));
        double lo = std::max(region.y1, floor_y);
        if (lo >= region.y2) return 0.0;
        return 1.0 / lo - 1.0 / region.y2;
    };
    return simpson(f, x1, x2, 100000) / fundamental_domain_volume();
}

std::size_t unoriented_geodesic_count(const ClassGroupListing& listing) {
    std::vector<std::vector<mpz_class>> seen;
    std::size_t count = 0;
    for (const FormClass& c : listing.classes) {
        const auto& w = c.period;
        // Bracelet canonical form: least among rotations and reversed rotations.
        std::vector<mpz_class> best = w;
        std::vector<mpz_class> rev(w.rbegin(), w.rend());
        for (std::size_t k = 0; k < w.size(); ++k) {
            std::vector<mpz_class> r1(w.begin() + k, w.end());
            r1.insert(r1.end(), w.begin(), w.begin() + k);
            if (r1 < best) best = r1;
            std::vector<mpz_class> r2(rev.begin() + k, rev.end());
            r2.insert(r2.end(), rev.begin(), rev.begin() + k);
            if (r2 < best) best = r2;
        }
        if (std::find(seen.begin(), seen.end(), best) == seen.end()) {
            seen.push_back(best);
            ++count;
        }
    }
    return count;
}

}  // namespace modsurf
