#include "modsurf/forms.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace modsurf {

Form::Form(mpz_class A_, mpz_class B_, mpz_class C_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)) {
    if (gcd(gcd(A, B), C) != 1)
        throw Error("not_primitive", "form coefficients must be coprime");
}

bool Form::operator<(const Form& o) const {
    if (int c = cmp(A, o.A)) return c < 0;
    if (int c = cmp(B, o.B)) return c < 0;
    return cmp(C, o.C) < 0;
}

mpz_class discriminant(const Form& f) { return f.B * f.B - 4 * f.A * f.C; }

Form apply_transform(const Form& f, const IntMatrix2& g) {
    if (g.det() != 1)
        throw Error("not_proper", "strict equivalence allows determinant +1 only");
    mpz_class A = f.A * g.a * g.a + f.B * g.a * g.c + f.C * g.c * g.c;
    mpz_class B = 2 * f.A * g.a * g.b + f.B * (g.a * g.d + g.b * g.c) + 2 * f.C * g.c * g.d;
    mpz_class C = f.A * g.b * g.b + f.B * g.b * g.d + f.C * g.d * g.d;
    return Form(std::move(A), std::move(B), std::move(C));
}

QuadSurd root(const Form& f) {
    if (f.A == 0) throw Error("leading_zero", "root requires A != 0");
    mpz_class D = discriminant(f);
    if (sgn(D) <= 0 || is_perfect_square(D))
        throw Error("square_discriminant", "root requires a positive non-square discriminant");
    // (-B + sqrt(D)) / (2A); 2A | D - B^2 = -4AC, so this is normalized.
    return QuadSurd(-f.B, 2 * f.A, D);
}

void require_discriminant(const mpz_class& D) {
    mpz_class r = mod(D, 4);
    if (r != 0 && r != 1)
        throw Error("bad_discriminant", "discriminant must be 0 or 1 mod 4");
    if (sgn(D) > 0 && is_perfect_square(D))
        throw Error("bad_discriminant", "square discriminants are excluded");
    if (D == 0) throw Error("bad_discriminant", "discriminant must be nonzero");
}

std::pair<Form, IntMatrix2> reduce_definite(const Form& f) {
    if (sgn(discriminant(f)) >= 0)
        throw Error("wrong_sign", "reduce_definite requires D < 0");
    if (sgn(f.A) <= 0)
        throw Error("wrong_sign", "reduce_definite requires a positive definite form");
    Form cur = f;
    IntMatrix2 g = IntMatrix2::identity();
    const IntMatrix2 S{0, -1, 1, 0};
    for (;;) {
        // Translate B into (-A, A].
        mpz_class n = fdiv(cur.A - cur.B, 2 * cur.A);
        if (n != 0) {
            IntMatrix2 t{1, n, 0, 1};
            cur = apply_transform(cur, t);
            g = g * t;
        }
        if (cur.A > cur.C) {
            cur = apply_transform(cur, S);
            g = g * S;
            continue;
        }
        break;
    }
    // Boundary ties toward B >= 0.
    if (sgn(cur.B) < 0 && (-cur.B == cur.A || cur.A == cur.C)) {
        if (-cur.B == cur.A) {
            IntMatrix2 t{1, 1, 0, 1};
            cur = apply_transform(cur, t);
            g = g * t;
        } else {
            cur = apply_transform(cur, S);
            g = g * S;
        }
    }
    assert(apply_transform(f, g) == cur);
    return {cur, g};
}

bool is_reduced_indefinite(const Form& f) {
    mpz_class D = discriminant(f);
    if (sgn(D) <= 0 || is_perfect_square(D) || f.A == 0) return false;
    return root(f).is_reduced();
}

std::vector<Form> enumerate_reduced_indefinite(const mpz_class& D) {
    require_discriminant(D);
    if (sgn(D) < 0) throw Error("bad_discriminant", "indefinite enumeration requires D > 0");
    std::vector<Form> out;
    // Reduced: A > 0, 0 < -B < sqrt(D), (sqrt D + B)/2 < A < (sqrt D - B)/2,
    // with A a positive divisor of (D - B^2)/4.
    mpz_class s = isqrt(D);
    for (mpz_class B = -1; B >= -s; --B) {
        if (mod(B - D, 2) != 0) continue;  // need B = D mod 2
        mpz_class m = (D - B * B) / 4;     // = A * |C|
        if (sgn(m) <= 0) continue;
        for (mpz_class a = 1; a * a <= m; ++a) {
            if (m % a != 0) continue;
            mpz_class divisors[2] = {a, mpz_class(m / a)};
            int ndiv = divisors[0] == divisors[1] ? 1 : 2;
            for (int i = 0; i < ndiv; ++i) {
                const mpz_class& A = divisors[i];
                // sqrt(D) > 2A + B  and  sqrt(D) < 2A - B, exactly.
                mpz_class lo = 2 * A + B, hi = 2 * A - B;
                bool gt = sgn(lo) < 0 || lo * lo < D;
                bool lt = sgn(hi) > 0 && hi * hi > D;
                if (!gt || !lt) continue;
                mpz_class C = -(m / A);
                if (gcd(gcd(A, B), C) != 1) continue;
                out.emplace_back(A, B, C);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

IndefiniteReduction reduce_indefinite(const Form& f) {
    QuadSurd x = root(f);
    CFExpansion e = cf_expand(x);
    std::size_t k = e.preperiod.size();
    if (k % 2) ++k;  // stay inside SL2: eat an even number of digits
    IntMatrix2 G = IntMatrix2::identity();
    for (std::size_t i = 0; i < k; ++i) {
        const mpz_class& a = i < e.preperiod.size()
                                 ? e.preperiod[i]
                                 : e.period[(i - e.preperiod.size()) % e.period.size()];
        G = G * digit_matrix(a);
    }
    Form r = apply_transform(f, G);
    std::size_t rot = (k - e.preperiod.size()) % e.period.size();
    std::vector<mpz_class> word(e.period.begin() + rot, e.period.end());
    word.insert(word.end(), e.period.begin(), e.period.begin() + rot);
    assert(is_reduced_indefinite(r));
    return {r, G, word};
}

namespace {

std::vector<mpz_class> rotate_word(const std::vector<mpz_class>& w, std::size_t k) {
    std::vector<mpz_class> r(w.begin() + k, w.end());
    r.insert(r.end(), w.begin(), w.begin() + k);
    return r;
}

// Lexicographically least among rotations by an even offset.  For odd
// lengths every rotation is reachable by even steps.
std::vector<mpz_class> canonical_even_rotation(const std::vector<mpz_class>& w) {
    std::vector<mpz_class> best = w;
    std::size_t L = w.size();
    if (L > 1) {
        for (std::size_t k = 2 % L; k != 0; k = (k + 2) % L) {
            std::vector<mpz_class> cand = rotate_word(w, k);
            if (cand < best) best = cand;
        }
    }
    return best;
}

ClassGroupListing class_group_definite(const mpz_class& D) {
    ClassGroupListing out{D, {}};
    mpz_class bound = isqrt(-D / 3);
    for (mpz_class A = 1; A <= bound; ++A) {
        for (mpz_class B = -A; B <= A; ++B) {
            if (mod(B - D, 2) != 0) continue;
            mpz_class num = B * B - D;
            if (mod(num, 4 * A) != 0) continue;
            mpz_class C = num / (4 * A);
            if (A > C) continue;
            if (sgn(B) < 0 && (-B == A || A == C)) continue;  // tie toward B >= 0
            if (gcd(gcd(A, B), C) != 1) continue;
            Form f(A, B, C);
            out.classes.push_back({f, {f}, {}});
        }
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const FormClass& x, const FormClass& y) { return x.rep < y.rep; });
    return out;
}

// Representative choice: the most balanced form of the cycle, minimizing
// (max(A, |C|), A, B).
bool better_rep(const Form& x, const Form& y) {
    mpz_class mx = std::max(x.A, mpz_class(abs(x.C)));
    mpz_class my = std::max(y.A, mpz_class(abs(y.C)));
    if (int c = cmp(mx, my)) return c < 0;
    return x < y;
}

}  // namespace

ClassGroupListing class_group(const mpz_class& D) {
    require_discriminant(D);
    if (sgn(D) < 0) return class_group_definite(D);

    std::vector<Form> reduced = enumerate_reduced_indefinite(D);
    std::map<std::vector<mpz_class>, std::map<std::vector<mpz_class>, Form>> groups;
    for (const Form& f : reduced) {
        CFExpansion e = cf_expand(root(f));
        assert(e.purely_periodic());
        groups[canonical_even_rotation(e.period)].emplace(e.period, f);
    }

    ClassGroupListing out{D, {}};
    for (auto& [canon, by_word] : groups) {
        // Cycle in double-shift order starting from the canonical word.
        std::vector<Form> cycle;
        std::size_t L = canon.size();
        std::vector<mpz_class> w = canon;
        do {
            auto it = by_word.find(w);
            assert(it != by_word.end());
            cycle.push_back(it->second);
            w = rotate_word(w, 2 % L);
        } while (w != canon);
        Form rep = *std::min_element(cycle.begin(), cycle.end(), better_rep);
        out.classes.push_back({std::move(rep), std::move(cycle), canon});
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const FormClass& x, const FormClass& y) { return x.rep < y.rep; });
    return out;
}

std::optional<IntMatrix2> is_equivalent(const Form& f1, const Form& f2) {
    mpz_class D1 = discriminant(f1), D2 = discriminant(f2);
    if (D1 != D2) return std::nullopt;

    if (sgn(D1) < 0) {
        if (sgn(f1.A) != sgn(f2.A)) return std::nullopt;
        Form a = sgn(f1.A) > 0 ? f1 : Form(-f1.A, -f1.B, -f1.C);
        Form b = sgn(f2.A) > 0 ? f2 : Form(-f2.A, -f2.B, -f2.C);
        auto [r1, g1] = reduce_definite(a);
        auto [r2, g2] = reduce_definite(b);
        if (!(r1 == r2)) return std::nullopt;
        IntMatrix2 gamma = g2 * g1.inverse();
        assert(apply_transform(f2, gamma) == f1);
        return gamma;
    }

    if (is_perfect_square(D1))
        throw Error("bad_discriminant", "square discriminants are excluded");

    IndefiniteReduction rd1 = reduce_indefinite(f1);
    IndefiniteReduction rd2 = reduce_indefinite(f2);
    const auto& w1 = rd1.period;
    const auto& w2 = rd2.period;
    if (w1.size() != w2.size()) return std::nullopt;
    std::size_t L = w1.size();
    for (std::size_t k = 0; k < L; ++k) {
        if (rotate_word(w2, k) != w1) continue;
        std::size_t k_eff = k;
        if (k_eff % 2) {
            if (L % 2 == 0) continue;  // odd rotation reaches GL2 only
            k_eff += L;
        }
        IntMatrix2 G = IntMatrix2::identity();
        for (std::size_t i = 0; i < k_eff; ++i) G = G * digit_matrix(w2[i % L]);
        IntMatrix2 gamma = rd2.transform * G * rd1.transform.inverse();
        assert(apply_transform(f2, gamma) == f1);
        return gamma;
    }
    return std::nullopt;
}

bool is_gl_equivalent(const Form& f1, const Form& f2) {
    if (discriminant(f1) != discriminant(f2)) return false;
    if (is_equivalent(f1, f2)) return true;
    if (sgn(discriminant(f1)) < 0)
        // Orientation reversal sends [A,B,C] to [A,-B,C].
        return is_equivalent(f1, Form(f2.A, -f2.B, f2.C)).has_value();
    IndefiniteReduction rd1 = reduce_indefinite(f1);
    IndefiniteReduction rd2 = reduce_indefinite(f2);
    if (rd1.period.size() != rd2.period.size()) return false;
    std::vector<mpz_class> rev(rd2.period.rbegin(), rd2.period.rend());
    for (std::size_t k = 0; k < rd1.period.size(); ++k) {
        if (rotate_word(rd2.period, k) == rd1.period) return true;  // odd rotation
        if (rotate_word(rev, k) == rd1.period) return true;         // reversal
    }
    return false;
}

bool is_fundamental(const mpz_class& D) {
    if (D == 0 || D == 1) return false;
    mpz_class r = mod(D, 4);
    if (r == 1) return is_squarefree(D);
    if (r == 0) {
        mpz_class m = D / 4;
        mpz_class rm = mod(m, 4);
        return (rm == 2 || rm == 3) && is_squarefree(m);
    }
    return false;
}

}  // namespace modsurf
