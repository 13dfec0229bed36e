// Integral binary quadratic forms: discriminants, the SL2(Z) change-of-basis
// action, Gauss reduction (definite and indefinite), class enumeration and
// narrow class numbers.
//
// Indefinite classes are decided combinatorially on continued-fraction
// cycles: two reduced forms are narrowly equivalent exactly when their root
// periods differ by an even rotation.  No Pell computation is involved.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "modsurf/surd.hpp"

namespace modsurf {

// Ax^2 + Bxy + Cy^2, primitive (gcd(A,B,C) = 1).
struct Form {
    mpz_class A, B, C;

    Form(mpz_class A_, mpz_class B_, mpz_class C_);

    bool operator==(const Form&) const = default;
    // Lexicographic on (A, B, C); used for all deterministic orderings.
    bool operator<(const Form& o) const;
};

mpz_class discriminant(const Form& f);

// Right action f.g with substitution (x,y) -> (ax+by, cx+dy); det g must be
// +1 (strict equivalence only).
Form apply_transform(const Form& f, const IntMatrix2& g);

// The root (-B + sqrt(D)) / (2A) of f(x,1); requires A != 0 and D > 0
// non-square.  Under the action, root(f.g) = g^{-1} . root(f).
QuadSurd root(const Form& f);

// Gauss reduction for positive definite forms (D < 0, A > 0).  Returns the
// reduced form r and g with r = f.g.  Boundary ties resolved toward B >= 0.
std::pair<Form, IntMatrix2> reduce_definite(const Form& f);

// Is f indefinite-reduced, i.e. is root(f) a reduced surd?
bool is_reduced_indefinite(const Form& f);

// All primitive reduced forms of indefinite discriminant D, ordered
// lexicographically by (A, B, C).
std::vector<Form> enumerate_reduced_indefinite(const mpz_class& D);

// Reduce an indefinite form by eating an even number of digits off its root:
// returns (r, g, word) with r = f.g reduced and word the period of root(r).
struct IndefiniteReduction {
    Form reduced;
    IntMatrix2 transform;
    std::vector<mpz_class> period;
};
IndefiniteReduction reduce_indefinite(const Form& f);

struct FormClass {
    Form rep;
    std::vector<Form> cycle;        // reduced forms, double-shift order from rep
    std::vector<mpz_class> period;  // canonical CF period (indefinite only)
};

struct ClassGroupListing {
    mpz_class D;
    std::vector<FormClass> classes;
    std::size_t h() const { return classes.size(); }
};

// Narrow class group of discriminant D (D = 0,1 mod 4, non-square).  For
// D < 0 only positive definite classes are listed, one reduced form each.
ClassGroupListing class_group(const mpz_class& D);

// A det +1 transform g with f1 = f2.g if the forms are strictly equivalent.
std::optional<IntMatrix2> is_equivalent(const Form& f1, const Form& f2);

// GL2(Z)-equivalence (allows orientation reversal); flagged check only, no
// transform is produced.
bool is_gl_equivalent(const Form& f1, const Form& f2);

// Fundamental discriminant: 1 mod 4 squarefree, or 4m with m squarefree and
// m = 2,3 mod 4.
bool is_fundamental(const mpz_class& D);

// D = 0,1 mod 4 and not a perfect square (throws bad_discriminant if not).
void require_discriminant(const mpz_class& D);

}  // namespace modsurf
