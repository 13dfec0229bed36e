// Minimal solutions of T^2 - D S^2 = +-4 and the unit eps_D = (t + s sqrt D)/2.
//
// Solutions are read off the continued-fraction period of the principal
// form's root: the digit-product matrix over one period is the fundamental
// automorph, whose trace is t.  Odd periods give the -4 solution; doubling
// the word gives +4.
#pragma once

#include <optional>

#include "modsurf/forms.hpp"

namespace modsurf {

struct PellSolution {
    mpz_class t, s;   // positive, minimal in s
    int sign;         // +4 or -4
    QuadSurd epsilon; // (t + s sqrt D) / 2
};

// Minimal solution of T^2 - D S^2 = 4; D > 0, D = 0,1 mod 4, non-square.
PellSolution solve_pell4(const mpz_class& D);

// Minimal solution of T^2 - D S^2 = -4, when one exists (odd CF period).
std::optional<PellSolution> solve_pell_neg4(const mpz_class& D);

// The unit eps_D from the +4 solution; equals eta_D^2 when -4 is solvable.
QuadSurd unit(const mpz_class& D);

// The principal form of discriminant D: x^2 - (D/4) y^2 or
// x^2 + xy - ((D-1)/4) y^2.
Form principal_form(const mpz_class& D);

}  // namespace modsurf
