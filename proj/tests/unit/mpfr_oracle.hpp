#pragma once

#include <mpfr.h>

namespace oracle {

struct Sides {
  double lhs;
  double rhs;
  bool holds;
};

// Independent evaluation in MPFR at 256 bits, written with exp2 instead of
// exp(x ln 2): LHS = 2^(2 sigma n - m) / 3 - m ln 2,
// RHS = 2^(sigma n + 1) (1 + (1 - sigma) n ln 2).
inline Sides mpfr_sides(unsigned n, unsigned m, double sigma_num, double sigma_den) {
  mpfr_t s, e, lhs, rhs, ln2, tmp;
  mpfr_inits2(256, s, e, lhs, rhs, ln2, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(s, sigma_num, MPFR_RNDN);
  mpfr_div_d(s, s, sigma_den, MPFR_RNDN);
  mpfr_const_log2(ln2, MPFR_RNDN);

  mpfr_mul_ui(e, s, 2 * n, MPFR_RNDN);
  mpfr_sub_ui(e, e, m, MPFR_RNDN);
  mpfr_exp2(lhs, e, MPFR_RNDN);
  mpfr_div_ui(lhs, lhs, 3, MPFR_RNDN);
  mpfr_mul_ui(tmp, ln2, m, MPFR_RNDN);
  mpfr_sub(lhs, lhs, tmp, MPFR_RNDN);

  mpfr_mul_ui(e, s, n, MPFR_RNDN);
  mpfr_add_ui(e, e, 1, MPFR_RNDN);
  mpfr_exp2(rhs, e, MPFR_RNDN);
  mpfr_ui_sub(tmp, 1, s, MPFR_RNDN);
  mpfr_mul_ui(tmp, tmp, n, MPFR_RNDN);
  mpfr_mul(tmp, tmp, ln2, MPFR_RNDN);
  mpfr_add_ui(tmp, tmp, 1, MPFR_RNDN);
  mpfr_mul(rhs, rhs, tmp, MPFR_RNDN);

  Sides out{mpfr_get_d(lhs, MPFR_RNDN), mpfr_get_d(rhs, MPFR_RNDN), mpfr_greater_p(lhs, rhs) != 0};
  mpfr_clears(s, e, lhs, rhs, ln2, tmp, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace oracle
