#ifndef NEVDIFF_POLYUTIL_HPP
#define NEVDIFF_POLYUTIL_HPP

// Small dense-polynomial helpers over complex coefficients (ascending order).

#include <vector>

#include "nevdiff/special.hpp"

namespace nevdiff::poly {

using Poly = std::vector<Complex>;

Poly trim(Poly p, double rel_tol = 0.0);
bool is_zero(const Poly& p);
int degree(const Poly& p);  // -1 for zero polynomial
Complex eval(const Poly& p, Complex z);
Poly add(const Poly& a, const Poly& b);
Poly scale(const Poly& a, Complex c);
Poly mul(const Poly& a, const Poly& b);
// p(z + h) expanded in z
Poly shift_arg(const Poly& p, Complex h);
// Taylor coefficients of p at z0 (same as shift_arg(p, z0))
inline Poly taylor_at(const Poly& p, Complex z0) { return shift_arg(p, z0); }

// All complex roots by the Durand-Kerner iteration, then clustered into
// (location, multiplicity) groups. Adequate for the low-degree polynomials
// appearing in function specs; refined downstream where it matters.
struct Root {
    Complex location;
    int multiplicity;
};
std::vector<Root> roots(const Poly& p);

}  // namespace nevdiff::poly

#endif
