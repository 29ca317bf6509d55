#ifndef NEVDIFF_LOCAL_EXPANSION_HPP
#define NEVDIFF_LOCAL_EXPANSION_HPP

#include <vector>

#include "nevdiff/enumerate.hpp"

namespace nevdiff {

// Truncated Laurent expansion of f at a point. Coefficients are indexed from
// the valuation; exponents below truncation_order are trusted. Each
// coefficient carries an absolute noise estimate from its computation
// (doubling residuals of the contour extraction, or machine epsilon scaled
// by the analytic path), used by coefficient-equality decisions downstream.
struct LocalExpansion {
    Complex center{0, 0};
    int valuation = 0;
    std::vector<Complex> coeffs;  // coeffs[i] is the coefficient of t^(valuation+i)
    std::vector<double> noise;    // aligned with coeffs
    int truncation_order = 0;     // exponents < this are trusted

    Complex coeff(int e) const {
        int i = e - valuation;
        if (i < 0 || i >= int(coeffs.size())) return {0, 0};
        return coeffs[size_t(i)];
    }
    double noise_at(int e) const {
        int i = e - valuation;
        if (i < 0 || i >= int(coeffs.size())) return 0.0;
        return noise[size_t(i)];
    }
    int trusted_terms() const { return truncation_order - valuation; }

    // Evaluate the truncated series at center + t.
    Complex eval(Complex t) const;
};

// Laurent expansion with at least n_terms trusted coefficients starting at
// the valuation. Analytic recursions are used for the atoms that have them
// (exponentials, rationals) and series arithmetic assembles composites;
// elliptic atoms use trapezoid contour extraction on a circle of 1/4 the
// distance to the nearest neighboring singularity.
LocalExpansion local_expansion(Session& ses, const MeromorphicFunction& f, Complex z0,
                               int n_terms);

}  // namespace nevdiff

#endif
