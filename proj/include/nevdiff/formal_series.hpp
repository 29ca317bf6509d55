#ifndef NEVDIFF_FORMAL_SERIES_HPP
#define NEVDIFF_FORMAL_SERIES_HPP

#include <vector>

#include "nevdiff/multipoly.hpp"

namespace nevdiff {

// Truncated formal Laurent series with exact field coefficients. Exponents
// in [valuation, truncation_order) are stored; everything below the
// truncation order is exact. The canonical zero has valuation equal to the
// truncation order and no coefficients.
//
// Truncation propagation: add/sub keep min(Ta, Tb); mul keeps
// min(va + Tb, vb + Ta); invert keeps T - 2v. These are tested as exact
// identities, not conventions.
class FormalSeries {
public:
    FormalSeries() = default;
    // monomial c * t^e, trusted through trunc
    static FormalSeries monomial(FieldElement c, int e, int trunc);
    static FormalSeries zero(int trunc);

    int valuation() const { return val_; }
    int truncation_order() const { return trunc_; }
    bool is_zero() const { return coeffs_.empty(); }
    int trusted_terms() const { return trunc_ - val_; }

    FieldElement coeff(int e) const;
    // leading coefficient; requires !is_zero()
    const FieldElement& leading() const;

    FormalSeries operator-() const;
    FormalSeries operator+(const FormalSeries& o) const;
    FormalSeries operator-(const FormalSeries& o) const;
    FormalSeries operator*(const FormalSeries& o) const;
    FormalSeries operator/(const FormalSeries& o) const;
    // 1/x; throws DomainError on the zero series, TruncationError when no
    // trusted coefficients would remain
    FormalSeries inverted() const;

    // exact equality on the common trusted window
    static bool agree_on_common_window(const FormalSeries& a, const FormalSeries& b);

    bool operator==(const FormalSeries& o) const {
        return val_ == o.val_ && trunc_ == o.trunc_ && coeffs_ == o.coeffs_;
    }

    std::string str() const;

private:
    int val_ = 0;
    int trunc_ = 0;
    std::vector<FieldElement> coeffs_;  // from val_

    void normalize();
};

}  // namespace nevdiff

#endif
