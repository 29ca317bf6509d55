#include "nevdiff/formal_series.hpp"

#include <algorithm>

#include "nevdiff/errors.hpp"

namespace nevdiff {

FormalSeries FormalSeries::monomial(FieldElement c, int e, int trunc) {
    FormalSeries s;
    s.trunc_ = trunc;
    if (e >= trunc) throw TruncationError("monomial exponent beyond the truncation order");
    if (c.is_zero()) {
        s.val_ = trunc;
        return s;
    }
    s.val_ = e;
    s.coeffs_.push_back(std::move(c));
    return s;
}

FormalSeries FormalSeries::zero(int trunc) {
    FormalSeries s;
    s.trunc_ = trunc;
    s.val_ = trunc;
    return s;
}

FieldElement FormalSeries::coeff(int e) const {
    int i = e - val_;
    if (i < 0 || i >= int(coeffs_.size())) return FieldElement();
    return coeffs_[size_t(i)];
}

const FieldElement& FormalSeries::leading() const {
    if (coeffs_.empty()) throw DomainError("leading coefficient of the zero series");
    return coeffs_.front();
}

void FormalSeries::normalize() {
    if (int(coeffs_.size()) > trunc_ - val_)
        coeffs_.resize(size_t(std::max(0, trunc_ - val_)));
    size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + long(lead));
        val_ += int(lead);
    }
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty()) val_ = trunc_;
}

FormalSeries FormalSeries::operator-() const {
    FormalSeries r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

FormalSeries FormalSeries::operator+(const FormalSeries& o) const {
    FormalSeries r;
    r.trunc_ = std::min(trunc_, o.trunc_);
    r.val_ = std::min(std::min(val_, o.val_), r.trunc_);
    int n = std::max(0, r.trunc_ - r.val_);
    r.coeffs_.assign(size_t(n), FieldElement());
    for (int e = r.val_; e < r.trunc_; ++e) r.coeffs_[size_t(e - r.val_)] = coeff(e) + o.coeff(e);
    r.normalize();
    return r;
}

FormalSeries FormalSeries::operator-(const FormalSeries& o) const { return *this + (-o); }

FormalSeries FormalSeries::operator*(const FormalSeries& o) const {
    FormalSeries r;
    if (is_zero() || o.is_zero()) {
        // truncation of a product with a (truncated) zero still shifts
        r.trunc_ = std::min(val_ + o.trunc_, o.val_ + trunc_);
        r.val_ = r.trunc_;
        return r;
    }
    r.trunc_ = std::min(val_ + o.trunc_, o.val_ + trunc_);
    r.val_ = val_ + o.val_;
    int n = std::max(0, r.trunc_ - r.val_);
    if (n == 0) throw TruncationError("series product: no trusted coefficients remain");
    r.coeffs_.assign(size_t(n), FieldElement());
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (size_t j = 0; j < o.coeffs_.size(); ++j) {
            int e = val_ + int(i) + o.val_ + int(j);
            if (e >= r.trunc_) break;
            size_t k = size_t(e - r.val_);
            r.coeffs_[k] = r.coeffs_[k] + coeffs_[i] * o.coeffs_[size_t(j)];
        }
    }
    r.normalize();
    return r;
}

namespace {

// q / L^k with the obvious powers of L peeled off by exact division first;
// the field-element reduction then only sees the small residual pair
FieldElement over_power(MultiPoly q, const MultiPoly& L, int k) {
    MultiPoly quo;
    while (k > 0 && q.try_divide(L, quo)) {
        q = quo;
        --k;
    }
    MultiPoly den = MultiPoly::constant(1);
    for (int i = 0; i < k; ++i) den = den * L;
    return FieldElement(std::move(q), std::move(den));
}

}  // namespace

FormalSeries FormalSeries::inverted() const {
    if (is_zero()) throw DomainError("inversion of the zero series");
    FormalSeries r;
    int n = trunc_ - val_;
    if (n <= 0) throw TruncationError("series inversion: no trusted coefficients remain");
    r.val_ = -val_;
    r.trunc_ = trunc_ - 2 * val_;
    r.coeffs_.assign(size_t(n), FieldElement());

    // clear coefficient denominators so the recursion runs in the polynomial
    // ring: with D a common denominator and c_k = p_k / D, the inverse
    // coefficients are D P_m / p_0^{m+1} with
    // P_m = -sum_{k=1..m} p_k P_{m-k} p_0^{k-1}, P_0 = 1. No gcd is touched
    // until each coefficient is assembled once at the end.
    MultiPoly D = MultiPoly::constant(1);
    for (auto& c : coeffs_) {
        if (c.den().is_constant()) continue;
        MultiPoly probe;
        if (!D.try_divide(c.den(), probe)) D = D * c.den();
    }
    std::vector<MultiPoly> p(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        if (k >= int(coeffs_.size()) || coeffs_[size_t(k)].is_zero()) continue;
        FieldElement scaled = coeffs_[size_t(k)] * FieldElement(D, MultiPoly::constant(1));
        if (!scaled.den().is_constant())
            throw DomainError("series inversion: denominator clearing failed");
        p[size_t(k)] = scaled.num().scaled(BigRational(1) / scaled.den().constant_value());
    }
    const MultiPoly& p0 = p[0];
    std::vector<MultiPoly> P(static_cast<size_t>(n));
    P[0] = MultiPoly::constant(1);
    std::vector<MultiPoly> p0pow(static_cast<size_t>(n) + 1);
    p0pow[0] = MultiPoly::constant(1);
    for (int i = 1; i <= n; ++i) p0pow[size_t(i)] = p0pow[size_t(i - 1)] * p0;
    for (int m = 1; m < n; ++m) {
        MultiPoly acc;
        for (int k = 1; k <= m; ++k) {
            if (p[size_t(k)].is_zero()) continue;
            acc = acc + p[size_t(k)] * P[size_t(m - k)] * p0pow[size_t(k - 1)];
        }
        P[size_t(m)] = -acc;
    }
    for (int m = 0; m < n; ++m)
        r.coeffs_[size_t(m)] = over_power(D * P[size_t(m)], p0, m + 1);
    r.normalize();
    return r;
}

FormalSeries FormalSeries::operator/(const FormalSeries& o) const { return *this * o.inverted(); }

bool FormalSeries::agree_on_common_window(const FormalSeries& a, const FormalSeries& b) {
    int lo = std::min(a.val_, b.val_);
    int hi = std::min(a.trunc_, b.trunc_);
    for (int e = lo; e < hi; ++e)
        if (a.coeff(e) != b.coeff(e)) return false;
    return true;
}

std::string FormalSeries::str() const {
    if (coeffs_.empty()) return "O(t^" + std::to_string(trunc_) + ")";
    std::string out;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        int e = val_ + int(i);
        std::string c = coeffs_[i].str();
        bool paren = c.find(' ') != std::string::npos;
        std::string term = paren ? "(" + c + ")" : c;
        if (e != 0) {
            term += "*t";
            if (e != 1) term += "^" + std::to_string(e);
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    out += " + O(t^" + std::to_string(trunc_) + ")";
    return out;
}

}  // namespace nevdiff
