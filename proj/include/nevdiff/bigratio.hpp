#ifndef NEVDIFF_BIGRATIO_HPP
#define NEVDIFF_BIGRATIO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nevdiff {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// Covers the coefficient growth of the exact series iteration; no attempt
// at asymptotically fast multiplication.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);  // NOLINT: implicit by design

    static BigInt from_string(const std::string& s);

    bool is_zero() const { return limbs_.empty(); }
    int sign() const { return limbs_.empty() ? 0 : (neg_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    // quotient truncated toward zero; (q, r) with *this == q * o + r
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    BigInt operator/(const BigInt& o) const;
    BigInt operator%(const BigInt& o) const;

    bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const;

    static BigInt gcd(BigInt a, BigInt b);  // nonnegative

    std::string str() const;  // decimal
    double to_double() const;

private:
    bool neg_ = false;
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros

    void trim();
    static int cmp_abs(const BigInt& a, const BigInt& b);
    static BigInt add_abs(const BigInt& a, const BigInt& b);
    static BigInt sub_abs(const BigInt& a, const BigInt& b);  // |a| >= |b|
};

// Exact rational with canonical form: reduced, positive denominator.
class BigRational {
public:
    BigRational() : num_(0), den_(1) {}
    BigRational(long long v) : num_(v), den_(1) {}  // NOLINT
    BigRational(BigInt n, BigInt d);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    BigRational operator-() const;
    BigRational operator+(const BigRational& o) const;
    BigRational operator-(const BigRational& o) const;
    BigRational operator*(const BigRational& o) const;
    BigRational operator/(const BigRational& o) const;

    bool operator==(const BigRational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const BigRational& o) const { return !(*this == o); }
    bool operator<(const BigRational& o) const;

    std::string str() const;
    double to_double() const;

private:
    BigInt num_, den_;
};

}  // namespace nevdiff

#endif
