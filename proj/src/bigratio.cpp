#include "nevdiff/bigratio.hpp"

#include <algorithm>
#include <cmath>

#include "nevdiff/errors.hpp"

namespace nevdiff {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    neg_ = v < 0;
    unsigned long long u = neg_ ? -(unsigned long long)v : (unsigned long long)v;
    while (u) {
        limbs_.push_back(std::uint32_t(u & 0xffffffffu));
        u >>= 32;
    }
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) neg_ = false;
}

int BigInt::cmp_abs(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigInt BigInt::add_abs(const BigInt& a, const BigInt& b) {
    BigInt r;
    r.limbs_.resize(std::max(a.limbs_.size(), b.limbs_.size()) + 1, 0);
    std::uint64_t carry = 0;
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
        std::uint64_t s = carry;
        if (i < a.limbs_.size()) s += a.limbs_[i];
        if (i < b.limbs_.size()) s += b.limbs_[i];
        r.limbs_[i] = std::uint32_t(s & 0xffffffffu);
        carry = s >> 32;
    }
    r.trim();
    return r;
}

BigInt BigInt::sub_abs(const BigInt& a, const BigInt& b) {
    BigInt r;
    r.limbs_.resize(a.limbs_.size(), 0);
    std::int64_t borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        std::int64_t s = std::int64_t(a.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
        if (s < 0) {
            s += std::int64_t(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_[i] = std::uint32_t(s);
    }
    r.trim();
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.limbs_.empty()) r.neg_ = !r.neg_;
    return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
    if (neg_ == o.neg_) {
        BigInt r = add_abs(*this, o);
        r.neg_ = neg_ && !r.limbs_.empty();
        return r;
    }
    int c = cmp_abs(*this, o);
    if (c == 0) return BigInt();
    BigInt r = c > 0 ? sub_abs(*this, o) : sub_abs(o, *this);
    r.neg_ = (c > 0 ? neg_ : o.neg_) && !r.limbs_.empty();
    return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    if (is_zero() || o.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (size_t j = 0; j < o.limbs_.size(); ++j) {
            std::uint64_t cur = std::uint64_t(limbs_[i]) * o.limbs_[j] + r.limbs_[i + j] + carry;
            r.limbs_[i + j] = std::uint32_t(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        size_t k = i + o.limbs_.size();
        while (carry) {
            std::uint64_t cur = std::uint64_t(r.limbs_[k]) + carry;
            r.limbs_[k] = std::uint32_t(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    r.neg_ = neg_ != o.neg_;
    r.trim();
    return r;
}

// Knuth algorithm D on normalized limbs.
void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw DomainError("BigInt: division by zero");
    if (cmp_abs(a, b) < 0) {
        q = BigInt();
        r = a;
        return;
    }
    if (b.limbs_.size() == 1) {
        std::uint64_t d = b.limbs_[0];
        BigInt qq;
        qq.limbs_.resize(a.limbs_.size());
        std::uint64_t rem = 0;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | a.limbs_[i];
            qq.limbs_[i] = std::uint32_t(cur / d);
            rem = cur % d;
        }
        qq.neg_ = a.neg_ != b.neg_;
        qq.trim();
        BigInt rr((long long)rem);
        if (a.neg_ && !rr.is_zero()) rr.neg_ = true;
        q = qq;
        r = rr;
        return;
    }

    // normalize so the top divisor limb has its high bit set
    int shift = 0;
    {
        std::uint32_t top = b.limbs_.back();
        while (!(top & 0x80000000u)) {
            top <<= 1;
            ++shift;
        }
    }
    auto shl = [&](const std::vector<std::uint32_t>& v) {
        std::vector<std::uint32_t> out(v.size() + 1, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            out[i] |= std::uint32_t((std::uint64_t(v[i]) << shift) & 0xffffffffu);
            out[i + 1] |= std::uint32_t((std::uint64_t(v[i]) << shift) >> 32);
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<std::uint32_t> u = shl(a.limbs_), v = shl(b.limbs_);
    size_t n = v.size(), m = u.size() - n;
    u.push_back(0);

    BigInt qq;
    qq.limbs_.assign(m + 1, 0);
    for (size_t j = m + 1; j-- > 0;) {
        std::uint64_t num = (std::uint64_t(u[j + n]) << 32) | u[j + n - 1];
        std::uint64_t qhat = num / v[n - 1];
        std::uint64_t rhat = num % v[n - 1];
        while (qhat >= kBase ||
               (n >= 2 && qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2]))) {
            --qhat;
            rhat += v[n - 1];
            if (rhat >= kBase) break;
        }
        // multiply-subtract
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            std::int64_t t = std::int64_t(u[i + j]) - std::int64_t(p & 0xffffffffu) - borrow;
            if (t < 0) {
                t += std::int64_t(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = std::uint32_t(t);
        }
        std::int64_t t = std::int64_t(u[j + n]) - std::int64_t(carry) - borrow;
        if (t < 0) {
            // add back
            t += std::int64_t(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                std::uint64_t s = std::uint64_t(u[i + j]) + v[i] + c2;
                u[i + j] = std::uint32_t(s & 0xffffffffu);
                c2 = s >> 32;
            }
            t += std::int64_t(c2);
        }
        u[j + n] = std::uint32_t(t);
        qq.limbs_[j] = std::uint32_t(qhat);
    }
    // denormalize remainder
    BigInt rr;
    rr.limbs_.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        std::uint64_t cur = u[i] >> shift;
        if (shift && i + 1 < u.size()) cur |= (std::uint64_t(u[i + 1]) << (32 - shift)) & 0xffffffffu;
        rr.limbs_[i] = std::uint32_t(cur);
    }
    qq.neg_ = a.neg_ != b.neg_;
    rr.neg_ = a.neg_;
    qq.trim();
    rr.trim();
    q = qq;
    r = rr;
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return r;
}

bool BigInt::operator<(const BigInt& o) const {
    if (neg_ != o.neg_) return neg_;
    int c = cmp_abs(*this, o);
    return neg_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.neg_ = false;
    b.neg_ = false;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
        a.neg_ = false;
        b.neg_ = false;
    }
    return a;
}

BigInt BigInt::from_string(const std::string& s) {
    BigInt r;
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw DomainError("BigInt: bad digit");
        r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    r.neg_ = neg && !r.is_zero();
    return r;
}

std::string BigInt::str() const {
    if (is_zero()) return "0";
    BigInt t = *this;
    t.neg_ = false;
    std::string out;
    const BigInt chunk(1000000000);
    while (!t.is_zero()) {
        BigInt q, r;
        divmod(t, chunk, q, r);
        std::uint64_t part = r.limbs_.empty() ? 0 : r.limbs_[0];
        if (r.limbs_.size() > 1) part |= std::uint64_t(r.limbs_[1]) << 32;
        char buf[16];
        if (q.is_zero())
            std::snprintf(buf, sizeof buf, "%llu", (unsigned long long)part);
        else
            std::snprintf(buf, sizeof buf, "%09llu", (unsigned long long)part);
        out = std::string(buf) + out;
        t = q;
    }
    return (neg_ ? "-" : "") + out;
}

double BigInt::to_double() const {
    double v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) v = v * double(kBase) + double(limbs_[i]);
    return neg_ ? -v : v;
}

BigRational::BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw DomainError("BigRational: zero denominator");
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    num_ = num_ / g;
    den_ = den_ / g;
}

BigRational BigRational::operator-() const { return BigRational(-num_, den_); }
BigRational BigRational::operator+(const BigRational& o) const {
    return BigRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
BigRational BigRational::operator-(const BigRational& o) const {
    return BigRational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
BigRational BigRational::operator*(const BigRational& o) const {
    return BigRational(num_ * o.num_, den_ * o.den_);
}
BigRational BigRational::operator/(const BigRational& o) const {
    if (o.is_zero()) throw DomainError("BigRational: division by zero");
    return BigRational(num_ * o.den_, den_ * o.num_);
}

bool BigRational::operator<(const BigRational& o) const {
    return (num_ * o.den_) < (o.num_ * den_);
}

std::string BigRational::str() const {
    if (den_ == BigInt(1)) return num_.str();
    return num_.str() + "/" + den_.str();
}

double BigRational::to_double() const { return num_.to_double() / den_.to_double(); }

}  // namespace nevdiff
