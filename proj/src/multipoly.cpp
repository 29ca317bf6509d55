#include "nevdiff/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "nevdiff/errors.hpp"

namespace nevdiff {

const char* symbol_name(int i) {
    static const char* names[kNumSymbols] = {"a0", "a2", "alpha"};
    return names[i];
}

void MultiPoly::put(const Exponents& e, const BigRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        BigRational s = it->second + c;
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = s;
    }
}

MultiPoly MultiPoly::constant(BigRational c) {
    MultiPoly p;
    p.put({0, 0, 0}, c);
    return p;
}

MultiPoly MultiPoly::symbol(int i, int power) {
    MultiPoly p;
    Exponents e{0, 0, 0};
    e[size_t(i)] = power;
    p.put(e, BigRational(1));
    return p;
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0};
}

BigRational MultiPoly::constant_value() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.begin()->second;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (auto& [e, c] : o.terms_) r.put(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (auto& [e, c] : o.terms_) r.put(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r;
    for (auto& [e1, c1] : terms_)
        for (auto& [e2, c2] : o.terms_) {
            Exponents e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
            r.put(e, c1 * c2);
        }
    return r;
}

MultiPoly MultiPoly::scaled(const BigRational& c) const {
    MultiPoly r;
    if (c.is_zero()) return r;
    for (auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

int MultiPoly::degree(int var) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[size_t(var)]);
    return terms_.empty() ? -1 : d;
}

MultiPoly MultiPoly::coeff_of(int var, int k) const {
    MultiPoly r;
    for (auto& [e, c] : terms_) {
        if (e[size_t(var)] != k) continue;
        Exponents e2 = e;
        e2[size_t(var)] = 0;
        r.put(e2, c);
    }
    return r;
}

MultiPoly MultiPoly::at_zero(int var) const {
    MultiPoly r;
    for (auto& [e, c] : terms_)
        if (e[size_t(var)] == 0) r.put(e, c);
    return r;
}

double MultiPoly::eval(const std::array<double, kNumSymbols>& x) const {
    double acc = 0;
    for (auto& [e, c] : terms_) {
        double t = c.to_double();
        for (int v = 0; v < kNumSymbols; ++v)
            for (int k = 0; k < e[size_t(v)]; ++k) t *= x[size_t(v)];
        acc += t;
    }
    return acc;
}

BigRational MultiPoly::rational_content() const {
    if (terms_.empty()) return BigRational(0);
    BigInt g(0), l(1);
    for (auto& [e, c] : terms_) {
        g = BigInt::gcd(g, c.num());
        l = l / BigInt::gcd(l, c.den()) * c.den();
    }
    return BigRational(g, l);
}

MultiPoly MultiPoly::primitive() const {
    if (terms_.empty()) return *this;
    return scaled(BigRational(1) / rational_content());
}

BigRational MultiPoly::lex_leading_coeff() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.rbegin()->second;
}

bool MultiPoly::try_divide(const MultiPoly& o, MultiPoly& out) const {
    if (o.is_zero()) return false;
    MultiPoly rem = *this, q;
    const auto& lt = *o.terms_.rbegin();  // lex-leading term of divisor
    while (!rem.is_zero()) {
        const auto& rt = *rem.terms_.rbegin();
        Exponents e;
        for (int v = 0; v < kNumSymbols; ++v) {
            e[size_t(v)] = rt.first[size_t(v)] - lt.first[size_t(v)];
            if (e[size_t(v)] < 0) return false;
        }
        BigRational c = rt.second / lt.second;
        MultiPoly mono;
        mono.put(e, c);
        q = q + mono;
        rem = rem - mono * o;
    }
    out = q;
    return true;
}

MultiPoly MultiPoly::divide_exact(const MultiPoly& o) const {
    MultiPoly q;
    if (!try_divide(o, q)) throw DomainError("MultiPoly: inexact division");
    return q;
}

namespace {

// pseudo-remainder of a by b in variable var: lc(b)^(da-db+1) a = q b + r
MultiPoly pseudo_rem(const MultiPoly& a, const MultiPoly& b, int var) {
    int db = b.degree(var);
    MultiPoly lb = b.coeff_of(var, db);
    MultiPoly r = a;
    while (!r.is_zero()) {
        int dr = r.degree(var);
        if (dr < db) break;
        MultiPoly lr = r.coeff_of(var, dr);
        r = r * lb - ((dr > db) ? (lr * MultiPoly::symbol(var, dr - db)) : lr) * b;
    }
    return r;
}

// content of a with respect to var: gcd of its coefficients (polynomials in
// the remaining symbols), primitive by construction
MultiPoly content_in(const MultiPoly& a, int var) {
    MultiPoly g;
    for (int k = 0; k <= a.degree(var); ++k) {
        MultiPoly c = a.coeff_of(var, k);
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.primitive() : MultiPoly::gcd(g, c);
        if (g.is_constant()) return MultiPoly::constant(BigRational(1));
    }
    return g;
}

MultiPoly normalize_leading(const MultiPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(BigRational(1) / p.lex_leading_coeff());
}

}  // namespace

namespace {

// univariate integer polynomials, ascending coefficients
using UPoly = std::vector<BigInt>;

void utrim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly uprimitive(UPoly p) {
    BigInt g(0);
    for (auto& c : p) g = BigInt::gcd(g, c);
    if (g.is_zero() || g == BigInt(1)) return p;
    for (auto& c : p) c = c / g;
    return p;
}

// pseudo-remainder: lc(b)^(da-db+1) a mod b
UPoly upseudo_rem(UPoly a, const UPoly& b) {
    const BigInt& lb = b.back();
    while (a.size() >= b.size()) {
        BigInt la = a.back();
        size_t shiftn = a.size() - b.size();
        for (auto& c : a) c = c * lb;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shiftn] = a[i + shiftn] - la * b[i];
        utrim(a);
        if (a.empty()) break;
    }
    return a;
}

int ugcd_degree(UPoly a, UPoly b) {
    utrim(a);
    utrim(b);
    if (a.empty()) return b.empty() ? 0 : int(b.size()) - 1;
    if (b.empty()) return int(a.size()) - 1;
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        UPoly r = uprimitive(upseudo_rem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return int(a.size()) - 1;
}

// Specialize every symbol except var at small integer points and report the
// degree of the univariate gcd; -1 when the point degenerates the leading
// coefficients. A result of 0 at a non-degenerate point certifies that the
// true gcd has degree 0 in var for that specialization.
int specialized_gcd_degree(const MultiPoly& a, const MultiPoly& b, int var, int salt) {
    const long long pts[3][kNumSymbols] = {{3, 5, 7}, {11, 2, 13}, {5, 17, 3}};
    auto specialize = [&](const MultiPoly& p) -> UPoly {
        int d = p.degree(var);
        std::vector<BigRational> acc(size_t(d + 1), BigRational(0));
        for (auto& [e, c] : p.terms()) {
            BigRational t = c;
            for (int v = 0; v < kNumSymbols; ++v) {
                if (v == var) continue;
                for (int k = 0; k < e[size_t(v)]; ++k)
                    t = t * BigRational(pts[salt][size_t(v)]);
            }
            acc[size_t(e[size_t(var)])] = acc[size_t(e[size_t(var)])] + t;
        }
        // clear denominators
        BigInt l(1);
        for (auto& c : acc) l = l / BigInt::gcd(l, c.den()) * c.den();
        UPoly out;
        for (auto& c : acc) out.push_back(c.num() * (l / c.den()));
        return out;
    };
    UPoly ua = specialize(a), ub = specialize(b);
    if (int(ua.size()) != a.degree(var) + 1 || ua.back().is_zero()) return -1;
    if (int(ub.size()) != b.degree(var) + 1 || ub.back().is_zero()) return -1;
    return ugcd_degree(std::move(ua), std::move(ub));
}

// true when three independent specializations certify that no symbol can
// appear in the gcd; inconclusive points fall back to the full PRS
bool certainly_coprime(const MultiPoly& a, const MultiPoly& b) {
    for (int v = 0; v < kNumSymbols; ++v) {
        if (a.degree(v) <= 0 || b.degree(v) <= 0) continue;
        bool ruled_out = false;
        for (int salt = 0; salt < 3 && !ruled_out; ++salt) {
            int d = specialized_gcd_degree(a, b, v, salt);
            if (d == 0) ruled_out = true;
        }
        if (!ruled_out) return false;
    }
    return true;
}

}  // namespace

MultiPoly MultiPoly::gcd(const MultiPoly& a, const MultiPoly& b) {
    if (getenv("NEVDIFF_GCD_TRACE")) {
        auto info = [](const MultiPoly& p) {
            size_t digits = 0;
            for (auto& [e, c] : p.terms())
                digits = std::max(digits, c.num().str().size() + c.den().str().size());
            return std::to_string(p.terms().size()) + "t/" + std::to_string(digits) + "d";
        };
        fprintf(stderr, "[gcd] a=%s b=%s\n", info(a).c_str(), info(b).c_str());
    }
    if (a.is_zero()) return normalize_leading(b);
    if (b.is_zero()) return normalize_leading(a);
    if (a.is_constant() || b.is_constant()) return constant(BigRational(1));
    if (a.terms().size() * b.terms().size() > 6 && certainly_coprime(a, b))
        return constant(BigRational(1));

    // main variable: the highest-index symbol with positive degree
    int var = -1;
    for (int v = kNumSymbols - 1; v >= 0; --v) {
        if (a.degree(v) > 0 || b.degree(v) > 0) {
            var = v;
            break;
        }
    }
    if (var < 0) return constant(BigRational(1));  // both constants: unit

    // work with primitive integer polynomials; rational content is a unit
    // here and would otherwise snowball through the pseudo-remainders
    MultiPoly ap = a.primitive(), bp = b.primitive();
    MultiPoly ca = content_in(ap, var), cb = content_in(bp, var);
    MultiPoly pa = ap.divide_exact(ca), pb = bp.divide_exact(cb);
    MultiPoly gc = gcd(ca, cb);

    // primitive PRS in var
    MultiPoly u = pa, v = pb;
    if (u.degree(var) < v.degree(var)) std::swap(u, v);
    while (!v.is_zero()) {
        MultiPoly r = pseudo_rem(u, v, var);
        u = v;
        if (r.is_zero()) {
            v = r;
        } else {
            MultiPoly cr = content_in(r.primitive(), var);
            v = r.primitive().divide_exact(cr);
        }
    }
    return normalize_leading(gc * u);
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    // highest lex terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (int v = 0; v < kNumSymbols; ++v) {
            if (e[size_t(v)] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += symbol_name(v);
            if (e[size_t(v)] > 1) mono += "^" + std::to_string(e[size_t(v)]);
        }
        std::string cs = c.str();
        std::string term;
        if (mono.empty())
            term = cs;
        else if (cs == "1")
            term = mono;
        else if (cs == "-1")
            term = "-" + mono;
        else
            term = cs + "*" + mono;
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

FieldElement::FieldElement(long long v)
    : num_(MultiPoly::constant(BigRational(v))), den_(MultiPoly::constant(1)) {}

FieldElement::FieldElement(BigRational v)
    : num_(MultiPoly::constant(std::move(v))), den_(MultiPoly::constant(1)) {}

FieldElement::FieldElement(MultiPoly n, MultiPoly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw DomainError("FieldElement: zero denominator");
    reduce();
}

FieldElement FieldElement::symbol(int i) {
    return FieldElement(MultiPoly::symbol(i), MultiPoly::constant(1));
}

void FieldElement::reduce() {
    if (num_.is_zero()) {
        den_ = MultiPoly::constant(1);
        return;
    }
    if (!den_.is_constant()) {
        MultiPoly g = MultiPoly::gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = num_.divide_exact(g);
            den_ = den_.divide_exact(g);
        }
    }
    BigRational lead = den_.lex_leading_coeff();
    if (!(lead == BigRational(1))) {
        BigRational inv = BigRational(1) / lead;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    r.num_ = -r.num_;
    return r;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    if (den_ == o.den_) return FieldElement(num_ + o.num_, den_);
    return FieldElement(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    if (den_ == o.den_) return FieldElement(num_ - o.num_, den_);
    return FieldElement(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    // cancel across the fractions first to keep the gcd inputs small
    MultiPoly n1 = num_, d2 = o.den_;
    MultiPoly g1 = MultiPoly::gcd(n1, d2);
    if (!g1.is_constant()) {
        n1 = n1.divide_exact(g1);
        d2 = d2.divide_exact(g1);
    }
    MultiPoly n2 = o.num_, d1 = den_;
    MultiPoly g2 = MultiPoly::gcd(n2, d1);
    if (!g2.is_constant()) {
        n2 = n2.divide_exact(g2);
        d1 = d1.divide_exact(g2);
    }
    return FieldElement(n1 * n2, d1 * d2);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    if (o.is_zero()) throw DomainError("FieldElement: division by zero");
    return FieldElement(num_ * o.den_, den_ * o.num_);
}

FieldElement FieldElement::at_zero(int var) const {
    MultiPoly d0 = den_.at_zero(var);
    if (d0.is_zero())
        throw DomainError("FieldElement: denominator vanishes under the substitution");
    return FieldElement(num_.at_zero(var), d0);
}

double FieldElement::eval(const std::array<double, kNumSymbols>& x) const {
    return num_.eval(x) / den_.eval(x);
}

std::string FieldElement::str() const {
    if (den_ == MultiPoly::constant(1)) return num_.str();
    std::string n = num_.str(), d = den_.str();
    bool nparen = n.find(' ') != std::string::npos;
    bool dparen = d.find(' ') != std::string::npos || d.find('*') != std::string::npos;
    return (nparen ? "(" + n + ")" : n) + " / " + (dparen ? "(" + d + ")" : d);
}

}  // namespace nevdiff
