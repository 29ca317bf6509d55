#ifndef NEVDIFF_MULTIPOLY_HPP
#define NEVDIFF_MULTIPOLY_HPP

#include <array>
#include <map>
#include <string>

#include "nevdiff/bigratio.hpp"

namespace nevdiff {

// Polynomials with exact rational coefficients in the three symbols of the
// confinement analysis. Index order: a0, a2, alpha.
constexpr int kNumSymbols = 3;
using Exponents = std::array<int, kNumSymbols>;
const char* symbol_name(int i);

class MultiPoly {
public:
    MultiPoly() = default;
    static MultiPoly constant(BigRational c);
    static MultiPoly symbol(int i, int power = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    BigRational constant_value() const;  // requires is_constant()

    MultiPoly operator-() const;
    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly scaled(const BigRational& c) const;

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    int degree(int var) const;
    // coefficient of var^k, a polynomial in the remaining symbols
    MultiPoly coeff_of(int var, int k) const;
    // substitute symbol var := 0
    MultiPoly at_zero(int var) const;
    double eval(const std::array<double, kNumSymbols>& x) const;

    // exact division; throws if o does not divide *this
    MultiPoly divide_exact(const MultiPoly& o) const;
    // exact division returning nothing on failure (no exception control flow)
    bool try_divide(const MultiPoly& o, MultiPoly& out) const;

    static MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

    // gcd of numerators over lcm of denominators (positive); zero for the
    // zero polynomial
    BigRational rational_content() const;
    // *this divided by its rational content: integer, content-free
    MultiPoly primitive() const;

    // leading coefficient under lexicographic monomial order
    BigRational lex_leading_coeff() const;

    std::string str() const;

    const std::map<Exponents, BigRational>& terms() const { return terms_; }

private:
    std::map<Exponents, BigRational> terms_;  // lex order; no zero coefficients

    void put(const Exponents& e, const BigRational& c);
};

// Element of the rational-function field Q(a0, a2, alpha) in canonical form:
// numerator and denominator coprime, denominator with lex-leading
// coefficient one. Equality is structural.
class FieldElement {
public:
    FieldElement() : num_(), den_(MultiPoly::constant(1)) {}
    FieldElement(long long v);  // NOLINT
    FieldElement(BigRational v);  // NOLINT
    FieldElement(MultiPoly n, MultiPoly d);
    static FieldElement symbol(int i);

    bool is_zero() const { return num_.is_zero(); }
    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }

    FieldElement operator-() const;
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;

    bool operator==(const FieldElement& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // substitute symbol var := 0; throws DomainError when the denominator
    // vanishes under the substitution
    FieldElement at_zero(int var) const;
    double eval(const std::array<double, kNumSymbols>& x) const;

    std::string str() const;

private:
    MultiPoly num_, den_;
    void reduce();
};

}  // namespace nevdiff

#endif
