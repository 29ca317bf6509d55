#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nevdiff/errors.hpp"
#include "nevdiff/formal_series.hpp"

using namespace nevdiff;

namespace {

// random small field elements and series for the property suites
struct Gen {
    std::mt19937 rng;
    explicit Gen(unsigned seed) : rng(seed) {}

    BigRational rat() {
        std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
        return BigRational(BigInt(num(rng)), BigInt(den(rng)));
    }
    MultiPoly poly() {
        std::uniform_int_distribution<int> nterms(1, 2), expo(0, 1);
        MultiPoly p;
        int n = nterms(rng);
        for (int i = 0; i < n; ++i) {
            MultiPoly mono = MultiPoly::constant(rat());
            for (int v = 0; v < kNumSymbols; ++v) {
                int e = expo(rng);
                if (e) mono = mono * MultiPoly::symbol(v, e);
            }
            p = p + mono;
        }
        return p;
    }
    FieldElement field() {
        MultiPoly d = poly();
        while (d.is_zero()) d = poly();
        return FieldElement(poly(), d);
    }
    // polynomial coefficient (denominator 1): the shape the confinement
    // iteration produces after reduction; keeps the random ring suite
    // within the intended "small" regime
    FieldElement field_poly() { return FieldElement(poly(), MultiPoly::constant(1)); }
    FieldElement field_nonzero() {
        FieldElement f = field();
        while (f.is_zero()) f = field();
        return f;
    }
    FormalSeries series(int trunc = 6, bool poly_coeffs = true) {
        std::uniform_int_distribution<int> val(-2, 2), nc(1, 3);
        FormalSeries s = FormalSeries::zero(trunc);
        int v = val(rng);
        int n = nc(rng);
        for (int i = 0; i < n && v + i < trunc; ++i)
            s = s + FormalSeries::monomial(poly_coeffs ? field_poly() : field(), v + i, trunc);
        return s;
    }
};

}  // namespace

TEST_CASE("bigint arithmetic against 128-bit reference") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long long> U(-2000000000000LL, 2000000000000LL);
    for (int i = 0; i < 500; ++i) {
        long long a = U(rng), b = U(rng);
        BigInt A(a), B(b);
        CHECK((A + B).str() == std::to_string(a + b));
        CHECK((A - B).str() == std::to_string(a - b));
        __int128 p = __int128(a) * b;
        // render the 128-bit product in decimal
        bool neg = p < 0;
        unsigned __int128 up = neg ? -(unsigned __int128)p : (unsigned __int128)p;
        std::string ps;
        if (up == 0) ps = "0";
        while (up) {
            ps.insert(ps.begin(), char('0' + int(up % 10)));
            up /= 10;
        }
        if (neg && ps != "0") ps.insert(ps.begin(), '-');
        CHECK((A * B).str() == ps);
        if (b != 0) {
            CHECK((A / B).str() == std::to_string(a / b));
            CHECK((A % B).str() == std::to_string(a % b));
        }
    }
}

TEST_CASE("bigint division identity on wide operands") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> U(-(1LL << 62), 1LL << 62);
    for (int i = 0; i < 300; ++i) {
        BigInt a = BigInt(U(rng)) * BigInt(U(rng)) + BigInt(U(rng));
        BigInt b = BigInt(U(rng));
        if (i % 3 == 0) b = b * BigInt(U(rng) | 1);
        if (b.is_zero()) continue;
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        BigInt abs_r = r.sign() < 0 ? -r : r;
        BigInt abs_b = b.sign() < 0 ? -b : b;
        CHECK(abs_r < abs_b);
    }
    CHECK(BigInt::from_string("123456789012345678901234567890").str() ==
          "123456789012345678901234567890");
}

TEST_CASE("field elements: canonical form and exact identities") {
    Gen gen(11);
    for (int i = 0; i < 200; ++i) {
        // polynomial-coefficient cases run the same identities cheaply and
        // keep the fraction cases within budget
        if (i % 2 == 0) {
            FieldElement x = gen.field_poly(), y = gen.field_poly(), z = gen.field_poly();
            while (y.is_zero()) y = gen.field_poly();
            CHECK((x - x).is_zero());
            CHECK((x / y) * y == x);
            CHECK((x + y) + z == x + (y + z));
            CHECK(x * (y + z) == x * y + x * z);
            continue;
        }
        FieldElement x = gen.field();
        FieldElement y = gen.field_nonzero();
        CHECK((x - x).is_zero());
        CHECK((x / y) * y == x);
        CHECK(x + y == y + x);
        FieldElement z = gen.field();
        CHECK((x + y) + z == x + (y + z));
        CHECK(x * (y + z) == x * y + x * z);
    }
    // canonical equality across different construction routes
    FieldElement a0 = FieldElement::symbol(0), a2 = FieldElement::symbol(1);
    FieldElement lhs = (a0 * a0 - a2 * a2) / (a0 - a2);
    FieldElement rhs = a0 + a2;
    CHECK(lhs == rhs);
}

TEST_CASE("multivariate gcd pulls out common factors") {
    MultiPoly a0 = MultiPoly::symbol(0), a2 = MultiPoly::symbol(1), al = MultiPoly::symbol(2);
    MultiPoly f = (a0 + a2) * (a0 + a2) * al;
    MultiPoly g = (a0 + a2) * (a0 - a2);
    MultiPoly d = MultiPoly::gcd(f, g);
    // gcd is a0 + a2 up to a rational unit
    CHECK(d.degree(0) == 1);
    CHECK(f.divide_exact(d) * d == f);
    CHECK(g.divide_exact(d) * d == g);
}

TEST_CASE("series ring axioms, 200 random cases, exact") {
    Gen gen(23);
    for (int i = 0; i < 200; ++i) {
        FormalSeries x = gen.series(), y = gen.series(), z = gen.series();
        CHECK(FormalSeries::agree_on_common_window(x + y, y + x));
        CHECK(FormalSeries::agree_on_common_window((x + y) + z, x + (y + z)));
        CHECK(FormalSeries::agree_on_common_window(x * y, y * x));
        CHECK(FormalSeries::agree_on_common_window((x * y) * z, x * (y * z)));
        CHECK(FormalSeries::agree_on_common_window(x * (y + z), x * y + x * z));
        CHECK((x - x).is_zero());
    }
    // a smaller sweep with genuine fraction coefficients
    for (int i = 0; i < 20; ++i) {
        FormalSeries x = gen.series(4, false), y = gen.series(4, false);
        CHECK(FormalSeries::agree_on_common_window(x + y, y + x));
        CHECK(FormalSeries::agree_on_common_window(x * y, y * x));
        CHECK((x - x).is_zero());
        if (!y.is_zero()) {
            FormalSeries q = (x * y) / y;
            CHECK(FormalSeries::agree_on_common_window(q, x));
        }
    }
}

TEST_CASE("series truncation propagation rules") {
    Gen gen(31);
    for (int i = 0; i < 40; ++i) {
        FormalSeries x = gen.series(5), y = gen.series(4);
        CHECK((x + y).truncation_order() == std::min(x.truncation_order(), y.truncation_order()));
        if (!x.is_zero() && !y.is_zero()) {
            CHECK((x * y).truncation_order() ==
                  std::min(x.valuation() + y.truncation_order(),
                           y.valuation() + x.truncation_order()));
            CHECK(x.inverted().truncation_order() == x.truncation_order() - 2 * x.valuation());
        }
    }
}

TEST_CASE("series worked examples") {
    const int T = 8;
    FieldElement one(1);
    FormalSeries u = FormalSeries::monomial(one, 0, T) + FormalSeries::monomial(one, 1, T);
    FormalSeries v = FormalSeries::monomial(one, 0, T) - FormalSeries::monomial(one, 1, T);
    FormalSeries prod = u * v;  // 1 - t^2
    CHECK(prod.coeff(0) == one);
    CHECK(prod.coeff(1).is_zero());
    CHECK(prod.coeff(2) == FieldElement(-1));

    // invert(alpha t^k (1 + t)) = alpha^{-1} t^{-k} (1 - t + t^2 - ...)
    FieldElement alpha = FieldElement::symbol(2);
    int k = 2;
    FormalSeries w = FormalSeries::monomial(alpha, k, T) + FormalSeries::monomial(alpha, k + 1, T);
    FormalSeries winv = w.inverted();
    CHECK(winv.valuation() == -k);
    FieldElement ainv = FieldElement(1) / alpha;
    CHECK(winv.coeff(-k) == ainv);
    CHECK(winv.coeff(-k + 1) == -ainv);
    CHECK(winv.coeff(-k + 2) == ainv);

    // with w = delta + alpha t^k and delta^2 = 1:
    // 1 - w^2 = -2 delta alpha t^k - alpha^2 t^{2k}
    for (long long delta : {1LL, -1LL}) {
        FormalSeries wd =
            FormalSeries::monomial(FieldElement(delta), 0, T) + FormalSeries::monomial(alpha, k, T);
        FormalSeries g = FormalSeries::monomial(one, 0, T) - wd * wd;
        CHECK(g.valuation() == k);
        CHECK(g.coeff(k) == FieldElement(-2 * delta) * alpha);
        CHECK(g.coeff(2 * k) == -(alpha * alpha));
    }

    CHECK_THROWS_AS(FormalSeries::zero(6).inverted(), DomainError);
}
