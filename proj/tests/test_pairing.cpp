#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nevdiff/errors.hpp"
#include "nevdiff/pairing.hpp"

using namespace nevdiff;

namespace {

// dense solve of a small complex linear system (for synthetic test functions)
std::vector<Complex> solve_dense(std::vector<std::vector<Complex>> A, std::vector<Complex> b) {
    size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t row = col + 1; row < n; ++row)
            if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (size_t row = col + 1; row < n; ++row) {
            Complex f = A[row][col] / A[col][col];
            for (size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<Complex> x(n);
    for (size_t i = n; i-- > 0;) {
        Complex acc = b[i];
        for (size_t k = i + 1; k < n; ++k) acc -= A[i][k] * x[k];
        x[i] = acc / A[i][i];
    }
    return x;
}

}  // namespace

TEST_CASE("pole pairs of wp + exp count four") {
    Session ses;
    auto g = mf_wp_plus_exp();
    const Complex c(2, 0);  // period of wp
    auto pairs = pair_scan(ses, g, c, TargetKey::inf(), 12.0);
    CHECK(!pairs.empty());
    for (auto& pr : pairs) {
        CHECK(pr.p == 2);
        CHECK(pr.q == 2);
        // identical principal parts (2 terms) on top of min{p,q} = 2; the
        // constant terms e^{z0} and e^{z0+2} differ
        CHECK(pr.pair_count == 4);
    }
}

TEST_CASE("zero pairs of sn with separation 2K count one") {
    Session ses;
    double k = 0.5, K = elliptic_K(k);
    auto sn = mf_jacobi_sn(k);
    auto pairs = pair_scan(ses, sn, {2 * K, 0}, TargetKey::at({0, 0}), 9.0);
    CHECK(!pairs.empty());
    for (auto& pr : pairs) {
        CHECK(pr.p == 1);
        CHECK(pr.q == 1);
        CHECK(pr.pair_count == 1);  // constant terms agree, slopes s and -s differ
    }
    // pole pairs likewise count one (residues flip sign)
    auto ppairs = pair_scan(ses, sn, {2 * K, 0}, TargetKey::inf(), 9.0);
    CHECK(!ppairs.empty());
    for (auto& pr : ppairs) CHECK(pr.pair_count == 1);
}

TEST_CASE("taylor rule synthetic: shared a, c1 t, c2 t^2, split at t^3") {
    const double c = 1.0;
    const Complex a(0.5, 0.25), c1(1.2, -0.3), c2(-0.7, 0.4);
    const Complex alpha(2.0, 1.0), beta(-1.5, 0.8);  // differing cubic terms
    // conditions: f(0)=a, f'(0)=c1, f''(0)/2=c2, f'''(0)/6=alpha,
    //             f(c)=a, f'(c)=c1, f''(c)/2=c2, f'''(c)/6=beta
    std::vector<std::vector<Complex>> A(8, std::vector<Complex>(8, {0, 0}));
    std::vector<Complex> rhs(8);
    auto fill_row = [&](size_t row, double z, int deriv) {
        double fact = 1.0;
        for (int j = 0; j < 8; ++j) {
            if (j < deriv) {
                A[row][size_t(j)] = {0, 0};
                continue;
            }
            double coef = 1.0;
            for (int t = 0; t < deriv; ++t) coef *= (j - t);
            A[row][size_t(j)] = coef * std::pow(z, j - deriv) / fact;
        }
    };
    int row = 0;
    for (double z : {0.0, c})
        for (int d = 0; d < 4; ++d) fill_row(size_t(row++), z, d);
    double fact[4] = {1, 1, 2, 6};
    rhs[0] = a;
    rhs[1] = c1 * fact[1];
    rhs[2] = c2 * fact[2];
    rhs[3] = alpha * fact[3];
    rhs[4] = a;
    rhs[5] = c1 * fact[1];
    rhs[6] = c2 * fact[2];
    rhs[7] = beta * fact[3];
    auto coeffs = solve_dense(A, rhs);

    Session ses;
    auto f = mf_rational(coeffs, {{1, 0}});
    int count = pair_count_at(ses, f, {0, 0}, {c, 0}, TargetKey::at(a));
    CHECK(count == 3);
}

TEST_CASE("pole rule with identical principal parts: f = 1/z^2 + 1/(z-1)^2") {
    // expansions at 0 and 1 share the principal part and the constant 1;
    // the t coefficients +2 and -2 differ, so the pole pair counts
    // min{2,2} + 3 = 5 and contributes weight 1 to N_0
    Session ses;
    auto f = mf_rational({{1, 0}, {-2, 0}, {2, 0}}, {{0, 0}, {0, 0}, {1, 0}, {-2, 0}, {1, 0}});
    int count = pair_count_at(ses, f, {0, 0}, {1, 0}, TargetKey::inf());
    CHECK(count == 5);

    double N0 = n0_diagnostic(ses, f, {1, 0}, 2.0);
    CHECK(N0 == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("n0 vanishes for wp + exp though principal parts match") {
    Session ses;
    auto g = mf_wp_plus_exp();
    CHECK(n0_diagnostic(ses, g, {2, 0}, 9.0) == 0.0);
}

TEST_CASE("periodicity guard") {
    Session ses;
    auto wp = mf_weierstrass();
    CHECK_THROWS_AS(paired_counting(ses, wp, {2, 0}, TargetKey::inf(), 5.0),
                    PeriodicFunctionError);
    CHECK_THROWS_AS(n0_diagnostic(ses, wp, {2, 0}, 5.0), PeriodicFunctionError);
    auto e = mf_exp();
    CHECK_THROWS_AS(pair_scan(ses, e, {0, 2 * M_PI}, TargetKey::at({1, 0}), 5.0),
                    PeriodicFunctionError);
}

TEST_CASE("paired counting identities and trivial cases") {
    Session ses;
    auto g = mf_wp_plus_exp();
    auto s = paired_counting(ses, g, {2, 0}, TargetKey::inf(), 20.0);
    CHECK(s.N_tilde == doctest::Approx(s.N - s.N_c).epsilon(1e-15));
    CHECK(s.N_tilde / s.N == doctest::Approx(-1.0).epsilon(0.05));

    auto e = mf_exp();
    auto se = paired_counting(ses, e, {1, 0}, TargetKey::at({0, 0}), 15.0);
    CHECK(se.n_c == 0);
    CHECK(se.N_c == 0.0);
    CHECK(se.N_tilde == 0.0);

    auto idf = mf_rational({{0, 0}, {1, 0}}, {{1, 0}});  // f(z) = z
    auto si = paired_counting(ses, idf, {1.5, 0.5}, TargetKey::at({2, 1}), 10.0);
    CHECK(si.n_c == 0);
}

TEST_CASE("pole/zero pairing duality") {
    Session ses;
    double K = elliptic_K(0.5);
    auto sn = mf_jacobi_sn(0.5);
    auto rec = mf_reciprocal(sn);
    auto a = paired_counting(ses, sn, {2 * K, 0}, TargetKey::inf(), 10.0);
    auto b = paired_counting(ses, rec, {2 * K, 0}, TargetKey::at({0, 0}), 10.0);
    CHECK(a.n_c == b.n_c);
    CHECK(a.N_c == doctest::Approx(b.N_c).epsilon(1e-9));
}

TEST_CASE("n_pair_term") {
    Session ses;
    auto e = mf_exp();
    CHECK(n_pair_term(ses, e, {1, 0}, 20.0) == 0.0);

    // f = (z-1)/(z+1), c = 1: Delta f = 2/((z+1)(z+2)) in closed form with
    // poles at -1, -2 and no zeros, so for r > 2
    // N_pair = 2 log r - (log r + log(r/2)) + 0 = log 2
    auto f = mf_rational({{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}});
    for (double r : {5.0, 11.0}) {
        CHECK(n_pair_term(ses, f, {1, 0}, r) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    }
}

TEST_CASE("pair indices: sn and wp + exp reproduce the paper values") {
    Session ses;
    double K = elliptic_K(0.5);
    RadiusGrid grid{2.0, 34.0, 20, true};

    auto sn = mf_jacobi_sn(0.5);
    auto pz = pair_indices(ses, sn, {2 * K, 0}, TargetKey::at({0, 0}), grid);
    auto pp = pair_indices(ses, sn, {2 * K, 0}, TargetKey::inf(), grid);
    CHECK(std::abs(pz.pi_c.value + pp.pi_c.value - 2.0) <= 0.2);

    auto g = mf_wp_plus_exp();
    auto gi = pair_indices(ses, g, {2, 0}, TargetKey::inf(), grid);
    CHECK(gi.Pi_c.value >= 1.8);
    CHECK(gi.Pi_c.value <= 2.2);

    auto e = mf_exp();
    auto ei = pair_indices(ses, e, {1, 0}, TargetKey::at({0.7, 0.3}), grid);
    CHECK(std::abs(ei.pi_c.value) <= 0.1);
}

TEST_CASE("classification of paired values") {
    Session ses;
    double K = elliptic_K(0.5);

    auto xx = mf_exp_exp();
    CHECK(classify_exceptional(ses, xx, {std::log(2.0), 0}, TargetKey::at({1, 0}), 5.0) ==
          PairClass::exceptional_paired);
    CHECK(classify_exceptional(ses, xx, {std::log(2.0), 0}, TargetKey::at({0, 0}), 5.0) ==
          PairClass::exceptional_paired);  // Picard exceptional, vacuously
    CHECK(classify_exceptional(ses, xx, {std::log(2.0), 0}, TargetKey::inf(), 5.0) ==
          PairClass::exceptional_paired);

    auto sn = mf_jacobi_sn(0.5);
    CHECK(classify_exceptional(ses, sn, {2 * K, 0}, TargetKey::at({0, 0}), 8.0) ==
          PairClass::exceptional_paired);
    CHECK(classify_exceptional(ses, sn, {2 * K, 0}, TargetKey::inf(), 8.0) ==
          PairClass::exceptional_paired);
    CHECK(classify_exceptional(ses, sn, {2 * K, 0}, TargetKey::at({1, 0}), 8.0) ==
          PairClass::none);

    auto e = mf_exp();
    CHECK(classify_exceptional(ses, e, {1, 0}, TargetKey::at({1, 0}), 8.0) == PairClass::none);

    auto wp = mf_weierstrass();
    CHECK(classify_exceptional(ses, wp, {0.7, 0.45}, TargetKey::inf(), 6.0) == PairClass::none);
}

TEST_CASE("completely-paired classification is invariant under negating c") {
    Session ses;
    double K = elliptic_K(0.5);
    auto sn = mf_jacobi_sn(0.5);
    for (TargetKey t : {TargetKey::at({0, 0}), TargetKey::inf()}) {
        auto plus = classify_exceptional(ses, sn, {2 * K, 0}, t, 8.0);
        auto minus = classify_exceptional(ses, sn, {-2 * K, 0}, t, 8.0);
        CHECK(plus == minus);
    }
}

TEST_CASE("proof-chain inequality: N_0 + sum N_c <= N(r, 1/Delta) + 0.5") {
    Session ses;
    double K = elliptic_K(0.5);
    auto sn = mf_jacobi_sn(0.5);
    Complex c(2 * K, 0);
    for (double r : {8.0, 14.0}) {
        double lhs = n0_diagnostic(ses, sn, c, r) +
                     paired_counting(ses, sn, c, TargetKey::at({0, 0}), r).N_c;
        SpecPtr d = difference_spec(sn.spec(), c);
        REQUIRE(d != nullptr);
        double rhs = counting(ses, ses.derived(d), TargetKey::at({0, 0}), r, false);
        CHECK(lhs <= rhs + 0.5);
    }
}
