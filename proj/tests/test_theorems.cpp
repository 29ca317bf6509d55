#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nevdiff/errors.hpp"
#include "nevdiff/theorems.hpp"

using namespace nevdiff;

namespace {
const double kK = elliptic_K(0.5);
}

TEST_CASE("logdiff decay for the three example configurations") {
    Session ses;
    RadiusGrid grid{5.0, 40.0, 16, true};

    // e^z, c = 1: the ratio is the constant e, so m = 1 and m/T = pi/r
    auto rl = verify_logdiff(ses, mf_exp(), {1, 0}, 0.5, grid);
    CHECK(rl.verdict != Verdict::fails);
    CHECK(rl.tail_value <= 0.1);
    CHECK(rl.tail_value == doctest::Approx(M_PI / 40.0).epsilon(0.02));

    // sn, c = 2K: the ratio collapses to -1 and m vanishes identically
    auto rs = verify_logdiff(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, 0.5, grid);
    CHECK(rs.verdict == Verdict::holds);
    CHECK(rs.tail_value == 0.0);

    // wp + e^z, c = 2
    auto rg = verify_logdiff(ses, mf_wp_plus_exp(), {2, 0}, 0.5, grid);
    CHECK(rg.verdict != Verdict::fails);
    CHECK(rg.tail_value <= 0.1);
}

TEST_CASE("difference second main theorem, both forms") {
    Session ses;
    RadiusGrid grid{10.0, 36.0, 12, true};
    const std::vector<Complex> pm1{{1, 0}, {-1, 0}};

    auto t2_sn = verify_thm2nd(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, pm1, grid, 0.05);
    CHECK(t2_sn.verdict != Verdict::fails);

    auto t2_e = verify_thm2nd(ses, mf_exp(), {1, 0}, pm1, grid, 0.05);
    CHECK(t2_e.verdict != Verdict::fails);

    auto t22_sn = verify_thm2nd2(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, pm1, grid, 0.05);
    CHECK(t22_sn.verdict != Verdict::fails);

    auto t22_e = verify_thm2nd2(ses, mf_exp(), {1, 0}, pm1, grid, 0.05);
    CHECK(t22_e.verdict != Verdict::fails);
}

TEST_CASE("thm2nd2 for wp + exp: negative tilde N_c yet the inequality holds") {
    Session ses;
    RadiusGrid grid{10.0, 30.0, 10, true};
    auto g = mf_wp_plus_exp();
    auto rep = verify_thm2nd2(ses, g, {2, 0}, {{1, 0}, {-1, 0}}, grid, 0.05);
    CHECK(rep.verdict != Verdict::fails);
    // the pole contribution alone is about -T
    auto s = paired_counting(ses, g, {2, 0}, TargetKey::inf(), 25.0);
    CHECK(s.N_tilde < 0.0);
}

TEST_CASE("configuration errors") {
    Session ses;
    RadiusGrid grid{10.0, 30.0, 10, true};
    CHECK_THROWS_AS(verify_thm2nd(ses, mf_exp(), {1, 0}, {{1, 0}}, grid, 0.05), ConfigError);
    CHECK_THROWS_AS(
        verify_thm2nd2(ses, mf_exp(), {1, 0}, {{1, 0}, {1, 0}}, grid, 0.05), ConfigError);
    // both forms refuse periodic input identically
    CHECK_THROWS_AS(
        verify_thm2nd(ses, mf_weierstrass(), {2, 0}, {{1, 0}, {-1, 0}}, grid, 0.05),
        PeriodicFunctionError);
    CHECK_THROWS_AS(
        verify_thm2nd2(ses, mf_weierstrass(), {2, 0}, {{1, 0}, {-1, 0}}, grid, 0.05),
        PeriodicFunctionError);
}

TEST_CASE("monotone slack") {
    Session ses;
    RadiusGrid grid{10.0, 30.0, 10, true};
    auto a = verify_thm2nd2(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, {{1, 0}, {-1, 0}}, grid, 0.05);
    auto b = verify_thm2nd2(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, {{1, 0}, {-1, 0}}, grid, 0.10);
    CHECK(a.verdict != Verdict::fails);
    CHECK(b.verdict != Verdict::fails);
    for (size_t i = 0; i < a.rows.size(); ++i) CHECK(b.rows[i].rhs >= a.rows[i].rhs);
}

TEST_CASE("defect relation sums") {
    Session ses;
    RadiusGrid grid{2.0, 30.0, 16, true};

    // sn with c = 2K: sum over {0, inf} of (delta + pi_c) is 2
    auto ds = defect_relation_report(ses, mf_jacobi_sn(0.5), {2 * kK, 0}, {{0, 0}}, grid);
    CHECK(std::abs(ds.sum_delta_pi - 2.0) <= 0.2);

    // wp + e^z with the period: Pi_c(inf) alone reaches 2
    auto dg = defect_relation_report(ses, mf_wp_plus_exp(), {2, 0}, {}, grid);
    CHECK(std::abs(dg.sum_Pi - 2.0) <= 0.2);

    // degree-balanced rational, so infinity is a generic value too: the
    // whole sum vanishes
    auto f = mf_rational({{1, 0}, {0, 0}, {1, 0}}, {{1, 0}, {-3, 0}, {1, 0}});
    RadiusGrid big{10.0, 2.0e4, 16, true};
    auto dr = defect_relation_report(ses, f, {1, 0}, {{0.4, 0.3}}, big);
    CHECK(std::abs(dr.sum_delta_pi) <= 0.1);
}

TEST_CASE("picard analogue scans") {
    Session ses;

    auto xx = mf_exp_exp();
    auto sx = picard_analogue_scan(
        ses, xx, {std::log(2.0), 0},
        {TargetKey::at({0, 0}), TargetKey::at({1, 0}), TargetKey::inf()}, 5.0);
    CHECK(sx.exceptional_count == 3);
    CHECK(sx.contradiction);
    CHECK(sx.resolution.find("infinite order") != std::string::npos);

    auto sn = mf_jacobi_sn(0.5);
    auto ss = picard_analogue_scan(
        ses, sn, {2 * kK, 0},
        {TargetKey::at({0, 0}), TargetKey::at({1, 0}), TargetKey::at({-1, 0}), TargetKey::inf()},
        8.0);
    CHECK(ss.exceptional_count == 2);
    CHECK(!ss.contradiction);
    for (auto& [t, cls] : ss.classes) {
        bool is_zero_or_inf = t.is_inf || t.a == Complex(0, 0);
        CHECK((cls == PairClass::exceptional_paired) == is_zero_or_inf);
    }

    auto wp = mf_weierstrass();
    auto sw = picard_analogue_scan(ses, wp, {0.7, 0.45}, {TargetKey::inf()}, 6.0);
    CHECK(sw.exceptional_count == 0);
}

TEST_CASE("five-value sharing: sn and 1/sn") {
    Session ses;
    auto sn = mf_jacobi_sn(0.5);
    auto rec = mf_reciprocal(sn);
    std::vector<TargetKey> four{TargetKey::at({-1, 0}), TargetKey::at({0, 0}),
                                TargetKey::at({1, 0}), TargetKey::inf()};
    auto rep = shared_ignoring_pairs(ses, sn, rec, {2 * kK, 0}, four, 8.0);
    CHECK(rep.shared_count == 4);
    for (auto& t : rep.targets) CHECK(t.shared);

    // a generic fifth value is not shared
    auto rep5 =
        shared_ignoring_pairs(ses, sn, rec, {2 * kK, 0}, {TargetKey::at({2.5, 0})}, 8.0);
    CHECK(rep5.shared_count == 0);
    CHECK(!rep5.targets[0].shared);

    // identical functions share trivially
    auto repid = shared_ignoring_pairs(ses, sn, sn, {2 * kK, 0}, four, 8.0);
    CHECK(repid.shared_count == 4);

    // symmetry in f and g
    auto repsym = shared_ignoring_pairs(ses, rec, sn, {2 * kK, 0}, four, 8.0);
    CHECK(repsym.shared_count == rep.shared_count);
}
