#include "nevdiff/confinement.hpp"

#include <cmath>
#include <random>

#include "nevdiff/errors.hpp"
#include "nevdiff/special.hpp"

namespace nevdiff {

namespace {

FieldElement sym_a0() { return FieldElement::symbol(0); }
FieldElement sym_a2(bool symbolic) { return symbolic ? FieldElement::symbol(1) : FieldElement(0); }
FieldElement sym_alpha() { return FieldElement::symbol(2); }

// RHS of the difference equation: (a2 w^2 + a0) / (1 - w^2)
FormalSeries equation_rhs(const FormalSeries& w, bool a2_symbolic, int trunc) {
    FormalSeries w2 = w * w;
    FormalSeries one = FormalSeries::monomial(FieldElement(1), 0, trunc);
    FormalSeries num = FormalSeries::monomial(sym_a0(), 0, trunc);
    if (a2_symbolic) num = num + FormalSeries::monomial(sym_a2(true), 0, trunc) * w2;
    FormalSeries den = one - w2;
    return num / den;
}

}  // namespace

ConfinementTrace iterate_confinement(bool a2_symbolic, int delta, int k, int j_max,
                                     ConfinementCase tag, int truncation_order) {
    if (delta != 1 && delta != -1) throw ConfigError("confinement: delta must be +1 or -1");
    if (k < 1) throw ConfigError("confinement: k must be a positive integer");
    if (j_max < 1) throw ConfigError("confinement: j_max must be >= 1");

    // irreducibility of the right side requires a0 + a2 != 0
    {
        FieldElement s = sym_a0() + sym_a2(a2_symbolic);
        if (s.is_zero()) throw ConfigError("confinement: a0 + a2 vanishes; right side reducible");
    }

    int T0 = truncation_order > 0 ? truncation_order : 3 * k + 4;
    for (int T = T0; T <= T0 + 16; T += 2) {
        try {
            ConfinementTrace trace;
            trace.tag = tag;
            trace.delta = delta;
            trace.k = k;
            trace.j_max = j_max;
            trace.a2_symbolic = a2_symbolic;
            trace.truncation_order = T;

            FormalSeries w0 = FormalSeries::monomial(FieldElement(delta), 0, T) +
                              FormalSeries::monomial(sym_alpha(), k, T);
            FormalSeries w_neighbor;
            if (tag == ConfinementCase::case1) {
                // generic finite value at z0 - 1
                w_neighbor =
                    FormalSeries::monomial(FieldElement(BigRational(BigInt(7), BigInt(3))), 0, T);
            } else {
                // generic pole of order k at z0 - 1
                w_neighbor = FormalSeries::monomial(
                    FieldElement(BigRational(BigInt(5), BigInt(2))), -k, T);
            }

            trace.series.push_back(w_neighbor);
            trace.series.push_back(w0);
            FormalSeries prev = w_neighbor, cur = w0;
            for (int j = 1; j <= j_max; ++j) {
                FormalSeries next = equation_rhs(cur, a2_symbolic, T) - prev;
                if (next.trusted_terms() < 1)
                    throw TruncationError("confinement: trusted window collapsed");
                trace.series.push_back(next);
                prev = cur;
                cur = next;
            }
            for (int j = -1; j <= j_max; ++j) {
                const FormalSeries& s = trace.at_offset(j);
                if (j % 2 != 0 && !s.is_zero() && s.valuation() < 0) {
                    trace.pole_leading.push_back({j, s.leading()});
                    if (s.valuation() != -k) trace.case_switch_offsets.push_back(j);
                }
            }
            // vanishing leading coefficient at an odd offset means a fall
            // back into the asymmetric situation; record it
            for (int j = 1; j <= j_max; j += 2) {
                const FormalSeries& s = trace.at_offset(j);
                if (s.valuation() >= 0) trace.case_switch_offsets.push_back(j);
            }

            trace.pattern.pole_step = 2;
            trace.pattern.delta_point_step = 4;
            trace.pattern.period4_structure = true;
            return trace;
        } catch (const TruncationError&) {
            continue;
        }
    }
    throw TruncationError("confinement: truncation kept collapsing up to the cap");
}

bool trace_satisfies_equation(const ConfinementTrace& trace) {
    for (int j = 0; j < trace.j_max; ++j) {
        FormalSeries lhs = trace.at_offset(j + 1) + trace.at_offset(j - 1);
        FormalSeries rhs = equation_rhs(trace.at_offset(j), trace.a2_symbolic,
                                        trace.truncation_order);
        if (!FormalSeries::agree_on_common_window(lhs, rhs)) return false;
    }
    return true;
}

CoefficientLawReport verify_coefficient_laws(const ConfinementTrace& trace) {
    if (trace.j_max < 13)
        throw ConfigError("verify_coefficient_laws: trace must reach offset 13");
    CoefficientLawReport rep;

    FieldElement a0 = sym_a0();
    FieldElement a2 = sym_a2(trace.a2_symbolic);
    FieldElement alpha = sym_alpha();
    FieldElement I = (a2 + a0) / (FieldElement(2) * alpha);

    // (i) the increment between c_j and c_{j+4}
    auto leading_at = [&](int j) -> const FieldElement* {
        for (auto& [off, c] : trace.pole_leading)
            if (off == j) return &c;
        return nullptr;
    };
    for (auto& [j, cj] : trace.pole_leading) {
        const FieldElement* cj4 = leading_at(j + 4);
        if (!cj4) continue;
        FieldElement d = *cj4 - cj;
        int sign = 0;
        if (d == I)
            sign = 1;
        else if (d == -I)
            sign = -1;
        else
            rep.recurrence_exact = false;
        rep.recurrence_signs.push_back({j, sign});
    }
    for (auto& [j, s] : rep.recurrence_signs)
        if (s == -1) rep.sign_alternation_flagged = true;

    // (ii) closed form under the best index alignment (case1 only)
    if (trace.tag == ConfinementCase::case1) {
        FieldElement base = (a0 + a2) / (alpha * FieldElement(trace.delta));
        auto formula = [&](long long m) {
            BigRational quarter(BigInt(m), BigInt(4));
            BigRational eighth(BigInt(1), BigInt(8));
            BigRational inner = quarter + eighth;
            if (m % 2 != 0) inner = -inner;
            return FieldElement(inner - eighth) * base;
        };
        for (int s = -2; s <= 4 && !rep.closed_form_alignment; ++s) {
            bool all = true;
            for (auto& [j, cj] : trace.pole_leading) {
                if (j < 1) continue;  // the formula describes offsets past z0
                long long n = (j - 1) / 2;
                if (!(cj == formula(n + s))) {
                    all = false;
                    break;
                }
            }
            if (all) rep.closed_form_alignment = s;
        }
        // the text's own index: n = 0 at the first pole offset gives 0,
        // which no pole leading coefficient can equal
        if (rep.closed_form_alignment && *rep.closed_form_alignment != 0)
            rep.n0_discrepancy_flagged = true;
        if (!rep.closed_form_alignment)
            rep.notes += "closed form matched no alignment shift in [-2,4]; ";
    }

    // (iii) constant terms at even offsets
    FieldElement want0(trace.delta);
    FieldElement want2 = -a2 - FieldElement(trace.delta);
    for (int j = 0; j <= trace.j_max; j += 2) {
        const FormalSeries& s = trace.at_offset(j);
        FieldElement c0 = s.coeff(0);
        if (j % 4 == 0 && !(c0 == want0)) rep.even_constants_exact = false;
        if (j % 4 == 2 && !(c0 == want2)) rep.even_constants_exact = false;
    }
    return rep;
}

PatternConclusion pole_pattern_conclusion(const ConfinementTrace& trace) {
    PatternConclusion out;
    int first_pole = (trace.tag == ConfinementCase::case2) ? -1 : 1;
    for (int j = -1; j <= trace.j_max; ++j) {
        const FormalSeries& s = trace.at_offset(j);
        bool odd = (j % 2 != 0);
        if (odd && j >= first_pole) {
            if (s.valuation() != -trace.k) out.poles_on_odd_offsets = false;
        } else if (!odd) {
            if (j % 4 == 0) {
                // delta point of multiplicity k: w - delta vanishes to order k
                FormalSeries shifted =
                    s - FormalSeries::monomial(FieldElement(trace.delta), 0,
                                               s.truncation_order());
                if (shifted.is_zero() || shifted.valuation() != trace.k)
                    out.delta_points_step4 = false;
            } else {
                FieldElement c0 = s.coeff(0);
                FieldElement want = -sym_a2(trace.a2_symbolic) - FieldElement(trace.delta);
                if (!(c0 == want)) out.neg_a2_delta_points_step4 = false;
            }
        }
    }
    out.implication =
        "poles and delta-points recur along arithmetic progressions of step 4 (poles fill both "
        "odd classes, step 2), so a finite-order non-periodic meromorphic solution would force "
        "T(r,w) <= (3/4) T(r,w) + S(r,w); hence a2 = 0 for such solutions";
    return out;
}

ExplicitSolutionReport check_explicit_solution(double k_modulus, unsigned seed) {
    ExplicitSolutionReport rep;
    rep.k_modulus = k_modulus;
    if (!(k_modulus > 0 && k_modulus < 1)) {
        rep.note = "modulus outside (0,1)";
        return rep;
    }
    const double K = elliptic_K(k_modulus);
    const double C = 0.3127;  // fixed anchor; the family is translation invariant

    // residual of w(z+1) + w(z-1) = a0 / (1 - w^2) over sample points
    auto w_of = [&](const std::array<double, 6>& p, double z) -> Complex {
        Complex s = jacobi_sn(Complex(p[4] * z + C, 0), k_modulus);
        Complex den = p[2] * s + p[3];
        return (p[0] * s + p[1]) / den;
    };
    auto residual = [&](const std::array<double, 6>& p, int nsamples, unsigned salt) -> double {
        std::mt19937 rng(salt);
        std::uniform_real_distribution<double> U(-6.0, 6.0);
        double worst = 0.0;
        int used = 0;
        for (int i = 0; i < 4 * nsamples && used < nsamples; ++i) {
            double z = U(rng);
            Complex wm = w_of(p, z - 1), w0 = w_of(p, z), wp = w_of(p, z + 1);
            double m = std::fmax(std::abs(wm), std::fmax(std::abs(w0), std::abs(wp)));
            if (!std::isfinite(m) || m > 1e6) continue;
            Complex lhs = wp + wm;
            Complex den = 1.0 - w0 * w0;
            if (std::abs(den) < 1e-9) continue;
            Complex rhs = Complex(p[5], 0) / den;
            worst = std::fmax(worst, std::abs(lhs - rhs));
            ++used;
        }
        if (used < nsamples / 2) return 1e200;
        return worst;
    };
    auto cost = [&](const std::array<double, 6>& p) { return residual(p, 24, seed * 7919u + 1); };

    // Nelder-Mead on the 6 parameters
    auto nelder_mead = [&](std::array<double, 6> start) {
        const int n = 6;
        std::vector<std::array<double, 6>> simplex(n + 1, start);
        std::vector<double> f(n + 1);
        for (int i = 0; i < n; ++i)
            simplex[size_t(i + 1)][size_t(i)] += (std::abs(start[size_t(i)]) + 0.1) * 0.15;
        for (int i = 0; i <= n; ++i) f[size_t(i)] = cost(simplex[size_t(i)]);
        for (int it = 0; it < 600; ++it) {
            std::vector<size_t> ord(size_t(n + 1));
            for (size_t i = 0; i <= size_t(n); ++i) ord[i] = i;
            std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return f[a] < f[b]; });
            if (f[ord[0]] < 1e-12) break;
            std::array<double, 6> centroid{};
            for (size_t i = 0; i < size_t(n); ++i)
                for (int d = 0; d < n; ++d) centroid[size_t(d)] += simplex[ord[i]][size_t(d)] / n;
            auto worst = ord[size_t(n)];
            auto mix = [&](double t) {
                std::array<double, 6> p{};
                for (int d = 0; d < n; ++d)
                    p[size_t(d)] = centroid[size_t(d)] + t * (simplex[worst][size_t(d)] -
                                                              centroid[size_t(d)]);
                return p;
            };
            auto refl = mix(-1.0);
            double fr = cost(refl);
            if (fr < f[ord[0]]) {
                auto exp2 = mix(-2.0);
                double fe = cost(exp2);
                if (fe < fr) {
                    simplex[worst] = exp2;
                    f[worst] = fe;
                } else {
                    simplex[worst] = refl;
                    f[worst] = fr;
                }
            } else if (fr < f[ord[size_t(n - 1)]]) {
                simplex[worst] = refl;
                f[worst] = fr;
            } else {
                auto con = mix(0.5);
                double fc = cost(con);
                if (fc < f[worst]) {
                    simplex[worst] = con;
                    f[worst] = fc;
                } else {
                    for (size_t i = 1; i <= size_t(n); ++i) {
                        for (int d = 0; d < n; ++d)
                            simplex[ord[i]][size_t(d)] =
                                0.5 * (simplex[ord[i]][size_t(d)] + simplex[ord[0]][size_t(d)]);
                        f[ord[i]] = cost(simplex[ord[i]]);
                    }
                }
            }
        }
        size_t best = 0;
        for (size_t i = 1; i <= size_t(n); ++i)
            if (f[i] < f[best]) best = i;
        return std::make_pair(simplex[best], f[best]);
    };

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0), UO(0.15, 2.0 * K);
    std::array<double, 6> best{};
    double best_f = 1e300;
    for (int start = 0; start < 60; ++start) {
        std::array<double, 6> p{U(rng), U(rng), U(rng), U(rng), UO(rng), U(rng)};
        if (std::abs(p[2]) + std::abs(p[3]) < 0.2) p[3] += 1.0;
        auto [q, fq] = nelder_mead(p);
        if (fq < best_f) {
            best_f = fq;
            best = q;
        }
        if (best_f < 1e-11) break;
    }

    rep.params = best;
    rep.best_residual = residual(best, 100, seed * 104729u + 17);
    // the solutions are periodic but not of period 4
    {
        std::mt19937 rng2(seed + 5);
        std::uniform_real_distribution<double> U2(-5.0, 5.0);
        double dev = 0.0;
        int used = 0;
        for (int i = 0; i < 200 && used < 40; ++i) {
            double z = U2(rng2);
            Complex a = w_of(best, z), b = w_of(best, z + 4.0);
            if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b))) continue;
            if (std::abs(a) > 1e3 || std::abs(b) > 1e3) continue;
            dev = std::fmax(dev, std::abs(b - a));
            ++used;
        }
        rep.period4_deviation = dev;
    }
    rep.resolved = rep.best_residual <= 1e-8;
    if (!rep.resolved)
        rep.note = "residual threshold not reached; unresolved-solution report";
    return rep;
}

}  // namespace nevdiff
