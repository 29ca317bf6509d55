#include "nevdiff/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "nevdiff/errors.hpp"
#include "nevdiff/local_expansion.hpp"

namespace nevdiff {

namespace {

struct PointIndex {
    std::vector<PointRecord> pts;  // sorted by (re, im)

    const PointRecord* find(Complex z) const {
        double tol = 1e-6 * (1.0 + std::abs(z));
        PointRecord probe{z - Complex(tol, 0), 0, TargetKey::inf()};
        auto it = std::lower_bound(pts.begin(), pts.end(), probe,
                                   [](const PointRecord& a, const PointRecord& b) {
                                       if (a.location.real() != b.location.real())
                                           return a.location.real() < b.location.real();
                                       return a.location.imag() < b.location.imag();
                                   });
        for (; it != pts.end() && it->location.real() <= z.real() + tol; ++it)
            if (std::abs(it->location - z) <= tol) return &*it;
        return nullptr;
    }
};

int valuation_of_target(const LocalExpansion& L, TargetKey target) {
    // multiplicity of the target at the expansion center (0 if not attained)
    if (target.is_inf) return L.valuation < 0 ? -L.valuation : 0;
    if (L.valuation < 0) return 0;
    for (int e = 0; e < L.truncation_order; ++e) {
        Complex c = L.coeff(e) - (e == 0 ? target.a : Complex(0, 0));
        double floor_mag = std::fmax(8.0 * L.noise_at(e), 1e-12);
        if (std::abs(c) > floor_mag) return e == 0 ? 0 : e;
    }
    return 0;
}

// The number of equal initial coefficients of f(z0 + t) and f(z0 + c + t)
// equals the valuation of (Delta_c f)(z0 + t) relative to the compared
// starting exponent. Working on the simplified difference spec keeps exact
// atom cancellations (periodic p, sn sign flips) out of the numerics
// entirely, so the decision rests on a leading coefficient that is O(1)
// relative to its own noise.
const MeromorphicFunction& difference_fn(Session& ses, const MeromorphicFunction& f, Complex c) {
    SpecPtr d = difference_spec(f.spec(), c);
    if (!d) throw PeriodicFunctionError("difference of a c-periodic function is identically 0");
    return ses.derived(d);
}

}  // namespace

void require_not_periodic(Session& ses, const MeromorphicFunction& f, Complex c) {
    if (difference_spec(f.spec(), c) == nullptr)
        throw PeriodicFunctionError("function is structurally periodic with period " +
                                    std::to_string(c.real()) + "+" + std::to_string(c.imag()) +
                                    "i");
    std::mt19937 rng(static_cast<unsigned>(ses.seed()));
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    int checked = 0;
    for (int draw = 0; draw < 256 && checked < 64; ++draw) {
        Complex z(U(rng), U(rng));
        ExtendedComplexValue a, b;
        try {
            a = f.evaluate(z);
            b = f.evaluate(z + c);
        } catch (const EvaluationRangeError&) {
            continue;
        }
        if (a.is_pole || b.is_pole) continue;
        ++checked;
        if (std::abs(a.value - b.value) > 1e-8 * (1.0 + std::abs(a.value))) return;
    }
    if (checked < 32)
        throw DomainError("periodicity probe: too few usable sample points");
    throw PeriodicFunctionError("periodicity probe: f(z+c) = f(z) at all sampled points");
}

// whether z0 lies in the zero set of the simplified difference function;
// this decides "f(z0 + c) = a" exactly where value-based thresholds cannot
// (for example when a shifted exponential term is far below 1)
// The tolerance is looser than the partner-point lookup (which has already
// succeeded when this is called): a zero of Delta_c f of multiplicity k
// computed in floating point splits into a cluster of diameter roughly
// eps^{1/k}, so membership must absorb the splitting.
static bool difference_vanishes_at(Session& ses, const MeromorphicFunction& dm, Complex z0) {
    double tol = 1e-4 * (1.0 + std::abs(z0));
    for (auto& rec : ses.points_in(dm, TargetKey::at({0, 0}), std::abs(z0) + 2 * tol + 1e-3)) {
        if (std::abs(rec.location - z0) <= tol) return true;
    }
    return false;
}

int pair_count_at(Session& ses, const MeromorphicFunction& f, Complex z0, Complex c,
                  TargetKey target, int depth) {
    const MeromorphicFunction& dm = difference_fn(ses, f, c);
    if (!target.is_inf) {
        // f(z0 + c) = a if and only if (Delta_c f)(z0) = 0; this is decided
        // on the zero set of the simplified difference, with no expansion at
        // the base point (which may sit arbitrarily close to a pole)
        if (!difference_vanishes_at(ses, dm, z0)) return 0;
        LocalExpansion D = local_expansion(ses, dm, z0, depth + 2);
        int count = D.valuation;  // equal Taylor terms from exponent 0
        if (count < 1) count = 1;
        if (count >= depth)
            throw DepthExhaustedError(
                "pair_count_at: all compared Taylor coefficients agree; raise the depth or "
                "declare the function periodic",
                depth);
        return count;
    }
    int need = depth + 6;
    LocalExpansion Lf = local_expansion(ses, f, z0, need);
    int p = valuation_of_target(Lf, target);
    if (p < 1)
        throw DomainError("pair_count_at: base point is not a pole (z0 = " +
                          std::to_string(z0.real()) + " + " + std::to_string(z0.imag()) +
                          "i, expansion valuation " + std::to_string(Lf.valuation) + ")");
    LocalExpansion Lg = local_expansion(ses, f, z0 + c, need + p);
    int q = valuation_of_target(Lg, target);
    if (q < 1) return 0;

    {
        if (p != q) return std::min(p, q);
        LocalExpansion D = local_expansion(ses, dm, z0, depth + p + 2);
        int m = D.valuation + p;  // equal Laurent terms from exponent -p
        if (m < 0) m = 0;
        if (m >= depth)
            throw DepthExhaustedError(
                "pair_count_at: all compared Laurent coefficients agree; raise the depth or "
                "declare the function periodic",
                depth);
        return p + m;
    }
}

std::vector<PairRecord> pair_scan(Session& ses, const MeromorphicFunction& f, Complex c,
                                  TargetKey target, double r, int depth) {
    require_not_periodic(ses, f, c);
    PointIndex idx{ses.points_in(f, target, r + std::abs(c) + 1e-6)};
    std::vector<PairRecord> out;
    for (auto& pt : idx.pts) {
        if (std::abs(pt.location) > r + 1e-9 * (1 + r)) continue;
        PairRecord rec;
        rec.base = pt.location;
        rec.c = c;
        rec.target = target;
        rec.p = pt.multiplicity;
        const PointRecord* partner = idx.find(pt.location + c);
        if (!partner) {
            out.push_back(rec);
            continue;
        }
        rec.q = partner->multiplicity;
        rec.pair_count = pair_count_at(ses, f, pt.location, c, target, depth);
        out.push_back(rec);
    }
    return out;
}

namespace {

PairedCountingSample counting_from_pairs(Session& ses, const MeromorphicFunction& f,
                                         const std::vector<PairRecord>& pairs, TargetKey target,
                                         double r) {
    PairedCountingSample s;
    s.r = r;
    s.target = target;
    for (auto& pr : pairs) {
        if (pr.pair_count == 0) continue;
        double d = std::abs(pr.base);
        if (d > r + 1e-9 * (1 + r)) continue;
        s.n_c += pr.pair_count;
        if (d <= 1e-9 * (1 + r))
            s.N_c += pr.pair_count * std::log(r);
        else
            s.N_c += pr.pair_count * std::log(r / d);
    }
    s.N = counting(ses, f, target, r, false);
    s.N_tilde = s.N - s.N_c;
    return s;
}

}  // namespace

PairedCountingSample paired_counting(Session& ses, const MeromorphicFunction& f, Complex c,
                                     TargetKey target, double r) {
    auto pairs = pair_scan(ses, f, c, target, r);
    return counting_from_pairs(ses, f, pairs, target, r);
}

PairedCountingSample paired_counting_from(Session& ses, const MeromorphicFunction& f,
                                          const std::vector<PairRecord>& pairs, TargetKey target,
                                          double r) {
    return counting_from_pairs(ses, f, pairs, target, r);
}

namespace {
struct PairCacheEntry {
    double r = -1.0;
    std::vector<PairRecord> pairs;
};
using PairCacheMap = std::map<std::tuple<double, double, bool, double, double>, PairCacheEntry>;
}  // namespace

const std::vector<PairRecord>& pair_scan_cached(Session& ses, const MeromorphicFunction& f,
                                                Complex c, TargetKey target, double r,
                                                int depth) {
    auto& slot = ses.memo_slot(f.spec().get(), 0x70A15);
    if (!slot) slot = std::make_shared<PairCacheMap>();
    auto& cache = *std::static_pointer_cast<PairCacheMap>(slot);
    auto key = std::make_tuple(c.real(), c.imag(), target.is_inf, target.a.real(),
                               target.a.imag());
    PairCacheEntry& e = cache[key];
    if (e.r < r) {
        double run = std::fmax(r, e.r * 1.2);
        e.pairs = pair_scan(ses, f, c, target, run, depth);
        e.r = run;
    }
    return e.pairs;
}

double n_pair_term(Session& ses, const MeromorphicFunction& f, Complex c, double r) {
    SpecPtr d = difference_spec(f.spec(), c);
    if (!d) throw PeriodicFunctionError("n_pair_term: difference vanishes identically");
    const MeromorphicFunction& dm = ses.derived(d);
    double Nf = counting(ses, f, TargetKey::inf(), r, false);
    double Nd = counting(ses, dm, TargetKey::inf(), r, false);
    double Nd_inv = counting(ses, dm, TargetKey::at({0, 0}), r, false);
    return 2.0 * Nf - Nd + Nd_inv;
}

PairIndices pair_indices(Session& ses, const MeromorphicFunction& f, Complex c, TargetKey target,
                         const RadiusGrid& grid) {
    auto rs = grid.values();
    if (rs.size() < 8) throw ConfigError("pair_indices: grid length must be >= 8");
    auto pairs = pair_scan_cached(ses, f, c, target, rs.back());
    std::vector<double> rr, qc, qt;
    for (double r : rs) {
        double T = characteristic(ses, f, r);
        if (T <= 1e-9) throw DegenerateInputError("pair_indices: degenerate characteristic");
        auto s = counting_from_pairs(ses, f, pairs, target, r);
        rr.push_back(r);
        qc.push_back(s.N_c / T);
        qt.push_back(s.N_tilde / T);
    }
    PairIndices out;
    out.pi_c = windowed_estimate(rr, qc, true);
    out.Pi_c = windowed_estimate(rr, qt, false);
    out.Pi_c.value = 1.0 - out.Pi_c.value;
    return out;
}

const char* pair_class_name(PairClass c) {
    switch (c) {
        case PairClass::exceptional_paired: return "exceptional_paired";
        case PairClass::completely_paired: return "completely_paired";
        case PairClass::lines_of_three: return "lines_of_three";
        case PairClass::lines_of_four_plus: return "lines_of_four_plus";
        case PairClass::none: return "none";
    }
    return "?";
}

PairClass classify_exceptional(Session& ses, const MeromorphicFunction& f, Complex c,
                               TargetKey target, double r, int F) {
    double reach = r + 4.0 * std::abs(c);
    PointIndex idx{ses.points_in(f, target, reach + 1e-6)};

    // exceptional paired: all but at most F bases have a partner at z0 + c
    // with the same or higher multiplicity (vacuously true for omitted
    // values, matching the Picard-exceptional case)
    int violations = 0;
    int bases = 0;
    for (auto& pt : idx.pts) {
        if (std::abs(pt.location) > r + 1e-9 * (1 + r)) continue;
        ++bases;
        const PointRecord* partner = idx.find(pt.location + c);
        if (!partner || partner->multiplicity < pt.multiplicity) ++violations;
    }
    if (violations <= F) return PairClass::exceptional_paired;

    // completely paired: every point has a same-multiplicity partner at
    // z0 + c or z0 - c
    bool complete = bases > 0;
    for (auto& pt : idx.pts) {
        if (std::abs(pt.location) > r + 1e-9 * (1 + r)) continue;
        const PointRecord* up = idx.find(pt.location + c);
        const PointRecord* dn = idx.find(pt.location - c);
        bool ok = (up && up->multiplicity == pt.multiplicity) ||
                  (dn && dn->multiplicity == pt.multiplicity);
        if (!ok) {
            complete = false;
            break;
        }
    }
    if (complete) return PairClass::completely_paired;

    // maximal runs along arithmetic progressions with step c, with equal
    // multiplicities; only runs whose two ends are visibly terminated inside
    // the enumerated region count as complete
    std::vector<int> run_lengths;
    for (auto& pt : idx.pts) {
        if (idx.find(pt.location - c)) continue;  // not a run head
        int len = 1;
        Complex z = pt.location;
        const PointRecord* nxt;
        while ((nxt = idx.find(z + c)) && nxt->multiplicity == pt.multiplicity) {
            ++len;
            z = nxt->location;
        }
        if (std::abs(pt.location) <= r && std::abs(z + c) <= reach - std::abs(c))
            run_lengths.push_back(len);
    }
    if (!run_lengths.empty()) {
        bool all3 = true, all4 = true;
        for (int L : run_lengths) {
            all3 = all3 && (L == 3);
            all4 = all4 && (L >= 4);
        }
        if (all3) return PairClass::lines_of_three;
        if (all4) return PairClass::lines_of_four_plus;
    }
    return PairClass::none;
}

double n0_diagnostic(Session& ses, const MeromorphicFunction& f, Complex c, double r) {
    require_not_periodic(ses, f, c);
    const MeromorphicFunction& dm = difference_fn(ses, f, c);
    PointIndex idx{ses.points_in(f, TargetKey::inf(), r + std::abs(c) + 1e-6)};
    const int depth = 12;
    double N0 = 0.0;
    for (auto& pt : idx.pts) {
        if (std::abs(pt.location) > r + 1e-9 * (1 + r)) continue;
        const PointRecord* partner = idx.find(pt.location + c);
        if (!partner || partner->multiplicity != pt.multiplicity) continue;
        int p = pt.multiplicity;
        LocalExpansion D = local_expansion(ses, dm, pt.location, depth + p + 2);
        if (D.valuation < 0) continue;  // principal parts differ
        if (D.valuation >= depth)
            throw DepthExhaustedError("n0_diagnostic: expansions agree through the depth", depth);
        int weight = D.valuation;  // equal analytic coefficients from exponent 0
        if (weight <= 0) continue;
        double d = std::abs(pt.location);
        N0 += weight * ((d <= 1e-9 * (1 + r)) ? std::log(r) : std::log(r / d));
    }
    return N0;
}

}  // namespace nevdiff
