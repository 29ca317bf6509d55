#ifndef NEVDIFF_NEVANLINNA_HPP
#define NEVDIFF_NEVANLINNA_HPP

#include <string>
#include <vector>

#include "nevdiff/enumerate.hpp"

namespace nevdiff {

struct RadiusGrid {
    double min = 2.0, max = 40.0;
    int count = 24;
    bool geometric = true;
    std::vector<double> values() const;
};

struct AsymptoticEstimate {
    std::string kind;  // "liminf" | "limsup" | "order"
    double value = 0.0;
    double r_min = 0.0, r_max = 0.0;  // window actually used
    int sample_count = 0;
    double dispersion = 0.0;  // spread of the windowed estimates
    std::vector<double> dropped_r;
};

struct NevTargetEntry {
    TargetKey target;
    double m = 0.0, N = 0.0, N_bar = 0.0;
};

struct NevanlinnaSample {
    double r_requested = 0.0;
    double r = 0.0;  // effective radius after collision nudges
    std::vector<NevTargetEntry> entries;
    double T = 0.0;  // m(r, inf) + N(r, inf)
};

// (1/2pi) integral of log+ |1/(f - a)| (log+ |f| for a = inf) over |z| = r,
// trapezoid with node doubling. If the circle collides with a pole or an
// a-point, r is nudged outward in steps of 1e-4 r; the effective radius is
// reported through r_effective.
double proximity(Session& ses, const MeromorphicFunction& f, TargetKey target, double r,
                 double* r_effective = nullptr);

// Variant for derived ratio functions whose pole sets are costly to
// enumerate: no enumeration-based nudge (the radius bumps only when a node
// lands on an extreme value) and a looser tolerance suited to o(T) gauges.
double proximity_rough(Session& ses, const MeromorphicFunction& f, double r, double abs_tol,
                       double* r_effective = nullptr);

// N(r,a) as the exact finite sum of multiplicity-weighted log(r/|z_j|) terms
// plus the n(0,a) log r origin term; reduced = true ignores multiplicities.
double counting(Session& ses, const MeromorphicFunction& f, TargetKey target, double r,
                bool reduced);

double characteristic(Session& ses, const MeromorphicFunction& f, double r);

// One full per-radius record for a set of finite targets (infinity is always
// included as the first entry).
NevanlinnaSample nevanlinna_sample(Session& ses, const MeromorphicFunction& f,
                                   const std::vector<TargetKey>& targets, double r);

// Least-squares slope of log T against log r over the top half of the grid.
// Logarithmic growth (order zero) is detected by a linear-in-log-r fit and
// reported as exact order 0.
AsymptoticEstimate order_estimate(Session& ses, const MeromorphicFunction& f,
                                  const RadiusGrid& grid);

struct DeficiencyIndices {
    AsymptoticEstimate delta, theta, Theta;
};
DeficiencyIndices deficiency_indices(Session& ses, const MeromorphicFunction& f, TargetKey target,
                                     const RadiusGrid& grid);

// R(f) with constant coefficients: num and den are polynomials in f.
struct RationalInF {
    std::vector<Complex> num, den;
    int deg_f() const;
};

struct ValironReport {
    std::vector<double> r;
    std::vector<double> ratio;  // T(r, R(f)) / T(r, f)
    double tail_mean = 0.0;
    int deg = 0;
};
ValironReport verify_valiron_mohonko(Session& ses, const MeromorphicFunction& f,
                                     const RationalInF& R, const RadiusGrid& grid);

// Windowed liminf/limsup surrogate shared by all asymptotic estimators:
// up to 10% of the points may be dropped as outliers of a linear-in-log-r
// fit, then means over sliding windows of 5 in the top half of the grid are
// min- or max-picked.
AsymptoticEstimate windowed_estimate(const std::vector<double>& r, const std::vector<double>& q,
                                     bool liminf_kind);

}  // namespace nevdiff

#endif
