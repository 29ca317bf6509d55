#ifndef NEVDIFF_PAIRING_HPP
#define NEVDIFF_PAIRING_HPP

#include "nevdiff/nevanlinna.hpp"

namespace nevdiff {

// One c-separated a-pair (or pole pair) anchored at its base point. For a
// finite target the pair count is the number of equal initial Taylor
// coefficients of f at z0 and of z -> f(z+c) at z0. For poles it is
// min{p,q} + m, where m > 0 only when p = q and counts equal Laurent
// coefficients from exponent -p on; identical principal parts therefore
// contribute p to m before the analytic parts are compared.
struct PairRecord {
    Complex base;
    Complex c;
    TargetKey target;
    int p = 0;           // multiplicity at z0 (0 when regular)
    int q = 0;           // multiplicity at z0 + c
    int pair_count = 0;  // 0 when the partner point is not a target point
};

struct PairedCountingSample {
    double r = 0.0;
    TargetKey target;
    int n_c = 0;
    double N_c = 0.0;
    double N_tilde = 0.0;  // N - N_c, may be negative
    double N = 0.0;
};

// Throws PeriodicFunctionError when f(z+c) == f(z), detected structurally
// (the difference spec simplifies to zero) or by the 64-point probe.
void require_not_periodic(Session& ses, const MeromorphicFunction& f, Complex c);

// Pair count at a single base point; z0 must be a target point (p >= 1).
// Returns 0 when z0 + c is not a target point. Throws DepthExhaustedError
// when every compared coefficient through `depth` agrees and f is not
// c-periodic.
int pair_count_at(Session& ses, const MeromorphicFunction& f, Complex z0, Complex c,
                  TargetKey target, int depth = 12);

// All pairs with base in |z| <= r (the partner may lie outside; enumeration
// runs to r + |c|). Records with pair_count = 0 are kept for reporting.
std::vector<PairRecord> pair_scan(Session& ses, const MeromorphicFunction& f, Complex c,
                                  TargetKey target, double r, int depth = 12);

PairedCountingSample paired_counting(Session& ses, const MeromorphicFunction& f, Complex c,
                                     TargetKey target, double r);

// Session-cached pair scan, reused across radii; the returned reference is
// valid until a larger radius forces a rescan.
const std::vector<PairRecord>& pair_scan_cached(Session& ses, const MeromorphicFunction& f,
                                                Complex c, TargetKey target, double r,
                                                int depth = 12);

// Paired-counting sample assembled from an existing scan (bases beyond r are
// ignored).
PairedCountingSample paired_counting_from(Session& ses, const MeromorphicFunction& f,
                                          const std::vector<PairRecord>& pairs, TargetKey target,
                                          double r);

// N_pair(r, f) = 2 N(r, f) - N(r, Delta_c f) + N(r, 1/Delta_c f)
double n_pair_term(Session& ses, const MeromorphicFunction& f, Complex c, double r);

struct PairIndices {
    AsymptoticEstimate pi_c;  // liminf N_c / T
    AsymptoticEstimate Pi_c;  // 1 - limsup N_tilde / T
};
PairIndices pair_indices(Session& ses, const MeromorphicFunction& f, Complex c, TargetKey target,
                         const RadiusGrid& grid);

enum class PairClass {
    exceptional_paired,
    completely_paired,
    lines_of_three,
    lines_of_four_plus,
    none,
};
const char* pair_class_name(PairClass c);

// Classification of one target per the paired-value taxonomy; enumerations
// cover |z| <= r + 4|c| so chains and partners near the boundary are seen.
// F bounds the tolerated exceptions for the exceptional_paired verdict.
PairClass classify_exceptional(Session& ses, const MeromorphicFunction& f, Complex c,
                               TargetKey target, double r, int F = 2);

// N_0(r, f): poles whose expansions at z0 (of f and of the c-shift) have
// identical principal parts, weighted by the number of equal initial
// analytic-part coefficients.
double n0_diagnostic(Session& ses, const MeromorphicFunction& f, Complex c, double r);

}  // namespace nevdiff

#endif
