#ifndef NEVDIFF_THEOREMS_HPP
#define NEVDIFF_THEOREMS_HPP

#include "nevdiff/pairing.hpp"

namespace nevdiff {

struct ReportRow {
    double r = 0.0;       // effective radius used
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;   // slack already included in rhs
    bool retained = true;
};

enum class Verdict { holds, holds_with_outliers, fails };
const char* verdict_name(Verdict v);

struct VerificationReport {
    std::string theorem_id;
    std::vector<ReportRow> rows;
    Verdict verdict = Verdict::holds;
    std::vector<double> dropped_r;       // outlier rows (violations within the 10% budget)
    std::vector<ReportRow> witnesses;    // violating rows when the verdict is fails
    double tail_value = 0.0;             // theorem-specific scalar (see each op)
    std::string note;
};

// m(r, f(z+c)/f(z)) decay: rows carry lhs = m(r, ratio) * r^delta_exp / T(r),
// rhs = the trend bound; tail_value = m/T at the top retained radius.
VerificationReport verify_logdiff(Session& ses, const MeromorphicFunction& f, Complex c,
                                  double delta_exp, const RadiusGrid& grid);

// m(r,f) + sum_k m(r, 1/(f - a_k)) <= 2T - N_pair + slack T
VerificationReport verify_thm2nd(Session& ses, const MeromorphicFunction& f, Complex c,
                                 const std::vector<Complex>& targets, const RadiusGrid& grid,
                                 double slack_fraction);

// (q-1) T <= tilde N_c(r, f) + sum_k tilde N_c(r, 1/(f - a_k)) + slack T
VerificationReport verify_thm2nd2(Session& ses, const MeromorphicFunction& f, Complex c,
                                  const std::vector<Complex>& targets, const RadiusGrid& grid,
                                  double slack_fraction);

struct DefectTargetReport {
    TargetKey target;
    AsymptoticEstimate delta, pi_c, Pi_c;
};
struct DefectReport {
    std::vector<DefectTargetReport> targets;  // configured targets plus infinity
    double sum_delta_pi = 0.0;
    double sum_Pi = 0.0;
    double bound = 2.0;
};
DefectReport defect_relation_report(Session& ses, const MeromorphicFunction& f, Complex c,
                                    const std::vector<Complex>& targets, const RadiusGrid& grid);

struct PicardScan {
    std::vector<std::pair<TargetKey, PairClass>> classes;
    int exceptional_count = 0;
    bool contradiction = false;   // >= 3 exceptional paired values, not periodic
    std::string resolution;       // which hypothesis fails when contradiction
};
PicardScan picard_analogue_scan(Session& ses, const MeromorphicFunction& f, Complex c,
                                const std::vector<TargetKey>& candidates, double r);

struct ShareTargetReport {
    TargetKey target;
    bool shared = false;
    int unpaired_f = 0, unpaired_g = 0;
    double max_mismatch = 0.0;  // sup distance between unmatched point sets
};
struct ShareReport {
    std::vector<ShareTargetReport> targets;
    int shared_count = 0;
    // five-value dichotomy observables (reported, never asserted as identity)
    double function_distance = 0.0;  // max |f - g| over probe points
    bool f_periodic = false, g_periodic = false;
};
ShareReport shared_ignoring_pairs(Session& ses, const MeromorphicFunction& f,
                                  const MeromorphicFunction& g, Complex c,
                                  const std::vector<TargetKey>& targets, double r);

}  // namespace nevdiff

#endif
