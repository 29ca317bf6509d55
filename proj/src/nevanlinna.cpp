#include "nevdiff/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nevdiff/errors.hpp"
#include "nevdiff/local_expansion.hpp"
#include "nevdiff/polyutil.hpp"

namespace nevdiff {

std::vector<double> RadiusGrid::values() const {
    if (!(min > 0) || !(max > min) || count < 2)
        throw ConfigError("radius grid: need 0 < min < max and count >= 2");
    std::vector<double> v(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        double t = double(i) / (count - 1);
        v[size_t(i)] = geometric ? min * std::pow(max / min, t) : min + (max - min) * t;
    }
    return v;
}

namespace {

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// trapezoid with node doubling; the integrand must be finite at every node
template <class F>
double circle_trapezoid(F&& integrand, double r, const char* what) {
    double prev = 0.0;
    bool have_prev = false;
    for (int N = 64; N <= 65536; N *= 2) {
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            double th = 2.0 * M_PI * j / N;
            acc += integrand(r * Complex(std::cos(th), std::sin(th)));
        }
        double cur = acc / N;
        if (have_prev &&
            std::abs(cur - prev) <= std::fmax(1e-6 * std::fmax(std::abs(cur), 1.0), 5e-6))
            return cur;
        if (N == 65536)
            throw QuadratureError(std::string(what) + ": node cap reached without convergence",
                                  cur, std::abs(cur - prev));
        have_prev = true;
        prev = cur;
    }
    return prev;
}

// smallest r_eff = r + k eta whose circle stays eta/2 away from every listed
// point; the bad radii form a measure-zero set, so a nearby radius is
// equivalent up to O(1) and gets recorded as the effective radius
double nudge_radius(double r, const std::vector<PointRecord>& pts, double eta) {
    // pick the radius in {r + k eta} with the best clearance from the listed
    // points; the bad radii form a measure-zero set and anything within
    // [r, r + 200 eta] is equivalent up to O(1). Good clearance keeps the
    // spike widths of the log integrands resolvable by the node cap.
    double best_r = r, best_clear = -1.0;
    for (int bump = 0; bump <= 200; ++bump) {
        double r_eff = r + bump * eta;
        double clear = 1e300;
        for (auto& p : pts) clear = std::fmin(clear, std::abs(std::abs(p.location) - r_eff));
        if (clear > best_clear) {
            best_clear = clear;
            best_r = r_eff;
        }
        if (best_clear >= 8.0 * eta) break;
    }
    if (best_clear < 0.25 * eta)
        throw QuadratureError("proximity: persistent collisions on the circle", 0.0, 0.0);
    return best_r;
}

// exact circle mean of log|f - a| by the Jensen identity, from the leading
// behavior at the origin and the enumerated zeros and poles
double jensen_log_mean(Session& ses, const MeromorphicFunction& f, TargetKey a, double r) {
    auto L = local_expansion(ses, f, {0, 0}, 4);
    int ord = 0;
    Complex c0(0, 0);
    if (!a.is_inf && L.valuation <= 0) {
        for (int e = L.valuation;; ++e) {
            Complex c = L.coeff(e) - (e == 0 ? a.a : Complex(0, 0));
            double floor_mag = std::fmax(8.0 * L.noise_at(e), 1e-12);
            if (std::abs(c) > floor_mag) {
                ord = e;
                c0 = c;
                break;
            }
            if (e > L.truncation_order + 4)
                throw ExpansionError("jensen: could not fix the valuation at the origin");
        }
    } else {
        ord = L.valuation;
        c0 = L.coeff(L.valuation);
    }
    double acc = std::log(std::abs(c0)) + ord * std::log(r);
    for (auto& p : ses.points_in(f, a, r)) {
        double d = std::abs(p.location);
        if (d > 1e-9 * (1.0 + r)) acc += p.multiplicity * std::log(r / d);
    }
    for (auto& p : ses.points_in(f, TargetKey::inf(), r)) {
        double d = std::abs(p.location);
        if (d > 1e-9 * (1.0 + r)) acc -= p.multiplicity * std::log(r / d);
    }
    return acc;
}

}  // namespace

double proximity(Session& ses, const MeromorphicFunction& f, TargetKey target, double r,
                 double* r_effective) {
    if (!(r > 0)) throw DomainError("proximity: r must be positive");
    if (auto cv = spec_const_value(*f.spec())) {
        if (!target.is_inf && *cv == target.a)
            throw DegenerateInputError("proximity: function identically equals the target");
        double v =
            target.is_inf ? log_plus(std::abs(*cv)) : log_plus(1.0 / std::abs(*cv - target.a));
        if (r_effective) *r_effective = r;
        return v;
    }

    const double eta = 1e-4 * r;
    auto poles = ses.points_in(f, TargetKey::inf(), r * 1.03 + 1.0);

    if (target.is_inf) {
        double r_eff = nudge_radius(r, poles, eta);
        if (r_effective) *r_effective = r_eff;
        return circle_trapezoid(
            [&](Complex z) {
                auto v = f.evaluate(z);
                if (v.is_pole)
                    throw QuadratureError("proximity: pole on nudged circle", 0.0, 0.0);
                return log_plus(std::abs(v.value));
            },
            r_eff, "proximity");
    }

    // finite target: log+ 1/|g| = log+ |g| - log |g|. The mean of log |g|
    // carries the near-circle log singularities and is evaluated exactly by
    // the Jensen identity; only the kinked-but-bounded log+ |g| part goes to
    // quadrature.
    auto apoints = ses.points_in(f, target, r * 1.03 + 1.0);
    auto all = poles;
    all.insert(all.end(), apoints.begin(), apoints.end());
    double r_eff = nudge_radius(r, all, eta);
    if (r_effective) *r_effective = r_eff;

    double plus_part = circle_trapezoid(
        [&](Complex z) {
            auto v = f.evaluate(z);
            if (v.is_pole) throw QuadratureError("proximity: pole on nudged circle", 0.0, 0.0);
            return log_plus(std::abs(v.value - target.a));
        },
        r_eff, "proximity");
    double m = plus_part - jensen_log_mean(ses, f, target, r_eff);
    return std::fmax(m, 0.0);
}

double proximity_rough(Session& ses, const MeromorphicFunction& f, double r, double abs_tol,
                       double* r_effective) {
    (void)ses;
    if (!(r > 0)) throw DomainError("proximity_rough: r must be positive");
    if (auto cv = spec_const_value(*f.spec())) {
        if (r_effective) *r_effective = r;
        return log_plus(std::abs(*cv));
    }
    for (int bump = 0; bump <= 40; ++bump) {
        double r_eff = r * (1.0 + bump * 1e-4);
        bool extreme = false;
        double prev = 0.0;
        bool have_prev = false;
        for (int N = 256; N <= 65536 && !extreme; N *= 2) {
            double acc = 0.0;
            for (int j = 0; j < N && !extreme; ++j) {
                double th = 2.0 * M_PI * j / N;
                Complex z = r_eff * Complex(std::cos(th), std::sin(th));
                ExtendedComplexValue v;
                try {
                    v = f.evaluate(z);
                } catch (const EvaluationRangeError&) {
                    extreme = true;
                    break;
                }
                if (v.is_pole || std::abs(v.value) > 1e60 || std::abs(v.value) < 1e-60) {
                    extreme = true;
                    break;
                }
                acc += log_plus(std::abs(v.value));
            }
            if (extreme) break;
            double cur = acc / N;
            if (have_prev && std::abs(cur - prev) <= abs_tol) {
                if (r_effective) *r_effective = r_eff;
                return cur;
            }
            if (N == 65536)
                throw QuadratureError("proximity_rough: node cap reached", cur,
                                      std::abs(cur - prev));
            have_prev = true;
            prev = cur;
        }
    }
    throw QuadratureError("proximity_rough: persistent extreme values on circles", 0.0, 0.0);
}

double counting(Session& ses, const MeromorphicFunction& f, TargetKey target, double r,
                bool reduced) {
    if (!(r > 0)) throw DomainError("counting: r must be positive");
    double acc = 0.0;
    for (auto& p : ses.points_in(f, target, r)) {
        double w = reduced ? 1.0 : double(p.multiplicity);
        double d = std::abs(p.location);
        if (d <= 1e-9 * (1.0 + r))
            acc += w * std::log(r);  // n(0, a) log r
        else
            acc += w * std::log(r / d);
    }
    return acc;
}

double characteristic(Session& ses, const MeromorphicFunction& f, double r) {
    double r_eff = r;
    double m = proximity(ses, f, TargetKey::inf(), r, &r_eff);
    return m + counting(ses, f, TargetKey::inf(), r_eff, false);
}

NevanlinnaSample nevanlinna_sample(Session& ses, const MeromorphicFunction& f,
                                   const std::vector<TargetKey>& targets, double r) {
    NevanlinnaSample s;
    s.r_requested = r;
    double r_eff = r;
    NevTargetEntry inf_entry;
    inf_entry.target = TargetKey::inf();
    inf_entry.m = proximity(ses, f, TargetKey::inf(), r, &r_eff);
    s.r = r_eff;
    inf_entry.N = counting(ses, f, TargetKey::inf(), r_eff, false);
    inf_entry.N_bar = counting(ses, f, TargetKey::inf(), r_eff, true);
    s.T = inf_entry.m + inf_entry.N;
    s.entries.push_back(inf_entry);
    for (auto& t : targets) {
        if (t.is_inf) continue;
        NevTargetEntry e;
        e.target = t;
        double re2 = r_eff;
        e.m = proximity(ses, f, t, r_eff, &re2);
        e.N = counting(ses, f, t, re2, false);
        e.N_bar = counting(ses, f, t, re2, true);
        s.entries.push_back(e);
    }
    return s;
}

AsymptoticEstimate windowed_estimate(const std::vector<double>& r, const std::vector<double>& q,
                                     bool liminf_kind) {
    size_t n = r.size();
    if (n < 8 || q.size() != n)
        throw DegenerateInputError("windowed_estimate: need at least 8 samples");

    // linear fit q ~ a + b log r for outlier detection
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double x = std::log(r[i]);
        sx += x;
        sy += q[i];
        sxx += x * x;
        sxy += x * q[i];
    }
    double det = n * sxx - sx * sx;
    double b = (n * sxy - sx * sy) / det;
    double a = (sy - b * sx) / n;
    std::vector<double> res(n);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) {
        res[i] = std::abs(q[i] - (a + b * std::log(r[i])));
        order[i] = i;
    }
    std::vector<double> sorted_res = res;
    std::sort(sorted_res.begin(), sorted_res.end());
    double med = sorted_res[n / 2];
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return res[i] > res[j]; });

    std::vector<bool> dropped(n, false);
    size_t budget = n / 10;
    AsymptoticEstimate est;
    for (size_t k = 0; k < budget; ++k) {
        size_t i = order[k];
        if (res[i] > 6.0 * std::fmax(med, 1e-12)) {
            dropped[i] = true;
            est.dropped_r.push_back(r[i]);
        }
    }

    std::vector<double> rr, qq;
    for (size_t i = 0; i < n; ++i)
        if (!dropped[i]) {
            rr.push_back(r[i]);
            qq.push_back(q[i]);
        }

    // windows of 5 sliding over the top half
    size_t m = rr.size();
    size_t lo = m / 2;
    size_t W = std::min<size_t>(5, m - lo);
    double best = liminf_kind ? 1e300 : -1e300;
    double wmin = 1e300, wmax = -1e300;
    for (size_t s = lo; s + W <= m; ++s) {
        double mean = 0;
        for (size_t i = s; i < s + W; ++i) mean += qq[i];
        mean /= double(W);
        wmin = std::fmin(wmin, mean);
        wmax = std::fmax(wmax, mean);
        best = liminf_kind ? std::fmin(best, mean) : std::fmax(best, mean);
    }
    est.kind = liminf_kind ? "liminf" : "limsup";
    est.value = best;
    est.r_min = rr[lo];
    est.r_max = rr[m - 1];
    est.sample_count = int(m - lo);
    est.dispersion = (wmax > wmin) ? (wmax - wmin) : 0.0;
    std::sort(est.dropped_r.begin(), est.dropped_r.end());
    return est;
}

AsymptoticEstimate order_estimate(Session& ses, const MeromorphicFunction& f,
                                  const RadiusGrid& grid) {
    auto rs = grid.values();
    if (rs.size() < 8) throw ConfigError("order_estimate: grid length must be >= 8");
    std::vector<double> T(rs.size());
    double tmax = 0, tmin = 1e300;
    for (size_t i = 0; i < rs.size(); ++i) {
        T[i] = characteristic(ses, f, rs[i]);
        tmax = std::fmax(tmax, T[i]);
        tmin = std::fmin(tmin, T[i]);
    }
    if (tmax <= 1e-9)
        throw DegenerateInputError("order_estimate: T vanishes on the grid (constant function)");

    // logarithmic-growth detector: T ~ a + b log r fits with small residual
    {
        size_t n = rs.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < n; ++i) {
            double x = std::log(rs[i]);
            sx += x;
            sy += T[i];
            sxx += x * x;
            sxy += x * T[i];
        }
        double det = double(n) * sxx - sx * sx;
        double b = (double(n) * sxy - sx * sy) / det;
        double a = (sy - b * sx) / double(n);
        double maxres = 0;
        for (size_t i = 0; i < n; ++i)
            maxres = std::fmax(maxres, std::abs(T[i] - (a + b * std::log(rs[i]))));
        if (maxres <= std::fmax(0.05 * (tmax - tmin), 0.02)) {
            AsymptoticEstimate est;
            est.kind = "order";
            est.value = 0.0;
            est.r_min = rs.front();
            est.r_max = rs.back();
            est.sample_count = int(n);
            est.dispersion = maxres;
            return est;
        }
    }

    // slope of log T vs log r over the top half
    size_t n = rs.size();
    size_t lo = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t cnt = 0;
    for (size_t i = lo; i < n; ++i) {
        if (T[i] <= 0) continue;
        double x = std::log(rs[i]);
        double y = std::log(T[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 3) throw DegenerateInputError("order_estimate: too few usable samples");
    double det = double(cnt) * sxx - sx * sx;
    double b = (double(cnt) * sxy - sx * sy) / det;
    double a = (sy - b * sx) / double(cnt);
    double maxres = 0;
    for (size_t i = lo; i < n; ++i) {
        if (T[i] <= 0) continue;
        maxres = std::fmax(maxres, std::abs(std::log(T[i]) - (a + b * std::log(rs[i]))));
    }
    AsymptoticEstimate est;
    est.kind = "order";
    est.value = b;
    est.r_min = rs[lo];
    est.r_max = rs.back();
    est.sample_count = int(cnt);
    est.dispersion = maxres;
    return est;
}

DeficiencyIndices deficiency_indices(Session& ses, const MeromorphicFunction& f, TargetKey target,
                                     const RadiusGrid& grid) {
    auto rs = grid.values();
    if (rs.size() < 8) throw ConfigError("deficiency_indices: grid length must be >= 8");
    std::vector<double> qm, qtheta, qnbar, rr;
    for (double r : rs) {
        double r_eff = r;
        double mf = proximity(ses, f, TargetKey::inf(), r, &r_eff);
        double T = mf + counting(ses, f, TargetKey::inf(), r_eff, false);
        if (T <= 1e-9)
            throw DegenerateInputError("deficiency_indices: degenerate characteristic");
        double re2 = r_eff;
        double m = proximity(ses, f, target, r_eff, &re2);
        double N = counting(ses, f, target, re2, false);
        double Nbar = counting(ses, f, target, re2, true);
        rr.push_back(r);
        qm.push_back(m / T);
        qtheta.push_back((N - Nbar) / T);
        qnbar.push_back(Nbar / T);
    }
    DeficiencyIndices out;
    out.delta = windowed_estimate(rr, qm, true);
    out.theta = windowed_estimate(rr, qtheta, true);
    out.Theta = windowed_estimate(rr, qnbar, false);
    out.Theta.value = 1.0 - out.Theta.value;
    out.Theta.kind = "limsup";
    return out;
}

int RationalInF::deg_f() const {
    return std::max(poly::degree(num), poly::degree(den));
}

ValironReport verify_valiron_mohonko(Session& ses, const MeromorphicFunction& f,
                                     const RationalInF& R, const RadiusGrid& grid) {
    if (poly::is_zero(R.den)) throw ConfigError("valiron_mohonko: zero denominator");
    ValironReport rep;
    rep.deg = R.deg_f();
    int dP = poly::degree(R.num), dQ = poly::degree(R.den);
    auto den_roots = poly::roots(R.den);

    auto rs = grid.values();
    for (double r : rs) {
        double r_eff = r;
        double Tf = 0.0;
        {
            double mf = proximity(ses, f, TargetKey::inf(), r, &r_eff);
            Tf = mf + counting(ses, f, TargetKey::inf(), r_eff, false);
        }
        // m(r, R(f)) by quadrature of the composition on a circle nudged
        // away from every pole of R(f)
        {
            auto bad = ses.points_in(f, TargetKey::inf(), r_eff * 1.03 + 1.0);
            for (auto& rt : den_roots) {
                auto more = ses.points_in(f, TargetKey::at(rt.location), r_eff * 1.03 + 1.0);
                bad.insert(bad.end(), more.begin(), more.end());
            }
            r_eff = nudge_radius(r_eff, bad, 1e-4 * r_eff);
        }
        double mR = circle_trapezoid(
            [&](Complex z) -> double {
                ExtendedComplexValue v = f.evaluate(z);
                if (v.is_pole) {
                    if (dP == dQ)
                        return log_plus(std::abs(R.num[size_t(dP)] / R.den[size_t(dQ)]));
                    if (dP < dQ) return 0.0;
                    throw QuadratureError("valiron_mohonko: pole on nudged circle", 0, 0);
                }
                Complex nv = poly::eval(R.num, v.value);
                Complex dv = poly::eval(R.den, v.value);
                if (std::abs(dv) < 1e-290)
                    throw QuadratureError("valiron_mohonko: den-root hit on circle", 0, 0);
                return log_plus(std::abs(nv / dv));
            },
            r_eff, "valiron_mohonko");
        // N(r, R(f)): den roots pulled back through f, plus f-poles if deg num
        // exceeds deg den
        double NR = 0.0;
        for (auto& rt : den_roots)
            NR += double(rt.multiplicity) * counting(ses, f, TargetKey::at(rt.location), r_eff,
                                                     false);
        if (dP > dQ) NR += double(dP - dQ) * counting(ses, f, TargetKey::inf(), r_eff, false);
        rep.r.push_back(r_eff);
        rep.ratio.push_back((mR + NR) / Tf);
    }
    size_t tail = std::min<size_t>(6, rep.ratio.size());
    double acc = 0;
    for (size_t i = rep.ratio.size() - tail; i < rep.ratio.size(); ++i) acc += rep.ratio[i];
    rep.tail_mean = acc / double(tail);
    return rep;
}

}  // namespace nevdiff
