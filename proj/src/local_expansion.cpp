#include "nevdiff/local_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nevdiff/errors.hpp"
#include "nevdiff/polyutil.hpp"

namespace nevdiff {

Complex LocalExpansion::eval(Complex t) const {
    Complex acc(0, 0);
    Complex tp = std::pow(t, valuation);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        acc += coeffs[i] * tp;
        tp *= t;
    }
    return acc;
}

namespace {

constexpr double kEps = 2.2e-16;

// Working truncated series around the expansion point, with coarse
// per-coefficient noise bookkeeping.
struct CSeries {
    int val = 0;
    std::vector<Complex> c;
    std::vector<double> ns;
    int trunc = 0;

    int terms() const { return int(c.size()); }
    Complex at(int e) const {
        int i = e - val;
        return (i >= 0 && i < terms()) ? c[size_t(i)] : Complex(0, 0);
    }
    double noise_at(int e) const {
        int i = e - val;
        return (i >= 0 && i < terms()) ? ns[size_t(i)] : 0.0;
    }
};

// Trim exponents >= trunc and fix the valuation: a leading coefficient is
// zero for valuation purposes when it sits below its own noise estimate.
// A floor relative to the largest coefficient is deliberately avoided;
// expansions routinely mix scales as far apart as a unit principal part and
// an exp factor of size e^{+-r}.
CSeries normalized(CSeries s) {
    if (s.terms() > s.trunc - s.val) {
        s.c.resize(size_t(std::max(0, s.trunc - s.val)));
        s.ns.resize(s.c.size());
    }
    size_t lead = 0;
    while (lead < s.c.size() && std::abs(s.c[lead]) <= 8.0 * s.ns[lead]) ++lead;
    if (lead > 0) {
        s.c.erase(s.c.begin(), s.c.begin() + long(lead));
        s.ns.erase(s.ns.begin(), s.ns.begin() + long(lead));
        s.val += int(lead);
    }
    if (s.c.empty()) {
        s.val = s.trunc;  // canonical (truncated) zero
    }
    return s;
}

CSeries s_add(const CSeries& a, const CSeries& b, Complex ca, Complex cb) {
    CSeries r;
    r.trunc = std::min(a.trunc, b.trunc);
    r.val = std::min(a.val, b.val);
    if (a.c.empty()) r.val = b.c.empty() ? r.trunc : b.val;
    else if (b.c.empty()) r.val = a.val;
    int n = std::max(0, r.trunc - r.val);
    r.c.assign(size_t(n), {0, 0});
    r.ns.assign(size_t(n), 0.0);
    for (int e = r.val; e < r.trunc; ++e) {
        Complex v = ca * a.at(e) + cb * b.at(e);
        r.c[size_t(e - r.val)] = v;
        r.ns[size_t(e - r.val)] = std::abs(ca) * a.noise_at(e) + std::abs(cb) * b.noise_at(e) +
                                  kEps * std::abs(v);
    }
    return normalized(std::move(r));
}

CSeries s_mul(const CSeries& a, const CSeries& b) {
    CSeries r;
    if (a.c.empty() || b.c.empty()) {
        r.trunc = a.c.empty() ? a.trunc + b.val : b.trunc + a.val;
        r.val = r.trunc;
        return r;
    }
    r.trunc = std::min(a.val + b.trunc, b.val + a.trunc);
    r.val = a.val + b.val;
    int n = std::max(0, r.trunc - r.val);
    r.c.assign(size_t(n), {0, 0});
    r.ns.assign(size_t(n), 0.0);
    for (int i = 0; i < a.terms(); ++i)
        for (int j = 0; j < b.terms(); ++j) {
            int e = a.val + i + b.val + j;
            if (e >= r.trunc) continue;
            size_t k = size_t(e - r.val);
            r.c[k] += a.c[size_t(i)] * b.c[size_t(j)];
            r.ns[k] += std::abs(a.c[size_t(i)]) * b.ns[size_t(j)] +
                       a.ns[size_t(i)] * std::abs(b.c[size_t(j)]) +
                       kEps * std::abs(a.c[size_t(i)]) * std::abs(b.c[size_t(j)]);
        }
    return normalized(std::move(r));
}

CSeries s_inv(const CSeries& a) {
    if (a.c.empty()) throw ExpansionError("series inversion of (truncated) zero");
    int n = a.trunc - a.val;  // trusted term count
    CSeries r;
    r.val = -a.val;
    r.trunc = a.trunc - 2 * a.val;
    r.c.assign(size_t(n), {0, 0});
    r.ns.assign(size_t(n), 0.0);
    Complex lead = a.c[0];
    double nlead = a.ns[0];
    r.c[0] = 1.0 / lead;
    r.ns[0] = nlead / std::norm(lead) + kEps / std::abs(lead);
    for (int m = 1; m < n; ++m) {
        Complex acc(0, 0);
        double nacc = 0.0;
        for (int k = 1; k <= m; ++k) {
            Complex ak = (k < a.terms()) ? a.c[size_t(k)] : Complex(0, 0);
            double nk = (k < a.terms()) ? a.ns[size_t(k)] : 0.0;
            acc += ak * r.c[size_t(m - k)];
            nacc += std::abs(ak) * r.ns[size_t(m - k)] + nk * std::abs(r.c[size_t(m - k)]) +
                    kEps * std::abs(ak) * std::abs(r.c[size_t(m - k)]);
        }
        r.c[size_t(m)] = -acc / lead;
        r.ns[size_t(m)] = (nacc + std::abs(acc) * nlead / std::abs(lead)) / std::abs(lead) +
                          kEps * std::abs(r.c[size_t(m)]);
    }
    return normalized(std::move(r));
}

// exp of a series with positive valuation, times nothing: E = exp(u);
// n E_n = sum k u_k E_{n-k}
CSeries s_exp(const CSeries& u, int trunc) {
    if (!u.c.empty() && u.val <= 0) throw ExpansionError("series exp needs positive valuation");
    CSeries r;
    r.val = 0;
    r.trunc = std::min(trunc, u.c.empty() ? trunc : u.trunc);
    int n = std::max(1, r.trunc);
    r.c.assign(size_t(n), {0, 0});
    r.ns.assign(size_t(n), 0.0);
    r.c[0] = {1, 0};
    for (int m = 1; m < n; ++m) {
        Complex acc(0, 0);
        double nacc = 0.0;
        for (int k = 1; k <= m; ++k) {
            Complex uk = u.at(k);
            acc += double(k) * uk * r.c[size_t(m - k)];
            nacc += double(k) * (std::abs(uk) * r.ns[size_t(m - k)] +
                                 u.noise_at(k) * std::abs(r.c[size_t(m - k)]));
        }
        r.c[size_t(m)] = acc / double(m);
        r.ns[size_t(m)] = nacc / double(m) + kEps * std::abs(r.c[size_t(m)]);
    }
    return normalized(std::move(r));
}

CSeries s_const(Complex v, int trunc) {
    CSeries r;
    r.val = 0;
    r.trunc = trunc;
    if (v != Complex(0, 0)) {
        r.c = {v};
        r.ns = {kEps * std::abs(v)};
    } else {
        r.val = trunc;
    }
    return r;
}

// --- atom expansions -----------------------------------------------------------

CSeries poly_series(const std::vector<Complex>& p, Complex z0, int trunc) {
    auto t = poly::taylor_at(p, z0);
    CSeries r;
    r.val = 0;
    r.trunc = trunc;
    r.c.assign(t.begin(), t.end());
    r.ns.assign(r.c.size(), 0.0);
    double scale = 0.0;
    for (auto& x : t) scale = std::fmax(scale, std::abs(x));
    for (size_t i = 0; i < r.c.size(); ++i)
        r.ns[i] = 8.0 * kEps * scale * double(p.size());
    return normalized(std::move(r));
}

// contour extraction: trapezoid on |t| = rho, nodes doubled until two
// successive coefficient vectors agree to 1e-10 relative
CSeries contour_series(const std::function<Complex(Complex)>& fc, Complex z0, double rho,
                       int emin, int etop) {
    const int n_coeff = etop - emin;
    std::vector<Complex> prev;
    std::vector<double> noise(size_t(n_coeff), 0.0);
    double maxmag = 0.0;
    for (int N = 256; N <= 8192; N *= 2) {
        std::vector<Complex> vals(static_cast<size_t>(N));
        maxmag = 0.0;
        for (int j = 0; j < N; ++j) {
            double th = 2 * M_PI * j / N;
            vals[size_t(j)] = fc(z0 + rho * Complex(std::cos(th), std::sin(th)));
            maxmag = std::fmax(maxmag, std::abs(vals[size_t(j)]));
        }
        std::vector<Complex> cur(static_cast<size_t>(n_coeff));
        for (int e = emin; e < etop; ++e) {
            Complex acc(0, 0);
            for (int j = 0; j < N; ++j) {
                double th = 2 * M_PI * j / N;
                acc += vals[size_t(j)] * std::polar(1.0, -e * th);
            }
            cur[size_t(e - emin)] = acc / double(N) * std::pow(rho, -e);
        }
        if (!prev.empty()) {
            double diff = 0.0, scale = 1.0;
            for (int i = 0; i < n_coeff; ++i) {
                double d = std::abs(cur[size_t(i)] - prev[size_t(i)]) *
                           std::pow(rho, emin + i);  // weight back to sample scale
                diff = std::fmax(diff, d);
                scale = std::fmax(scale, std::abs(cur[size_t(i)]) * std::pow(rho, emin + i));
                noise[size_t(i)] = std::abs(cur[size_t(i)] - prev[size_t(i)]) +
                                   8.0 * kEps * maxmag * std::pow(rho, -(emin + i));
            }
            if (diff <= 1e-10 * scale) {
                CSeries r;
                r.val = emin;
                r.trunc = etop;
                r.c = std::move(cur);
                r.ns = std::move(noise);
                return normalized(std::move(r));
            }
        }
        prev = std::move(cur);
    }
    throw ExpansionError("contour extraction did not converge");
}

struct AtomGeometry {
    double nearest_singularity;  // distance from z0 to the closest pole != z0
    bool center_is_pole;
};

AtomGeometry wp_geometry(const WeierstrassNode& w, Complex z0) {
    const Lattice& lat = w.impl->lattice();
    Complex red = lat.reduce(z0);
    double d = std::abs(red);
    if (d <= 1e-9 * (1 + std::abs(z0))) return {lat.min_vector_norm(), true};
    return {d, false};
}

AtomGeometry sn_geometry(const JacobiSnNode& j, Complex z0) {
    Lattice lat{Complex(j.K, 0), Complex(0, j.Kp)};
    Complex red = lat.reduce(z0 - Complex(0, j.Kp));
    double d = std::abs(red);
    double min_sep = std::fmin(2 * j.K, 2 * j.Kp);
    if (d <= 1e-9 * (1 + std::abs(z0))) return {min_sep, true};
    return {d, false};
}

CSeries expand_node(Session& ses, const FunctionSpec& s, Complex z0, int window);

CSeries expand_contour_atom(const FunctionSpec& s, Complex z0, const AtomGeometry& geom,
                            int window) {
    double rho = geom.nearest_singularity / 4.0;
    if (rho < 1e-6 * (1.0 + std::abs(z0)))
        throw ExpansionError("no valid extraction circle at the minimum radius");
    rho = std::fmin(rho, 1.0);
    auto fc = [&](Complex z) {
        auto v = evaluate_spec(s, z);
        if (v.is_pole) throw ExpansionError("extraction circle hit a pole");
        return v.value;
    };
    int emin = geom.center_is_pole ? -4 : 0;
    return contour_series(fc, z0, rho, emin, emin + window + 4);
}

CSeries expand_node(Session& ses, const FunctionSpec& s, Complex z0, int window) {
    if (auto* r = s.as<RationalNode>()) {
        CSeries num = poly_series(r->num, z0, window + 4);
        CSeries den = poly_series(r->den, z0, window + 4);
        return s_mul(num, s_inv(den));
    }
    if (auto* e = s.as<ExpLinearNode>()) {
        Complex w = e->lambda * z0;
        if (w.real() > 700.0) throw EvaluationRangeError("exp_linear overflow in expansion");
        Complex v = std::exp(w);
        CSeries r;
        r.val = 0;
        r.trunc = window;
        r.c.resize(size_t(window));
        r.ns.resize(size_t(window));
        Complex term = v;
        for (int j = 0; j < window; ++j) {
            r.c[size_t(j)] = term;
            r.ns[size_t(j)] = 4.0 * kEps * std::abs(term);
            term *= e->lambda / double(j + 1);
        }
        return normalized(std::move(r));
    }
    if (s.as<ExpExpNode>()) {
        if (z0.real() > 700.0) throw EvaluationRangeError("exp_exp overflow in expansion");
        Complex w = std::exp(z0);
        // exp(e^{z0+t}) = exp(w) * exp(w (e^t - 1))
        CSeries u;
        u.val = 1;
        u.trunc = window + 1;
        u.c.resize(size_t(window));
        u.ns.resize(size_t(window));
        double fact = 1.0;
        for (int j = 1; j <= window; ++j) {
            fact *= j;
            u.c[size_t(j - 1)] = w / fact;
            u.ns[size_t(j - 1)] = 4.0 * kEps * std::abs(w) / fact;
        }
        Complex scale = std::exp(w);
        CSeries E = s_exp(u, window);
        return s_mul(s_const(scale, window), E);
    }
    if (auto* w = s.as<WeierstrassNode>()) {
        AtomGeometry geom = wp_geometry(*w, z0);
        if (geom.center_is_pole) {
            // the Laurent series of p is literally the same at every lattice
            // point; extract once around the exact lattice point and reuse
            auto& slot = ses.memo_slot(w, window);
            if (!slot) {
                Complex snap = z0 - w->impl->lattice().reduce(z0);
                slot = std::make_shared<CSeries>(expand_contour_atom(s, snap, geom, window));
            }
            return *std::static_pointer_cast<CSeries>(slot);
        }
        return expand_contour_atom(s, z0, geom, window);
    }
    if (auto* j = s.as<JacobiSnNode>())
        return expand_contour_atom(s, z0, sn_geometry(*j, z0), window);
    if (auto* su = s.as<SumNode>()) {
        CSeries acc = s_const({0, 0}, 1 << 20);
        for (auto& t : su->terms) acc = s_add(acc, expand_node(ses, *t, z0, window), {1, 0}, {1, 0});
        return acc;
    }
    if (auto* pr = s.as<ProductNode>()) {
        CSeries acc = s_const({1, 0}, 1 << 20);
        for (auto& f : pr->factors) acc = s_mul(acc, expand_node(ses, *f, z0, window));
        return acc;
    }
    if (auto* re = s.as<ReciprocalNode>()) return s_inv(expand_node(ses, *re->of, z0, window));
    if (auto* mo = s.as<MobiusNode>()) {
        CSeries v = expand_node(ses, *mo->of, z0, window);
        CSeries num = s_add(s_mul(s_const(mo->a, 1 << 20), v), s_const(mo->b, 1 << 20), {1, 0},
                            {1, 0});
        CSeries den = s_add(s_mul(s_const(mo->c, 1 << 20), v), s_const(mo->d, 1 << 20), {1, 0},
                            {1, 0});
        return s_mul(num, s_inv(den));
    }
    if (auto* sh = s.as<ShiftNode>()) return expand_node(ses, *sh->of, z0 + sh->h, window);
    if (auto* sc = s.as<ScaleArgNode>()) {
        CSeries inner = expand_node(ses, *sc->of, sc->s * z0, window);
        // substitute t -> s t
        CSeries r = inner;
        for (int i = 0; i < r.terms(); ++i) {
            Complex f = std::pow(sc->s, r.val + i);
            r.c[size_t(i)] *= f;
            r.ns[size_t(i)] *= std::abs(f);
        }
        return r;
    }
    throw ExpansionError("expansion: unhandled node");
}

}  // namespace

LocalExpansion local_expansion(Session& ses, const MeromorphicFunction& f, Complex z0,
                               int n_terms) {
    if (n_terms < 1) throw DomainError("local_expansion: n_terms must be >= 1");
    for (int window = n_terms + 8; window <= 16 * (n_terms + 8); window *= 2) {
        CSeries s = expand_node(ses, *f.spec(), z0, window);
        if (s.trunc - s.val >= n_terms || s.c.empty()) {
            LocalExpansion out;
            out.center = z0;
            out.valuation = s.val;
            out.coeffs = std::move(s.c);
            out.noise = std::move(s.ns);
            out.truncation_order = s.trunc;
            return out;
        }
    }
    throw ExpansionError("local_expansion: could not reach the requested term count");
}

}  // namespace nevdiff
