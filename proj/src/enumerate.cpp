#include "nevdiff/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <cstdio>
#include <cstdlib>

#include "nevdiff/errors.hpp"
#include "nevdiff/local_expansion.hpp"
#include "nevdiff/polyutil.hpp"

namespace nevdiff {

namespace {

using EvalG = std::function<std::optional<Complex>(Complex)>;

struct Box {
    double x0, y0, x1, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    double size() const { return std::fmax(width(), height()); }
    bool contains(Complex z) const {  // half-open, so siblings never share points
        return z.real() >= x0 && z.real() < x1 && z.imag() >= y0 && z.imag() < y1;
    }
    double dist_to_origin() const {
        double dx = std::fmax(std::fmax(x0, -x1), 0.0);
        double dy = std::fmax(std::fmax(y0, -y1), 0.0);
        return std::hypot(dx, dy);
    }
};

// Signals a boundary pathology (sample on a zero/pole or unstable count);
// the caller re-jiggles the global grid and retries.
struct WindingTrouble {};

struct PoleAt {
    Complex z;
    int order;
};

class Winder {
public:
    Winder(EvalG g, int max_samples, const std::vector<PoleAt>* hot = nullptr)
        : g_(std::move(g)), cap_(max_samples), hot_(hot) {}

    // Total argument change / 2pi around the box boundary, counterclockwise.
    // Edges are pre-split at parameters clustered around nearby known
    // features; an even-order pole just off an edge otherwise produces a
    // full 2pi swing that returns to almost the same value and would alias
    // past both acceptance criteria below.
    double around(const Box& b) {
        samples_ = 0;
        // budget scales with the boundary length; the hard cap is per unit
        // of perimeter so large root boxes are not starved
        cap_box_ = int(cap_ * std::fmax(1.0, (2.0 * (b.width() + b.height())) / 8.0));
        Complex c[5] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}, {b.x0, b.y0}};
        double total = 0.0;
        std::optional<Complex> v0 = g_(c[0]);
        if (!usable(v0)) throw WindingTrouble{};
        std::optional<Complex> va = v0;
        for (int e = 0; e < 4; ++e) {
            std::optional<Complex> vb = (e == 3) ? v0 : g_(c[e + 1]);
            if (!usable(vb)) throw WindingTrouble{};
            walk_edge(c[e], c[e + 1], *va, *vb, total);
            va = vb;
        }
        return total / (2.0 * M_PI);
    }

    int integer_around(const Box& b) {
        double w = around(b);
        double r = std::round(w);
        if (std::abs(w - r) > 0.25) { if(getenv("NEVDIFF_DBG")) fprintf(stderr, "[T] nonint w=%.4f box (%.6g,%.6g)-(%.6g,%.6g)\n", w, b.x0,b.y0,b.x1,b.y1); throw WindingTrouble{}; }
        return int(r);
    }

private:
    EvalG g_;
    int cap_;
    int cap_box_ = 0;
    const std::vector<PoleAt>* hot_;
    int samples_ = 0;

    void walk_edge(Complex za, Complex zb, Complex va, Complex vb, double& total) {
        std::vector<double> knots{0.0, 1.0};
        if (hot_) {
            Complex dir = zb - za;
            double len2 = std::norm(dir);
            for (auto& p : *hot_) {
                double t = ((p.z - za) * std::conj(dir)).real() / len2;
                if (t < -0.5 || t > 1.5) continue;
                double tc = std::fmin(1.0, std::fmax(0.0, t));
                double d = std::abs(p.z - (za + tc * dir)) / std::sqrt(len2);
                if (d > 0.75) continue;
                for (double w : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
                    for (double sgn : {-1.0, 1.0}) {
                        double tk = t + sgn * w * std::fmax(d, 1e-14);
                        if (tk > 1e-9 && tk < 1.0 - 1e-9) knots.push_back(tk);
                        if (w == 0.0) break;
                    }
                }
            }
            std::sort(knots.begin(), knots.end());
            knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        }
        Complex zprev = za;
        Complex vprev = va;
        for (size_t i = 1; i + 1 < knots.size(); ++i) {
            Complex zk = za + knots[i] * (zb - za);
            ++samples_;
            std::optional<Complex> vk = g_(zk);
            if (!usable(vk)) throw WindingTrouble{};
            segment(zprev, zk, vprev, *vk, 0, total);
            zprev = zk;
            vprev = *vk;
        }
        segment(zprev, zb, vprev, vb, 0, total);
    }

    static bool usable(const std::optional<Complex>& v) {
        return v.has_value() && std::isfinite(v->real()) && std::isfinite(v->imag()) &&
               std::abs(*v) > 0.0;
    }

    void segment(Complex za, Complex zb, Complex va, Complex vb, int depth, double& total) {
        double dphi = std::arg(vb / va);
        // Accept a step only when the value chord is short relative to the
        // distance from the target: then the image segment cannot wrap the
        // origin, so the principal argument is the true phase change. The
        // minimum depth keeps full turns from aliasing on coarse edges.
        double chord = std::abs(vb - va);
        double guard = 0.75 * std::fmin(std::abs(va), std::abs(vb));
        if (depth >= 3 && std::abs(dphi) <= M_PI / 2 && chord <= guard) {
            total += dphi;
            return;
        }
        if (depth > 26 || samples_ > cap_box_) { if(getenv("NEVDIFF_DBG")) fprintf(stderr, "[T] seg d=%d s=%d (%.9g,%.9g)-(%.9g,%.9g) |va|=%.3g |vb|=%.3g\n", depth, samples_, za.real(), za.imag(), zb.real(), zb.imag(), std::abs(va), std::abs(vb)); throw WindingTrouble{}; }
        Complex zm = 0.5 * (za + zb);
        ++samples_;
        std::optional<Complex> vm = g_(zm);
        if (!usable(vm)) throw WindingTrouble{};
        segment(za, zm, va, *vm, depth + 1, total);
        segment(zm, zb, *vm, vb, depth + 1, total);
    }
};

struct FoundPoint {
    Complex z;
    int mult;
};

// Adaptive quadtree count of the zeros of g inside |z| <= r. pole_orders must
// be an exhaustive list of the poles of g in the searched square; box winding
// numbers are corrected by them so zeros sharing a box with poles stay
// visible.
class ZeroSearch {
public:
    ZeroSearch(EvalG g, std::vector<PoleAt> poles, double r, const EnumOptions& opt)
        : g_(std::move(g)), poles_(std::move(poles)), r_(r), opt_(opt) {}

    std::vector<FoundPoint> run() {
        for (int attempt = 0;; ++attempt) {
            try {
                return attempt_run(attempt);
            } catch (const WindingTrouble&) {
                if (attempt + 1 >= opt_.restarts)
                    throw EnumerationError("enumerate: winding counts would not stabilize",
                                           EnumerationError::Kind::refinement_failed);
            }
        }
    }

private:
    EvalG g_;
    std::vector<PoleAt> poles_;
    double r_;
    EnumOptions opt_;

    int pole_sum(const Box& b) const {
        int s = 0;
        for (auto& p : poles_)
            if (b.contains(p.z)) s += p.order;
        return s;
    }

    std::vector<FoundPoint> attempt_run(int attempt) {
        Winder wind(g_, opt_.max_samples_per_box, &poles_);
        double pad = 0.3 + 0.11 * attempt;
        double ox = (attempt + 1) * 7.7156e-4 * (1.0 + r_);
        double oy = (attempt + 1) * 4.1631e-4 * (1.0 + r_);
        Box root{-r_ - pad + ox, -r_ - pad + oy, r_ + pad + ox, r_ + pad + oy};

        std::vector<FoundPoint> found;
        std::deque<Box> queue{root};
        int boxes = 0;
        while (!queue.empty()) {
            Box b = queue.front();
            queue.pop_front();
            if (++boxes > opt_.max_boxes)
                throw EnumerationError("enumerate: subdivision budget exhausted",
                                       EnumerationError::Kind::budget_exhausted);
            if (b.dist_to_origin() > r_ + 1e-6 * (1 + r_)) continue;
            int W = wind.integer_around(b);
            int Z = W + pole_sum(b);
            if (Z < 0) { if(getenv("NEVDIFF_DBG")) fprintf(stderr, "[T] Z=%d<0 box (%.6g,%.6g)-(%.6g,%.6g)\n", Z, b.x0,b.y0,b.x1,b.y1); throw WindingTrouble{}; }
            if (Z == 0) continue;
            double scale = 1.0 + std::abs(b.center());
            if (b.size() <= opt_.cluster_tol * scale) {
                refine(wind, b, Z, found);
                continue;
            }
            double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
            queue.push_back({b.x0, b.y0, xm, ym});
            queue.push_back({xm, b.y0, b.x1, ym});
            queue.push_back({b.x0, ym, xm, b.y1});
            queue.push_back({xm, ym, b.x1, b.y1});
        }
        return found;
    }

    // Below cluster scale: a single point of multiplicity Z. Secant refines
    // simple zeros; multiple zeros descend by quadrants to the location
    // tolerance.
    void refine(Winder& wind, Box b, int Z, std::vector<FoundPoint>& found) {
        double scale = 1.0 + std::abs(b.center());
        if (Z == 1) {
            if (auto z = secant_refine(b)) {
                found.push_back({*z, 1});
                return;
            }
        }
        while (b.size() > opt_.loc_tol * scale) {
            double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
            Box quads[4] = {{b.x0, b.y0, xm, ym},
                            {xm, b.y0, b.x1, ym},
                            {b.x0, ym, xm, b.y1},
                            {xm, ym, b.x1, b.y1}};
            int zsum = 0;
            Box next = b;
            bool split = false;
            for (auto& q : quads) {
                int zq = wind.integer_around(q) + pole_sum(q);
                if (zq < 0) throw WindingTrouble{};
                if (zq > 0) {
                    if (zq < Z && !split) {
                        // cluster separates; recurse on each part
                        refine(wind, q, zq, found);
                        split = true;
                    } else if (split) {
                        refine(wind, q, zq, found);
                    } else {
                        next = q;
                    }
                }
                zsum += zq;
            }
            if (zsum != Z) { if(getenv("NEVDIFF_DBG")) fprintf(stderr, "[T] zsum=%d Z=%d box (%.6g,%.6g)-(%.6g,%.6g)\n", zsum, Z, b.x0,b.y0,b.x1,b.y1); throw WindingTrouble{}; }
            if (split) return;
            b = next;
        }
        found.push_back({b.center(), Z});
    }

    std::optional<Complex> secant_refine(const Box& b) {
        Complex z0 = b.center();
        Complex z1 = z0 + Complex(0.37 * b.width(), 0.21 * b.height());
        auto f0 = g_(z0), f1 = g_(z1);
        if (!f0 || !f1) return std::nullopt;
        double leash = 4.0 * b.size();
        for (int it = 0; it < 60; ++it) {
            Complex df = *f1 - *f0;
            if (std::abs(df) == 0.0) break;
            Complex z2 = z1 - *f1 * (z1 - z0) / df;
            if (std::abs(z2 - b.center()) > leash) return std::nullopt;
            auto f2 = g_(z2);
            if (!f2) return std::nullopt;
            if (std::abs(z2 - z1) <= 1e-13 * (1.0 + std::abs(z2))) return z2;
            z0 = z1;
            f0 = f1;
            z1 = z2;
            f1 = f2;
        }
        if (std::abs(*f1) < 1e-8) return z1;
        return std::nullopt;
    }
};

// --------- structural pole candidates ---------------------------------------

std::vector<PoleAt> merge_candidates(std::vector<PoleAt> v, bool add_orders) {
    std::sort(v.begin(), v.end(), [](const PoleAt& a, const PoleAt& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    std::vector<PoleAt> out;
    for (auto& p : v) {
        if (!out.empty() && std::abs(out.back().z - p.z) <= 1e-8 * (1.0 + std::abs(p.z))) {
            if (add_orders)
                out.back().order += p.order;
            else
                out.back().order = std::max(out.back().order, p.order);
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::vector<PoleAt> pole_candidates(Session& ses, const SpecPtr& s, double R);

double nearest_candidate_gap(const std::vector<PoleAt>& cands, Complex z) {
    double gap = 4.0;
    for (auto& o : cands) {
        double d = std::abs(o.z - z);
        if (d > 1e-12) gap = std::fmin(gap, d);
    }
    return gap;
}

std::vector<PoleAt> from_families(const std::vector<PointFamily>& fams, double R) {
    std::vector<PoleAt> out;
    for (auto& fam : fams)
        for (auto& z : family_points(fam, R)) out.push_back({z, fam.multiplicity});
    return out;
}

std::vector<PoleAt> pole_candidates(Session& ses, const SpecPtr& s, double R) {
    if (auto* r = s->as<RationalNode>()) {
        std::vector<PoleAt> out;
        if (poly::degree(r->den) >= 1)
            for (auto& rt : poly::roots(r->den))
                if (std::abs(rt.location) <= R) out.push_back({rt.location, rt.multiplicity});
        return out;
    }
    if (s->as<ExpLinearNode>() || s->as<ExpExpNode>()) return {};
    if (auto* w = s->as<WeierstrassNode>())
        return from_families({{Complex(0, 0), 2.0 * w->w1, 2.0 * w->w2, 2}}, R);
    if (auto* j = s->as<JacobiSnNode>())
        return from_families({{Complex(0, j->Kp), {2 * j->K, 0}, {0, 2 * j->Kp}, 1}}, R);
    if (auto* su = s->as<SumNode>()) {
        std::vector<PoleAt> out;
        for (auto& t : su->terms)
            for (auto& p : pole_candidates(ses, t, R)) out.push_back(p);
        return merge_candidates(std::move(out), false);
    }
    if (auto* pr = s->as<ProductNode>()) {
        std::vector<PoleAt> out;
        for (auto& f : pr->factors)
            for (auto& p : pole_candidates(ses, f, R)) out.push_back(p);
        return merge_candidates(std::move(out), true);
    }
    if (auto* re = s->as<ReciprocalNode>()) {
        std::vector<PoleAt> out;
        for (auto& rec : ses.points_in(ses.derived(re->of), TargetKey::at({0, 0}), R))
            out.push_back({rec.location, rec.multiplicity});
        return out;
    }
    if (auto* mo = s->as<MobiusNode>()) {
        std::vector<PoleAt> out;
        if (mo->c == Complex(0, 0)) return pole_candidates(ses, mo->of, R);
        for (auto& rec :
             ses.points_in(ses.derived(mo->of), TargetKey::at(-mo->d / mo->c), R))
            out.push_back({rec.location, rec.multiplicity});
        return out;
    }
    if (auto* sh = s->as<ShiftNode>()) {
        auto inner = pole_candidates(ses, sh->of, R + std::abs(sh->h));
        std::vector<PoleAt> out;
        for (auto& p : inner) {
            Complex z = p.z - sh->h;
            if (std::abs(z) <= R) out.push_back({z, p.order});
        }
        return out;
    }
    if (auto* sc = s->as<ScaleArgNode>()) {
        auto inner = pole_candidates(ses, sc->of, R * std::abs(sc->s) + 1.0);
        std::vector<PoleAt> out;
        for (auto& p : inner) {
            Complex z = p.z / sc->s;
            if (std::abs(z) <= R) out.push_back({z, p.order});
        }
        return out;
    }
    return {};
}

// --------- closed-form a-point enumeration for the exp atoms ------------------

std::vector<PointRecord> exp_linear_points(const ExpLinearNode& e, TargetKey t, double r) {
    std::vector<PointRecord> out;
    if (t.is_inf || t.a == Complex(0, 0)) return out;  // omitted values
    Complex w0 = std::log(t.a);
    double span = std::abs(e.lambda) * r + std::abs(w0) + 1.0;
    long M = long(span / (2 * M_PI)) + 2;
    for (long k2 = -M; k2 <= M; ++k2) {
        Complex z = (w0 + Complex(0, 2 * M_PI * double(k2))) / e.lambda;
        if (std::abs(z) <= r + 1e-9 * (1 + r)) out.push_back({z, 1, t});
    }
    return out;
}

std::vector<PointRecord> exp_exp_points(TargetKey t, double r) {
    std::vector<PointRecord> out;
    if (t.is_inf || t.a == Complex(0, 0)) return out;
    if (r > 12.0)
        throw EnumerationError("exp_exp: enumeration radius too large",
                               EnumerationError::Kind::budget_exhausted);
    Complex u0 = std::log(t.a);
    double umax = std::exp(r) + std::abs(u0) + 1.0;
    long Mj = long(umax / (2 * M_PI)) + 2;
    for (long j = -Mj; j <= Mj; ++j) {
        Complex u = u0 + Complex(0, 2 * M_PI * double(j));
        if (std::abs(u) == 0.0) continue;  // exp never reaches 0
        Complex z0 = std::log(u);
        long Mk = long((r + std::abs(z0)) / (2 * M_PI)) + 2;
        for (long k2 = -Mk; k2 <= Mk; ++k2) {
            Complex z = z0 + Complex(0, 2 * M_PI * double(k2));
            if (std::abs(z) <= r + 1e-9 * (1 + r)) out.push_back({z, 1, t});
        }
    }
    return out;
}

void sort_records(std::vector<PointRecord>& v) {
    std::sort(v.begin(), v.end(), [](const PointRecord& a, const PointRecord& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
}

std::optional<TargetKey> mobius_preimage(const MobiusNode& m, TargetKey t) {
    // v with (a v + b)/(c v + d) = t
    if (t.is_inf) {
        if (m.c == Complex(0, 0)) return TargetKey::inf();
        return TargetKey::at(-m.d / m.c);
    }
    Complex den = m.a - t.a * m.c;
    if (std::abs(den) == 0.0) return TargetKey::inf();
    return TargetKey::at((t.a * m.d - m.b) / den);
}

}  // namespace

std::vector<PointRecord> enumerate_points(Session& ses, const MeromorphicFunction& f,
                                          TargetKey target, double r) {
    const SpecPtr& s = f.spec();
    if (auto cv = spec_const_value(*s)) {
        if (!target.is_inf && *cv == target.a)
            throw DegenerateInputError("enumerate: function is identically the target");
        return {};
    }

    // exact families known for this target
    if (auto fams = f.exact_families(target)) {
        std::vector<PointRecord> out;
        for (auto& fam : *fams)
            for (auto& z : family_points(fam, r)) out.push_back({z, fam.multiplicity, target});
        sort_records(out);
        return out;
    }

    // closed forms and structural reductions
    if (auto* e = s->as<ExpLinearNode>()) {
        auto out = exp_linear_points(*e, target, r);
        sort_records(out);
        return out;
    }
    if (s->as<ExpExpNode>()) {
        auto out = exp_exp_points(target, r);
        sort_records(out);
        return out;
    }
    if (auto* rn = s->as<RationalNode>()) {
        std::vector<PointRecord> out;
        if (!target.is_inf) {
            auto p = poly::add(rn->num, poly::scale(rn->den, -target.a));
            if (poly::is_zero(poly::trim(p, 1e-14)))
                throw DegenerateInputError("enumerate: function is identically the target");
            for (auto& rt : poly::roots(p))
                if (std::abs(rt.location) <= r + 1e-9 * (1 + r))
                    out.push_back({rt.location, rt.multiplicity, target});
        }
        sort_records(out);
        return out;
    }
    if (auto* re = s->as<ReciprocalNode>()) {
        TargetKey inner = target.is_inf          ? TargetKey::at({0, 0})
                          : target.a == Complex(0, 0) ? TargetKey::inf()
                                                      : TargetKey::at(1.0 / target.a);
        auto out = ses.points_in(ses.derived(re->of), inner, r);
        for (auto& p : out) p.target = target;
        return out;
    }
    if (auto* pr = s->as<ProductNode>()) {
        Complex scal(1, 0);
        std::vector<SpecPtr> rest;
        for (auto& fac : pr->factors) {
            if (auto cv = spec_const_value(*fac))
                scal *= *cv;
            else
                rest.push_back(fac);
        }
        if (rest.size() == 1 && scal != Complex(0, 0) && scal != Complex(1, 0)) {
            TargetKey inner = target.is_inf ? target : TargetKey::at(target.a / scal);
            auto out = ses.points_in(ses.derived(rest[0]), inner, r);
            for (auto& p : out) p.target = target;
            return out;
        }
    }
    if (auto* mo = s->as<MobiusNode>()) {
        if (auto inner = mobius_preimage(*mo, target)) {
            auto out = ses.points_in(ses.derived(mo->of), *inner, r);
            for (auto& p : out) p.target = target;
            return out;
        }
    }
    if (auto* sh = s->as<ShiftNode>()) {
        auto inner = ses.points_in(ses.derived(sh->of), target, r + std::abs(sh->h));
        std::vector<PointRecord> out;
        for (auto& p : inner) {
            Complex z = p.location - sh->h;
            if (std::abs(z) <= r + 1e-9 * (1 + r)) out.push_back({z, p.multiplicity, target});
        }
        sort_records(out);
        return out;
    }
    if (auto* sc = s->as<ScaleArgNode>()) {
        auto inner = ses.points_in(ses.derived(sc->of), target, r * std::abs(sc->s));
        std::vector<PointRecord> out;
        for (auto& p : inner) {
            Complex z = p.location / sc->s;
            if (std::abs(z) <= r + 1e-9 * (1 + r)) out.push_back({z, p.multiplicity, target});
        }
        sort_records(out);
        return out;
    }
    if (auto* su = s->as<SumNode>()) {
        // constant offset folds into the target
        Complex c_off(0, 0);
        std::vector<SpecPtr> rest;
        for (auto& t2 : su->terms) {
            if (auto cv = spec_const_value(*t2))
                c_off += *cv;
            else
                rest.push_back(t2);
        }
        if (rest.size() == 1 && c_off != Complex(0, 0)) {
            TargetKey inner = target.is_inf ? target : TargetKey::at(target.a - c_off);
            auto out = ses.points_in(ses.derived(rest[0]), inner, r);
            for (auto& p : out) p.target = target;
            return out;
        }
    }

    // poles without exact data: count the zeros of 1/f, whose pole set is
    // exactly the zero set of f
    if (target.is_inf) {
        double R = r + 1e-6;
        double Rc = M_SQRT2 * (R + 0.9) + 0.6;
        std::vector<PoleAt> fzeros;
        for (auto& rec : ses.points_in(f, TargetKey::at({0, 0}), Rc))
            fzeros.push_back({rec.location, rec.multiplicity});
        EvalG g = [&](Complex z) -> std::optional<Complex> {
            ExtendedComplexValue v;
            try {
                v = evaluate_spec(*s, z);
            } catch (const EvaluationRangeError&) {
                return std::nullopt;
            }
            if (v.is_pole || std::abs(v.value) == 0.0) return std::nullopt;
            return 1.0 / v.value;
        };
        ZeroSearch search(g, fzeros, R, ses.options());
        std::vector<PointRecord> out;
        for (auto& fp : search.run())
            if (std::abs(fp.z) <= r + 1e-9 * (1 + r)) out.push_back({fp.z, fp.mult, target});
        sort_records(out);
        return out;
    }

    // winding fallback: zeros of f - a with structural pole correction.
    // Candidates must cover the whole root square of the subdivision,
    // corners included, or hidden poles corrupt the box counts.
    double R = r + 1e-6;
    double Rc = M_SQRT2 * (R + 0.9) + 0.6;
    auto cands = pole_candidates(ses, s, Rc);

    EvalG g = [&](Complex z) -> std::optional<Complex> {
        ExtendedComplexValue v;
        try {
            v = evaluate_spec(*s, z);
        } catch (const EvaluationRangeError&) {
            return std::nullopt;
        }
        if (v.is_pole) return std::nullopt;
        return v.value - target.a;
    };

    // Classify each pole site from its local Laurent expansion (exact order,
    // immune to nearby-zero cancellation in winding counts). a-points can
    // hide arbitrarily close to a pole (for p(z) + e^z the distance decays
    // like e^{-Re z / 2}), far below the subdivision resolution; those are
    // pulled out of the truncated series directly. Zeros outside the micro
    // radius are left to the global pass, which resolves them normally.
    std::vector<PoleAt> verified;
    std::vector<PointRecord> hidden;
    std::vector<std::pair<Complex, double>> owned_discs;
    for (auto& c : cands) {
        LocalExpansion L;
        try {
            L = local_expansion(ses, f, c.z, 10);
        } catch (const ExpansionError&) {
            continue;  // cancelled or crowded site; the global pass sees it
        }
        if (L.valuation >= 0) continue;  // not actually a pole
        int P = -L.valuation;
        verified.push_back({c.z, P});
        double scale = 1.0 + std::abs(c.z);
        double micro = std::fmin(0.25 * ses.options().cluster_tol * scale,
                                 nearest_candidate_gap(cands, c.z) / 8.0);
        poly::Poly tp;  // (sum_k c_k t^{k+P}) - a t^P
        for (int e = L.valuation; e < L.truncation_order; ++e)
            tp.push_back(L.coeff(e) - (e == 0 ? target.a : Complex(0, 0)));
        bool any = false;
        for (auto& rt : poly::roots(tp)) {
            if (std::abs(rt.location) > micro) continue;
            hidden.push_back({c.z + rt.location, rt.multiplicity, target});
            any = true;
        }
        if (any) owned_discs.push_back({c.z, micro});
    }

    ZeroSearch search(g, verified, R, ses.options());
    std::vector<PointRecord> out;
    for (auto& fp : search.run()) {
        bool owned = false;
        for (auto& od : owned_discs)
            if (std::abs(fp.z - od.first) <= od.second) {
                owned = true;
                break;
            }
        if (!owned && std::abs(fp.z) <= r + 1e-9 * (1 + r))
            out.push_back({fp.z, fp.mult, target});
    }
    for (auto& hp : hidden)
        if (std::abs(hp.location) <= r + 1e-9 * (1 + r)) out.push_back(hp);
    sort_records(out);
    return out;
}

const std::vector<PointRecord>& Session::points_to(const MeromorphicFunction& f, TargetKey t,
                                                   double r) {
    Key key{f.spec().get(), t};
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.first >= r) return it->second.second;
    double r_run = (it != cache_.end()) ? std::fmax(r, 1.3 * it->second.first) : r;
    keepalive_[f.spec().get()] = f.spec();
    auto recs = enumerate_points(*this, f, t, r_run);
    auto& slot = cache_[key];
    slot.first = r_run;
    slot.second = std::move(recs);
    return slot.second;
}

std::vector<PointRecord> Session::points_in(const MeromorphicFunction& f, TargetKey t, double r) {
    const auto& all = points_to(f, t, r);
    std::vector<PointRecord> out;
    for (auto& p : all)
        if (std::abs(p.location) <= r + 1e-9 * (1 + r)) out.push_back(p);
    return out;
}

std::shared_ptr<void>& Session::memo_slot(const void* node, long key) {
    return memo_[{node, key}];
}

const MeromorphicFunction& Session::derived(const SpecPtr& s) {
    auto it = derived_.find(s.get());
    if (it != derived_.end()) return it->second;
    keepalive_[s.get()] = s;
    auto [pos, inserted] = derived_.emplace(s.get(), mf_from_spec(s));
    return pos->second;
}

}  // namespace nevdiff
