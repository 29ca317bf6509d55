#include "nevdiff/catalog.hpp"

#include <cmath>

#include "nevdiff/enumerate.hpp"
#include "nevdiff/errors.hpp"
#include "nevdiff/polyutil.hpp"

namespace nevdiff {

std::string TargetKey::str() const {
    if (is_inf) return "inf";
    char buf[64];
    if (a.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "%g", a.real());
    else
        std::snprintf(buf, sizeof buf, "%g%+gi", a.real(), a.imag());
    return buf;
}

std::vector<Complex> family_points(const PointFamily& fam, double r) {
    std::vector<Complex> out;
    auto keep = [&](Complex z) {
        if (std::abs(z) <= r + 1e-9 * (1.0 + r)) out.push_back(z);
    };
    bool has1 = fam.t1 != Complex(0, 0);
    bool has2 = fam.t2 != Complex(0, 0);
    if (!has1 && !has2) {
        keep(fam.base);
        return out;
    }
    if (has1 != has2) {
        Complex t = has1 ? fam.t1 : fam.t2;
        long M = long((r + std::abs(fam.base)) / std::abs(t)) + 2;
        for (long i = -M; i <= M; ++i) keep(fam.base + double(i) * t);
        return out;
    }
    // two-dimensional family: conservative integer box from the shortest
    // nonzero lattice vector
    double smin = 1e300;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            if (i == 0 && j == 0) continue;
            smin = std::fmin(smin, std::abs(double(i) * fam.t1 + double(j) * fam.t2));
        }
    if (!(smin > 0))
        throw ConfigError("point family: degenerate translations");
    long M = long((r + std::abs(fam.base)) / smin) + 2;
    if (M > 4000) throw EnumerationError("point family: radius too large for lattice walk",
                                         EnumerationError::Kind::budget_exhausted);
    for (long i = -M; i <= M; ++i)
        for (long j = -M; j <= M; ++j)
            keep(fam.base + double(i) * fam.t1 + double(j) * fam.t2);
    return out;
}

MeromorphicFunction::MeromorphicFunction(SpecPtr s) : spec_(std::move(s)) {
    order_ = spec_order(*spec_);
}

void MeromorphicFunction::add_exact(const TargetKey& t, std::vector<PointFamily> fams) {
    exact_[t] = std::move(fams);
}

std::optional<std::vector<PointFamily>> MeromorphicFunction::exact_families(
    const TargetKey& t) const {
    auto it = exact_.find(t);
    if (it == exact_.end()) return std::nullopt;
    return it->second;
}

ExtendedComplexValue MeromorphicFunction::evaluate(Complex z) const {
    return evaluate_spec(*spec_, z);
}

ExtendedComplexValue evaluate(const MeromorphicFunction& f, Complex z) {
    return f.evaluate(z);
}

std::optional<std::string> MeromorphicFunction::self_test(double r) const {
    for (auto& [target, fams] : exact_) {
        for (auto& fam : fams) {
            auto pts = family_points(fam, r);
            int checked = 0;
            for (auto& z : pts) {
                if (checked++ > 64) break;
                ExtendedComplexValue v;
                try {
                    v = evaluate(z);
                } catch (const EvaluationRangeError&) {
                    continue;
                }
                if (target.is_inf) {
                    bool polar = v.is_pole || std::abs(v.value) > 1e9;
                    if (!polar)
                        return "descriptor failure: expected pole of " + spec_name(*spec_) +
                               " at " + target.str();
                } else {
                    if (v.is_pole || std::abs(v.value - target.a) > 1e-6 * (1.0 + std::abs(target.a)))
                        return "descriptor failure: expected value " + target.str() + " of " +
                               spec_name(*spec_);
                }
            }
        }
    }
    return std::nullopt;
}

// --- descriptor derivation -----------------------------------------------------

namespace {

using Table = std::map<TargetKey, std::vector<PointFamily>>;

Table derive_table(const FunctionSpec& s);

Table table_sn(const JacobiSnNode& j) {
    double K = j.K, Kp = j.Kp;
    Complex p1(2 * K, 0), p2(0, 2 * Kp);       // zero/pole lattice translations
    Complex q1(4 * K, 0), q2(0, 2 * Kp);       // ramified-value translations
    Table t;
    t[TargetKey::at({0, 0})] = {{Complex(0, 0), p1, p2, 1}};
    t[TargetKey::inf()] = {{Complex(0, Kp), p1, p2, 1}};
    t[TargetKey::at({1, 0})] = {{Complex(K, 0), q1, q2, 2}};
    t[TargetKey::at({-1, 0})] = {{Complex(-K, 0), q1, q2, 2}};
    t[TargetKey::at({1 / j.k, 0})] = {{Complex(K, Kp), q1, q2, 2}};
    t[TargetKey::at({-1 / j.k, 0})] = {{Complex(-K, -Kp), q1, q2, 2}};
    return t;
}

std::optional<TargetKey> mobius_image(const MobiusNode& m, const TargetKey& t) {
    if (t.is_inf) {
        if (m.c == Complex(0, 0)) return TargetKey::inf();
        return TargetKey::at(m.a / m.c);
    }
    Complex den = m.c * t.a + m.d;
    if (std::abs(den) == 0.0) return TargetKey::inf();
    return TargetKey::at((m.a * t.a + m.b) / den);
}

Table derive_table(const FunctionSpec& s) {
    Table t;
    if (auto* r = s.as<RationalNode>()) {
        std::vector<PointFamily> zeros, poles;
        for (auto& rt : poly::roots(r->num)) zeros.push_back({rt.location, {0, 0}, {0, 0}, rt.multiplicity});
        if (poly::degree(r->den) >= 1)
            for (auto& rt : poly::roots(r->den))
                poles.push_back({rt.location, {0, 0}, {0, 0}, rt.multiplicity});
        t[TargetKey::at({0, 0})] = zeros;
        t[TargetKey::inf()] = poles;
        return t;
    }
    if (s.as<ExpLinearNode>() || s.as<ExpExpNode>()) {
        t[TargetKey::at({0, 0})] = {};
        t[TargetKey::inf()] = {};
        return t;
    }
    if (auto* w = s.as<WeierstrassNode>()) {
        t[TargetKey::inf()] = {{Complex(0, 0), 2.0 * w->w1, 2.0 * w->w2, 2}};
        return t;
    }
    if (auto* j = s.as<JacobiSnNode>()) return table_sn(*j);
    if (auto* su = s.as<SumNode>()) {
        // constant offset: retarget; otherwise only pole data survives, and
        // only when a single term carries poles
        Complex c_off(0, 0);
        std::vector<const FunctionSpec*> rest;
        for (auto& term : su->terms) {
            if (auto cv = spec_const_value(*term))
                c_off += *cv;
            else
                rest.push_back(term.get());
        }
        if (rest.size() == 1) {
            Table inner = derive_table(*rest[0]);
            for (auto& [key, fams] : inner) {
                if (key.is_inf)
                    t[key] = fams;
                else
                    t[TargetKey::at(key.a + c_off)] = fams;
            }
            return t;
        }
        int polar_children = 0;
        std::vector<PointFamily> poles;
        bool all_known = true;
        for (auto* term : rest) {
            Table inner = derive_table(*term);
            auto it = inner.find(TargetKey::inf());
            if (it == inner.end()) {
                all_known = false;
                break;
            }
            if (!it->second.empty()) {
                ++polar_children;
                poles = it->second;
            }
        }
        if (all_known && polar_children <= 1) t[TargetKey::inf()] = poles;
        return t;
    }
    if (auto* pr = s.as<ProductNode>()) {
        Complex scal(1, 0);
        std::vector<const FunctionSpec*> rest;
        for (auto& f : pr->factors) {
            if (auto cv = spec_const_value(*f))
                scal *= *cv;
            else
                rest.push_back(f.get());
        }
        if (rest.size() == 1 && scal != Complex(0, 0)) {
            Table inner = derive_table(*rest[0]);
            for (auto& [key, fams] : inner) {
                if (key.is_inf)
                    t[key] = fams;
                else
                    t[TargetKey::at(scal * key.a)] = fams;
            }
        }
        return t;
    }
    if (auto* re = s.as<ReciprocalNode>()) {
        Table inner = derive_table(*re->of);
        for (auto& [key, fams] : inner) {
            if (key.is_inf)
                t[TargetKey::at({0, 0})] = fams;
            else if (key.a == Complex(0, 0))
                t[TargetKey::inf()] = fams;
            else
                t[TargetKey::at(1.0 / key.a)] = fams;
        }
        return t;
    }
    if (auto* mo = s.as<MobiusNode>()) {
        Table inner = derive_table(*mo->of);
        for (auto& [key, fams] : inner)
            if (auto img = mobius_image(*mo, key)) t[*img] = fams;
        return t;
    }
    if (auto* sh = s.as<ShiftNode>()) {
        Table inner = derive_table(*sh->of);
        for (auto& [key, fams] : inner) {
            auto moved = fams;
            for (auto& f : moved) f.base -= sh->h;
            t[key] = std::move(moved);
        }
        return t;
    }
    if (auto* sc = s.as<ScaleArgNode>()) {
        Table inner = derive_table(*sc->of);
        for (auto& [key, fams] : inner) {
            auto moved = fams;
            for (auto& f : moved) {
                f.base /= sc->s;
                f.t1 /= sc->s;
                f.t2 /= sc->s;
            }
            t[key] = std::move(moved);
        }
        return t;
    }
    return t;
}

}  // namespace

MeromorphicFunction mf_from_spec(SpecPtr spec) {
    MeromorphicFunction f(simplify(std::move(spec)));
    for (auto& [key, fams] : derive_table(*f.spec())) f.add_exact(key, fams);
    return f;
}

MeromorphicFunction mf_exp(Complex lambda) { return mf_from_spec(make_exp_linear(lambda)); }
MeromorphicFunction mf_exp_exp() { return mf_from_spec(make_exp_exp()); }

MeromorphicFunction mf_rational(std::vector<Complex> num, std::vector<Complex> den) {
    return mf_from_spec(make_rational(std::move(num), std::move(den)));
}

MeromorphicFunction mf_weierstrass(Complex w1, Complex w2) {
    return mf_from_spec(make_weierstrass(w1, w2));
}

MeromorphicFunction mf_jacobi_sn(double k) { return mf_from_spec(make_jacobi_sn(k)); }

MeromorphicFunction mf_wp_plus_exp(Complex w1, Complex w2) {
    return mf_from_spec(make_sum({make_weierstrass(w1, w2), make_exp_linear({1, 0})}));
}

MeromorphicFunction mf_reciprocal(const MeromorphicFunction& f) {
    return mf_from_spec(make_reciprocal(f.spec()));
}

}  // namespace nevdiff
