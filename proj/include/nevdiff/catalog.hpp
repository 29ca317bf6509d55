#ifndef NEVDIFF_CATALOG_HPP
#define NEVDIFF_CATALOG_HPP

#include <map>
#include <optional>
#include <vector>

#include "nevdiff/function_spec.hpp"

namespace nevdiff {

// A target value on the extended plane; infinity sorts first.
struct TargetKey {
    bool is_inf = false;
    Complex a{0, 0};

    static TargetKey inf() { return {true, {0, 0}}; }
    static TargetKey at(Complex v) { return {false, v}; }

    bool operator<(const TargetKey& o) const {
        if (is_inf != o.is_inf) return is_inf > o.is_inf;
        if (a.real() != o.a.real()) return a.real() < o.a.real();
        return a.imag() < o.a.imag();
    }
    bool operator==(const TargetKey& o) const {
        return is_inf == o.is_inf && (is_inf || a == o.a);
    }
    std::string str() const;
};

// An exactly known family of a-points: base + i*t1 + j*t2 over integers.
// t2 == 0 collapses to a one-dimensional family, both zero to a single point.
struct PointFamily {
    Complex base;
    Complex t1{0, 0}, t2{0, 0};
    int multiplicity = 1;
};

struct PointRecord {
    Complex location;
    int multiplicity;
    TargetKey target;
};

class MeromorphicFunction {
public:
    MeromorphicFunction() = default;
    explicit MeromorphicFunction(SpecPtr s);

    const SpecPtr& spec() const { return spec_; }
    double declared_order() const { return order_; }
    bool finite_order() const { return std::isfinite(order_); }

    // Exact point families for a target, if this catalog entry knows them.
    std::optional<std::vector<PointFamily>> exact_families(const TargetKey& t) const;
    const std::map<TargetKey, std::vector<PointFamily>>& exact_table() const { return exact_; }

    void set_declared_order(double o) { order_ = o; }
    void add_exact(const TargetKey& t, std::vector<PointFamily> fams);

    ExtendedComplexValue evaluate(Complex z) const;

    // Checks that evaluating at family points reproduces the declared target
    // within tolerance; returns a description of the first failure, if any.
    std::optional<std::string> self_test(double r = 12.0) const;

private:
    SpecPtr spec_;
    double order_ = 0.0;
    std::map<TargetKey, std::vector<PointFamily>> exact_;
};

ExtendedComplexValue evaluate(const MeromorphicFunction& f, Complex z);

// Catalog builders for the example functions. Descriptor tables are attached
// where the point lattices are known in closed form.
MeromorphicFunction mf_exp(Complex lambda = {1, 0});
MeromorphicFunction mf_exp_exp();
MeromorphicFunction mf_rational(std::vector<Complex> num, std::vector<Complex> den);
MeromorphicFunction mf_weierstrass(Complex w1 = {1, 0}, Complex w2 = {0, 1.15});
MeromorphicFunction mf_jacobi_sn(double k = 0.5);
// p(z) + exp(z) on the same lattice as mf_weierstrass
MeromorphicFunction mf_wp_plus_exp(Complex w1 = {1, 0}, Complex w2 = {0, 1.15});
MeromorphicFunction mf_reciprocal(const MeromorphicFunction& f);
// Generic constructor: derives descriptors and order from the structure.
MeromorphicFunction mf_from_spec(SpecPtr spec);

}  // namespace nevdiff

#endif
