#ifndef NEVDIFF_ENUMERATE_HPP
#define NEVDIFF_ENUMERATE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "nevdiff/catalog.hpp"

namespace nevdiff {

struct EnumOptions {
    int max_boxes = 400000;
    int max_samples_per_box = 6000;
    double loc_tol = 5e-8;      // relative location refinement target
    double cluster_tol = 2e-5;  // below this size a winding cluster is one point
    int restarts = 6;           // global re-jiggles before giving up
};

// Shared evaluation context: enumeration caches and deterministic seeding.
// All cached data is derived purely from immutable specs, so reuse across
// operations never changes results, only cost.
class Session {
public:
    explicit Session(std::uint64_t seed = 1234) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    EnumOptions& options() { return opt_; }
    const EnumOptions& options() const { return opt_; }

    // Enumeration to radius >= r, cached per (spec identity, target).
    const std::vector<PointRecord>& points_to(const MeromorphicFunction& f, TargetKey t,
                                              double r);
    // Records with |z| <= r, sorted by (re, im).
    std::vector<PointRecord> points_in(const MeromorphicFunction& f, TargetKey t, double r);

    // Memoized catalog wrapper for derived specs (reciprocal, differences, ...).
    const MeromorphicFunction& derived(const SpecPtr& s);

    // Small type-erased memo used by the expansion engine for atom series
    // that are exactly translation-invariant (elliptic atoms at lattice
    // points). Keyed by node identity and an integer discriminator.
    std::shared_ptr<void>& memo_slot(const void* node, long key);

private:
    struct Key {
        const FunctionSpec* spec;
        TargetKey target;
        bool operator<(const Key& o) const {
            if (spec != o.spec) return spec < o.spec;
            return target < o.target;
        }
    };
    std::uint64_t seed_;
    EnumOptions opt_;
    std::map<Key, std::pair<double, std::vector<PointRecord>>> cache_;
    std::map<const FunctionSpec*, MeromorphicFunction> derived_;
    std::map<const FunctionSpec*, SpecPtr> keepalive_;
    std::map<std::pair<const void*, long>, std::shared_ptr<void>> memo_;
};

// All a-points (target finite) or poles (target infinity) of f in |z| <= r,
// with multiplicities, sorted by (re, im). Exact families are used when the
// catalog knows them; otherwise adaptive winding-number subdivision with
// bisection refinement. Throws EnumerationError when the subdivision budget
// is exhausted or a winding count cannot be stabilized.
std::vector<PointRecord> enumerate_points(Session& ses, const MeromorphicFunction& f,
                                          TargetKey target, double r);

// Points of one exact family with |z| <= r.
std::vector<Complex> family_points(const PointFamily& fam, double r);

}  // namespace nevdiff

#endif
