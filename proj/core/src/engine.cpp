#include "horolab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "horolab/errors.hpp"

namespace horolab {

namespace {

// Kahan-compensated running sum of sequence-space vectors; keeps the Cesaro
// identities accurate to a few ulp even at n ~ 1e5 terms.
class CompensatedSum {
public:
    void add(const SeqVector& x) {
        const std::size_t m = std::max({sum_.size(), x.block_size()});
        sum_.resize(m, tail_sum_);
        comp_.resize(m, tail_comp_);
        for (std::size_t i = 0; i < m; ++i) add_one(sum_[i], comp_[i], x.coord(i + 1));
        add_one(tail_sum_, tail_comp_, x.tail());
    }

    SeqVector scaled(double factor) const {
        std::deque<double> out(sum_.size());
        for (std::size_t i = 0; i < sum_.size(); ++i) out[i] = sum_[i] * factor;
        return SeqVector(std::move(out), tail_sum_ * factor);
    }

private:
    static void add_one(double& s, double& c, double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }

    std::deque<double> sum_, comp_;
    double tail_sum_ = 0.0, tail_comp_ = 0.0;
};

std::vector<long> doubling_schedule(long n_max) {
    std::vector<long> sched;
    for (long n = 8; n < n_max; n *= 2) sched.push_back(n);
    if (sched.empty() || sched.back() != n_max) sched.push_back(n_max);
    return sched;
}

}  // namespace

SeqVector cesaro_average(const MapExpr& T, const SeqVector& seed, long n) {
    if (n < 1) throw std::invalid_argument("cesaro_average: n >= 1");
    CompensatedSum acc;
    SeqVector x = seed;
    acc.add(x);
    for (long k = 1; k < n; ++k) {
        x = T.apply(std::move(x));
        acc.add(x);
    }
    return acc.scaled(1.0 / static_cast<double>(n));
}

void AveragingTrace::write_csv(std::ostream& os) const {
    os << "n";
    for (const std::string& l : member_labels) os << ",defect_" << l;
    os << '\n';
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        os << schedule[i];
        for (double d : defects[i]) os << ',' << d;
        os << '\n';
    }
}

AveragingTrace nested_average(const FamilySpec& F, const SeqVector& seed, long n_max,
                              const SpaceSpec& s) {
    if (F.members.empty()) throw std::invalid_argument("nested_average: empty family");
    if (n_max < 1) throw std::invalid_argument("nested_average: n >= 1");

    AveragingTrace trace;
    trace.schedule = doubling_schedule(n_max);
    for (const FamilyMember& m : F.members) trace.member_labels.push_back(m.label);

    for (long n : trace.schedule) {
        std::vector<SeqVector> levels;
        SeqVector v = seed;
        for (const FamilyMember& m : F.members) {
            v = cesaro_average(m.map, v, n);
            levels.push_back(v);
        }
        std::vector<double> defects, bounds;
        for (const FamilyMember& m : F.members) {
            defects.push_back(distance(v, m.map.apply(v), s));
            // proof reference: ||w - M^n w|| / n with w the original seed
            SeqVector mw = seed;
            for (long k = 0; k < n; ++k) mw = m.map.apply(std::move(mw));
            bounds.push_back(distance(seed, mw, s) / static_cast<double>(n));
        }
        trace.iterates.push_back(v);
        trace.levels.push_back(std::move(levels));
        trace.defects.push_back(std::move(defects));
        trace.bound_refs.push_back(std::move(bounds));
    }

    // audit: defect curves non-increasing over the second half of the schedule
    const std::size_t half = trace.schedule.size() / 2;
    for (std::size_t m = 0; m < F.members.size(); ++m) {
        bool dec = true;
        for (std::size_t i = std::max<std::size_t>(half, 1); i < trace.schedule.size(); ++i)
            if (trace.defects[i][m] > trace.defects[i - 1][m] + 1e-12) dec = false;
        trace.defect_decreasing.push_back(dec);
    }
    return trace;
}

TranslationEstimate translation_number(const MapExpr& T, const SeqVector& y, const SpaceSpec& s,
                                       long n_max) {
    if (n_max < 8) throw std::invalid_argument("translation_number: n_max >= 8");
    TranslationEstimate r;
    std::vector<double> displacement;  // c_n = ||T^n y - y||
    SeqVector x = y;
    for (long n = 1; n <= n_max; ++n) {
        x = T.apply(std::move(x));
        const double cn = distance(x, y, s);
        displacement.push_back(cn);
        r.displacement_over_n.push_back(cn / static_cast<double>(n));
        r.norm_over_n.push_back(norm(x, s) / static_cast<double>(n));
        const double prev = r.fekete_envelope.empty()
                                ? std::numeric_limits<double>::infinity()
                                : r.fekete_envelope.back();
        r.fekete_envelope.push_back(std::min(prev, r.displacement_over_n.back()));
    }
    r.estimate = r.fekete_envelope.back();

    // subadditivity audit c_{m+n} <= c_m + c_n; full check when affordable,
    // strided otherwise
    const long stride = n_max <= 2000 ? 1 : n_max / 512;
    for (long m = 1; m <= n_max; m += stride)
        for (long n = m; m + n <= n_max; n += stride) {
            const double lhs = displacement[static_cast<std::size_t>(m + n - 1)];
            const double rhs = displacement[static_cast<std::size_t>(m - 1)] +
                               displacement[static_cast<std::size_t>(n - 1)];
            if (lhs > rhs + 1e-12) {
                r.subadditive = false;
                r.max_violation = std::max(r.max_violation, lhs - rhs);
            }
        }
    return r;
}

ProductOrbit product_orbit(const FamilySpec& F, const SeqVector& x0, long n_max,
                           const SpaceSpec& s) {
    if (F.members.empty()) throw std::invalid_argument("product_orbit: empty family");
    const std::size_t M = F.members.size();
    ProductOrbit r;
    for (const FamilyMember& m : F.members) r.member_labels.push_back(m.label);

    std::vector<SeqVector> powers(M, x0);       // M^n x0 per member
    std::vector<SeqVector> powers_next(M, x0);  // M^{n+1} x0
    for (std::size_t m = 0; m < M; ++m) powers_next[m] = F.members[m].map.apply(x0);

    SeqVector x = x0;
    for (long n = 0; n <= n_max; ++n) {
        std::vector<double> defects(M), bounds(M);
        for (std::size_t m = 0; m < M; ++m) {
            defects[m] = distance(x, F.members[m].map.apply(x), s);
            bounds[m] = distance(powers[m], powers_next[m], s);
            if (defects[m] > bounds[m] + 1e-12) r.bound_respected = false;
        }
        r.points.push_back(x);
        r.defects.push_back(std::move(defects));
        r.bounds.push_back(std::move(bounds));
        if (n == n_max) break;
        for (std::size_t m = 0; m < M; ++m) {
            x = F.members[m].map.apply(std::move(x));
            powers[m] = powers_next[m];
            powers_next[m] = F.members[m].map.apply(powers_next[m]);
        }
    }
    return r;
}

CommonFixedPointResult common_fixed_point(const FamilySpec& F, const SeqVector& seed,
                                          const SpaceSpec& s, double tol, long n_max) {
    if (F.members.empty()) throw std::invalid_argument("common_fixed_point: empty family");
    // every constructor of the map algebra is affine, so no membership check

    const double escape = 1e6 * (1.0 + norm(seed, s));
    auto guard = [&](const SeqVector& v) {
        if (norm(v, s) > escape)
            throw UnboundedOrbit("common_fixed_point: iterate norm exceeded 1e6 (1 + ||seed||)");
    };

    CommonFixedPointResult r;
    r.trace.member_labels.clear();
    for (const FamilyMember& m : F.members) r.trace.member_labels.push_back(m.label);

    auto max_residual = [&](const SeqVector& z) {
        double worst = 0.0;
        for (const FamilyMember& m : F.members)
            worst = std::max(worst, distance(m.map.apply(z), z, s));
        return worst;
    };

    // averaging phase with a doubling budget and early exit
    SeqVector z = seed;
    for (long n : doubling_schedule(n_max)) {
        std::vector<SeqVector> levels;
        SeqVector v = seed;
        for (const FamilyMember& m : F.members) {
            v = cesaro_average(m.map, v, n);
            guard(v);
            levels.push_back(v);
        }
        std::vector<double> defects;
        for (const FamilyMember& m : F.members) defects.push_back(distance(v, m.map.apply(v), s));
        r.trace.schedule.push_back(n);
        r.trace.iterates.push_back(v);
        r.trace.levels.push_back(std::move(levels));
        r.trace.defects.push_back(defects);
        r.trace.bound_refs.emplace_back();
        z = std::move(v);
        if (*std::max_element(defects.begin(), defects.end()) <= tol) break;
    }

    // Krasnoselskii polishing: z <- (z + Mz)/2 over members, in order
    double residual = max_residual(z);
    constexpr long kMaxSweeps = 50000;
    long sweep = 0;
    double stagnation_ref = residual;
    for (; sweep < kMaxSweeps && residual > tol; ++sweep) {
        for (const FamilyMember& m : F.members) {
            SeqVector mz = m.map.apply(z);
            z += mz;
            z *= 0.5;
        }
        guard(z);
        residual = max_residual(z);
        if (sweep % 200 == 199) {
            if (residual > 0.9999 * stagnation_ref) break;  // no longer improving
            stagnation_ref = residual;
        }
    }
    r.z = std::move(z);
    r.residual = residual;
    r.polish_sweeps = sweep;
    r.found = residual <= tol;
    return r;
}

UmpResult ump_fixed_point(const MapExpr& T, const SeqVector& x0, long n_max, const SpaceSpec& s,
                          double tol, std::size_t last_k) {
    if (!(s.kind() == SpaceSpec::Kind::Lp && s.p() > 1.0))
        throw std::invalid_argument("ump_fixed_point: space must be lp with p > 1");
    if (n_max < 8) throw std::invalid_argument("ump_fixed_point: n_max >= 8");

    UmpResult r;
    const std::vector<SeqVector> pts = orbit(T, x0, n_max);
    const double escape = 1e6 * (1.0 + norm(x0, s));
    double first_q = 0.0, last_q = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double nn = norm(pts[i], s);
        if (nn > escape) {
            r.diagnostic = "orbit escaped the norm bound at step " + std::to_string(i);
            return r;
        }
        if (i < pts.size() / 4) first_q = std::max(first_q, nn);
        if (i >= (3 * pts.size()) / 4) last_q = std::max(last_q, nn);
    }

    ProbeSet probes = ProbeSet::defaults(T, 0, 0);
    probes.points.push_back(x0);
    r.functional = empirical_limit(pts, probes, s, std::max(tol, 1e-9));

    std::size_t dim = 1;
    for (std::size_t i = pts.size() - std::min(last_k, pts.size()); i < pts.size(); ++i)
        dim = std::max(dim, pts[i].block_size());
    r.center_report = asymptotic_center(pts, s, dim, last_k);
    r.center = r.center_report.center;
    r.residual = distance(T.apply(r.center), r.center, s);
    r.found = r.residual <= tol;
    if (!r.found) {
        std::ostringstream os;
        os << "center residual " << r.residual << " exceeds tol " << tol;
        if (last_q > 1.5 * first_q + 0.5)
            os << "; orbit norms grew from " << first_q << " to " << last_q
               << " (center escape suspected)";
        r.diagnostic = os.str();
    }
    return r;
}

}  // namespace horolab
