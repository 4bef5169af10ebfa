#include "horolab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace horolab {

namespace {

constexpr int kLastK = 5;

// Doubling checkpoints plus the final kLastK indices (1-based, ascending).
std::vector<long> checkpoint_schedule(long n_total) {
    std::vector<long> sched;
    if (n_total <= 64) {
        for (long n = 1; n <= n_total; ++n) sched.push_back(n);
        return sched;
    }
    for (long n = 1; n < n_total - kLastK + 1; n *= 2) sched.push_back(n);
    for (long n = std::max<long>(1, n_total - kLastK + 1); n <= n_total; ++n)
        sched.push_back(n);
    return sched;
}

template <class Point, class Dist>
void tabulate(const std::vector<Point>& probes, const Point& base, long n_total,
              const std::function<const Point&(long)>& point_at, const Dist& dist, double tol,
              std::vector<double>& values, std::vector<double>& spreads,
              std::vector<char>& converged,
              std::vector<EmpiricalFunctional::Checkpoint>* checkpoints) {
    const std::vector<long> sched = checkpoint_schedule(n_total);
    const std::size_t np = probes.size();
    std::vector<std::vector<double>> window(np);  // last K sampled values per probe

    for (long n : sched) {
        const Point& a = point_at(n);
        const double d0 = dist(base, a);
        std::vector<double> row(np);
        for (std::size_t i = 0; i < np; ++i) {
            row[i] = dist(probes[i], a) - d0;
            auto& w = window[i];
            w.push_back(row[i]);
            if (w.size() > kLastK) w.erase(w.begin());
        }
        if (checkpoints) checkpoints->push_back({n, std::move(row)});
    }

    values.resize(np);
    spreads.resize(np);
    converged.resize(np);
    for (std::size_t i = 0; i < np; ++i) {
        const auto& w = window[i];
        values[i] = w.back();
        const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
        spreads[i] = *hi - *lo;
        converged[i] = spreads[i] <= tol;
    }
}

}  // namespace

void ProbeSet::validate() const {
    if (points.empty()) throw std::invalid_argument("probe set must be nonempty");
    for (const SeqVector& p : points)
        if (p.is_zero()) return;
    throw std::invalid_argument("probe set must contain the base point 0");
}

ProbeSet ProbeSet::defaults(const std::optional<MapExpr>& around, std::size_t random_count,
                            std::uint64_t rng_seed, bool integer_entries,
                            std::size_t max_support) {
    ProbeSet ps;
    ps.points.push_back(SeqVector::zero());
    for (std::size_t i = 1; i <= 8; ++i) {
        ps.points.push_back(SeqVector::unit(i, 1.0));
        ps.points.push_back(SeqVector::unit(i, -1.0));
    }
    if (around) {
        SeqVector x = SeqVector::zero();
        for (int k = 0; k < 4; ++k) {
            x = around->apply(std::move(x));
            ps.points.push_back(x);
        }
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> ui(-2, 2);
    std::uniform_int_distribution<std::size_t> len(1, max_support);
    for (std::size_t k = 0; k < random_count; ++k) {
        std::vector<double> c(len(rng));
        for (double& v : c) v = integer_entries ? static_cast<double>(ui(rng)) : u(rng);
        ps.points.push_back(SeqVector(std::move(c)));
    }
    return ps;
}

bool EmpiricalFunctional::all_converged() const {
    for (char c : converged)
        if (!c) return false;
    return true;
}

double EmpiricalFunctional::eval(const SeqVector& x) const {
    for (std::size_t i = 0; i < probes.size(); ++i)
        if (probes[i] == x) return values[i];
    throw std::invalid_argument("empirical functional: not a probe");
}

Functional EmpiricalFunctional::to_functional() const {
    return Functional::empirical(probes, values, source);
}

void EmpiricalFunctional::write_csv(std::ostream& os) const {
    os << "probe_id,n,value\n";
    for (const Checkpoint& cp : checkpoints)
        for (std::size_t i = 0; i < cp.values.size(); ++i)
            os << i << ',' << cp.n << ',' << cp.values[i] << '\n';
}

double lipschitz_violation(const EmpiricalFunctional& e, const SpaceSpec& s) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.probes.size(); ++i)
        for (std::size_t j = i + 1; j < e.probes.size(); ++j) {
            const double gap =
                std::abs(e.values[i] - e.values[j]) - distance(e.probes[i], e.probes[j], s);
            worst = std::max(worst, gap);
        }
    return e.probes.size() < 2 ? 0.0 : worst;
}

std::vector<SeqVector> orbit(const MapExpr& T, const SeqVector& x0, long n) {
    if (n < 1) throw std::invalid_argument("orbit: n >= 1");
    std::vector<SeqVector> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    pts.push_back(x0);
    for (long k = 0; k < n; ++k) pts.push_back(T.apply(pts.back()));
    return pts;
}

EmpiricalFunctional empirical_limit(const std::vector<SeqVector>& points, const ProbeSet& probes,
                                    const SpaceSpec& s, double tol) {
    if (points.size() < 3) throw std::invalid_argument("empirical_limit: need at least 3 points");
    probes.validate();
    EmpiricalFunctional e;
    e.probes = probes.points;
    e.source = "explicit sequence (" + std::to_string(points.size()) + " points)";
    e.tol = tol;
    e.n_final = static_cast<long>(points.size());
    auto at = std::function<const SeqVector&(long)>(
        [&](long n) -> const SeqVector& { return points[static_cast<std::size_t>(n - 1)]; });
    auto dist = [&](const SeqVector& a, const SeqVector& b) { return distance(a, b, s); };
    tabulate<SeqVector>(e.probes, SeqVector::zero(), e.n_final, at, dist, tol, e.values, e.spreads,
                        e.converged, &e.checkpoints);
    return e;
}

EmpiricalFunctional empirical_limit_orbit(const MapExpr& T, const SeqVector& x0, long n_max,
                                          const ProbeSet& probes, const SpaceSpec& s, double tol) {
    if (n_max < 3) throw std::invalid_argument("empirical_limit_orbit: need n_max >= 3");
    probes.validate();
    EmpiricalFunctional e;
    e.probes = probes.points;
    e.source = "orbit, n_max=" + std::to_string(n_max);
    e.tol = tol;
    e.n_final = n_max;

    SeqVector x = x0;
    long cur = 0;
    auto at = std::function<const SeqVector&(long)>([&](long n) -> const SeqVector& {
        while (cur < n) {
            x = T.apply(std::move(x));
            ++cur;
        }
        return x;
    });
    auto dist = [&](const SeqVector& a, const SeqVector& b) { return distance(a, b, s); };
    tabulate<SeqVector>(e.probes, SeqVector::zero(), n_max, at, dist, tol, e.values, e.spreads,
                        e.converged, &e.checkpoints);
    return e;
}

EmpiricalFunctional scaled_empirical_limit(const std::vector<SeqVector>& points,
                                           const ProbeSet& probes, const SpaceSpec& s,
                                           double scale, double tol) {
    if (!(scale > 0.0)) throw std::invalid_argument("scaled_empirical_limit: scale > 0");
    ProbeSet shrunk;
    shrunk.points.reserve(probes.points.size());
    for (const SeqVector& v : probes.points) shrunk.points.push_back((1.0 / scale) * v);
    EmpiricalFunctional e = empirical_limit(points, shrunk, s, tol);
    e.probes = probes.points;  // report against the original probes
    for (double& v : e.values) v *= scale;
    for (double& v : e.spreads) v *= scale;
    for (auto& cp : e.checkpoints)
        for (double& v : cp.values) v *= scale;
    e.source += ", rescaled by m=" + std::to_string(scale);
    return e;
}

MatchReport match_hypothesis(const EmpiricalFunctional& e, const Functional& h, double tol) {
    MatchReport r;
    r.tol = tol;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const double d = std::abs(e.values[i] - h.evaluate(e.probes[i]));
        if (d >= r.max_discrepancy) {
            r.max_discrepancy = d;
            r.witness = i;
        }
    }
    r.pass = r.max_discrepancy <= tol;
    return r;
}

bool EmpiricalPair::all_converged() const {
    for (char c : converged)
        if (!c) return false;
    return true;
}

EmpiricalPair empirical_limit_pairs(const std::vector<DirectSumPoint>& points,
                                    const std::vector<DirectSumPoint>& probes,
                                    const SpaceSpec& dsum, double tol) {
    if (points.size() < 3)
        throw std::invalid_argument("empirical_limit_pairs: need at least 3 points");
    if (!dsum.is_direct_sum())
        throw std::invalid_argument("empirical_limit_pairs: space must be a direct sum");
    EmpiricalPair e;
    e.probes = probes;
    e.source = "explicit pair sequence (" + std::to_string(points.size()) + " points)";
    e.tol = tol;
    auto at = std::function<const DirectSumPoint&(long)>(
        [&](long n) -> const DirectSumPoint& { return points[static_cast<std::size_t>(n - 1)]; });
    auto dist = [&](const DirectSumPoint& a, const DirectSumPoint& b) {
        return dsum_distance(a, b, dsum);
    };
    const DirectSumPoint base{SeqVector::zero(), SeqVector::zero()};
    tabulate<DirectSumPoint>(e.probes, base, static_cast<long>(points.size()), at, dist, tol,
                             e.values, e.spreads, e.converged, nullptr);
    return e;
}

MatchReport match_hypothesis_pairs(const EmpiricalPair& e,
                                   const std::function<double(const DirectSumPoint&)>& h,
                                   double tol) {
    MatchReport r;
    r.tol = tol;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const double d = std::abs(e.values[i] - h(e.probes[i]));
        if (d >= r.max_discrepancy) {
            r.max_discrepancy = d;
            r.witness = i;
        }
    }
    r.pass = r.max_discrepancy <= tol;
    return r;
}

namespace {

double golden_section(const std::function<double(double)>& g, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++iter) {
        if (gc < gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CenterReport asymptotic_center(const std::vector<SeqVector>& points, const SpaceSpec& s,
                               std::size_t dim, std::size_t last_k, const CenterOptions& opts) {
    if (points.empty()) throw std::invalid_argument("asymptotic_center: no points");
    if (dim == 0) throw std::invalid_argument("asymptotic_center: dim >= 1");
    const std::size_t k = std::min(last_k, points.size());
    const std::vector<SeqVector> tail(points.end() - static_cast<std::ptrdiff_t>(k), points.end());

    auto objective = [&](const std::vector<double>& coords) {
        const SeqVector xv{std::vector<double>(coords)};
        double worst = 0.0;
        for (const SeqVector& p : tail) worst = std::max(worst, distance(xv, p, s));
        return worst;
    };

    // per-coordinate brackets: the 1-d restrictions are convex and decrease
    // outside the coordinate range of the points
    std::vector<double> lo(dim, 0.0), hi(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double mn = tail.front().coord(i + 1), mx = mn;
        for (const SeqVector& p : tail) {
            mn = std::min(mn, p.coord(i + 1));
            mx = std::max(mx, p.coord(i + 1));
        }
        lo[i] = mn;
        hi[i] = mx;
    }

    auto descend = [&](std::vector<double> x) {
        double fx = objective(x);
        for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
            for (std::size_t i = 0; i < dim; ++i) {
                if (lo[i] == hi[i]) {
                    x[i] = lo[i];
                    continue;
                }
                auto line = [&](double sv) {
                    std::vector<double> y = x;
                    y[i] = sv;
                    return objective(y);
                };
                x[i] = golden_section(line, lo[i], hi[i]);
            }
            const double fnew = objective(x);
            if (fx - fnew < opts.rel_improvement_stop * (1.0 + std::abs(fx))) {
                fx = fnew;
                break;
            }
            fx = fnew;
        }
        return std::pair<std::vector<double>, double>(std::move(x), fx);
    };

    std::vector<double> start1(dim, 0.0), start2(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        start1[i] = tail.front().coord(i + 1);
        double mean = 0.0;
        for (const SeqVector& p : tail) mean += p.coord(i + 1);
        start2[i] = mean / static_cast<double>(k);
    }
    auto [x1, f1] = descend(std::move(start1));
    auto [x2, f2] = descend(std::move(start2));

    CenterReport r;
    const std::vector<double>& best = (f1 <= f2) ? x1 : x2;
    r.value = std::min(f1, f2);
    r.center = SeqVector(best);
    r.restart_gap = distance(SeqVector(x1), SeqVector(x2), s);
    r.non_unique = (s.kind() == SpaceSpec::Kind::Lp && s.p() > 1.0)
                       ? (r.restart_gap > opts.restart_tol)
                       : false;

    // strictness margin against +-delta coordinate perturbations
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim; ++i) {
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> y = best;
            y[i] += sgn * opts.margin_delta;
            margin = std::min(margin, objective(y) - r.value);
        }
    }
    r.margin = margin;
    return r;
}

OpialReport opial_check(const std::vector<SeqVector>& points, const SeqVector& weak_limit,
                        const std::vector<SeqVector>& challengers, const SpaceSpec& s,
                        std::size_t last_k, double tol) {
    if (points.empty()) throw std::invalid_argument("opial_check: no points");
    const std::size_t k = std::min(last_k, points.size());
    auto liminf_to = [&](const SeqVector& x) {
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t i = points.size() - k; i < points.size(); ++i)
            mn = std::min(mn, distance(points[i], x, s));
        return mn;
    };

    OpialReport r;
    r.tol = tol;
    r.liminf_limit = liminf_to(weak_limit);
    double margin = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const SeqVector& x : challengers) {
        if (x == weak_limit) {  // excluded by the definition
            r.liminf_challengers.push_back(r.liminf_limit);
            r.skipped.push_back(1);
            continue;
        }
        const double li = liminf_to(x);
        r.liminf_challengers.push_back(li);
        r.skipped.push_back(0);
        margin = std::min(margin, li - r.liminf_limit);
        any = true;
    }
    r.margin = any ? margin : 0.0;
    r.pass = !any || margin > tol;
    return r;
}

ZfpScan zfp_scan(const EmpiricalFunctional& e, double tol) {
    ZfpScan r;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        if (std::abs(e.values[i]) > tol) {
            r.zero_on_probes = false;
            r.witness = i;
            r.witness_value = e.values[i];
            return r;
        }
    }
    return r;
}

}  // namespace horolab
