#include "horolab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "horolab/errors.hpp"
#include "horolab/invariance.hpp"

namespace horolab {

namespace {

// ---------------------------------------------------------------- assertions

json make_assert(const std::string& path, const std::string& op, json value, double tol = 0.0) {
    json a{{"path", path}, {"op", op}, {"value", std::move(value)}};
    if (tol != 0.0) a["tol"] = tol;
    return a;
}

json eval_assertions(const json& results, const json& assertions, bool& all_pass) {
    json out = json::array();
    for (const json& a : assertions) {
        const std::string path = a.at("path").get<std::string>();
        const std::string op = a.value("op", std::string("eq"));
        const double tol = a.value("tol", 0.0);
        json row = a;
        bool pass = false;
        try {
            const json actual = results.at(json::json_pointer(path));
            row["actual"] = actual;
            const json& expect = a.at("value");
            if (op == "eq") {
                if (actual.is_number() && expect.is_number())
                    pass = std::abs(actual.get<double>() - expect.get<double>()) <= tol;
                else
                    pass = (actual == expect);
            } else if (op == "le") {
                pass = actual.get<double>() <= expect.get<double>() + tol;
            } else if (op == "ge") {
                pass = actual.get<double>() >= expect.get<double>() - tol;
            } else {
                throw SchemaError("assertion: unknown op \"" + op + "\"");
            }
        } catch (const json::exception& e) {
            row["error"] = e.what();
        }
        row["pass"] = pass;
        all_pass = all_pass && pass;
        out.push_back(std::move(row));
    }
    return out;
}

ScenarioReport finish(std::string name, const std::string& task, std::uint64_t seed, json results,
                      const json& assertions,
                      std::vector<std::pair<std::string, std::string>> traces = {}) {
    ScenarioReport r;
    r.name = std::move(name);
    bool all_pass = true;
    json checked = eval_assertions(results, assertions, all_pass);
    r.doc = json{{"name", r.name},
                 {"task", task},
                 {"seed", seed},
                 {"results", std::move(results)},
                 {"assertions", std::move(checked)},
                 {"pass", all_pass}};
    r.pass = all_pass;
    r.traces = std::move(traces);
    return r;
}

// ------------------------------------------------------------------- helpers

SeqVector random_vector(std::mt19937_64& rng, std::size_t max_support, double range,
                        bool integer_entries = false) {
    std::uniform_int_distribution<std::size_t> len(1, max_support);
    std::uniform_real_distribution<double> u(-range, range);
    std::uniform_int_distribution<int> ui(-static_cast<int>(range), static_cast<int>(range));
    std::vector<double> c(len(rng));
    for (double& v : c) v = integer_entries ? static_cast<double>(ui(rng)) : u(rng);
    return SeqVector(std::move(c));
}

std::string csv_of_empirical(const EmpiricalFunctional& e) {
    std::ostringstream os;
    os.precision(17);
    e.write_csv(os);
    return os.str();
}

std::string csv_of_translation(const TranslationEstimate& t) {
    std::ostringstream os;
    os.precision(17);
    os << "n,displacement_over_n,norm_over_n,fekete_envelope\n";
    for (std::size_t i = 0; i < t.displacement_over_n.size(); ++i)
        os << (i + 1) << ',' << t.displacement_over_n[i] << ',' << t.norm_over_n[i] << ','
           << t.fekete_envelope[i] << '\n';
    return os.str();
}

std::string csv_of_trace(const AveragingTrace& trace) {
    std::ostringstream os;
    os.precision(17);
    trace.write_csv(os);
    return os.str();
}

// --------------------------------------------------------------- the catalog

struct CatalogContext {
    std::uint64_t seed;
    double tol;  // 0 = per-scenario defaults
    long n;      // 0 = per-scenario defaults
};

using CatalogFn = std::function<ScenarioReport(const CatalogContext&)>;

ScenarioReport run_shift_l1(const CatalogContext& ctx) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l1 = SpaceSpec::lp(1.0);
    const Functional h = Functional::shift_l1();
    const long n = ctx.n > 0 ? ctx.n : 10000;

    const ProbeSet probes = ProbeSet::defaults(T, 50, ctx.seed, /*integer_entries=*/true);
    const DefectReport sub = subinvariance(h, T, probes, 0.0);

    ProbeSet small;
    small.points = {SeqVector::zero(), SeqVector::unit(1), SeqVector::unit(1, 2.0),
                    SeqVector({1.0, -1.0}), SeqVector({0.5, 0.5, 0.5})};
    const EmpiricalFunctional emp = empirical_limit_orbit(T, SeqVector::zero(), n, small, l1, 1e-9);
    const MatchReport match = match_hypothesis(emp, h, 1e-9);
    const TranslationEstimate tr = translation_number(T, SeqVector::zero(), l1, 1000);

    json results{{"subinvariance", to_json(sub)},
                 {"empirical", to_json(emp)},
                 {"match", to_json(match)},
                 {"translation", to_json(tr)}};
    json asserts = json::array({
        make_assert("/subinvariance/max_defect", "eq", -1.0),
        make_assert("/subinvariance/min_defect", "eq", -1.0),
        make_assert("/subinvariance/verdict", "eq", "StrictDecrease"),
        make_assert("/subinvariance/gap", "eq", 1.0),
        make_assert("/match/pass", "eq", true),
        make_assert("/translation/estimate", "eq", 1.0),
        make_assert("/translation/subadditive", "eq", true),
    });
    return finish("shift-l1", "replicate", ctx.seed, std::move(results), asserts,
                  {{"shift-l1_empirical.csv", csv_of_empirical(emp)},
                   {"shift-l1_translation.csv", csv_of_translation(tr)}});
}

ScenarioReport run_shift_l2(const CatalogContext& ctx) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    const long n = ctx.n > 0 ? ctx.n : 1000000;

    ProbeSet probes;  // all within the ||x|| <= 2 ball
    probes.points = {SeqVector::zero(),       SeqVector::unit(1),       SeqVector::unit(1, -1.0),
                     SeqVector::unit(2),      SeqVector::unit(2, -1.0), SeqVector::unit(1, 2.0),
                     SeqVector({1.0, 1.0}),   SeqVector({-1.0, -1.0})};
    const EmpiricalFunctional emp =
        empirical_limit_orbit(T, SeqVector::zero(), n, probes, l2, 1e-5);
    const ZfpScan scan = zfp_scan(emp, 5e-3);
    const MatchReport match = match_hypothesis(emp, Functional::linear(SeqVector::zero(), l2), 5e-3);
    const TranslationEstimate tr = translation_number(T, SeqVector::zero(), l2, 10000);

    json results{{"empirical", to_json(emp)},
                 {"zfp", to_json(scan)},
                 {"match_zero", to_json(match)},
                 {"translation", to_json(tr)}};
    json asserts = json::array({
        make_assert("/empirical/all_converged", "eq", true),
        make_assert("/zfp/zero_on_probes", "eq", true),
        make_assert("/match_zero/pass", "eq", true),
        make_assert("/translation/estimate", "le", 1e-2),
    });
    return finish("shift-l2", "replicate", ctx.seed, std::move(results), asserts,
                  {{"shift-l2_empirical.csv", csv_of_empirical(emp)},
                   {"shift-l2_translation.csv", csv_of_translation(tr)}});
}

ScenarioReport run_shift_c0(const CatalogContext& ctx) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec c0 = SpaceSpec::c0();
    const long n = ctx.n > 0 ? ctx.n : 4096;

    const ProbeSet probes = ProbeSet::defaults(T, 30, ctx.seed);
    const EmpiricalFunctional emp = empirical_limit_orbit(T, SeqVector::zero(), n, probes, c0, 1e-12);
    const MatchReport match = match_hypothesis(emp, Functional::shift_c0(), 1e-12);
    const DefectReport sub = subinvariance(Functional::shift_c0(), T, probes, 0.0);
    const TranslationEstimate tr = translation_number(T, SeqVector::zero(), c0, 1000);

    json results{{"empirical", to_json(emp)},
                 {"match", to_json(match)},
                 {"subinvariance", to_json(sub)},
                 {"translation", to_json(tr)}};
    json asserts = json::array({
        make_assert("/match/pass", "eq", true),
        make_assert("/subinvariance/verdict", "eq", "Subinvariant"),
        make_assert("/subinvariance/max_defect", "eq", 0.0),
        make_assert("/translation/estimate", "le", 1e-3),
    });
    return finish("shift-c0", "replicate", ctx.seed, std::move(results), asserts,
                  {{"shift-c0_empirical.csv", csv_of_empirical(emp)}});
}

ScenarioReport run_shift_linfty(const CatalogContext& ctx) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const SpaceSpec li = SpaceSpec::linfty();
    const SeqVector z = SeqVector::constant(1.0);  // the unique fixed point

    const Functional hz = internal(z, li);
    const FixedPointCheck fp = fixed_point_from_internal(hz, T, 0.0);

    ProbeSet probes = ProbeSet::defaults(T, 30, ctx.seed);
    probes.points.push_back(SeqVector::constant(1.0));
    probes.points.push_back(SeqVector::constant(-2.0));
    probes.points.push_back(SeqVector(std::vector<double>{3.0, 0.0, -1.0}, 0.5));
    const DefectReport sub = subinvariance(hz, T, probes, 0.0);
    const TranslationEstimate tr = translation_number(T, SeqVector::zero(), li, 1000);

    json results{{"fixed_point", to_json(fp)},
                 {"subinvariance", to_json(sub)},
                 {"translation", to_json(tr)}};
    json asserts = json::array({
        make_assert("/fixed_point/fixed", "eq", true),
        make_assert("/fixed_point/residual", "eq", 0.0),
        make_assert("/subinvariance/verdict", "eq", "Subinvariant"),
        make_assert("/subinvariance/max_defect", "eq", 0.0),
        make_assert("/translation/estimate", "le", 1e-3),
    });
    return finish("shift-linfty", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_l2_counterexample(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> len(1, 8);
    std::uniform_real_distribution<double> radius(0.05, 1.0);

    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    int samples = 0;
    double max_inner = -std::numeric_limits<double>::infinity();
    while (samples < 500) {
        std::vector<double> c(len(rng));
        for (double& v : c) v = u(rng);
        SeqVector z(std::move(c));
        const double nz = norm(z, l2);
        if (nz == 0.0) continue;
        z *= radius(rng) / nz;  // inside the unit ball, nonzero
        const L2Counterexample ce = l2_linear_counterexample(z);
        max_inner = std::max(max_inner, ce.inner);
        ++samples;
    }

    bool em_exact = true;
    for (std::size_t m = 2; m <= 6; ++m) {
        const L2Counterexample ce = l2_linear_counterexample(SeqVector::unit(m));
        em_exact = em_exact && (ce.inner == -1.0) && (ce.branch == 2);
    }

    json results{{"samples", samples},
                 {"max_inner", max_inner},
                 {"all_below_half", max_inner <= -0.5 + 1e-12},
                 {"em_branch_exact", em_exact}};
    json asserts = json::array({
        make_assert("/samples", "eq", 500),
        make_assert("/max_inner", "le", -0.5, 1e-12),
        make_assert("/em_branch_exact", "eq", true),
    });
    return finish("l2-counterexample", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_hn_family(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    const MapExpr T = MapExpr::prepend_shift(1.0);

    double max_identity_residual = 0.0;
    double max_defect = -std::numeric_limits<double>::infinity();
    for (int N = 1; N <= 50; ++N) {
        const Functional h = Functional::hn(N);
        for (int k = 0; k < 200; ++k) {
            const SeqVector x = random_vector(rng, 55, 2.0);
            const double decrease = h.evaluate(x) - h.evaluate(T.apply(x));
            const double xn = x.coord(static_cast<std::size_t>(N));
            max_identity_residual =
                std::max(max_identity_residual, std::abs(decrease - (std::abs(xn - 1.0) + xn)));
            max_defect = std::max(max_defect, -decrease);
        }
    }

    json results{{"max_identity_residual", max_identity_residual}, {"max_defect", max_defect}};
    json asserts = json::array({
        make_assert("/max_identity_residual", "le", 1e-12),
        make_assert("/max_defect", "le", -1.0, 1e-12),
    });
    return finish("hN-family", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_tmu_family(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::uniform_real_distribution<double> ub(-2.0, 2.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);

    std::vector<double> d(12), bvec(12);
    for (double& v : d) v = ud(rng);
    for (double& v : bvec) v = ub(rng);
    const MapExpr A = MapExpr::diagonal(SeqVector(std::vector<double>(d)));
    const SeqVector b{std::vector<double>(bvec)};

    FamilySpec F;
    for (double mu : {0.25, 0.5, 0.75})
        F.members.push_back({"Tmu_" + std::to_string(mu), build_tmu(A, b, mu)});

    std::vector<SeqVector> probes;
    for (int k = 0; k < 50; ++k) probes.push_back(random_vector(rng, 12, 2.0));
    const CommutationReport commute = check_commuting(F, probes, l2, 1e-12);

    std::vector<std::pair<SeqVector, SeqVector>> pairs;
    for (int k = 0; k < 1000; ++k)
        pairs.emplace_back(random_vector(rng, 12, 2.0), random_vector(rng, 12, 2.0));
    double ne_max = -std::numeric_limits<double>::infinity();
    for (const FamilyMember& m : F.members)
        ne_max = std::max(ne_max, check_nonexpansive(m.map, l2, pairs, 1e-12).max_defect);

    // closed-form expansion of T_mu T_nu applied to x
    auto expansion = [&](double mu, double nu, const SeqVector& x) {
        const SeqVector Ax = A.apply(x);
        const SeqVector AAxb = A.apply(Ax + b);
        return (1.0 - mu) * (1.0 - nu) * x + (nu - 2.0 * mu * nu + mu) * Ax + (mu * nu) * AAxb +
               (nu - mu * nu + mu) * b;
    };
    double expansion_residual = 0.0;
    for (double mu : {0.25, 0.5, 0.75})
        for (double nu : {0.25, 0.5, 0.75})
            for (const SeqVector& x : probes) {
                const SeqVector lhs = build_tmu(A, b, mu).apply(build_tmu(A, b, nu).apply(x));
                expansion_residual =
                    std::max(expansion_residual, distance(lhs, expansion(mu, nu, x), l2));
            }

    // nested averaging bound audit for {T_1/4, T_3/4}
    FamilySpec pair_family;
    pair_family.members = {F.members[0], F.members[2]};
    const SeqVector w = random_vector(rng, 12, 2.0);
    const long n_max = ctx.n > 0 ? ctx.n : 4096;
    const AveragingTrace trace = nested_average(pair_family, w, n_max, l2);
    bool bound_ok = true;
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trace.schedule.size(); ++i)
        for (std::size_t m = 0; m < pair_family.members.size(); ++m) {
            const double excess = trace.defects[i][m] - trace.bound_refs[i][m];
            worst_excess = std::max(worst_excess, excess);
            if (excess > 1e-12) bound_ok = false;
        }

    json results{{"commute", to_json(commute)},
                 {"nonexpansive_max_defect", ne_max},
                 {"expansion_residual", expansion_residual},
                 {"averaging_bound_ok", bound_ok},
                 {"averaging_worst_excess", worst_excess},
                 {"final_defects", trace.defects.back()}};
    json asserts = json::array({
        make_assert("/commute/pass", "eq", true),
        make_assert("/nonexpansive_max_defect", "le", 1e-12),
        make_assert("/expansion_residual", "le", 1e-12),
        make_assert("/averaging_bound_ok", "eq", true),
    });
    return finish("tmu-family", "replicate", ctx.seed, std::move(results), asserts,
                  {{"tmu-family_averaging.csv", csv_of_trace(trace)}});
}

ScenarioReport run_polynomial_family(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);

    std::vector<double> d(10), bvec(10);
    for (double& v : d) v = ud(rng);
    for (double& v : bvec) v = 2.0 * ud(rng);
    const MapExpr A = MapExpr::diagonal(SeqVector(std::vector<double>(d)));
    const SeqVector b{std::vector<double>(bvec)};

    const std::vector<std::vector<double>> qs = {
        {1.0}, {0.5}, {0.25, 0.25}, {1.0, -0.5, 0.25}};
    const FamilySpec F = build_polynomial_family(A, b, qs);

    std::vector<SeqVector> probes;
    for (int k = 0; k < 100; ++k) probes.push_back(random_vector(rng, 10, 2.0));

    // q == 1 forces p(lambda) = lambda, i.e. T x = A x + b, coefficient-exact
    double q1_residual = 0.0;
    for (const SeqVector& x : probes)
        q1_residual = std::max(q1_residual, distance(F.members[0].map.apply(x),
                                                     A.apply(x) + b, l2));

    // constant q == mu reproduces the relaxation map T_mu
    const MapExpr tmu = build_tmu(A, b, 0.5);
    double tmu_residual = 0.0;
    for (const SeqVector& x : probes)
        tmu_residual =
            std::max(tmu_residual, distance(F.members[1].map.apply(x), tmu.apply(x), l2));

    const CommutationReport commute = check_commuting(F, probes, l2, 1e-12);

    json results{{"q1_residual", q1_residual},
                 {"tmu_residual", tmu_residual},
                 {"commute", to_json(commute)}};
    json asserts = json::array({
        make_assert("/q1_residual", "eq", 0.0),
        make_assert("/tmu_residual", "le", 1e-12),
        make_assert("/commute/max_defect", "le", 1e-12),
    });
    return finish("polynomial-family", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_dsum_p1(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    const SpaceSpec A = SpaceSpec::lp(1.0);
    const SpaceSpec B = SpaceSpec::lp(2.0);
    const SpaceSpec X1 = SpaceSpec::direct_sum(A, B, 1.0);

    const SeqVector w = random_vector(rng, 6, 2.0);
    const SeqVector z = random_vector(rng, 6, 2.0);
    const Functional h = sum_functional(internal(w, A), internal(z, B), 1.0);
    const DirectSumPoint wz{w, z};
    const DirectSumPoint origin{SeqVector::zero(), SeqVector::zero()};

    double max_diff = 0.0;
    for (int k = 0; k < 100; ++k) {
        const DirectSumPoint x{random_vector(rng, 6, 2.0), random_vector(rng, 6, 2.0)};
        const double sum_route = h.evaluate(x);
        const double internal_route = pair_internal_value(wz, X1, origin, x);
        max_diff = std::max(max_diff, std::abs(sum_route - internal_route));
    }

    const bool flagged = std::get_if<SumFn>(&h.variant())->valid_as_metric_functional;
    json results{{"max_discrepancy", max_diff}, {"valid_flag", flagged}};
    json asserts = json::array({
        make_assert("/max_discrepancy", "le", 1e-12),
        make_assert("/valid_flag", "eq", true),
    });
    return finish("dsum-p1", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_dsum_pinf_projection(const CatalogContext& ctx) {
    const SpaceSpec A = SpaceSpec::lp(1.0);
    const SpaceSpec B = SpaceSpec::lp(2.0);
    const SpaceSpec Xinf =
        SpaceSpec::direct_sum(A, B, std::numeric_limits<double>::infinity());

    // (a0, b_k) with ||b_k|| growing to 1e4 along the e1 ray in B
    const SeqVector a0({1.0, -1.0, 0.5});
    std::vector<DirectSumPoint> points;
    const int K = 50;
    for (int k = 1; k <= K; ++k)
        points.push_back({a0, SeqVector::unit(1, 1e4 * static_cast<double>(k) / K)});

    std::vector<DirectSumPoint> probes;
    const std::vector<SeqVector> as = {SeqVector::zero(), SeqVector::unit(1),
                                       SeqVector({1.0, 1.0})};
    const std::vector<SeqVector> bs = {SeqVector::zero(),      SeqVector::unit(1),
                                       SeqVector::unit(2),     SeqVector::unit(1, -1.0),
                                       SeqVector({1.0, 2.0}),  SeqVector({-1.0, 0.0, 2.0})};
    for (const SeqVector& a : as)
        for (const SeqVector& b : bs) probes.push_back({a, b});

    const EmpiricalPair emp = empirical_limit_pairs(points, probes, Xinf, 1e-4);
    // the ray b_n = t e1 in l2 is smooth: h^B(b) = -b_1
    const Functional hB = Functional::linear(SeqVector::unit(1, -1.0), B);
    const MatchReport match = match_hypothesis_pairs(
        emp, [&](const DirectSumPoint& x) { return hB.evaluate(x.right); }, 1e-3);

    json results{{"all_converged", emp.all_converged()},
                 {"match", to_json(match)},
                 {"values", emp.values}};
    json asserts = json::array({
        make_assert("/all_converged", "eq", true),
        make_assert("/match/max_discrepancy", "le", 1e-3),
    });
    return finish("dsum-pinf-projection", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_busemann_l1_plane(const CatalogContext& ctx) {
    const SpaceSpec l1 = SpaceSpec::lp(1.0);
    const SeqVector u = SeqVector::unit(1);
    const std::vector<double> schedule = {1.0, 2.0, 3.0, 4.0, 8.0, 16.0};
    const Functional closed = Functional::busemann_l1_plane(1.0);

    bool grid_exact = true;
    bool monotone_all = true;
    std::ostringstream grid_csv;
    grid_csv.precision(17);
    grid_csv << "x1,x2,limit,closed_form\n";
    for (int x1 = -2; x1 <= 2; ++x1)
        for (int x2 = -2; x2 <= 2; ++x2) {
            const SeqVector x({static_cast<double>(x1), static_cast<double>(x2)});
            const BusemannResult r = busemann_limit(u, x, l1, schedule);
            const double want = closed.evaluate(x);
            grid_exact = grid_exact && (r.value == want);
            monotone_all = monotone_all && r.monotone;
            grid_csv << x1 << ',' << x2 << ',' << r.value << ',' << want << '\n';
        }

    // perturbed-ball variant: closed-form evaluation only
    const Functional halfa = Functional::busemann_l1_plane(0.5);
    const double spot = halfa.evaluate(SeqVector({3.0, -2.0}));  // -3 + 0.5*2 = -2

    json results{{"grid_exact", grid_exact},
                 {"monotone_all", monotone_all},
                 {"alpha_half_spot", spot}};
    json asserts = json::array({
        make_assert("/grid_exact", "eq", true),
        make_assert("/monotone_all", "eq", true),
        make_assert("/alpha_half_spot", "eq", -2.0),
    });
    return finish("busemann-l1-plane", "replicate", ctx.seed, std::move(results), asserts,
                  {{"busemann-l1-plane_grid.csv", grid_csv.str()}});
}

ScenarioReport run_ck_constant(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t k = 16;
    const SpaceSpec sup = SpaceSpec::linfty();
    const long n = ctx.n > 0 ? ctx.n : 512;

    const SeqVector ones(std::vector<double>(k, 1.0));
    ProbeSet probes;
    probes.points = {SeqVector::zero(), ones, -1.0 * ones, 2.0 * ones, -2.0 * ones};

    auto random_block = [&](double range) {
        std::vector<double> c(k);
        for (double& v : c) v = range * u(rng);
        return c;
    };

    double max_identity_error = 0.0;
    bool all_converged = true;
    int sequences = 0;
    for (int rep = 0; rep < 50; ++rep) {
        // divergent direction with a clear leading coordinate
        std::vector<double> v;
        while (true) {
            v = random_block(1.0);
            double m1 = 0.0, m2 = 0.0;
            for (double c : v) {
                const double a = std::abs(c);
                if (a > m1) {
                    m2 = m1;
                    m1 = a;
                } else {
                    m2 = std::max(m2, a);
                }
            }
            if (m1 >= 0.2 && m1 - m2 >= 0.05) break;
        }
        const std::vector<double> w = random_block(1.0);

        std::vector<SeqVector> divergent, bounded;
        const std::vector<double> a = random_block(1.0);
        const std::vector<double> jitter = random_block(1.0);
        for (long i = 1; i <= n; ++i) {
            std::vector<double> dv(k), bv(k);
            const double decay = std::pow(0.5, static_cast<double>(i));
            for (std::size_t c = 0; c < k; ++c) {
                dv[c] = static_cast<double>(i) * v[c] + w[c];
                bv[c] = a[c] + decay * jitter[c];
            }
            divergent.push_back(SeqVector(std::move(dv)));
            bounded.push_back(SeqVector(std::move(bv)));
        }

        for (const auto* seq : {&divergent, &bounded}) {
            const EmpiricalFunctional e = empirical_limit(*seq, probes, sup, 1e-9);
            all_converged = all_converged && e.all_converged();
            for (double t : {1.0, 2.0}) {
                const double ht = e.eval(t * ones);
                const double hmt = e.eval(-t * ones);
                max_identity_error =
                    std::max(max_identity_error, std::abs(std::max(ht, hmt) - t));
            }
            ++sequences;
        }
    }

    json results{{"sequences", sequences},
                 {"all_converged", all_converged},
                 {"max_identity_error", max_identity_error}};
    json asserts = json::array({
        make_assert("/sequences", "eq", 100),
        make_assert("/all_converged", "eq", true),
        make_assert("/max_identity_error", "le", 1e-6),
    });
    return finish("ck-constant", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_opial_en(const CatalogContext& ctx) {
    std::vector<SeqVector> points;
    for (std::size_t i = 1; i <= 60; ++i) points.push_back(SeqVector::unit(i));
    const std::vector<SeqVector> challengers = {SeqVector::unit(1), SeqVector::zero(),
                                                SeqVector({0.0, 1.0, 1.0})};

    const OpialReport l2r =
        opial_check(points, SeqVector::zero(), challengers, SpaceSpec::lp(2.0));
    const OpialReport l1r =
        opial_check(points, SeqVector::zero(), challengers, SpaceSpec::lp(1.0));

    json results{{"l2", to_json(l2r)}, {"l1", to_json(l1r)}};
    json asserts = json::array({
        make_assert("/l2/pass", "eq", true),
        make_assert("/l2/margin", "eq", std::sqrt(2.0) - 1.0, 1e-12),
        make_assert("/l1/pass", "eq", true),
        make_assert("/l1/margin", "eq", 1.0),
    });
    return finish("opial-en", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_asymptotic_center(const CatalogContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);

    // weakly escaping bumps around a fixed center a
    const std::size_t m0 = 6;
    std::vector<double> ac(m0);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double& v : ac) v = u(rng);
    const SeqVector a{std::vector<double>(ac)};
    std::vector<SeqVector> escape;
    for (std::size_t j = 1; j <= 40; ++j) escape.push_back(a + SeqVector::unit(m0 + j));
    const CenterReport escape_center = asymptotic_center(escape, l2, m0, 20);
    const double escape_err = distance(escape_center.center, a, l2);

    const OpialReport opial = opial_check(escape, a, {a + SeqVector::unit(1), a - SeqVector::unit(2)},
                                          l2);

    // two alternating points -> midpoint
    const SeqVector p = random_vector(rng, 4, 2.0);
    const SeqVector q = random_vector(rng, 4, 2.0);
    std::vector<SeqVector> alternating;
    for (int i = 0; i < 30; ++i) alternating.push_back(i % 2 ? p : q);
    const CenterReport mid_center = asymptotic_center(alternating, l2, 4, 20);
    const double mid_err = distance(mid_center.center, 0.5 * (p + q), l2);

    // constant sequence -> the point itself
    std::vector<SeqVector> constant(10, p);
    const CenterReport const_center = asymptotic_center(constant, l2, 4, 20);
    const bool constant_exact = const_center.center == p;

    json results{{"escape_error", escape_err},
                 {"escape_margin", escape_center.margin},
                 {"escape_non_unique", escape_center.non_unique},
                 {"opial_margin", opial.margin},
                 {"opial_pass", opial.pass},
                 {"alternating_midpoint_error", mid_err},
                 {"constant_exact", constant_exact}};
    json asserts = json::array({
        make_assert("/escape_error", "le", 1e-6),
        make_assert("/escape_margin", "ge", 0.0),
        make_assert("/opial_pass", "eq", true),
        make_assert("/opial_margin", "ge", std::sqrt(2.0) - 1.0 - 1e-6),
        make_assert("/alternating_midpoint_error", "le", 1e-6),
        make_assert("/constant_exact", "eq", true),
    });
    return finish("asymptotic-center", "replicate", ctx.seed, std::move(results), asserts);
}

ScenarioReport run_ne_n_example(const CatalogContext& ctx) {
    const SpaceSpec c0 = SpaceSpec::c0();

    std::vector<SeqVector> divergent;
    for (std::size_t i = 1; i <= 400; ++i)
        divergent.push_back(SeqVector::unit(i, static_cast<double>(i)));

    const ProbeSet probes = ProbeSet::defaults(std::nullopt, 20, ctx.seed, true);
    const EmpiricalFunctional e = empirical_limit(divergent, probes, c0, 0.0);
    double max_abs = 0.0;
    for (double v : e.values) max_abs = std::max(max_abs, std::abs(v));
    const ZfpScan scan = zfp_scan(e, 0.0);

    // a constant subsequence reproduces the internal functional exactly
    std::vector<SeqVector> constant(10, SeqVector::unit(3, 3.0));
    const EmpiricalFunctional ec = empirical_limit(constant, probes, c0, 0.0);
    const MatchReport match = match_hypothesis(ec, internal(SeqVector::unit(3, 3.0), c0), 0.0);

    json results{{"divergent_max_abs", max_abs},
                 {"divergent_zero_on_probes", scan.zero_on_probes},
                 {"constant_matches_internal", match.pass},
                 {"constant_discrepancy", match.max_discrepancy}};
    json asserts = json::array({
        make_assert("/divergent_max_abs", "eq", 0.0),
        make_assert("/divergent_zero_on_probes", "eq", true),
        make_assert("/constant_matches_internal", "eq", true),
    });
    return finish("ne_n-example", "replicate", ctx.seed, std::move(results), asserts);
}

const std::map<std::string, std::pair<std::uint64_t, CatalogFn>>& catalog() {
    static const std::map<std::string, std::pair<std::uint64_t, CatalogFn>> table = {
        {"shift-l1", {1001, run_shift_l1}},
        {"shift-l2", {1002, run_shift_l2}},
        {"shift-c0", {1003, run_shift_c0}},
        {"shift-linfty", {1004, run_shift_linfty}},
        {"l2-counterexample", {2002, run_l2_counterexample}},
        {"hN-family", {2003, run_hn_family}},
        {"tmu-family", {2004, run_tmu_family}},
        {"polynomial-family", {2005, run_polynomial_family}},
        {"dsum-p1", {2006, run_dsum_p1}},
        {"dsum-pinf-projection", {2007, run_dsum_pinf_projection}},
        {"busemann-l1-plane", {2008, run_busemann_l1_plane}},
        {"ck-constant", {2009, run_ck_constant}},
        {"opial-en", {2010, run_opial_en}},
        {"asymptotic-center", {2011, run_asymptotic_center}},
        {"ne_n-example", {2012, run_ne_n_example}},
    };
    return table;
}

// --------------------------------------------------------- generic scenarios

ProbeSet probes_from_json(const json& doc, const std::optional<MapExpr>& around,
                          std::uint64_t seed) {
    if (!doc.contains("probes"))
        return ProbeSet::defaults(around, 50, seed);
    const json& pj = doc["probes"];
    if (pj.contains("points")) {
        ProbeSet ps;
        for (const json& p : pj["points"]) ps.points.push_back(seq_vector_from_json(p));
        ps.validate();
        return ps;
    }
    return ProbeSet::defaults(around, pj.value("random", 50), seed,
                              pj.value("integer", false));
}

MapExpr first_map(const FamilySpec& F) {
    if (F.members.empty()) throw SchemaError("scenario: family has no members");
    return F.members.front().map;
}

}  // namespace

std::vector<std::string> replicate_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : catalog()) ids.push_back(id);
    return ids;
}

ScenarioReport replicate(const std::string& id, const RunOptions& opts) {
    auto it = catalog().find(id);
    if (it == catalog().end()) throw SchemaError("unknown replicate id \"" + id + "\"");
    CatalogContext ctx;
    ctx.seed = opts.seed.value_or(it->second.first);
    ctx.tol = opts.tol.value_or(0.0);
    ctx.n = opts.n.value_or(0);
    return it->second.second(ctx);
}

ScenarioReport run_scenario(const json& doc, const std::string& name, const RunOptions& opts) {
    if (!doc.is_object()) throw SchemaError("scenario: expected a JSON object");
    const std::string task = doc.contains("task") ? doc["task"].get<std::string>()
                                                  : throw SchemaError("scenario: missing task");
    if (!doc.contains("seed") && !opts.seed)
        throw SchemaError("scenario: a seed is mandatory for reproducibility");
    const std::uint64_t seed = opts.seed.value_or(doc.value("seed", 0ULL));

    if (task == "replicate") {
        if (!doc.contains("id")) throw SchemaError("replicate scenario needs an id");
        return replicate(doc["id"].get<std::string>(), opts);
    }

    const SpaceSpec space = space_from_json(
        doc.contains("space") ? doc["space"] : throw SchemaError("scenario: missing space"));
    const double tol = opts.tol.value_or(doc.value("tol", 1e-9));
    const long n = opts.n.value_or(doc.value("n", 1024L));
    const json assertions = doc.value("assertions", json::array());

    std::optional<FamilySpec> family;
    if (doc.contains("maps")) family = family_from_json(doc["maps"]);
    std::vector<Functional> functionals;
    if (doc.contains("functionals"))
        for (const json& f : doc["functionals"]) functionals.push_back(functional_from_json(f));

    json results;
    std::vector<std::pair<std::string, std::string>> traces;

    if (task == "evaluate") {
        if (functionals.empty()) throw SchemaError("evaluate: needs functionals");
        const ProbeSet probes = probes_from_json(doc, std::nullopt, seed);
        json table = json::array();
        for (const Functional& h : functionals) {
            json row = json::array();
            for (const SeqVector& x : probes.points) row.push_back(h.evaluate(x));
            table.push_back(std::move(row));
        }
        results["table"] = std::move(table);
    } else if (task == "orbit-limit") {
        if (!family) throw SchemaError("orbit-limit: needs maps");
        const MapExpr T = first_map(*family);
        const ProbeSet probes = probes_from_json(doc, T, seed);
        const SeqVector x0 = doc.contains("x0") ? seq_vector_from_json(doc["x0"])
                                                : SeqVector::zero();
        // convergence acceptance defaults to a 1e-6 last-5 spread
        const double conv_tol =
            (doc.contains("tol") || opts.tol) ? tol : 1e-6;
        const EmpiricalFunctional e = empirical_limit_orbit(T, x0, n, probes, space, conv_tol);
        results["empirical"] = to_json(e);
        results["zfp"] = to_json(zfp_scan(e, tol));
        results["lipschitz_violation"] = lipschitz_violation(e, space);
        if (!functionals.empty())
            results["match"] = to_json(match_hypothesis(e, functionals.front(), tol));
        traces.emplace_back(name + "_empirical.csv", csv_of_empirical(e));
    } else if (task == "subinvariance") {
        if (!family || functionals.empty())
            throw SchemaError("subinvariance: needs maps and functionals");
        const MapExpr T = first_map(*family);
        const ProbeSet probes = probes_from_json(doc, T, seed);
        results["subinvariance"] = to_json(subinvariance(functionals.front(), T, probes, tol));
        if (!family->commuting_waived && family->members.size() > 1)
            results["commute"] = to_json(check_commuting(*family, probes.points, space, 1e-9));
    } else if (task == "translation") {
        if (!family) throw SchemaError("translation: needs maps");
        const MapExpr T = first_map(*family);
        const SeqVector y =
            doc.contains("y") ? seq_vector_from_json(doc["y"]) : SeqVector::zero();
        const TranslationEstimate t = translation_number(T, y, space, std::max(n, 8L));
        results["translation"] = to_json(t);
        traces.emplace_back(name + "_translation.csv", csv_of_translation(t));
    } else if (task == "average") {
        if (!family) throw SchemaError("average: needs maps");
        const SeqVector w =
            doc.contains("seed_point") ? seq_vector_from_json(doc["seed_point"]) : SeqVector::zero();
        const AveragingTrace trace = nested_average(*family, w, n, space);
        bool bound_ok = true;
        for (std::size_t i = 0; i < trace.schedule.size(); ++i)
            for (std::size_t m = 0; m < family->members.size(); ++m)
                if (trace.defects[i][m] > trace.bound_refs[i][m] + 1e-12) bound_ok = false;
        results["final_defects"] = trace.defects.back();
        results["bound_respected"] = bound_ok;
        results["defect_decreasing"] =
            json(std::vector<bool>(trace.defect_decreasing.begin(), trace.defect_decreasing.end()));
        traces.emplace_back(name + "_averaging.csv", csv_of_trace(trace));
    } else if (task == "fixed-point") {
        if (!family) throw SchemaError("fixed-point: needs maps");
        const SeqVector w =
            doc.contains("seed_point") ? seq_vector_from_json(doc["seed_point"]) : SeqVector::zero();
        const CommonFixedPointResult r = common_fixed_point(*family, w, space, tol, n);
        results["fixed_point"] = to_json(r);
        traces.emplace_back(name + "_averaging.csv", csv_of_trace(r.trace));
    } else if (task == "ump") {
        if (!family) throw SchemaError("ump: needs maps");
        const MapExpr T = first_map(*family);
        const SeqVector x0 =
            doc.contains("x0") ? seq_vector_from_json(doc["x0"]) : SeqVector::zero();
        results["ump"] = to_json(ump_fixed_point(T, x0, std::max(n, 8L), space, tol));
    } else {
        throw SchemaError("scenario: unknown task \"" + task + "\"");
    }

    ScenarioReport r = finish(name, task, seed, std::move(results), assertions, std::move(traces));
    return r;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& body) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << body;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_report(const ScenarioReport& r, const RunOptions& opts) {
    std::filesystem::create_directories(opts.out_dir);
    atomic_write(opts.out_dir / (r.name + "-report.json"), r.doc.dump(2) + "\n");
    for (const auto& [file, body] : r.traces) atomic_write(opts.out_dir / file, body);
}

namespace {

int drive(const std::vector<std::function<ScenarioReport()>>& jobs, const RunOptions& opts) {
    int exit_code = 0;
    auto account = [&](const ScenarioReport& r) {
        write_report(r, opts);
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "\n";
        if (!r.pass) exit_code = std::max(exit_code, 1);
    };
    try {
        if (opts.parallel) {
            std::vector<std::future<ScenarioReport>> futures;
            futures.reserve(jobs.size());
            for (const auto& j : jobs) futures.push_back(std::async(std::launch::async, j));
            for (auto& f : futures) account(f.get());
        } else {
            for (const auto& j : jobs) account(j());
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace

int run_files(const std::vector<std::filesystem::path>& files, const RunOptions& opts) {
    std::vector<std::function<ScenarioReport()>> jobs;
    for (const auto& file : files) {
        jobs.push_back([file, &opts]() {
            std::ifstream is(file);
            if (!is) throw SchemaError("cannot open " + file.string());
            json doc;
            try {
                doc = json::parse(is);
            } catch (const json::parse_error& e) {
                throw SchemaError("malformed JSON in " + file.string() + ": " + e.what());
            }
            return run_scenario(doc, file.stem().string(), opts);
        });
    }
    return drive(jobs, opts);
}

int run_replicates(const std::vector<std::string>& ids, const RunOptions& opts) {
    std::vector<std::string> expanded;
    for (const std::string& id : ids) {
        if (id == "all") {
            const auto all = replicate_ids();
            expanded.insert(expanded.end(), all.begin(), all.end());
        } else {
            expanded.push_back(id);
        }
    }
    std::vector<std::function<ScenarioReport()>> jobs;
    for (const std::string& id : expanded)
        jobs.push_back([id, &opts]() { return replicate(id, opts); });
    return drive(jobs, opts);
}

}  // namespace horolab
