#include "horolab/json_io.hpp"

#include <cmath>
#include <limits>

#include "horolab/errors.hpp"

namespace horolab {

namespace {

double require_number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string(what) + ": expected a number");
    return j.get<double>();
}

const json& require_field(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(std::string(what) + ": missing field \"" + key + "\"");
    return *it;
}

}  // namespace

json to_json(const SeqVector& v) {
    json coeffs = json::array();
    for (double c : v.coeffs()) coeffs.push_back(c);
    json j;
    j["coeffs"] = std::move(coeffs);
    j["tail"] = v.tail_is_zero() ? json(nullptr) : json(v.tail());
    return j;
}

SeqVector seq_vector_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("SeqVector: expected an object");
    std::vector<double> coeffs;
    for (const json& c : require_field(j, "coeffs", "SeqVector"))
        coeffs.push_back(require_number(c, "SeqVector.coeffs"));
    double tail = 0.0;
    if (auto it = j.find("tail"); it != j.end() && !it->is_null())
        tail = require_number(*it, "SeqVector.tail");
    return SeqVector(std::move(coeffs), tail);
}

json to_json(const SpaceSpec& s) {
    json j;
    switch (s.kind()) {
        case SpaceSpec::Kind::Lp:
            j["kind"] = "lp";
            j["p"] = s.p();
            break;
        case SpaceSpec::Kind::C0:
            j["kind"] = "c0";
            break;
        case SpaceSpec::Kind::LInfty:
            j["kind"] = "linfty";
            break;
        case SpaceSpec::Kind::DirectSum:
            j["kind"] = "dsum";
            j["p"] = std::isinf(s.p()) ? json("inf") : json(s.p());
            j["left"] = to_json(s.left());
            j["right"] = to_json(s.right());
            break;
    }
    return j;
}

SpaceSpec space_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("SpaceSpec: expected an object");
    const std::string kind = require_field(j, "kind", "SpaceSpec").get<std::string>();
    if (kind == "lp") return SpaceSpec::lp(require_number(require_field(j, "p", "lp"), "lp.p"));
    if (kind == "c0") return SpaceSpec::c0();
    if (kind == "linfty") return SpaceSpec::linfty();
    if (kind == "dsum") {
        const json& pj = require_field(j, "p", "dsum");
        const double p = pj.is_string() && pj.get<std::string>() == "inf"
                             ? std::numeric_limits<double>::infinity()
                             : require_number(pj, "dsum.p");
        return SpaceSpec::direct_sum(space_from_json(require_field(j, "left", "dsum")),
                                     space_from_json(require_field(j, "right", "dsum")), p);
    }
    throw SchemaError("SpaceSpec: unknown kind \"" + kind + "\"");
}

json to_json(const MapExpr& m) {
    struct V {
        json operator()(const PrependShiftNode& n) const {
            return {{"op", "prepend_shift"}, {"value", n.value}};
        }
        json operator()(const ForwardShiftNode&) const { return {{"op", "forward_shift"}}; }
        json operator()(const BackwardShiftNode&) const { return {{"op", "backward_shift"}}; }
        json operator()(const DiagonalNode& n) const {
            return {{"op", "diagonal"}, {"weights", to_json(n.weights)}};
        }
        json operator()(const DenseBlockNode& n) const {
            json rows = json::array();
            for (std::size_t i = 0; i < n.matrix.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < n.matrix.size(); ++j) row.push_back(n.matrix(i, j));
                rows.push_back(std::move(row));
            }
            return {{"op", "dense_block"}, {"matrix", std::move(rows)}};
        }
        json operator()(const AffineNode& n) const {
            return {{"op", "affine"},
                    {"linear", to_json(n.linear)},
                    {"offset", to_json(n.offset)}};
        }
        json operator()(const ConvexNode& n) const {
            return {{"op", "convex"}, {"t", n.t}, {"f", to_json(n.f)}, {"g", to_json(n.g)}};
        }
        json operator()(const ComposeNode& n) const {
            return {{"op", "compose"}, {"f", to_json(n.f)}, {"g", to_json(n.g)}};
        }
        json operator()(const TranslateNode& n) const {
            return {{"op", "translate"}, {"offset", to_json(n.offset)}};
        }
    };
    return std::visit(V{}, static_cast<const MapNode::variant&>(m.node()));
}

MapExpr map_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("MapExpr: expected an object");
    const std::string op = require_field(j, "op", "MapExpr").get<std::string>();
    if (op == "prepend_shift")
        return MapExpr::prepend_shift(
            require_number(require_field(j, "value", op.c_str()), "value"));
    if (op == "forward_shift") return MapExpr::forward_shift();
    if (op == "backward_shift") return MapExpr::backward_shift();
    if (op == "diagonal")
        return MapExpr::diagonal(seq_vector_from_json(require_field(j, "weights", op.c_str())));
    if (op == "dense_block") {
        std::vector<std::vector<double>> rows;
        for (const json& row : require_field(j, "matrix", op.c_str())) {
            std::vector<double> r;
            for (const json& c : row) r.push_back(require_number(c, "matrix entry"));
            rows.push_back(std::move(r));
        }
        return MapExpr::dense_block(Matrix::from_rows(rows));
    }
    if (op == "affine")
        return MapExpr::affine(map_from_json(require_field(j, "linear", op.c_str())),
                               seq_vector_from_json(require_field(j, "offset", op.c_str())));
    if (op == "convex")
        return MapExpr::convex(require_number(require_field(j, "t", op.c_str()), "t"),
                               map_from_json(require_field(j, "f", op.c_str())),
                               map_from_json(require_field(j, "g", op.c_str())));
    if (op == "compose")
        return MapExpr::compose(map_from_json(require_field(j, "f", op.c_str())),
                                map_from_json(require_field(j, "g", op.c_str())));
    if (op == "translate")
        return MapExpr::translate(seq_vector_from_json(require_field(j, "offset", op.c_str())));
    if (op == "identity") return MapExpr::identity();
    throw SchemaError("MapExpr: unknown op \"" + op + "\"");
}

json to_json(const FamilySpec& f) {
    json members = json::array();
    for (const FamilyMember& m : f.members)
        members.push_back({{"label", m.label}, {"map", to_json(m.map)}});
    return {{"members", std::move(members)}, {"commuting_waived", f.commuting_waived}};
}

FamilySpec family_from_json(const json& j) {
    FamilySpec f;
    const json& members = require_field(j, "members", "FamilySpec");
    if (!members.is_array() || members.empty())
        throw SchemaError("FamilySpec: members must be a nonempty array");
    for (const json& m : members)
        f.members.push_back({require_field(m, "label", "member").get<std::string>(),
                             map_from_json(require_field(m, "map", "member"))});
    f.commuting_waived = j.value("commuting_waived", false);
    return f;
}

json to_json(const Functional& f) {
    struct V {
        json operator()(const InternalFn& fn) const {
            return {{"variant", "internal"},
                    {"w", to_json(fn.w)},
                    {"base", to_json(fn.base)},
                    {"space", to_json(fn.space)}};
        }
        json operator()(const LpFormFn& fn) const {
            return {{"variant", "lp_form"}, {"p", fn.p}, {"z", to_json(fn.z)}, {"c", fn.c}};
        }
        json operator()(const L1FormFn& fn) const {
            json entries = json::array();
            for (const L1Entry& e : fn.entries) {
                if (e.in_I)
                    entries.push_back({{"eps", e.value}});
                else
                    entries.push_back({{"z", e.value}});
            }
            const char* tail = fn.tail == L1Tail::InPlus    ? "in_plus"
                               : fn.tail == L1Tail::InMinus ? "in_minus"
                                                            : "out_zero";
            return {{"variant", "l1_form"}, {"entries", std::move(entries)}, {"tail", tail}};
        }
        json operator()(const LinearFn& fn) const {
            return {{"variant", "linear"}, {"z", to_json(fn.z)}, {"space", to_json(fn.space)}};
        }
        json operator()(const BusemannL1PlaneFn& fn) const {
            return {{"variant", "busemann_l1_plane"}, {"alpha", fn.alpha}};
        }
        json operator()(const ShiftL1Fn&) const { return {{"variant", "shift_l1"}}; }
        json operator()(const ShiftC0Fn&) const { return {{"variant", "shift_c0"}}; }
        json operator()(const HNFn& fn) const { return {{"variant", "hn"}, {"N", fn.N}}; }
        json operator()(const SumFn& fn) const {
            return {{"variant", "sum"},
                    {"left", to_json(*fn.left)},
                    {"right", to_json(*fn.right)},
                    {"valid_as_metric_functional", fn.valid_as_metric_functional}};
        }
        json operator()(const EmpiricalFn& fn) const {
            json probes = json::array();
            for (const SeqVector& p : fn.probes) probes.push_back(to_json(p));
            return {{"variant", "empirical"},
                    {"probes", std::move(probes)},
                    {"values", fn.values},
                    {"source", fn.source}};
        }
    };
    return std::visit(V{}, f.variant());
}

Functional functional_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("Functional: expected an object");
    const std::string v = require_field(j, "variant", "Functional").get<std::string>();
    if (v == "internal") {
        SeqVector base = j.contains("base") ? seq_vector_from_json(j["base"]) : SeqVector::zero();
        return internal(seq_vector_from_json(require_field(j, "w", "internal")),
                        space_from_json(require_field(j, "space", "internal")), base);
    }
    if (v == "lp_form")
        return Functional::lp_form(require_number(require_field(j, "p", "lp_form"), "p"),
                                   seq_vector_from_json(require_field(j, "z", "lp_form")),
                                   require_number(require_field(j, "c", "lp_form"), "c"));
    if (v == "l1_form") {
        std::vector<L1Entry> entries;
        for (const json& e : require_field(j, "entries", "l1_form")) {
            if (e.contains("eps"))
                entries.push_back({true, require_number(e["eps"], "eps")});
            else if (e.contains("z"))
                entries.push_back({false, require_number(e["z"], "z")});
            else
                throw SchemaError("l1_form entry needs \"eps\" or \"z\"");
        }
        const std::string tail = require_field(j, "tail", "l1_form").get<std::string>();
        L1Tail rule;
        if (tail == "in_plus")
            rule = L1Tail::InPlus;
        else if (tail == "in_minus")
            rule = L1Tail::InMinus;
        else if (tail == "out_zero")
            rule = L1Tail::OutZero;
        else
            throw SchemaError("l1_form: unknown tail rule \"" + tail + "\"");
        return Functional::l1_form(std::move(entries), rule);
    }
    if (v == "linear")
        return Functional::linear(seq_vector_from_json(require_field(j, "z", "linear")),
                                  space_from_json(require_field(j, "space", "linear")));
    if (v == "busemann_l1_plane")
        return Functional::busemann_l1_plane(
            require_number(require_field(j, "alpha", "busemann_l1_plane"), "alpha"));
    if (v == "shift_l1") return Functional::shift_l1();
    if (v == "shift_c0") return Functional::shift_c0();
    if (v == "hn") return Functional::hn(require_field(j, "N", "hn").get<int>());
    if (v == "sum")
        return sum_functional(functional_from_json(require_field(j, "left", "sum")),
                              functional_from_json(require_field(j, "right", "sum")),
                              j.value("valid_as_metric_functional", true) ? 1.0 : 2.0);
    if (v == "empirical") {
        std::vector<SeqVector> probes;
        for (const json& p : require_field(j, "probes", "empirical"))
            probes.push_back(seq_vector_from_json(p));
        std::vector<double> values = require_field(j, "values", "empirical").get<std::vector<double>>();
        return Functional::empirical(std::move(probes), std::move(values),
                                     j.value("source", std::string("json")));
    }
    throw SchemaError("Functional: unknown variant \"" + v + "\"");
}

json to_json(const DefectReport& r) {
    return {{"defects", r.defects},
            {"max_defect", r.max_defect},
            {"min_defect", r.min_defect},
            {"witness", r.witness},
            {"verdict", DefectReport::verdict_name(r.verdict)},
            {"gap", r.gap},
            {"tol", r.tol}};
}

json to_json(const CommutationReport& r) {
    json pairs = json::array();
    for (const PairDefect& p : r.pairs)
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"max_defect", p.max_defect},
                         {"witness", to_json(p.witness)}});
    return {{"pairs", std::move(pairs)},
            {"max_defect", r.max_defect},
            {"tol", r.tol},
            {"pass", r.pass}};
}

json to_json(const NonexpansiveReport& r) {
    return {{"max_defect", r.max_defect},
            {"witness", r.witness},
            {"structural_bound", r.structural.value},
            {"structural_certified", r.structural.certified},
            {"tol", r.tol},
            {"pass", r.pass}};
}

json to_json(const MatchReport& r) {
    return {{"max_discrepancy", r.max_discrepancy},
            {"witness", r.witness},
            {"tol", r.tol},
            {"pass", r.pass}};
}

json to_json(const EmpiricalFunctional& e) {
    json probes = json::array();
    for (const SeqVector& p : e.probes) probes.push_back(to_json(p));
    return {{"probes", std::move(probes)},
            {"values", e.values},
            {"spreads", e.spreads},
            {"converged", json(std::vector<bool>(e.converged.begin(), e.converged.end()))},
            {"all_converged", e.all_converged()},
            {"source", e.source},
            {"tol", e.tol},
            {"n_final", e.n_final}};
}

json to_json(const TranslationEstimate& t) {
    return {{"estimate", t.estimate},
            {"samples", t.displacement_over_n.size()},
            {"final_norm_over_n", t.norm_over_n.empty() ? 0.0 : t.norm_over_n.back()},
            {"subadditive", t.subadditive},
            {"max_violation", t.max_violation}};
}

json to_json(const CenterReport& c) {
    return {{"center", to_json(c.center)},
            {"value", c.value},
            {"margin", c.margin},
            {"non_unique", c.non_unique},
            {"restart_gap", c.restart_gap}};
}

json to_json(const OpialReport& o) {
    return {{"liminf_limit", o.liminf_limit},
            {"liminf_challengers", o.liminf_challengers},
            {"skipped", json(std::vector<bool>(o.skipped.begin(), o.skipped.end()))},
            {"margin", o.margin},
            {"pass", o.pass},
            {"tol", o.tol}};
}

json to_json(const ZfpScan& z) {
    json j{{"zero_on_probes", z.zero_on_probes}};
    if (!z.zero_on_probes) {
        j["witness"] = z.witness;
        j["witness_value"] = z.witness_value;
    }
    return j;
}

json to_json(const FixedPointCheck& f) {
    return {{"fixed", f.fixed}, {"w", to_json(f.w)}, {"residual", f.residual}};
}

json to_json(const L2Counterexample& c) {
    return {{"x", to_json(c.x)}, {"inner", c.inner}, {"branch", c.branch}};
}

json to_json(const BusemannResult& b) {
    return {{"value", b.value},
            {"samples", b.samples},
            {"monotone", b.monotone},
            {"max_increase", b.max_increase}};
}

json to_json(const CommonFixedPointResult& r) {
    return {{"found", r.found},
            {"z", to_json(r.z)},
            {"residual", r.residual},
            {"polish_sweeps", r.polish_sweeps},
            {"averaging_schedule", r.trace.schedule}};
}

json to_json(const UmpResult& r) {
    return {{"found", r.found},
            {"center", to_json(r.center)},
            {"residual", r.residual},
            {"diagnostic", r.diagnostic},
            {"center_margin", r.center_report.margin},
            {"functional", to_json(r.functional)}};
}

}  // namespace horolab
