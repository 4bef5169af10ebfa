#include "horolab/functional.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "horolab/errors.hpp"

namespace horolab {

namespace {

double require_finite(double d, const char* what) {
    if (std::isinf(d)) throw DivergentSeries(what);
    return d;
}

}  // namespace

Functional Functional::lp_form(double p, SeqVector z, double c) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("lp_form requires 1 < p < infinity");
    if (!z.tail_is_zero()) throw std::invalid_argument("lp_form: z must lie in lp (zero tail)");
    const double zn = norm(z, SpaceSpec::lp(p));
    if (c < zn - 1e-12) throw std::invalid_argument("lp_form requires c >= ||z||_p");
    return Functional(LpFormFn{p, std::move(z), c, zn});
}

Functional Functional::l1_form(std::vector<L1Entry> entries, L1Tail tail) {
    for (const L1Entry& e : entries)
        if (e.in_I && e.value != 1.0 && e.value != -1.0)
            throw std::invalid_argument("l1_form: signs on I must be -1 or +1");
    return Functional(L1FormFn{std::move(entries), tail});
}

Functional Functional::linear(SeqVector z, SpaceSpec space) {
    switch (space.kind()) {
        case SpaceSpec::Kind::Lp:
            if (space.p() == 2.0) {
                if (norm(z, space) > 1.0 + 1e-12)
                    throw std::invalid_argument("linear functional on l2 requires ||z||_2 <= 1");
            } else if (space.p() == 1.0) {
                for (double c : z.coeffs())
                    if (c != 1.0 && c != -1.0)
                        throw std::invalid_argument(
                            "linear metric functionals on l1 have coordinates in {-1,+1}");
                if (z.tail() != 1.0 && z.tail() != -1.0)
                    throw std::invalid_argument(
                        "linear metric functionals on l1 have coordinates in {-1,+1}");
            }
            break;
        case SpaceSpec::Kind::C0:
        case SpaceSpec::Kind::LInfty:
            // no enumeration of the dual; evaluation against an explicit l1
            // vector only
            if (!z.tail_is_zero())
                throw std::invalid_argument("linear functional on c0/linfty needs z in l1");
            break;
        case SpaceSpec::Kind::DirectSum:
            throw std::invalid_argument("linear functional: use sum_functional on direct sums");
    }
    return Functional(LinearFn{std::move(z), std::move(space)});
}

Functional Functional::busemann_l1_plane(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("busemann_l1_plane requires alpha in (0,1]");
    return Functional(BusemannL1PlaneFn{alpha});
}

Functional Functional::shift_l1() { return Functional(ShiftL1Fn{}); }
Functional Functional::shift_c0() { return Functional(ShiftC0Fn{}); }

Functional Functional::hn(int N) {
    if (N < 1) throw std::invalid_argument("hn requires N >= 1");
    return Functional(HNFn{N});
}

Functional Functional::empirical(std::vector<SeqVector> probes, std::vector<double> values,
                                 std::string source) {
    if (probes.size() != values.size())
        throw std::invalid_argument("empirical: probe/value size mismatch");
    return Functional(EmpiricalFn{std::move(probes), std::move(values), std::move(source)});
}

Functional internal(const SeqVector& w, const SpaceSpec& space, const SeqVector& base) {
    const double d = distance(base, w, space);
    if (std::isinf(d))
        throw std::invalid_argument("internal functional: base point infinitely far from w");
    return Functional(InternalFn{w, base, space, d});
}

Functional sum_functional(const Functional& hA, const Functional& hB, double sum_p) {
    return Functional(SumFn{std::make_shared<Functional>(hA), std::make_shared<Functional>(hB),
                            sum_p == 1.0});
}

double pair_internal_value(const DirectSumPoint& w, const SpaceSpec& dsum,
                           const DirectSumPoint& base, const DirectSumPoint& x) {
    return dsum_distance(x, w, dsum) - dsum_distance(base, w, dsum);
}

namespace {

struct EvalVisitor {
    const SeqVector& x;

    double operator()(const InternalFn& f) const {
        return require_finite(distance(x, f.w, f.space), "internal functional at infinite point") -
               f.base_distance;
    }

    double operator()(const LpFormFn& f) const {
        const double t =
            require_finite(distance(x, f.z, SpaceSpec::lp(f.p)), "lp functional needs x in lp");
        double radicand;
        double root;
        if (f.p == 2.0) {
            radicand = t * t + f.c * f.c - f.z_norm * f.z_norm;
            root = std::sqrt(std::max(radicand, 0.0));
        } else {
            radicand = std::pow(t, f.p) + std::pow(f.c, f.p) - std::pow(f.z_norm, f.p);
            root = std::pow(std::max(radicand, 0.0), 1.0 / f.p);
        }
        return root - f.c;
    }

    double operator()(const L1FormFn& f) const {
        if (x.tail() != 0.0)
            throw DivergentSeries("l1 functional diverges on a nonzero constant tail");
        const std::size_t L = std::max(f.entries.size(), x.block_size());
        double s = 0.0;
        for (std::size_t i = 1; i <= L; ++i) {
            const double xi = x.coord(i);
            if (i <= f.entries.size()) {
                const L1Entry& e = f.entries[i - 1];
                s += e.in_I ? e.value * xi : std::abs(xi - e.value) - std::abs(e.value);
            } else {
                switch (f.tail) {
                    case L1Tail::InPlus: s += xi; break;
                    case L1Tail::InMinus: s -= xi; break;
                    case L1Tail::OutZero: s += std::abs(xi); break;
                }
            }
        }
        return s;
    }

    double operator()(const LinearFn& f) const { return dot(x, f.z); }

    double operator()(const BusemannL1PlaneFn& f) const {
        return -x.coord(1) + f.alpha * std::abs(x.coord(2));
    }

    double operator()(const ShiftL1Fn&) const {
        // each tail coordinate contributes |c - 1| - 1, which must vanish
        if (std::abs(x.tail() - 1.0) - 1.0 != 0.0)
            throw DivergentSeries("shift functional on l1 diverges for this tail");
        double s = 0.0;
        for (double c : x.coeffs()) s += std::abs(c - 1.0) - 1.0;
        return s;
    }

    double operator()(const ShiftC0Fn&) const {
        double m = std::abs(x.tail() - 1.0);  // infinitely many tail coordinates
        for (double c : x.coeffs()) m = std::max(m, std::abs(c - 1.0));
        return m - 1.0;
    }

    double operator()(const HNFn& f) const {
        if (x.tail() != 0.0)
            throw DivergentSeries("h^(N) diverges on a nonzero constant tail");
        const std::size_t N = static_cast<std::size_t>(f.N);
        const std::size_t L = std::max(N, x.block_size());
        double s = 0.0;
        for (std::size_t i = 1; i <= L; ++i) {
            const double xi = x.coord(i);
            s += (i <= N) ? std::abs(xi - 1.0) - 1.0 : -xi;
        }
        return s;
    }

    double operator()(const SumFn&) const {
        throw std::invalid_argument("sum functional evaluates on direct-sum points");
    }

    double operator()(const EmpiricalFn& f) const {
        for (std::size_t i = 0; i < f.probes.size(); ++i)
            if (f.probes[i] == x) return f.values[i];
        throw std::invalid_argument("empirical functional: x is not one of its probes");
    }
};

}  // namespace

double Functional::evaluate(const SeqVector& x) const { return std::visit(EvalVisitor{x}, *v_); }

double Functional::evaluate(const DirectSumPoint& x) const {
    const auto* s = std::get_if<SumFn>(v_.get());
    if (!s) throw std::invalid_argument("only sum functionals evaluate on direct-sum points");
    return s->left->evaluate(x.left) + s->right->evaluate(x.right);
}

std::optional<SpaceSpec> Functional::natural_space() const {
    struct V {
        std::optional<SpaceSpec> operator()(const InternalFn& f) const { return f.space; }
        std::optional<SpaceSpec> operator()(const LpFormFn& f) const { return SpaceSpec::lp(f.p); }
        std::optional<SpaceSpec> operator()(const L1FormFn&) const { return SpaceSpec::lp(1.0); }
        std::optional<SpaceSpec> operator()(const LinearFn& f) const { return f.space; }
        std::optional<SpaceSpec> operator()(const BusemannL1PlaneFn&) const {
            return SpaceSpec::lp(1.0);
        }
        std::optional<SpaceSpec> operator()(const ShiftL1Fn&) const { return SpaceSpec::lp(1.0); }
        std::optional<SpaceSpec> operator()(const ShiftC0Fn&) const { return SpaceSpec::c0(); }
        std::optional<SpaceSpec> operator()(const HNFn&) const { return SpaceSpec::lp(1.0); }
        std::optional<SpaceSpec> operator()(const SumFn&) const { return std::nullopt; }
        std::optional<SpaceSpec> operator()(const EmpiricalFn&) const { return std::nullopt; }
    };
    return std::visit(V{}, *v_);
}

std::string Functional::describe() const {
    struct V {
        std::string operator()(const InternalFn& f) const {
            std::ostringstream os;
            os << "internal(w=" << f.w << ", " << f.space.describe() << ")";
            return os.str();
        }
        std::string operator()(const LpFormFn& f) const {
            std::ostringstream os;
            os << "lp_form(p=" << f.p << ", c=" << f.c << ")";
            return os.str();
        }
        std::string operator()(const L1FormFn& f) const {
            return "l1_form(" + std::to_string(f.entries.size()) + " entries)";
        }
        std::string operator()(const LinearFn&) const { return "linear"; }
        std::string operator()(const BusemannL1PlaneFn& f) const {
            return "busemann_l1_plane(alpha=" + std::to_string(f.alpha) + ")";
        }
        std::string operator()(const ShiftL1Fn&) const { return "shift_l1"; }
        std::string operator()(const ShiftC0Fn&) const { return "shift_c0"; }
        std::string operator()(const HNFn& f) const { return "h^(" + std::to_string(f.N) + ")"; }
        std::string operator()(const SumFn& f) const {
            return "sum(" + f.left->describe() + ", " + f.right->describe() + ")";
        }
        std::string operator()(const EmpiricalFn& f) const { return "empirical[" + f.source + "]"; }
    };
    return std::visit(V{}, *v_);
}

BusemannResult busemann_limit(const SeqVector& u, const SeqVector& x, const SpaceSpec& s,
                              const std::vector<double>& t_schedule) {
    if (t_schedule.size() < 3)
        throw std::invalid_argument("busemann_limit: schedule needs at least 3 points");
    for (std::size_t i = 1; i < t_schedule.size(); ++i)
        if (!(t_schedule[i] > t_schedule[i - 1]))
            throw std::invalid_argument("busemann_limit: schedule must be increasing");
    if (std::abs(norm(u, s) - 1.0) > 1e-9)
        throw std::invalid_argument("busemann_limit: u must be a unit vector");

    BusemannResult r;
    for (double t : t_schedule) {
        const double v = distance(x, t * u, s) - t;
        if (!r.samples.empty()) {
            const double inc = v - r.samples.back();
            if (inc > 1e-12) {
                r.monotone = false;
                r.max_increase = std::max(r.max_increase, inc);
            }
        }
        r.samples.push_back(v);
    }
    r.value = r.samples.back();
    return r;
}

}  // namespace horolab
