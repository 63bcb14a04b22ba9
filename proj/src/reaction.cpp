#include "crowdflow/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace crowdflow {

double GrowthBound::at(double t) const {
    if (times.empty()) return values.front();
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

double GrowthBound::integral(double t) const {
    if (t <= 0.0) return 0.0;
    if (times.empty()) return values.front() * t;
    // Trapezoid over the breakpoints in (0, t); exact for piecewise linear R.
    std::vector<double> nodes{0.0};
    for (double s : times)
        if (s > 0.0 && s < t) nodes.push_back(s);
    nodes.push_back(t);
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        sum += 0.5 * (at(nodes[i - 1]) + at(nodes[i])) * (nodes[i] - nodes[i - 1]);
    return sum;
}

double GrowthBound::max() const { return *std::max_element(values.begin(), values.end()); }

double AbsorptionParams::max_alpha() const { return *std::max_element(alpha.begin(), alpha.end()); }
double AbsorptionParams::max_u_eq() const { return *std::max_element(u_eq.begin(), u_eq.end()); }

ReactionTerm::ReactionTerm(std::string id, Rate rate, double lipschitz, GrowthBound growth)
    : id_(std::move(id)), rate_(std::move(rate)), lipschitz_(lipschitz), growth_(std::move(growth)) {
    if (!(lipschitz_ >= 0.0)) throw ConfigError("reaction '" + id_ + "': Lipschitz constant must be >= 0");
    if (growth_.values.empty()) throw ConfigError("reaction '" + id_ + "': empty growth bound");
    if (!growth_.times.empty() && growth_.times.size() != growth_.values.size())
        throw ConfigError("reaction '" + id_ + "': growth table size mismatch");
    for (double r : growth_.values)
        if (!(r >= 0.0)) throw ConfigError("reaction '" + id_ + "': growth bound R(t) must be >= 0");
}

ReactionTerm ReactionTerm::zero() {
    return {"zero", [](double, std::size_t, double) { return 0.0; }, 0.0, GrowthBound::constant(0.0)};
}

ReactionTerm ReactionTerm::constant(double c) {
    return {"constant", [c](double, std::size_t, double) { return c; }, 0.0, GrowthBound::constant(0.0)};
}

ReactionTerm ReactionTerm::absorption(double alpha, double u_eq) {
    return absorption(AbsorptionParams{{alpha}, {u_eq}});
}

ReactionTerm ReactionTerm::absorption(AbsorptionParams params) {
    for (double a : params.alpha)
        if (!(a >= 0.0)) throw ConfigError("absorption: alpha must be >= 0");
    for (double e : params.u_eq)
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("absorption: u_eq must lie in [0, 1]");
    auto shared = std::make_shared<const AbsorptionParams>(std::move(params));
    // |dg/dr| = alpha |u_eq - 2r| <= alpha (2 + u_eq) on [-1, 1]; the maximum
    // slope is attained at r = -1, so R shares the value.
    double bound = 0.0;
    const std::size_t n = std::max(shared->alpha.size(), shared->u_eq.size());
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, shared->alpha_at(k) * (2.0 + shared->u_eq_at(k)));
    ReactionTerm term(
        "absorption",
        [p = shared](double, std::size_t cell, double r) {
            const double a = p->alpha_at(cell);
            return -a * r * (r - p->u_eq_at(cell));
        },
        bound, GrowthBound::constant(bound));
    term.absorption_ = std::move(shared);
    return term;
}

ReactionTerm ReactionTerm::tabulated(std::vector<double> r, std::vector<double> g) {
    if (r.size() < 2 || r.size() != g.size()) throw ConfigError("tabulated reaction needs >= 2 matching knots");
    double lip = 0.0;
    double growth = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] > r[i - 1])) throw ConfigError("tabulated reaction knots must be strictly increasing");
        const double slope = (g[i] - g[i - 1]) / (r[i] - r[i - 1]);
        lip = std::max(lip, std::abs(slope));
        growth = std::max(growth, slope);
    }
    auto rate = [r = std::move(r), g = std::move(g)](double, std::size_t, double x) {
        if (x <= r.front()) return g.front();
        if (x >= r.back()) return g.back();
        const auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - r.begin());
        const double w = (x - r[i - 1]) / (r[i] - r[i - 1]);
        return (1.0 - w) * g[i - 1] + w * g[i];
    };
    return {"tabulated", std::move(rate), lip, GrowthBound::constant(growth)};
}

ReactionTerm ReactionTerm::two_phase(const ReactionTerm& positive, const ReactionTerm& negative) {
    auto rate = [pos = positive.rate_, neg = negative.rate_](double t, std::size_t cell, double r) {
        return pos(t, cell, std::max(r, 0.0)) + neg(t, cell, std::max(-r, 0.0));
    };
    // Only one part varies at a time. On the negative branch the slope in r is
    // -neg', bounded by L_neg.
    const double lip = std::max(positive.lipschitz(), negative.lipschitz());
    const double growth = std::max(positive.growth().max(), negative.lipschitz());
    return {"two_phase", std::move(rate), lip, GrowthBound::constant(growth)};
}

ReactionTerm ReactionTerm::sum(const ReactionTerm& a, const ReactionTerm& b) {
    auto rate = [fa = a.rate_, fb = b.rate_](double t, std::size_t cell, double r) {
        return fa(t, cell, r) + fb(t, cell, r);
    };
    GrowthBound growth = GrowthBound::constant(a.growth().max() + b.growth().max());
    return {"sum", std::move(rate), a.lipschitz() + b.lipschitz(), std::move(growth)};
}

ReactionTerm ReactionTerm::with_lipschitz(double lipschitz) const {
    ReactionTerm copy = *this;
    if (!(lipschitz >= 0.0)) throw ConfigError("reaction '" + id_ + "': Lipschitz constant must be >= 0");
    copy.lipschitz_ = lipschitz;
    return copy;
}

ReactionTerm ReactionTerm::with_growth(GrowthBound growth) const {
    ReactionTerm copy(id_, rate_, lipschitz_, std::move(growth));
    copy.absorption_ = absorption_;
    return copy;
}

double evaluate_reaction(const ReactionTerm& term, double t, std::size_t cell, double u, double slack) {
    if (!(std::abs(u) <= 1.0 + slack)) {
        std::ostringstream os;
        os << "reaction '" << term.id() << "' evaluated at u=" << u << " outside [-1, 1] (cell " << cell
           << ", t=" << t << ")";
        throw DomainError(os.str());
    }
    return term(t, cell, u);
}

std::vector<double> default_r_samples() {
    std::vector<double> r(33);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -1.0 + 2.0 * static_cast<double>(i) / 32.0;
    return r;
}

ValidationReport validate_assumptions(const ReactionTerm& term, const Grid& grid, const std::vector<double>& t_samples,
                                      const std::vector<double>& r_samples, double tol) {
    ValidationReport report;
    report.declared_lipschitz = term.lipschitz();
    std::vector<double> g(r_samples.size());
    double worst_lip_excess = -std::numeric_limits<double>::infinity();
    double worst_growth = -std::numeric_limits<double>::infinity();
    double worst_explicit = 0.0;

    for (double t : t_samples) {
        const double R = term.growth().at(t);
        for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
            for (std::size_t i = 0; i < r_samples.size(); ++i) g[i] = term(t, cell, r_samples[i]);

            const double g_minus_one = term(t, cell, -1.0);
            const double g_plus_one = term(t, cell, 1.0);
            if (!std::isfinite(g_minus_one) || !std::isfinite(g_plus_one)) report.g1_ok = false;
            report.max_positive_at_minus_one = std::max(report.max_positive_at_minus_one, std::max(g_minus_one, 0.0));
            report.max_negative_at_plus_one = std::max(report.max_negative_at_plus_one, std::max(-g_plus_one, 0.0));

            for (std::size_t i = 0; i < r_samples.size(); ++i) {
                if (!std::isfinite(g[i])) report.g1_ok = false;
                const double r = r_samples[i];
                const double lower = -std::max(-g_plus_one, 0.0) - R * (1.0 - r);
                const double upper = std::max(g_minus_one, 0.0) + R * (1.0 + r);
                worst_explicit = std::max({worst_explicit, lower - g[i], g[i] - upper});

                for (std::size_t j = i + 1; j < r_samples.size(); ++j) {
                    const double dr = r_samples[j] - r_samples[i];
                    if (!(dr > 0.0)) continue;
                    const double dg = g[j] - g[i];
                    const double slope = std::abs(dg) / dr;
                    report.sampled_lipschitz = std::max(report.sampled_lipschitz, slope);
                    const double lip_excess = std::abs(dg) - term.lipschitz() * dr;
                    if (lip_excess > worst_lip_excess) {
                        worst_lip_excess = lip_excess;
                        if (lip_excess > tol)
                            report.lipschitz_witness = ValidationReport::Witness{t, cell, r_samples[i], r_samples[j]};
                    }
                    const double growth_excess = dg - R * dr;
                    if (growth_excess > worst_growth) {
                        worst_growth = growth_excess;
                        if (growth_excess > tol)
                            report.growth_witness = ValidationReport::Witness{t, cell, r_samples[i], r_samples[j]};
                    }
                }
            }
        }
    }
    report.lipschitz_ok = !(worst_lip_excess > tol);
    report.growth_violation = std::max(worst_growth, 0.0);
    report.growth_ok = !(worst_growth > tol);
    report.explicit_bound_violation = worst_explicit;
    report.explicit_bound_ok = !(worst_explicit > tol);
    return report;
}

ConditionReport check_congestion_free(const ReactionTerm& term, const ScalarField& divergence,
                                      const std::vector<double>& t_samples, double tol) {
    ConditionReport report;
    const double inf = std::numeric_limits<double>::infinity();
    report.g3.margin = report.g4.margin = report.g5.margin = inf;
    const AbsorptionParams* abs = term.absorption_params();
    if (abs) report.compressibility = ConditionCheck{inf, 0, 0.0, true};

    auto update = [](ConditionCheck& c, double margin, std::size_t cell, double t) {
        if (margin < c.margin) {
            c.margin = margin;
            c.cell = cell;
            c.t = t;
        }
    };
    for (double t : t_samples) {
        for (std::size_t k = 0; k < divergence.size(); ++k) {
            update(report.g3, divergence[k] - term(t, k, 1.0), k, t);
            update(report.g4, term(t, k, -1.0) - divergence[k], k, t);
            update(report.g5, term(t, k, 0.0), k, t);
            if (abs) update(*report.compressibility, divergence[k] + abs->alpha_at(k) * (1.0 - abs->u_eq_at(k)), k, t);
        }
    }
    report.g3.passed = report.g3.margin >= -tol;
    report.g4.passed = report.g4.margin >= -tol;
    report.g5.passed = report.g5.margin >= -tol;
    if (report.compressibility) report.compressibility->passed = report.compressibility->margin >= -tol;
    return report;
}

}  // namespace crowdflow
