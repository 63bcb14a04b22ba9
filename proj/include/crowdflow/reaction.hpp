#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crowdflow/grid.hpp"

namespace crowdflow {

/// Nonnegative growth bound R(t) of the reaction's one-sided Lipschitz
/// condition. Constant when `times` is empty, otherwise piecewise linear
/// through (times[i], values[i]) and clamped outside the table.
struct GrowthBound {
    std::vector<double> times;
    std::vector<double> values{0.0};

    static GrowthBound constant(double r) { return GrowthBound{{}, {r}}; }

    double at(double t) const;
    /// Integral of R over [0, t].
    double integral(double t) const;
    double max() const;

    friend bool operator==(const GrowthBound&, const GrowthBound&) = default;
};

/// Parameters of g = -alpha u (u - u_eq). Each vector holds one value (uniform)
/// or one value per cell.
struct AbsorptionParams {
    std::vector<double> alpha{1.0};
    std::vector<double> u_eq{0.5};

    double alpha_at(std::size_t cell) const { return alpha.size() == 1 ? alpha[0] : alpha[cell]; }
    double u_eq_at(std::size_t cell) const { return u_eq.size() == 1 ? u_eq[0] : u_eq[cell]; }
    double max_alpha() const;
    double max_u_eq() const;
};

/// Reaction rate g(t, x, r) for r in [-1, 1], with x identified by its cell.
/// Carries a declared Lipschitz constant L_g and growth bound R(t). Cheap to
/// copy; evaluation is pure and thread-safe.
class ReactionTerm {
public:
    using Rate = std::function<double(double t, std::size_t cell, double r)>;

    ReactionTerm(std::string id, Rate rate, double lipschitz, GrowthBound growth);

    static ReactionTerm zero();
    static ReactionTerm constant(double c);
    static ReactionTerm absorption(double alpha, double u_eq);
    static ReactionTerm absorption(AbsorptionParams params);
    /// Piecewise linear in r through the knots (r increasing), clamped outside.
    static ReactionTerm tabulated(std::vector<double> r, std::vector<double> g);
    /// g(r) = positive(r^+) + negative(r^-), with r^- = max(-r, 0).
    static ReactionTerm two_phase(const ReactionTerm& positive, const ReactionTerm& negative);
    /// g = a + b.
    static ReactionTerm sum(const ReactionTerm& a, const ReactionTerm& b);

    double operator()(double t, std::size_t cell, double r) const { return rate_(t, cell, r); }

    const std::string& id() const noexcept { return id_; }
    double lipschitz() const noexcept { return lipschitz_; }
    const GrowthBound& growth() const noexcept { return growth_; }

    ReactionTerm with_lipschitz(double lipschitz) const;
    ReactionTerm with_growth(GrowthBound growth) const;

    /// Non-null for absorption terms.
    const AbsorptionParams* absorption_params() const noexcept { return absorption_.get(); }

private:
    std::string id_;
    Rate rate_;
    double lipschitz_;
    GrowthBound growth_;
    std::shared_ptr<const AbsorptionParams> absorption_;
};

inline constexpr double kReactionSlack = 1e-12;

/// g(t, x_cell, u). Throws DomainError when |u| > 1 + slack.
double evaluate_reaction(const ReactionTerm& term, double t, std::size_t cell, double u,
                         double slack = kReactionSlack);

/// The 33-point uniform r-grid on [-1, 1] used for sampled validation.
std::vector<double> default_r_samples();

struct ValidationReport {
    // Discrete surrogate of g^+(., -1), g^-(., 1) integrability: finiteness and
    // the sampled maxima.
    bool g1_ok = true;
    double max_positive_at_minus_one = 0.0;
    double max_negative_at_plus_one = 0.0;

    double declared_lipschitz = 0.0;
    double sampled_lipschitz = 0.0;
    bool lipschitz_ok = true;

    // Worst sampled value of (g(b) - g(a)) - R(t)(b - a) over a < b.
    double growth_violation = 0.0;
    bool growth_ok = true;

    // Worst sampled violation of -g^-(1) - R(1 - r) <= g(r) <= g^+(-1) + R(1 + r).
    double explicit_bound_violation = 0.0;
    bool explicit_bound_ok = true;

    // Witness of the worst Lipschitz or growth violation.
    struct Witness {
        double t = 0.0;
        std::size_t cell = 0;
        double r1 = 0.0;
        double r2 = 0.0;
    };
    std::optional<Witness> lipschitz_witness;
    std::optional<Witness> growth_witness;

    bool passed() const noexcept { return g1_ok && lipschitz_ok && growth_ok && explicit_bound_ok; }
};

/// Sample-based check of the reaction hypotheses over all cells, the given
/// times and r values. Violations are report entries, never exceptions.
ValidationReport validate_assumptions(const ReactionTerm& term, const Grid& grid, const std::vector<double>& t_samples,
                                      const std::vector<double>& r_samples = default_r_samples(),
                                      double tol = 1e-10);

struct ConditionCheck {
    double margin = 0.0;  ///< worst (smallest) margin; >= -tol passes
    std::size_t cell = 0;
    double t = 0.0;
    bool passed = true;
};

struct ConditionReport {
    ConditionCheck g3;  ///< div V - g(., 1) >= 0
    ConditionCheck g4;  ///< g(., -1) - div V >= 0
    ConditionCheck g5;  ///< g(., 0) >= 0
    /// div V + alpha (1 - u_eq) >= 0, present for absorption terms only.
    std::optional<ConditionCheck> compressibility;
};

/// Congestion-avoidance conditions evaluated per cell and sampled time.
ConditionReport check_congestion_free(const ReactionTerm& term, const ScalarField& divergence,
                                      const std::vector<double>& t_samples, double tol = 1e-12);

}  // namespace crowdflow
