#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "crowdflow/grid.hpp"

namespace crowdflow {

/// Sparse 5-point operator A = -Delta_h with ghost-value closure: p = 0 on
/// Dirichlet faces (ghost = -p_K), zero normal derivative on Neumann faces
/// (ghost = p_K). Symmetric M-matrix, positive definite when a Dirichlet face
/// exists.
class LaplacianOperator {
public:
    struct Entry {
        std::size_t col;
        double value;
    };

    std::size_t size() const noexcept { return diagonal_.size(); }
    double diagonal(std::size_t row) const { return diagonal_[row]; }
    /// Off-diagonal entries of a row, in the grid's face incidence order.
    const Entry* row_begin(std::size_t row) const { return entries_.data() + row_start_[row]; }
    const Entry* row_end(std::size_t row) const { return entries_.data() + row_start_[row + 1]; }

    /// sum over the Dirichlet faces of cell K of A_f / d_f; the cell's pressure
    /// outflux is this times p_K.
    double dirichlet_conductance(std::size_t row) const { return dirichlet_conductance_[row]; }

    /// Entry (i, j); O(row length).
    double entry(std::size_t i, std::size_t j) const;
    /// y = A x.
    ScalarField apply(const ScalarField& x) const;

    friend LaplacianOperator assemble_laplacian(const Grid& grid);

private:
    std::vector<double> diagonal_;
    std::vector<std::size_t> row_start_;
    std::vector<Entry> entries_;
    std::vector<double> dirichlet_conductance_;
};

LaplacianOperator assemble_laplacian(const Grid& grid);

/// Find p >= 0 with w = q + M p >= 0 and p.w = 0, where M = dt A.
struct LcpProblem {
    std::shared_ptr<const LaplacianOperator> laplacian;
    double dt = 1.0;
    ScalarField q;

    std::size_t size() const noexcept { return q.size(); }
    /// w = q + dt A p.
    ScalarField slack(const ScalarField& p) const;
};

struct LcpSolution {
    ScalarField p;
    double residual = 0.0;  ///< max_K |min(p_K, w_K)|
    std::size_t sweeps = 0;
    std::size_t newton_iterations = 0;
};

struct PgsOptions {
    double tol = 1e-10;
    /// 0 selects 100 * (cell count) + 1000.
    std::size_t max_sweeps = 0;
    /// Starting iterate; zero when absent.
    std::optional<ScalarField> initial;
    /// Run the semismooth Newton (primal-dual active set) iteration first and
    /// hand its result to PGS as the starting iterate.
    bool accelerate = false;
    /// After convergence, re-solve exactly on the support of p and keep the
    /// result when its residual is lower.
    bool polish = true;
};

/// max_K |min(p_K, w_K)| for w = q + M p.
double lcp_residual(const LcpProblem& problem, const ScalarField& p);

/// Projected Gauss-Seidel, forward row-major sweeps. Throws ConvergenceError
/// carrying the final residual when the sweep budget runs out.
LcpSolution lcp_solve_pgs(const LcpProblem& problem, const PgsOptions& options = {});

/// Semismooth Newton on min(p, q + M p) = 0: repeatedly solves the principal
/// system on the set where w < p, with p = 0 elsewhere, until the set repeats.
/// Finite for M-matrices. Returns the last iterate with its residual; never
/// throws on slow convergence (at most `max_iterations` solves).
LcpSolution lcp_solve_newton(const LcpProblem& problem, const ScalarField& start, std::size_t max_iterations = 100);

/// Exact solution by enumerating active sets and solving each principal
/// subsystem densely. Verification only; at most 20 unknowns.
ScalarField lcp_oracle_enumerate(const LcpProblem& problem);

struct ProjectionResult {
    ScalarField u;
    ScalarField p;
    double residual = 0.0;          ///< complementarity residual after projection
    double pressure_outflux = 0.0;  ///< dt * sum_K p_K * dirichlet_conductance_K
    std::size_t sweeps = 0;
    std::size_t newton_iterations = 0;
};

/// One-phase constraint: u = u* - dt A p with p >= 0, u <= 1, p (1 - u) = 0.
ProjectionResult projection_step_one_phase(const ScalarField& u_star, double dt, const Grid& grid,
                                           const std::shared_ptr<const LaplacianOperator>& laplacian,
                                           const PgsOptions& options = {});

/// Two-phase constraint u in sign(p): -1 <= u <= 1, p^+ (1 - u) = 0,
/// p^- (1 + u) = 0, with p of either sign.
ProjectionResult projection_step_two_phase(const ScalarField& u_star, double dt, const Grid& grid,
                                           const std::shared_ptr<const LaplacianOperator>& laplacian,
                                           const PgsOptions& options = {});

/// max_K |min(p_K, 1 - u_K)|.
double complementarity_residual_one_phase(const ScalarField& u, const ScalarField& p);
/// max_K max(|min(p_K^+, 1 - u_K)|, |min(p_K^-, 1 + u_K)|).
double complementarity_residual_two_phase(const ScalarField& u, const ScalarField& p);

/// sum over faces of |grad_h p|^2 A_f d_f, with the Dirichlet ghost closure;
/// equals |K| p.(A p).
double pressure_gradient_energy(const Grid& grid, const ScalarField& p);

/// Total pressure outflux sum_K p_K * dirichlet_conductance_K (per unit time).
double pressure_dirichlet_flux(const LaplacianOperator& laplacian, const ScalarField& p);

}  // namespace crowdflow
