#include "crowdflow/pressure.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crowdflow {

LaplacianOperator assemble_laplacian(const Grid& grid) {
    LaplacianOperator op;
    const std::size_t n = grid.cell_count();
    const double inv_vol = 1.0 / grid.cell_volume();
    op.diagonal_.assign(n, 0.0);
    op.dirichlet_conductance_.assign(n, 0.0);
    op.row_start_.assign(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        op.row_start_[k] = op.entries_.size();
        for (const auto& cf : grid.cell_faces(k)) {
            const Face& f = grid.face(cf.face);
            const double conductance = f.area / f.distance;
            switch (f.kind) {
            case FaceKind::Interior: {
                const std::size_t other = f.owner == k ? f.neighbor : f.owner;
                op.diagonal_[k] += conductance * inv_vol;
                op.entries_.push_back({other, -conductance * inv_vol});
                break;
            }
            case FaceKind::Dirichlet:
                // Ghost -p_K at distance h/2 from the center: flux p_K A_f / (h/2).
                op.diagonal_[k] += conductance * inv_vol;
                op.dirichlet_conductance_[k] += conductance;
                break;
            case FaceKind::Neumann:
                break;
            }
        }
    }
    op.row_start_[n] = op.entries_.size();
    return op;
}

double LaplacianOperator::entry(std::size_t i, std::size_t j) const {
    if (i == j) return diagonal_[i];
    double v = 0.0;
    for (const Entry* e = row_begin(i); e != row_end(i); ++e)
        if (e->col == j) v += e->value;
    return v;
}

ScalarField LaplacianOperator::apply(const ScalarField& x) const {
    ScalarField y(size());
    for (std::size_t k = 0; k < size(); ++k) {
        double sum = diagonal_[k] * x[k];
        for (const Entry* e = row_begin(k); e != row_end(k); ++e) sum += e->value * x[e->col];
        y[k] = sum;
    }
    return y;
}

ScalarField LcpProblem::slack(const ScalarField& p) const {
    ScalarField w = laplacian->apply(p);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = q[k] + dt * w[k];
    return w;
}

double lcp_residual(const LcpProblem& problem, const ScalarField& p) {
    const ScalarField w = problem.slack(p);
    double res = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) res = std::max(res, std::abs(std::min(p[k], w[k])));
    return res;
}

namespace {

std::size_t sweep_budget(const PgsOptions& options, std::size_t n) {
    return options.max_sweeps != 0 ? options.max_sweeps : 100 * n + 1000;
}

ScalarField starting_iterate(const PgsOptions& options, std::size_t n) {
    if (options.initial && options.initial->size() == n) return *options.initial;
    return ScalarField(n);
}

}  // namespace

LcpSolution lcp_solve_newton(const LcpProblem& problem, const ScalarField& start, std::size_t max_iterations) {
    const LaplacianOperator& A = *problem.laplacian;
    const std::size_t n = problem.size();
    LcpSolution sol;
    sol.p = start.size() == n ? start : ScalarField(n);
    for (auto& v : sol.p) v = std::max(v, 0.0);

    std::vector<char> active(n, 0);
    std::vector<char> next(n, 0);
    std::vector<Eigen::Index> slot(n);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool first = true;
    while (sol.newton_iterations < max_iterations) {
        const ScalarField w = problem.slack(sol.p);
        for (std::size_t k = 0; k < n; ++k) next[k] = w[k] < sol.p[k] ? 1 : 0;
        if (!first && next == active) break;
        first = false;
        active.swap(next);

        Eigen::Index m = 0;
        for (std::size_t k = 0; k < n; ++k) slot[k] = active[k] ? m++ : -1;
        ScalarField p(n);
        if (m > 0) {
            triplets.clear();
            Eigen::VectorXd rhs(m);
            for (std::size_t k = 0; k < n; ++k) {
                if (slot[k] < 0) continue;
                rhs(slot[k]) = -problem.q[k];
                triplets.emplace_back(slot[k], slot[k], problem.dt * A.diagonal(k));
                for (const auto* e = A.row_begin(k); e != A.row_end(k); ++e)
                    if (slot[e->col] >= 0) triplets.emplace_back(slot[k], slot[e->col], problem.dt * e->value);
            }
            Eigen::SparseMatrix<double> Maa(m, m);
            Maa.setFromTriplets(triplets.begin(), triplets.end());
            solver.compute(Maa);
            if (solver.info() != Eigen::Success) break;
            const Eigen::VectorXd pa = solver.solve(rhs);
            for (std::size_t k = 0; k < n; ++k)
                if (slot[k] >= 0) p[k] = pa(slot[k]);
        }
        sol.p = std::move(p);
        ++sol.newton_iterations;
    }
    for (auto& v : sol.p) v = std::max(v, 0.0);
    sol.residual = lcp_residual(problem, sol.p);
    return sol;
}

LcpSolution lcp_solve_pgs(const LcpProblem& problem, const PgsOptions& options) {
    const LaplacianOperator& A = *problem.laplacian;
    const std::size_t n = problem.size();
    const double dt = problem.dt;
    LcpSolution sol;
    sol.p = starting_iterate(options, n);
    for (auto& v : sol.p) v = std::max(v, 0.0);
    sol.residual = lcp_residual(problem, sol.p);
    if (options.accelerate && sol.residual > options.tol) {
        LcpSolution newton = lcp_solve_newton(problem, sol.p);
        sol.newton_iterations = newton.newton_iterations;
        if (newton.residual < sol.residual) {
            sol.p = std::move(newton.p);
            sol.residual = newton.residual;
        }
    }
    const std::size_t budget = sweep_budget(options, n);
    while (sol.residual > options.tol) {
        if (sol.sweeps == budget) {
            std::ostringstream os;
            os << "projected Gauss-Seidel did not converge in " << budget << " sweeps (residual " << sol.residual
               << ", tol " << options.tol << ")";
            throw ConvergenceError(os.str(), sol.residual, sol.sweeps);
        }
        for (std::size_t k = 0; k < n; ++k) {
            double r = problem.q[k];
            for (const auto* e = A.row_begin(k); e != A.row_end(k); ++e) r += dt * e->value * sol.p[e->col];
            sol.p[k] = std::max(0.0, -r / (dt * A.diagonal(k)));
        }
        ++sol.sweeps;
        sol.residual = lcp_residual(problem, sol.p);
    }
    if (options.polish && sol.sweeps > 0) {
        // The support of the PGS iterate is the active set; solving on it
        // removes the error left by the residual stopping rule.
        LcpSolution exact = lcp_solve_newton(problem, sol.p, 3);
        if (exact.residual < sol.residual) {
            sol.p = std::move(exact.p);
            sol.residual = exact.residual;
            sol.newton_iterations += exact.newton_iterations;
        }
    }
    return sol;
}

ScalarField lcp_oracle_enumerate(const LcpProblem& problem) {
    const std::size_t n = problem.size();
    if (n > 20) throw ConfigError("active-set enumeration is limited to 20 unknowns");
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = problem.dt * problem.laplacian->entry(i, j);
    Eigen::VectorXd q(n);
    for (std::size_t i = 0; i < n; ++i) q(static_cast<Eigen::Index>(i)) = problem.q[i];

    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    const double feas_tol = 1e-12 * scale;
    const std::size_t masks = std::size_t{1} << n;
    std::vector<Eigen::Index> active;
    for (std::size_t mask = 0; mask < masks; ++mask) {
        active.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) active.push_back(static_cast<Eigen::Index>(i));
        const auto m = static_cast<Eigen::Index>(active.size());
        Eigen::VectorXd pa;
        if (m > 0) {
            Eigen::MatrixXd Maa(m, m);
            Eigen::VectorXd rhs(m);
            for (Eigen::Index a = 0; a < m; ++a) {
                rhs(a) = -q(active[static_cast<std::size_t>(a)]);
                for (Eigen::Index b = 0; b < m; ++b)
                    Maa(a, b) = M(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
            }
            pa = Maa.partialPivLu().solve(rhs);
            if ((pa.array() < -feas_tol).any()) continue;
        }
        Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (Eigen::Index a = 0; a < m; ++a) p(active[static_cast<std::size_t>(a)]) = std::max(pa(a), 0.0);
        const Eigen::VectorXd w = q + M * p;
        bool feasible = true;
        for (std::size_t i = 0; i < n && feasible; ++i)
            if (!(mask & (std::size_t{1} << i)) && w(static_cast<Eigen::Index>(i)) < -feas_tol) feasible = false;
        if (!feasible) continue;
        ScalarField out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = p(static_cast<Eigen::Index>(i));
        return out;
    }
    throw Error("active-set enumeration found no feasible solution");
}

double complementarity_residual_one_phase(const ScalarField& u, const ScalarField& p) {
    double res = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) res = std::max(res, std::abs(std::min(p[k], 1.0 - u[k])));
    return res;
}

double complementarity_residual_two_phase(const ScalarField& u, const ScalarField& p) {
    double res = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double pp = std::max(p[k], 0.0);
        const double pm = std::max(-p[k], 0.0);
        res = std::max({res, std::abs(std::min(pp, 1.0 - u[k])), std::abs(std::min(pm, 1.0 + u[k]))});
    }
    return res;
}

double pressure_dirichlet_flux(const LaplacianOperator& laplacian, const ScalarField& p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * laplacian.dirichlet_conductance(k);
    return sum;
}

double pressure_gradient_energy(const Grid& grid, const ScalarField& p) {
    double sum = 0.0;
    for (const Face& f : grid.faces()) {
        double jump;
        if (f.kind == FaceKind::Interior)
            jump = p[f.neighbor] - p[f.owner];
        else if (f.kind == FaceKind::Dirichlet)
            jump = p[f.owner];
        else
            continue;
        const double grad = jump / f.distance;
        sum += grad * grad * f.area * f.distance;
    }
    return sum;
}

namespace {

ProjectionResult finish_projection(const ScalarField& u_star, double dt, const LaplacianOperator& A, ScalarField p,
                                   std::size_t sweeps) {
    ProjectionResult out;
    const ScalarField Ap = A.apply(p);
    out.u = ScalarField(u_star.size());
    for (std::size_t k = 0; k < u_star.size(); ++k) out.u[k] = u_star[k] - dt * Ap[k];
    out.pressure_outflux = dt * pressure_dirichlet_flux(A, p);
    out.p = std::move(p);
    out.sweeps = sweeps;
    return out;
}

}  // namespace

ProjectionResult projection_step_one_phase(const ScalarField& u_star, double dt, const Grid& grid,
                                           const std::shared_ptr<const LaplacianOperator>& laplacian,
                                           const PgsOptions& options) {
    if (!(dt > 0.0)) throw StepSizeError("projection needs dt > 0");
    if (laplacian->size() != grid.cell_count()) throw ConfigError("Laplacian does not match grid");
    LcpProblem problem{laplacian, dt, ScalarField(u_star.size())};
    for (std::size_t k = 0; k < u_star.size(); ++k) problem.q[k] = 1.0 - u_star[k];
    LcpSolution sol = lcp_solve_pgs(problem, options);
    ProjectionResult out = finish_projection(u_star, dt, *laplacian, std::move(sol.p), sol.sweeps);
    out.newton_iterations = sol.newton_iterations;
    out.residual = complementarity_residual_one_phase(out.u, out.p);
    return out;
}

ProjectionResult projection_step_two_phase(const ScalarField& u_star, double dt, const Grid& grid,
                                           const std::shared_ptr<const LaplacianOperator>& laplacian,
                                           const PgsOptions& options) {
    if (!(dt > 0.0)) throw StepSizeError("projection needs dt > 0");
    const LaplacianOperator& A = *laplacian;
    if (A.size() != grid.cell_count()) throw ConfigError("Laplacian does not match grid");
    const std::size_t n = u_star.size();
    ScalarField p = starting_iterate(options, n);

    auto residual_of = [&](const ScalarField& pv) {
        const ScalarField Ap = A.apply(pv);
        ScalarField u(n);
        for (std::size_t k = 0; k < n; ++k) u[k] = u_star[k] - dt * Ap[k];
        return complementarity_residual_two_phase(u, pv);
    };

    double residual = residual_of(p);
    std::size_t sweeps = 0;
    const std::size_t budget = sweep_budget(options, n);
    while (residual > options.tol) {
        if (sweeps == budget) {
            std::ostringstream os;
            os << "two-phase projected Gauss-Seidel did not converge in " << budget << " sweeps (residual "
               << residual << ")";
            throw ConvergenceError(os.str(), residual, sweeps);
        }
        for (std::size_t k = 0; k < n; ++k) {
            // Value of u_K if p_K were zero; then invert u in sign(p) pointwise.
            double r = u_star[k];
            for (const auto* e = A.row_begin(k); e != A.row_end(k); ++e) r -= dt * e->value * p[e->col];
            const double m = dt * A.diagonal(k);
            if (r > 1.0)
                p[k] = (r - 1.0) / m;
            else if (r < -1.0)
                p[k] = (r + 1.0) / m;
            else
                p[k] = 0.0;
        }
        ++sweeps;
        residual = residual_of(p);
    }
    ProjectionResult out = finish_projection(u_star, dt, A, std::move(p), sweeps);
    out.residual = complementarity_residual_two_phase(out.u, out.p);
    return out;
}

}  // namespace crowdflow
