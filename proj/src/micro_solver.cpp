#include "igahmm/micro_solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>

#include "igahmm/errors.hpp"
#include "igahmm/quadrature.hpp"

namespace igahmm {

namespace {

constexpr double kIterativeTolerance = 1e-12;

std::string where(const SamplingDomain& d) {
    std::ostringstream os;
    os << "sampling domain at (" << d.center.x() << ", " << d.center.y() << ")";
    return os.str();
}

void check_elliptic(const Eigen::Matrix2d& a, const SamplingDomain& d, const Eigen::Vector2d& y) {
    const Eigen::Matrix2d s = 0.5 * (a + a.transpose());
    if (!(s(0, 0) > 0.0 && s.determinant() > 0.0)) {
        std::ostringstream os;
        os << "non-elliptic tensor sample at cell point (" << y.x() << ", " << y.y() << ") of " << where(d);
        throw SolverError(os.str());
    }
}

}  // namespace

SamplingDomain build_sampling_domain(const Eigen::Vector2d& center, double delta, double eps) {
    if (!(eps > 0.0)) throw ConfigError("sampling domain: eps must be positive");
    if (!(delta >= eps)) {
        std::ostringstream os;
        os << "sampling domain: delta = " << delta << " is smaller than eps = " << eps;
        throw ConfigError(os.str());
    }
    return {center, delta, eps};
}

MicroSpace::MicroSpace(const MicroSettings& settings) : settings_(settings) {
    if (settings.degree < 1) throw ConfigError("micro space: degree must be >= 1");
    if (settings.elements < 1) throw ConfigError("micro space: need at least one element");
    patch_ = make_mesh(unit_square_patch(), settings.elements, settings.degree, settings.continuity);

    const int nu = patch_.count_u();
    const int nv = patch_.count_v();
    const int n = patch_.size();
    rep_.resize(static_cast<std::size_t>(n));
    dof_.assign(static_cast<std::size_t>(n), -1);

    if (settings.coupling == Coupling::Periodic) {
        // edge traces depend only on edge control points (open knots), so
        // merging opposite edges makes every trial function periodic
        for (int j = 0; j < nv; ++j) {
            for (int i = 0; i < nu; ++i) {
                const int ri = i == nu - 1 ? 0 : i;
                const int rj = j == nv - 1 ? 0 : j;
                rep_[static_cast<std::size_t>(patch_.index(i, j))] = patch_.index(ri, rj);
            }
        }
        std::vector<int> rep_dof(static_cast<std::size_t>(n), -1);
        const int pinned = patch_.index(0, 0);
        for (int k = 0; k < n; ++k) {
            const int r = rep_[static_cast<std::size_t>(k)];
            if (r != k || r == pinned) continue;
            rep_dof[static_cast<std::size_t>(r)] = num_dofs_++;
        }
        for (int k = 0; k < n; ++k) dof_[static_cast<std::size_t>(k)] = rep_dof[static_cast<std::size_t>(rep_[static_cast<std::size_t>(k)])];
    } else {
        for (int j = 0; j < nv; ++j) {
            for (int i = 0; i < nu; ++i) {
                const int k = patch_.index(i, j);
                rep_[static_cast<std::size_t>(k)] = k;
                const bool boundary = i == 0 || j == 0 || i == nu - 1 || j == nv - 1;
                if (!boundary) dof_[static_cast<std::size_t>(k)] = num_dofs_++;
            }
        }
    }
    if (num_dofs_ == 0) throw ConfigError("micro space: mesh too coarse, no free unknowns");

    const int npd = settings.degree + 1;
    const GaussRule g = gauss_legendre(npd);
    mean_row_ = Eigen::VectorXd::Zero(n);
    std::vector<std::vector<int>> element_dofs;
    for (const Element& e : patch_elements(patch_)) {
        ElementData data;
        const int npts = npd * npd;
        data.y.resize(npts, 2);
        data.weights.resize(npts);
        const double hu = 0.5 * (e.u1 - e.u0);
        const double hv = 0.5 * (e.v1 - e.v0);
        for (int b = 0; b < npd; ++b) {
            for (int a = 0; a < npd; ++a) {
                const int k = a + npd * b;
                const double xi = e.u0 + hu * (g.points[a] + 1.0);
                const double eta = e.v0 + hv * (g.points[b] + 1.0);
                const PatchPoint pt = eval_patch(patch_, xi, eta);
                if (k == 0) {
                    const auto nloc = static_cast<Eigen::Index>(pt.indices.size());
                    data.controls = pt.indices;
                    data.values.resize(npts, nloc);
                    data.grad_u.resize(npts, nloc);
                    data.grad_v.resize(npts, nloc);
                }
                const Points2 grads = pt.physical_gradients();
                data.y.row(k) = pt.x.transpose();
                data.weights[k] = g.weights[a] * g.weights[b] * hu * hv * pt.det();
                data.values.row(k) = pt.values.transpose();
                data.grad_u.row(k) = grads.col(0).transpose();
                data.grad_v.row(k) = grads.col(1).transpose();
            }
        }
        for (std::size_t a = 0; a < data.controls.size(); ++a) {
            const int c = data.controls[a];
            data.dofs.push_back(dof_[static_cast<std::size_t>(c)]);
            mean_row_[c] += data.weights.dot(data.values.col(static_cast<Eigen::Index>(a)));
        }
        element_dofs.push_back(data.dofs);
        elements_.push_back(std::move(data));
    }
    pattern_ = SparsePattern(num_dofs_, element_dofs);
    for (ElementData& e : elements_) e.positions = pattern_.element_positions(e.dofs);
}

MicroSystem assemble_micro(const MicroSpace& space, const SamplingDomain& domain, const TensorField& tensor) {
    MicroSystem sys;
    sys.stiffness = space.pattern().zero_matrix();
    sys.rhs = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(space.num_dofs(), 2);
    double* values = sys.stiffness.valuePtr();

    // fast variable x/eps = x_Kl/eps + (delta/eps)(y - 1/2); reduce the
    // (large) center phase mod 1 since the cell function is 1-periodic in it
    const Eigen::Vector2d scaled = domain.center / domain.eps;
    const Eigen::Vector2d phase = scaled.array() - scaled.array().floor();
    const double ratio = domain.delta / domain.eps;

    std::size_t total_points = 0;
    for (const auto& e : space.elements()) total_points += static_cast<std::size_t>(e.weights.size());
    sys.tensors.reserve(total_points);

    for (const auto& e : space.elements()) {
        const auto nloc = static_cast<Eigen::Index>(e.controls.size());
        Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::MatrixXd fe = Eigen::MatrixXd::Zero(nloc, 2);
        Eigen::MatrixXd g(nloc, 2);
        for (Eigen::Index k = 0; k < e.weights.size(); ++k) {
            const Eigen::Vector2d y = e.y.row(k).transpose();
            const Eigen::Vector2d fast = phase + ratio * (y - Eigen::Vector2d::Constant(0.5));
            const Eigen::Matrix2d a = tensor.fn(domain.center, fast);
            check_elliptic(a, domain, y);
            sys.tensors.push_back(a);
            g.col(0) = e.grad_u.row(k).transpose();
            g.col(1) = e.grad_v.row(k).transpose();
            const Eigen::MatrixXd ga = g * a;  // row a: grad R_a^T a
            ke.noalias() += e.weights[k] * ga * g.transpose();
            fe.noalias() -= e.weights[k] * ga;  // -(a e_j) . grad R_a
        }
        for (Eigen::Index a = 0; a < nloc; ++a) {
            const int ra = e.dofs[static_cast<std::size_t>(a)];
            if (ra < 0) continue;
            sys.rhs.row(ra) += fe.row(a);
            for (Eigen::Index b = 0; b < nloc; ++b) {
                const int pos = e.positions[static_cast<std::size_t>(a * nloc + b)];
                if (pos >= 0) values[pos] += ke(a, b);
            }
        }
    }
    return sys;
}

namespace {

template <typename Factorization>
MicroResult finish(const MicroSpace& space, const MicroSystem& sys, Factorization* llt) {
    MicroResult res;
    Eigen::Matrix<double, Eigen::Dynamic, 2> sol(space.num_dofs(), 2);
    bool ok = llt != nullptr && llt->info() == Eigen::Success;
    if (ok) {
        sol = llt->solve(sys.rhs);
        ok = llt->info() == Eigen::Success;
    }
    if (!ok) {
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
        cg.setTolerance(kIterativeTolerance);
        cg.setMaxIterations(20 * space.num_dofs() + 100);
        cg.compute(sys.stiffness);
        for (int j = 0; j < 2; ++j) {
            sol.col(j) = cg.solve(sys.rhs.col(j));
            if (cg.info() != Eigen::Success) throw SolverError("micro problem: singular constrained system");
        }
    }
    const double rhs_norm = sys.rhs.norm();
    res.linear_residual = rhs_norm > 0 ? (sys.stiffness * sol - sys.rhs).norm() / rhs_norm : 0.0;

    const int n = space.num_control_points();
    res.correctors = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(n, 2);
    for (int k = 0; k < n; ++k) {
        const int d = space.dof(k);
        if (d >= 0) res.correctors.row(k) = sol.row(d);
    }
    if (space.settings().coupling == Coupling::Periodic) {
        // shift by the constant that satisfies the mean constraint (sum R_I = 1, |Y| = 1)
        const double total = space.mean_row().sum();
        for (int j = 0; j < 2; ++j) {
            const double mean = space.mean_row().dot(res.correctors.col(j)) / total;
            res.correctors.col(j).array() -= mean;
        }
        res.mean_residual = std::max(std::abs(space.mean_row().dot(res.correctors.col(0))),
                                     std::abs(space.mean_row().dot(res.correctors.col(1))));
    }

    Eigen::Matrix2d eff = Eigen::Matrix2d::Zero();
    std::size_t t = 0;
    for (const auto& e : space.elements()) {
        const auto nloc = static_cast<Eigen::Index>(e.controls.size());
        Eigen::MatrixXd c(nloc, 2);
        for (Eigen::Index a = 0; a < nloc; ++a) c.row(a) = res.correctors.row(e.controls[static_cast<std::size_t>(a)]);
        for (Eigen::Index k = 0; k < e.weights.size(); ++k, ++t) {
            Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
            m.row(0) += e.grad_u.row(k) * c;  // d chi_j / dy1
            m.row(1) += e.grad_v.row(k) * c;  // d chi_j / dy2
            eff.noalias() += e.weights[k] * m.transpose() * sys.tensors[t] * m;
        }
    }
    res.effective = eff;
    return res;
}

}  // namespace

MicroResult solve_micro(const MicroSpace& space, const MicroSystem& system) {
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(system.stiffness);
    return finish(space, system, &llt);
}

MicroSolver::MicroSolver(std::shared_ptr<const MicroSpace> space) : space_(std::move(space)) {}

MicroResult MicroSolver::solve(const SamplingDomain& domain, const TensorField& tensor) {
    return solve(assemble_micro(*space_, domain, tensor));
}

MicroResult MicroSolver::solve(const MicroSystem& system) {
    if (!analyzed_) {
        llt_.analyzePattern(system.stiffness);
        analyzed_ = true;
    }
    llt_.factorize(system.stiffness);
    return finish(*space_, system, &llt_);
}

}  // namespace igahmm
