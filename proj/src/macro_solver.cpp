#include "igahmm/macro_solver.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "igahmm/errors.hpp"

namespace igahmm {

namespace {

constexpr double kResidualTarget = 1e-12;
constexpr int kRefinementSteps = 5;

bool on_edge(const NurbsPatch& patch, int control, int edge) {
    const int i = control % patch.count_u();
    const int j = control / patch.count_u();
    switch (edge) {
        case 0: return i == 0;
        case 1: return i == patch.count_u() - 1;
        case 2: return j == 0;
        default: return j == patch.count_v() - 1;
    }
}

}  // namespace

EdgeConditions classify_edges(const NurbsPatch& patch, const std::function<bool(const Eigen::Vector2d&)>& on_dirichlet) {
    EdgeConditions out{};
    static const char* names[] = {"xi=0", "xi=1", "eta=0", "eta=1"};
    constexpr int samples = 9;
    for (int edge = 0; edge < 4; ++edge) {
        int hits = 0;
        for (int s = 1; s <= samples; ++s) {
            const double t = static_cast<double>(s) / (samples + 1);
            const double xi = edge == 0 ? 0.0 : edge == 1 ? 1.0 : t;
            const double eta = edge == 2 ? 0.0 : edge == 3 ? 1.0 : t;
            if (on_dirichlet(map_point(patch, xi, eta))) ++hits;
        }
        if (hits != 0 && hits != samples) {
            std::ostringstream os;
            os << "boundary: parametric edge " << names[edge] << " is only partly on the Dirichlet boundary";
            throw ConfigError(os.str());
        }
        out[static_cast<std::size_t>(edge)] = hits == samples ? EdgeCondition::Dirichlet : EdgeCondition::Neumann;
    }
    return out;
}

MacroMesh::MacroMesh(NurbsPatch patch, EdgeConditions edges, int points_per_dir)
    : patch_(std::move(patch)), edges_(edges) {
    if (patch_.degree_u() != patch_.degree_v())
        throw ConfigError("macro mesh: degrees in the two directions must be equal");
    points_per_dir_ = points_per_dir > 0 ? points_per_dir : patch_.degree_u() + 1;

    elements_ = patch_elements(patch_);
    quadrature_.reserve(elements_.size());
    element_controls_.reserve(elements_.size());
    for (const Element& e : elements_) {
        quadrature_.push_back(element_rule(patch_, e, points_per_dir_));
        num_gauss_points_ += static_cast<int>(quadrature_.back().size());
        const double um = 0.5 * (e.u0 + e.u1), vm = 0.5 * (e.v0 + e.v1);
        element_controls_.push_back(eval_patch_unchecked(patch_, um, vm).indices);

        const Eigen::Vector2d a = map_point(patch_, e.u0, e.v0), b = map_point(patch_, e.u1, e.v1);
        const Eigen::Vector2d c = map_point(patch_, e.u1, e.v0), d = map_point(patch_, e.u0, e.v1);
        mesh_size_ = std::max({mesh_size_, (b - a).norm(), (d - c).norm()});
    }

    dof_.assign(static_cast<std::size_t>(patch_.size()), -1);
    for (int k = 0; k < patch_.size(); ++k) {
        bool fixed = false;
        for (int edge = 0; edge < 4; ++edge) {
            if (edges_[static_cast<std::size_t>(edge)] == EdgeCondition::Dirichlet && on_edge(patch_, k, edge)) fixed = true;
        }
        if (!fixed) dof_[static_cast<std::size_t>(k)] = num_dofs_++;
    }
}

std::vector<QuadraturePoint> MacroMesh::gauss_points() const {
    std::vector<QuadraturePoint> out;
    out.reserve(static_cast<std::size_t>(num_gauss_points_));
    for (const auto& q : quadrature_) out.insert(out.end(), q.begin(), q.end());
    return out;
}

LinearSystem assemble_macro(const MacroMesh& mesh, const std::vector<Eigen::Matrix2d>& tensors, const ScalarField& source) {
    if (static_cast<int>(tensors.size()) != mesh.num_gauss_points()) {
        std::ostringstream os;
        os << "macro assembly: " << tensors.size() << " effective tensors for " << mesh.num_gauss_points()
           << " Gauss points";
        throw SolverError(os.str());
    }
    const NurbsPatch& patch = mesh.patch();
    const int n = patch.size();
    const SparsePattern pattern(n, mesh.element_controls());

    LinearSystem sys;
    sys.matrix = pattern.zero_matrix();
    sys.load = Eigen::VectorXd::Zero(n);
    double* values = sys.matrix.valuePtr();

    std::size_t t = 0;
    for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
        const auto& controls = mesh.element_controls()[e];
        const auto nloc = static_cast<Eigen::Index>(controls.size());
        Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::VectorXd fe = Eigen::VectorXd::Zero(nloc);
        for (const QuadraturePoint& q : mesh.quadrature()[e]) {
            const PatchPoint pt = eval_patch(patch, q.param.x(), q.param.y());
            const Points2 g = pt.physical_gradients();
            ke.noalias() += q.weight * (g * tensors[t++]) * g.transpose();
            fe.noalias() += q.weight * source(q.x) * pt.values;
        }
        const std::vector<int> pos = pattern.element_positions(controls);
        for (Eigen::Index a = 0; a < nloc; ++a) {
            sys.load[controls[static_cast<std::size_t>(a)]] += fe[a];
            for (Eigen::Index b = 0; b < nloc; ++b) values[pos[static_cast<std::size_t>(a * nloc + b)]] += ke(a, b);
        }
    }
    return sys;
}

std::vector<Eigen::Matrix2d> sample_tensor(const MacroMesh& mesh, const MatrixField& tensor) {
    std::vector<Eigen::Matrix2d> out;
    out.reserve(static_cast<std::size_t>(mesh.num_gauss_points()));
    for (const auto& q : mesh.quadrature()) {
        for (const QuadraturePoint& p : q) out.push_back(tensor(p.x));
    }
    return out;
}

ReducedSystem apply_boundary_conditions(const LinearSystem& system, const MacroMesh& mesh) {
    const int nf = mesh.num_dofs();
    if (nf == 0) throw ConfigError("boundary conditions leave no free unknowns");
    ReducedSystem red;
    red.load = Eigen::VectorXd::Zero(nf);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
    for (int col = 0; col < system.matrix.outerSize(); ++col) {
        const int c = mesh.dof(col);
        if (c < 0) continue;
        red.load[c] = system.load[col];
        for (SparseMatrix::InnerIterator it(system.matrix, col); it; ++it) {
            const int r = mesh.dof(static_cast<int>(it.row()));
            if (r >= 0) trip.emplace_back(r, c, it.value());
        }
    }
    red.matrix.resize(nf, nf);
    red.matrix.setFromTriplets(trip.begin(), trip.end());
    return red;
}

SolutionField solve_macro(const ReducedSystem& system, const MacroMesh& mesh) {
    const double bnorm = system.load.norm();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(system.load.size());
    double residual = 0.0;

    if (bnorm > 0.0) {
        Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(system.matrix);
        if (llt.info() != Eigen::Success)
            throw SolverError("macro system is not symmetric positive definite (indefinite effective tensor?)");
        u = llt.solve(system.load);
        Eigen::VectorXd r = system.load - system.matrix * u;
        residual = r.norm() / bnorm;
        for (int step = 0; step < kRefinementSteps && residual > kResidualTarget; ++step) {
            u += llt.solve(r);
            r = system.load - system.matrix * u;
            residual = r.norm() / bnorm;
        }
        if (residual > kResidualTarget) {
            Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
            cg.setTolerance(kResidualTarget);
            cg.compute(system.matrix);
            u = cg.solveWithGuess(system.load, u);
            residual = (system.load - system.matrix * u).norm() / bnorm;
            if (residual > kResidualTarget) {
                std::ostringstream os;
                os << "macro solve: relative residual " << residual << " above " << kResidualTarget;
                throw SolverError(os.str());
            }
        }
    }

    SolutionField field;
    field.patch = mesh.patch();
    field.coefficients = Eigen::VectorXd::Zero(mesh.patch().size());
    for (int k = 0; k < mesh.patch().size(); ++k) {
        if (mesh.dof(k) >= 0) field.coefficients[k] = u[mesh.dof(k)];
    }
    field.residual = residual;
    return field;
}

FieldSample evaluate(const SolutionField& field, double xi, double eta) {
    const PatchPoint pt = eval_patch(field.patch, xi, eta);
    const Points2 g = pt.physical_gradients();
    FieldSample s;
    s.param = pt.param;
    s.x = pt.x;
    s.value = 0.0;
    s.gradient.setZero();
    for (std::size_t k = 0; k < pt.indices.size(); ++k) {
        const double c = field.coefficients[pt.indices[k]];
        s.value += pt.values[static_cast<Eigen::Index>(k)] * c;
        s.gradient += c * g.row(static_cast<Eigen::Index>(k)).transpose();
    }
    return s;
}

std::vector<FieldSample> evaluate_grid(const SolutionField& field, int n) {
    if (n < 1) throw ConfigError("sample grid needs n >= 1");
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) out.push_back(evaluate(field, static_cast<double>(i) / n, static_cast<double>(j) / n));
    }
    return out;
}

void write_solution_csv(std::ostream& out, const SolutionField& field, int n) {
    out << "xi,eta,x,y,u\n";
    char buf[160];
    for (const FieldSample& s : evaluate_grid(field, n)) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.12e,%.12e,%.12e\n", s.param.x(), s.param.y(), s.x.x(), s.x.y(),
                      s.value);
        out << buf;
    }
}

}  // namespace igahmm
