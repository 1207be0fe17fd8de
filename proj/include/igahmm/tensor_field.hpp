#pragma once

#include <functional>

#include <Eigen/Core>

namespace igahmm {

/// Conductivity a^eps(x) written as a two-scale function a(x, x/eps).
///
/// `fn(slow, fast)` receives the slow variable x and the fast variable
/// x/eps. Purely oscillating tensors a(x/eps) ignore `slow`. Micro problems
/// collocate the slow variable at the macro Gauss point and pass `fast`
/// shifted by an integer vector, so `fn` must be 1-periodic in `fast`.
struct TensorField {
    using Fn = std::function<Eigen::Matrix2d(const Eigen::Vector2d& slow, const Eigen::Vector2d& fast)>;

    Fn fn;
    double eps = 1e-6;

    Eigen::Matrix2d at(const Eigen::Vector2d& x) const { return fn(x, x / eps); }
};

/// Spatially varying macroscopic tensor such as a homogenized a0(x).
using MatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d& x)>;

using ScalarField = std::function<double(const Eigen::Vector2d& x)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d& x)>;

}  // namespace igahmm
