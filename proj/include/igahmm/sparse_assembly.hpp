#pragma once

#include <vector>

#include <Eigen/Sparse>

namespace igahmm {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Compressed sparsity pattern built from element dof lists, with direct
/// positions into the value array for fast repeated assembly.
///
/// Negative dof ids mark eliminated unknowns and are skipped.
class SparsePattern {
public:
    SparsePattern() = default;
    SparsePattern(int size, const std::vector<std::vector<int>>& element_dofs);

    int size() const { return static_cast<int>(matrix_.rows()); }

    /// Zero-valued matrix with the full pattern.
    const SparseMatrix& zero_matrix() const { return matrix_; }

    /// Position of (row, col) inside valuePtr(); -1 if either index is eliminated.
    int position(int row, int col) const;

    /// Positions for every (a, b) pair of an element's local dofs, row-major in a.
    std::vector<int> element_positions(const std::vector<int>& dofs) const;

private:
    SparseMatrix matrix_;
};

}  // namespace igahmm
