#include "igahmm/sparse_assembly.hpp"

#include <algorithm>

namespace igahmm {

SparsePattern::SparsePattern(int size, const std::vector<std::vector<int>>& element_dofs) {
    std::vector<std::vector<int>> cols(static_cast<std::size_t>(size));
    for (const auto& dofs : element_dofs) {
        for (int c : dofs) {
            if (c < 0) continue;
            auto& col = cols[static_cast<std::size_t>(c)];
            for (int r : dofs) {
                if (r >= 0) col.push_back(r);
            }
        }
        // keep the per-column buffers from growing without bound on large meshes
        for (int c : dofs) {
            if (c < 0) continue;
            auto& col = cols[static_cast<std::size_t>(c)];
            if (col.size() > 4096) {
                std::sort(col.begin(), col.end());
                col.erase(std::unique(col.begin(), col.end()), col.end());
            }
        }
    }
    Eigen::Index nnz = 0;
    for (auto& col : cols) {
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
        nnz += static_cast<Eigen::Index>(col.size());
    }

    matrix_.resize(size, size);
    matrix_.resizeNonZeros(nnz);
    auto* outer = matrix_.outerIndexPtr();
    auto* inner = matrix_.innerIndexPtr();
    double* values = matrix_.valuePtr();
    Eigen::Index k = 0;
    for (int c = 0; c < size; ++c) {
        outer[c] = static_cast<int>(k);
        for (int r : cols[static_cast<std::size_t>(c)]) {
            inner[k] = r;
            values[k] = 0.0;
            ++k;
        }
    }
    outer[size] = static_cast<int>(k);
}

int SparsePattern::position(int row, int col) const {
    if (row < 0 || col < 0) return -1;
    const int* inner = matrix_.innerIndexPtr();
    const int* begin = inner + matrix_.outerIndexPtr()[col];
    const int* end = inner + matrix_.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(begin, end, row);
    return (it != end && *it == row) ? static_cast<int>(it - inner) : -1;
}

std::vector<int> SparsePattern::element_positions(const std::vector<int>& dofs) const {
    std::vector<int> pos;
    pos.reserve(dofs.size() * dofs.size());
    for (int a : dofs) {
        for (int b : dofs) pos.push_back(position(a, b));
    }
    return pos;
}

}  // namespace igahmm
