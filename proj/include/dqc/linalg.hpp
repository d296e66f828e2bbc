#pragma once

#include <vector>

namespace dqc {

/// Eigenvalues of a dense symmetric matrix, ascending. Cyclic Jacobi
/// rotations; intended for the small matrices this engine works with
/// (circuit widths of a few dozen).
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a);

/// Solves a dense linear system by Gaussian elimination with partial
/// pivoting. Throws on (numerically) singular systems.
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b);

}  // namespace dqc
