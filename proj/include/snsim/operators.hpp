#pragma once

#include <Eigen/Dense>
#include <complex>

#include "snsim/errors.hpp"

namespace snsim {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

// Pair convention used everywhere: atom 1 is the left Kronecker factor,
// so a two-atom basis index is b = 4*a1 + a2.
Mat kron(const Mat& a, const Mat& b);

Mat dagger(const Mat& a);
Mat commutator(const Mat& a, const Mat& b);
Mat anticommutator(const Mat& a, const Mat& b);

// Re Tr(rho * obs); throws ConfigError on dimension mismatch.
double expect(const Mat& rho, const Mat& obs);

bool is_hermitian(const Mat& a, double tol = 1e-12);
void hermitize(Mat& a);

// Trace out subsystem `which` (1 or 2) of a (da x db) bipartite state.
Mat partial_trace(const Mat& rho, int which, int da, int db);

}  // namespace snsim
