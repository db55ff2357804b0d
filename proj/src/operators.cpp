#include "snsim/operators.hpp"

namespace snsim {

Mat kron(const Mat& a, const Mat& b) {
  const long am = a.rows(), an = a.cols();
  const long bm = b.rows(), bn = b.cols();
  Mat out(am * bm, an * bn);
  for (long i = 0; i < am; ++i)
    for (long j = 0; j < an; ++j) out.block(i * bm, j * bn, bm, bn) = a(i, j) * b;
  return out;
}

Mat dagger(const Mat& a) { return a.adjoint(); }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

double expect(const Mat& rho, const Mat& obs) {
  if (rho.rows() != rho.cols() || obs.rows() != obs.cols() || rho.rows() != obs.rows())
    throw ConfigError("dimension mismatch between state and observable", "expect");
  return (rho * obs).trace().real();
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void hermitize(Mat& a) {
  Mat ad = a.adjoint();
  a = 0.5 * (a + ad);
}

Mat partial_trace(const Mat& rho, int which, int da, int db) {
  if (rho.rows() != rho.cols() || rho.rows() != long(da) * db)
    throw ConfigError("state dimension does not factor as da*db", "partial_trace");
  if (which == 1) {
    Mat out = Mat::Zero(db, db);
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp) out(b, bp) += rho(a * db + b, a * db + bp);
    return out;
  }
  if (which == 2) {
    Mat out = Mat::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap)
        for (int b = 0; b < db; ++b) out(a, ap) += rho(a * db + b, ap * db + b);
    return out;
  }
  throw ConfigError("subsystem index must be 1 or 2", "partial_trace");
}

}  // namespace snsim
