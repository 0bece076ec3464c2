#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cbp/error.hpp"

namespace cbp {

/// Square tridiagonal matrix of dimension d: diag has d entries, sub/super
/// have d-1 (sub[i] sits at row i+1, super[i] at row i).
struct Tridiagonal {
  std::vector<double> sub, diag, super;

  std::size_t dim() const { return diag.size(); }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    if (j + 1 == i) return sub[j];
    if (i + 1 == j) return super[i];
    return 0.0;
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    const std::size_t d = dim();
    std::vector<double> y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += sub[i - 1] * x[i - 1];
      if (i + 1 < d) y[i] += super[i] * x[i + 1];
    }
    return y;
  }

  std::vector<double> dense_row_major() const {
    const std::size_t d = dim();
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m[i * d + j] = at(i, j);
    return m;
  }
};

/// Thomas algorithm. The reflection matrices here are nonsingular M-matrices,
/// so elimination without pivoting is stable; a vanishing pivot is reported
/// as Errc::Singular.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::vector<double> rhs) {
  const std::size_t d = m.dim();
  if (rhs.size() != d) throw Error(Errc::MismatchedShapes, "rhs size != matrix dim");
  if (d == 0) return rhs;
  std::vector<double> c(d > 1 ? d - 1 : 0);
  double piv = m.diag[0];
  if (std::abs(piv) < 1e-300) throw Error(Errc::Singular, "zero pivot at row 1");
  if (d > 1) c[0] = m.super[0] / piv;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < d; ++i) {
    piv = m.diag[i] - m.sub[i - 1] * c[i - 1];
    if (std::abs(piv) < 1e-300)
      throw Error(Errc::Singular, "zero pivot at row " + std::to_string(i + 1));
    if (i + 1 < d) c[i] = m.super[i] / piv;
    rhs[i] = (rhs[i] - m.sub[i - 1] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = d - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace cbp
