#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "condembed/lu.hpp"
#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"

namespace condembed {

/// Dense matrix exponential by scaling and squaring with the degree-13
/// diagonal Pade approximant. The input is halved until its infinity norm
/// drops below the degree-13 accuracy threshold, the approximant is
/// evaluated with an LU solve, and the result is squared back up.
inline Matrix expm(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("expm: matrix must be square");
  if (!all_finite(m)) throw std::domain_error("expm: non-finite entry");

  static constexpr double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const std::size_t n = m.rows();
  const double norm = max_row_sum_norm(m);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));

  const Matrix a = std::ldexp(1.0, -squarings) * m;
  const Matrix identity = Matrix::identity(n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                         (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * identity);
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                   (b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * identity);

  Matrix result = LUDecomposition::compute(v - u).solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// How far exp(Q) is from reproducing P, in the maximum absolute row sum
/// norm.
inline double norm_gap(const StochasticMatrix& P, const IntensityMatrix& Q) {
  if (P.n() != Q.n()) throw std::invalid_argument("norm_gap: dimension mismatch");
  return max_row_sum_norm(P.matrix() - expm(Q.matrix()));
}

}  // namespace condembed
