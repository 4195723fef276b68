#pragma once

#include "liegauss/linalg.hpp"

namespace liegauss {

/// sigma_0 .. sigma_3 (identity, x, y, z).
const Mat& pauli(int i);

/// sigma_j (x) sigma_k, 4x4.
Mat pauli2(int j, int k);

}  // namespace liegauss
