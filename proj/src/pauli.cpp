#include "liegauss/pauli.hpp"

#include <array>
#include <stdexcept>

namespace liegauss {

const Mat& pauli(int i) {
  static const std::array<Mat, 4> sigma = [] {
    std::array<Mat, 4> s;
    for (auto& m : s) m.resize(2, 2);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, cxd(0, -1), cxd(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  if (i < 0 || i > 3) throw std::invalid_argument("pauli: index out of range");
  return sigma[static_cast<size_t>(i)];
}

Mat pauli2(int j, int k) { return linalg::kron(pauli(j), pauli(k)); }

}  // namespace liegauss
