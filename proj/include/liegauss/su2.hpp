#pragma once

#include <array>

#include "liegauss/linalg.hpp"
#include "liegauss/rng.hpp"

namespace liegauss::su2 {

enum class Spin { Half, One };

inline int dimension(Spin s) { return s == Spin::Half ? 2 : 3; }

/// z-y-z Euler angles. normalized() reduces beta to [0, pi] and alpha, gamma
/// to [0, 2*pi); raw angles from sampling may exceed these ranges.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  EulerAngles normalized() const;
};

/// Angular-momentum generators (Lx, Ly, Lz). For Spin::Half these are the
/// Pauli matrices over two; for Spin::One the basis is ordered m = +1, 0, -1.
/// They satisfy [Lx, Ly] = i Lz cyclically.
std::array<Mat, 3> generators(Spin s);

/// Rotation matrix D(g) = Rz(alpha) Ry(beta) Rz(gamma) in the given
/// representation.
Mat wigner_d(Spin s, const EulerAngles& g);

/// exp(-i n . L) in closed form (Rodrigues-type for both representations).
Mat exp_map(const Vec3& n, Spin s);

/// One tangent-space step drawn from N(mean, covariance).
Vec3 sample_step(const Mat3& covariance, const Vec3& mean, rng::Philox& gen);

/// Group element distributed per the normalized invariant (Haar) measure,
/// density sin(beta) with alpha in [0, 2*pi) and gamma in [0, 4*pi) (double
/// cover; required so the mean of D^{(1/2)} vanishes).
EulerAngles haar_sample(rng::Philox& gen);

}  // namespace liegauss::su2
