#pragma once

#include "gpsp/block_linalg.hpp"

#include <cmath>

namespace gpsp::examples {

// Two small systems that exhibit the criterion differences. The first makes
// IPC and SPC rank the blocks differently; the second makes RCC and RMC keep
// different blocks once the observation is perturbed.

/// 3x6 system, G = 3 blocks of 2 columns. Block 0 contains the target in its
/// span; block 1 wins under IPC anyway because its columns crowd the large
/// coordinate of d.
inline BlockMatrix inclusion_contrast_system() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix a(3, 6);
  a << s, 0, s, 0, 1, 0,
       0, 1, s, 1, 0, 0,
       s, 0, 0, 0, 0, 1;
  return BlockMatrix(a, 3, 2);
}

inline Vector inclusion_contrast_target() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector d(3);
  d << s, 4.0, s;
  return d;
}

/// 4x4 system, G = 2 blocks of 2 columns. Block 0 spans the clean
/// observation; block 1's second column is nearly parallel to its first, so
/// fitting a perturbation along e4 requires huge coefficients.
inline BlockMatrix exclusion_contrast_system() {
  const double r = std::sqrt(101.0);
  Matrix a(4, 4);
  a << 1, 0, 0, 0,
       0, 1, 0, 0,
       0, 0, 1, 10.0 / r,
       0, 0, 0, 1.0 / r;
  return BlockMatrix(a, 2, 2);
}

inline Vector exclusion_contrast_clean() {
  Vector y(4);
  y << 1, 1, 0, 0;
  return y;
}

inline Vector exclusion_contrast_perturbed() {
  Vector y(4);
  y << 1, 1, 0, 0.1;
  return y;
}

}  // namespace gpsp::examples
