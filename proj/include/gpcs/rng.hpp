#ifndef GPCS_RNG_HPP
#define GPCS_RNG_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace gpcs {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates consecutive seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream seed for one replication (or one salted sub-stream).
// Derived by hashing, so results do not depend on evaluation order or on
// how replications are distributed over workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 1));
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

inline Eigen::VectorXd standard_normal_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> uniform(lo, hi);
  return uniform(rng);
}

}  // namespace gpcs

#endif  // GPCS_RNG_HPP
