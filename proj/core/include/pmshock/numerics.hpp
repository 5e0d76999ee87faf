#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace pmshock {

// u^m for the diffusion nonlinearity. Called once per cell per step, so the
// common rational exponents get sqrt/cbrt forms instead of pow.
class PowM {
public:
  explicit PowM(double m) : m_(m) {
    const double eps = 1e-14;
    if (std::abs(m - 1.0) < eps)
      kind_ = Kind::linear;
    else if (std::abs(m - 1.25) < eps)
      kind_ = Kind::five_fourths;
    else if (std::abs(m - 4.0 / 3.0) < eps)
      kind_ = Kind::four_thirds;
    else if (std::abs(m - 1.5) < eps)
      kind_ = Kind::three_halves;
    else
      kind_ = Kind::general;
  }

  double operator()(double u) const {
    switch (kind_) {
      case Kind::linear: return u;
      case Kind::five_fourths: return u * std::sqrt(std::sqrt(u));
      case Kind::four_thirds: return u * std::cbrt(u);
      case Kind::three_halves: return u * std::sqrt(u);
      default: return std::pow(u, m_);
    }
  }

  double exponent() const { return m_; }

private:
  enum class Kind { linear, five_fourths, four_thirds, three_halves, general };
  Kind kind_;
  double m_;
};

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-task seed derived from a master seed and a task tag.
inline uint64_t derive_seed(uint64_t master, uint64_t tag) {
  uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  return splitmix64(s);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pmshock
