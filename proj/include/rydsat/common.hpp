#pragma once

// Shared small types and conventions.
//
// Unit convention used across the library: every frequency-like quantity in a
// public interface is a plain frequency nu in MHz (the quantity divided by
// 2*pi).  Simulation kernels convert to angular units (rad/us) internally.
// Times are in microseconds, distances in micrometers.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydsat {

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return {x / n, y / n, z / n};
  }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Rotates p about the axis through `origin` with unit direction `axis` by
// `angle` radians (right-handed).
inline Vec3 rotate_about_axis(const Vec3& p, const Vec3& origin, const Vec3& axis,
                              double angle) {
  Vec3 v = p - origin;
  double c = std::cos(angle), s = std::sin(angle);
  Vec3 r = v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
  return origin + r;
}

// Basis-state conventions for n two-level atoms:
//  - atom i occupies bit i of the basis index (atom 0 is the least
//    significant bit),
//  - bitstrings written as text put atom 0 leftmost,
//  - bit value 1 means the Rydberg (excited) state.
using BasisIndex = std::uint64_t;

inline bool bit_of(BasisIndex s, int atom) { return (s >> atom) & 1u; }

inline std::string to_bitstring(BasisIndex s, int n_atoms) {
  std::string out(static_cast<size_t>(n_atoms), '0');
  for (int i = 0; i < n_atoms; ++i)
    if (bit_of(s, i)) out[static_cast<size_t>(i)] = '1';
  return out;
}

inline BasisIndex from_bitstring(const std::string& bits) {
  if (bits.size() > 63) throw std::invalid_argument("from_bitstring: too many atoms");
  BasisIndex s = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') s |= BasisIndex{1} << i;
    else if (bits[i] != '0') throw std::invalid_argument("from_bitstring: not a 01 string");
  }
  return s;
}

inline int popcount64(std::uint64_t v) { return __builtin_popcountll(v); }

}  // namespace rydsat
