#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hhf {

// Discrete torus Z_L^d together with its dual lattice. Sites and momenta
// share the same lexicographic enumeration of integer tuples in {0..L-1}^d;
// a momentum tuple n stands for the angle 2*pi*n/L.
class TorusLattice {
 public:
  static constexpr std::size_t kDefaultEntryCap = std::size_t{1} << 24;

  TorusLattice(int d, int L, std::size_t entry_cap = kDefaultEntryCap);

  int dim() const { return d_; }
  int length() const { return L_; }
  std::size_t volume() const { return volume_; }

  std::span<const int> site(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  // Momentum tuples coincide with site tuples; kept separate for readability.
  std::span<const int> momentum(std::size_t k) const { return site(k); }
  std::span<const double> angles(std::size_t k) const {
    return {angles_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }

  std::size_t index_of(std::span<const int> tuple) const;

  // cos(2*pi*n/L) with the symmetries cos(n + L/2) = -cos(n) and
  // cos(L - n) = cos(n) imposed exactly.
  double cosine(int n) const { return cos_table_[static_cast<std::size_t>(n)]; }

 private:
  int d_;
  int L_;
  std::size_t volume_;
  std::vector<int> coords_;
  std::vector<double> angles_;
  std::vector<double> cos_table_;
};

struct MomentumPartition {
  std::vector<std::size_t> plus;     // ascending momentum indices
  std::vector<std::size_t> minus;    // ascending momentum indices
  std::vector<std::size_t> pairing;  // pairing[i] = index of plus[i] + pi
  std::vector<signed char> side;     // +1 / -1 per momentum index
};

TorusLattice build_torus(int d, int L, std::size_t entry_cap = TorusLattice::kDefaultEntryCap);

// omega_xi = -sum_nu cos(xi_nu)
double dispersion(const TorusLattice& lat, std::size_t k);
std::vector<double> dispersion_table(const TorusLattice& lat);

// (-1)^(x_1 + ... + x_d)
int gauge_sign(const TorusLattice& lat, std::size_t x);

// Index of xi + (pi,...,pi): shift every coordinate by L/2.
std::size_t shift_by_pi(const TorusLattice& lat, std::size_t k);

// Translate a site index by a lattice vector (componentwise mod L).
std::size_t translate(const TorusLattice& lat, std::size_t x, std::span<const int> by);

// l1 distance with the minimum-image convention.
int torus_distance(const TorusLattice& lat, std::size_t x, std::size_t y);

// Nearest neighbours of x, two per direction.
std::vector<std::size_t> neighbours(const TorusLattice& lat, std::size_t x);

MomentumPartition momentum_partition(const TorusLattice& lat);

}  // namespace hhf
