#include "hhf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hhf {

namespace {

// Below this |omega| a momentum is treated as a zero mode.
constexpr double kZeroModeTol = 1e-12;

}  // namespace

TorusLattice::TorusLattice(int d, int L, std::size_t entry_cap) : d_(d), L_(L), volume_(1) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (L < 4 || L % 4 != 0) throw std::invalid_argument("L must be a multiple of 4");
  for (int i = 0; i < d; ++i) {
    if (volume_ > entry_cap / static_cast<std::size_t>(L))
      throw std::invalid_argument("lattice exceeds the configured size cap");
    volume_ *= static_cast<std::size_t>(L);
  }
  if (static_cast<std::size_t>(d) * volume_ > entry_cap)
    throw std::invalid_argument("lattice exceeds the configured size cap");

  const auto n = static_cast<std::size_t>(L);
  cos_table_.assign(n, 0.0);
  for (std::size_t k = 0; k <= n / 4; ++k)
    cos_table_[k] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
  cos_table_[n / 4] = 0.0;
  for (std::size_t k = n / 4 + 1; k <= n / 2; ++k) cos_table_[k] = -cos_table_[n / 2 - k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) cos_table_[k] = cos_table_[n - k];

  coords_.resize(volume_ * static_cast<std::size_t>(d));
  angles_.resize(coords_.size());
  std::vector<int> t(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < volume_; ++i) {
    for (int a = 0; a < d; ++a) {
      const auto p = i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a);
      coords_[p] = t[static_cast<std::size_t>(a)];
      angles_[p] = 2.0 * std::numbers::pi * t[static_cast<std::size_t>(a)] / L;
    }
    // last coordinate runs fastest: lexicographic order
    for (int a = d - 1; a >= 0; --a) {
      if (++t[static_cast<std::size_t>(a)] < L) break;
      t[static_cast<std::size_t>(a)] = 0;
    }
  }
}

std::size_t TorusLattice::index_of(std::span<const int> tuple) const {
  std::size_t i = 0;
  for (int v : tuple) i = i * static_cast<std::size_t>(L_) + static_cast<std::size_t>(((v % L_) + L_) % L_);
  return i;
}

TorusLattice build_torus(int d, int L, std::size_t entry_cap) { return TorusLattice(d, L, entry_cap); }

double dispersion(const TorusLattice& lat, std::size_t k) {
  double w = 0.0;
  for (int n : lat.momentum(k)) w -= lat.cosine(n);
  return w;
}

std::vector<double> dispersion_table(const TorusLattice& lat) {
  std::vector<double> w(lat.volume());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = dispersion(lat, k);
  return w;
}

int gauge_sign(const TorusLattice& lat, std::size_t x) {
  int s = 0;
  for (int c : lat.site(x)) s += c;
  return (s % 2 == 0) ? 1 : -1;
}

std::size_t shift_by_pi(const TorusLattice& lat, std::size_t k) {
  std::vector<int> t(lat.momentum(k).begin(), lat.momentum(k).end());
  for (int& v : t) v += lat.length() / 2;
  return lat.index_of(t);
}

std::size_t translate(const TorusLattice& lat, std::size_t x, std::span<const int> by) {
  std::vector<int> t(lat.site(x).begin(), lat.site(x).end());
  for (std::size_t a = 0; a < t.size(); ++a) t[a] += by[a];
  return lat.index_of(t);
}

int torus_distance(const TorusLattice& lat, std::size_t x, std::size_t y) {
  const auto a = lat.site(x);
  const auto b = lat.site(y);
  int dist = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int diff = std::abs(a[i] - b[i]);
    dist += std::min(diff, lat.length() - diff);
  }
  return dist;
}

std::vector<std::size_t> neighbours(const TorusLattice& lat, std::size_t x) {
  std::vector<std::size_t> out;
  out.reserve(2 * static_cast<std::size_t>(lat.dim()));
  std::vector<int> step(static_cast<std::size_t>(lat.dim()), 0);
  for (int a = 0; a < lat.dim(); ++a) {
    for (int s : {+1, -1}) {
      step[static_cast<std::size_t>(a)] = s;
      out.push_back(translate(lat, x, step));
    }
    step[static_cast<std::size_t>(a)] = 0;
  }
  return out;
}

MomentumPartition momentum_partition(const TorusLattice& lat) {
  MomentumPartition part;
  const auto n = lat.volume();
  part.side.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = dispersion(lat, k);
    if (w > kZeroModeTol) {
      part.side[k] = 1;
    } else if (w < -kZeroModeTol) {
      part.side[k] = -1;
    } else {
      // zero mode: the lexicographically smaller member of {xi, xi + pi} goes to plus
      part.side[k] = (k < shift_by_pi(lat, k)) ? 1 : -1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (part.side[k] > 0) {
      part.plus.push_back(k);
      part.pairing.push_back(shift_by_pi(lat, k));
    } else {
      part.minus.push_back(k);
    }
  }
  for (std::size_t i = 0; i < part.plus.size(); ++i) {
    if (part.side[part.pairing[i]] != -1)
      throw std::logic_error("momentum partition is not closed under xi -> xi + pi");
  }
  return part;
}

}  // namespace hhf
