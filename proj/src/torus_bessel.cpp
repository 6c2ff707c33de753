#include "bkk/torus_bessel.hpp"

#include <stdexcept>
#include <string>

namespace bkk {

WeightSet::WeightSet(RootDatum rd_, std::vector<IntVec> w) : rd(std::move(rd_)), weights(std::move(w)) {
  if (weights.empty()) throw std::invalid_argument("weight set must contain at least one cocharacter");
  for (const auto& lam : weights) {
    if (static_cast<int>(lam.size()) != rd.rank) {
      throw std::invalid_argument("weight of length " + std::to_string(lam.size()) + " does not match rank " + std::to_string(rd.rank));
    }
  }
}

int64_t TorusGrid::size() const {
  int64_t s = 1;
  for (int i = 0; i < n; ++i) s *= q - 1;
  return s;
}

IntVec TorusGrid::point(int64_t index) const {
  IntVec e(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    e[i] = index % (q - 1);
    index /= q - 1;
  }
  return e;
}

int64_t TorusGrid::index(const IntVec& e) const {
  int64_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * (q - 1) + mod_floor(e[i], q - 1);
  return idx;
}

TorusBessel bessel_on_torus(const WeightSet& w, int root_index, int q, int64_t budget) {
  auto f = FiniteField::get(q, 1);
  const int r = w.r();
  const int n = w.n();
  const int m = q - 1;
  __int128 total = 1;
  for (int i = 0; i < r; ++i) {
    total *= m;
    if (total > budget) {
      throw BudgetExceeded("torus enumeration of (q-1)^" + std::to_string(r) + " points exceeds budget " + std::to_string(budget));
    }
  }
  TorusBessel tb;
  tb.grid = TorusGrid{q, n};
  tb.root_index = static_cast<int>(mod_floor(root_index, q));
  tb.r = r;
  tb.counts.assign(static_cast<size_t>(tb.grid.size()) * q, 0);

  // Odometer over generator exponents (j_1, ..., j_r), last coordinate fastest.
  std::vector<int> j(r, 0);
  std::vector<int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * m;
  while (true) {
    int64_t point = 0;
    for (int c = 0; c < n; ++c) {
      int64_t e = 0;
      for (int i = 0; i < r; ++i) e += w.weights[i][c] * j[i];
      point += mod_floor(e, m) * stride[c];
    }
    int sum = 0;
    for (int i = 0; i < r; ++i) sum += f->exp(j[i]);
    tb.counts[static_cast<size_t>(point) * q + sum % q] += 1;
    int i = r - 1;
    while (i >= 0 && ++j[i] == m) j[i--] = 0;
    if (i < 0) break;
  }
  return tb;
}

}  // namespace bkk
