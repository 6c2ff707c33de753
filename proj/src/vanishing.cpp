#include "bkk/vanishing.hpp"

namespace bkk {

std::vector<CosetRep> coset_representatives(const FiniteField& f) {
  std::vector<CosetRep> out;
  const int n = f.size();
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      if (a == 0 && c == 0) continue;
      for (int y = 1; y < n; ++y) {
        if (c != 0) {
          out.push_back({Mat2{a, y, c, 0}, false});
        } else {
          out.push_back({Mat2{a, 0, 0, y}, true});
        }
      }
    }
  }
  return out;
}

size_t coset_index(const FiniteField& f, const Mat2& g) {
  const int n = f.size();
  // Right multiplication by [[1, x], [0, 1]] adds x * (first column) to the second column.
  FiniteField::Elem y;
  if (g.c != 0) {
    auto x = f.neg(f.mul(g.d, f.inv(g.c)));
    y = f.add(g.b, f.mul(x, g.a));
  } else {
    y = g.d;
  }
  return (static_cast<size_t>(g.a) * n + g.c - 1) * (n - 1) + (y - 1);
}

}  // namespace bkk
