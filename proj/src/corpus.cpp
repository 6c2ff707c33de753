#include "bkk/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace bkk {

namespace {

struct Ideal {
  std::string name;
  std::vector<Poly> gens;
  bool weyl_stable;  // stable under the full Weyl group of the preset of matching rank
};

Poly mono(std::vector<int> e, int64_t c = 1) { return poly_monomial(Monomial(std::move(e)), Rational(c)); }

std::vector<Ideal> ideals_for_rank(int n) {
  if (n == 1) {
    return {{"(x)", {mono({1})}, true}, {"(x^2)", {mono({2})}, true}, {"(x^3)", {mono({3})}, true}};
  }
  const Poly x1 = mono({1, 0}), x2 = mono({0, 1});
  const Poly sum = poly_add(x1, x2), diff = poly_add(x1, x2, Rational(-1));
  return {
      {"(x1,x2)", {x1, x2}, true},
      {"(x1+x2,x1x2)", {sum, mono({1, 1})}, true},
      {"(x1,x2)^2", {mono({2, 0}), mono({1, 1}), mono({0, 2})}, true},
      {"(x1-x2,(x1+x2)^2)", {diff, poly_mul(sum, sum)}, true},
      {"(x1+x2,x1^3)", {sum, mono({3, 0})}, true},
      {"(x1,x2^2)", {x1, mono({0, 2})}, false},
      {"(x1^2,x2)", {mono({2, 0}), x2}, false},
  };
}

std::string point_name(const TorusCharacter& c) { return c.to_string(); }

}  // namespace

std::vector<TorusCharacter> orbit_representatives(const RootDatum& rd, int q) {
  auto W = weyl_elements(rd);
  std::vector<TorusCharacter> reps;
  std::set<IntVec> seen;
  for (const auto& chi : all_characters(rd.rank, q)) {
    if (seen.count(chi.m)) continue;
    auto orb = orbit(W, chi);
    for (const auto& o : orb) seen.insert(o.m);
    reps.push_back(chi);
  }
  return reps;
}

std::vector<CorpusEntry> generate_corpus(uint64_t seed, size_t min_size) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  const std::vector<std::pair<Preset, int>> settings = {
      {Preset::GL1, 5}, {Preset::SL2, 3}, {Preset::SL2, 5}, {Preset::SL2, 7}, {Preset::GL2, 3}, {Preset::GL2, 5}};
  for (const auto& [preset, q] : settings) {
    RootDatum rd = RootDatum::make(preset);
    auto W = weyl_elements(rd);
    const std::string tag = preset_name(preset) + "/q" + std::to_string(q) + " ";
    for (const auto& chi : orbit_representatives(rd, q)) {
      MellinModule e = build_E_theta(rd, chi);
      out.push_back({tag + "E_theta " + chi.to_string(), e});
      MellinModule u = e;
      u.sign_twisted = false;
      out.push_back({tag + "E_theta untwisted " + chi.to_string(), u});
    }
    std::vector<int> all(W.size());
    for (size_t i = 0; i < W.size(); ++i) all[i] = static_cast<int>(i);
    const auto ideals = ideals_for_rank(rd.rank);
    for (const auto& c : all_characters(rd.rank, q)) {
      auto st = stabilizers(rd, W, c);
      if (st.full.size() != W.size()) continue;
      for (const auto& id : ideals) {
        if (!id.weyl_stable) continue;
        GradedQuotient a(rd.rank, id.gens);
        for (int eps = 0; eps < 2; ++eps)
          for (int tw = 0; tw < 2; ++tw) {
            if (W.size() == 1 && eps == 1) continue;
            out.push_back({tag + "quotient " + id.name + " at " + point_name(c) + (eps ? " sign" : " triv") + (tw ? " twisted" : ""),
                           quotient_module(rd, q, c, all, a, eps == 1, tw == 1)});
          }
      }
    }
    if (W.size() > 1) {
      auto chars = all_characters(rd.rank, q);
      for (int k = 0; k < 6; ++k) {
        const auto& c = chars[std::uniform_int_distribution<size_t>(0, chars.size() - 1)(rng)];
        const auto& id = ideals[std::uniform_int_distribution<size_t>(0, ideals.size() - 1)(rng)];
        GradedQuotient a(rd.rank, id.gens);
        if (a.dim() * static_cast<int>(W.size()) > 6) continue;
        bool tw = rng() & 1u;
        out.push_back({tag + "induced " + id.name + " at " + point_name(c) + (tw ? " twisted" : ""),
                       quotient_module(rd, q, c, {0}, a, false, tw)});
      }
    }
  }
  // Direct sums of random pairs sharing a torus.
  const size_t base = out.size();
  for (int k = 0; k < 40; ++k) {
    const auto& a = out[std::uniform_int_distribution<size_t>(0, base - 1)(rng)];
    const auto& b = out[std::uniform_int_distribution<size_t>(0, base - 1)(rng)];
    if (a.module.q != b.module.q || a.module.rd.preset != b.module.rd.preset) continue;
    if (a.module.dim + b.module.dim > 6) continue;
    out.push_back({"sum[" + a.name + " | " + b.name + "]", direct_sum(a.module, b.module)});
  }
  // Random changes of basis by unit triangular integer matrices.
  const size_t total = out.size();
  std::uniform_int_distribution<int> coef(-1, 1);
  for (size_t i = 0; i < total; i += 3) {
    const MellinModule& m = out[i].module;
    if (m.dim < 2) continue;
    Matrix p = Matrix::identity(m.field, m.dim);
    for (int r = 0; r < m.dim; ++r)
      for (int c = r + 1; c < m.dim; ++c) p(r, c) = Cyclotomic(m.field, Rational(coef(rng)));
    out.push_back({"rebased[" + out[i].name + "]", change_basis(m, p.transpose() * p)});
  }
  if (out.size() < min_size) throw std::logic_error("bkk: corpus smaller than requested");
  return out;
}

}  // namespace bkk
