#include "bkk/rootdata.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bkk/scalar.hpp"

namespace bkk {

IntMat IntMat::identity(int n) {
  IntMat m{n, std::vector<int64_t>(static_cast<size_t>(n) * n, 0)};
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMat IntMat::operator*(const IntMat& o) const {
  IntMat r{n, std::vector<int64_t>(a.size(), 0)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) r(i, j) += (*this)(i, k) * o(k, j);
  return r;
}

IntVec IntMat::apply(const IntVec& v) const {
  IntVec r(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

IntMat IntMat::transpose() const {
  IntMat r{n, a};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = (*this)(j, i);
  return r;
}

IntMat IntMat::inverse() const {
  // Weyl matrices have finite order; the inverse is the last power before the identity.
  IntMat id = identity(n);
  IntMat prev = id;
  IntMat cur = *this;
  for (int k = 0; k < 64; ++k) {
    if (cur == id) return prev;
    prev = cur;
    cur = cur * *this;
  }
  throw std::logic_error("bkk: matrix is not of finite order");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::GL1: return "gl1";
    case Preset::GL2: return "gl2";
    case Preset::GL3: return "gl3";
    case Preset::SL2: return "sl2";
  }
  return "?";
}

Preset parse_preset(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "gl1") return Preset::GL1;
  if (t == "gl2") return Preset::GL2;
  if (t == "gl3") return Preset::GL3;
  if (t == "sl2") return Preset::SL2;
  throw std::invalid_argument("unknown group preset '" + s + "'");
}

RootDatum RootDatum::make(Preset p) {
  RootDatum rd;
  rd.preset = p;
  switch (p) {
    case Preset::GL1:
      rd.rank = 1;
      break;
    case Preset::GL2:
      rd.rank = 2;
      rd.roots = {{1, -1}};
      rd.coroots = {{1, -1}};
      rd.simple = {0};
      break;
    case Preset::GL3:
      rd.rank = 3;
      rd.roots = {{1, -1, 0}, {0, 1, -1}, {1, 0, -1}};
      rd.coroots = rd.roots;
      rd.simple = {0, 1};
      break;
    case Preset::SL2:
      rd.rank = 1;
      rd.roots = {{2}};
      rd.coroots = {{1}};
      rd.simple = {0};
      break;
  }
  return rd;
}

int64_t RootDatum::pairing(const IntVec& character, const IntVec& cocharacter) const {
  int64_t s = 0;
  for (int i = 0; i < rank; ++i) s += character[i] * cocharacter[i];
  return s;
}

IntMat RootDatum::reflection(int i) const {
  // s(v) = v - <alpha, v> coroot, so the matrix is I - coroot alpha^T.
  IntMat m = IntMat::identity(rank);
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < rank; ++c) m(r, c) -= coroots[i][r] * roots[i][c];
  return m;
}

std::vector<WeylElement> weyl_elements(const RootDatum& rd) {
  std::vector<WeylElement> out;
  IntMat id = IntMat::identity(rd.rank);
  out.push_back({id, id, {}, 1});
  std::set<std::vector<int64_t>> seen{id.a};
  std::deque<size_t> queue{0};
  while (!queue.empty()) {
    size_t cur = queue.front();
    queue.pop_front();
    for (int j = 0; j < static_cast<int>(rd.simple.size()); ++j) {
      IntMat m = rd.simple_reflection(j) * out[cur].cochar;
      if (!seen.insert(m.a).second) continue;
      WeylElement e;
      e.cochar = m;
      e.character = m.inverse().transpose();
      e.word = out[cur].word;
      e.word.insert(e.word.begin(), j);
      e.sign = -out[cur].sign;
      out.push_back(e);
      queue.push_back(out.size() - 1);
    }
  }
  return out;
}

int weyl_find(const std::vector<WeylElement>& w, const IntMat& cochar) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].cochar == cochar) return static_cast<int>(i);
  }
  throw std::logic_error("bkk: matrix is not a Weyl element");
}

int weyl_multiply(const std::vector<WeylElement>& w, int a, int b) { return weyl_find(w, w[a].cochar * w[b].cochar); }

int weyl_inverse(const std::vector<WeylElement>& w, int a) { return weyl_find(w, w[a].cochar.inverse()); }

TorusCharacter::TorusCharacter(int q_, IntVec m_) : q(q_), m(std::move(m_)) {
  for (auto& x : m) x = mod_floor(x, q - 1);
}

TorusCharacter TorusCharacter::inverse() const {
  IntVec r = m;
  for (auto& x : r) x = -x;
  return TorusCharacter(q, r);
}

TorusCharacter TorusCharacter::operator*(const TorusCharacter& o) const {
  IntVec r = m;
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.m[i];
  return TorusCharacter(q, r);
}

std::string TorusCharacter::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ")";
  return os.str();
}

TorusCharacter act(const WeylElement& w, const TorusCharacter& chi) { return TorusCharacter(chi.q, w.act_character(chi.m)); }

std::vector<int> generated_subgroup(const std::vector<WeylElement>& w, const std::vector<int>& gens) {
  std::set<int> group{0};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(group.begin(), group.end());
    for (int a : cur) {
      for (int g : gens) {
        if (group.insert(weyl_multiply(w, a, g)).second) grew = true;
      }
    }
  }
  return {group.begin(), group.end()};
}

StabilizerPair stabilizers(const RootDatum& rd, const std::vector<WeylElement>& w, const TorusCharacter& chi) {
  StabilizerPair out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (act(w[i], chi) == chi) out.full.push_back(static_cast<int>(i));
  }
  std::vector<int> gens;
  for (size_t r = 0; r < rd.roots.size(); ++r) {
    if (mod_floor(rd.pairing(chi.m, rd.coroots[r]), chi.q - 1) == 0) gens.push_back(weyl_find(w, rd.reflection(static_cast<int>(r))));
  }
  out.reflection = generated_subgroup(w, gens);
  return out;
}

std::vector<TorusCharacter> orbit(const std::vector<WeylElement>& w, const TorusCharacter& chi) {
  std::vector<TorusCharacter> out;
  for (const auto& e : w) {
    auto c = act(e, chi);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

std::vector<TorusCharacter> all_characters(int rank, int q) {
  std::vector<TorusCharacter> out;
  IntVec m(rank, 0);
  while (true) {
    out.emplace_back(q, m);
    int i = rank - 1;
    while (i >= 0 && ++m[i] == q - 1) m[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace bkk
