#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bkk {

using IntVec = std::vector<int64_t>;
/// Square integer matrix, row-major.
struct IntMat {
  int n = 0;
  std::vector<int64_t> a;

  static IntMat identity(int n);
  int64_t operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  int64_t& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  IntMat operator*(const IntMat& o) const;
  IntVec apply(const IntVec& v) const;
  IntMat transpose() const;
  /// Inverse of a unimodular matrix.
  IntMat inverse() const;
  bool operator==(const IntMat& o) const { return n == o.n && a == o.a; }
  bool operator<(const IntMat& o) const { return a < o.a; }
};

enum class Preset { GL1, GL2, GL3, SL2 };

std::string preset_name(Preset p);
Preset parse_preset(const std::string& s);

/// A root datum of one of the preset groups. Weyl elements act on the cocharacter lattice X_*
/// by integer matrices; on characters by the inverse transpose.
struct RootDatum {
  Preset preset;
  int rank = 0;
  std::vector<IntVec> roots;     // positive roots in X^*
  std::vector<IntVec> coroots;   // matching coroots in X_*
  std::vector<int> simple;       // indices into roots of the simple roots

  static RootDatum make(Preset p);

  int64_t pairing(const IntVec& character, const IntVec& cocharacter) const;
  /// Reflection s_alpha on X_* for root index i.
  IntMat reflection(int i) const;
  IntMat simple_reflection(int j) const { return reflection(simple[j]); }
};

/// An element of W, stored with its matrix on X_* and a reduced word in the simple reflections.
struct WeylElement {
  IntMat cochar;           // action on X_*
  IntMat character;        // action on X^* (inverse transpose)
  std::vector<int> word;   // simple reflection indices, applied right to left
  int sign = 1;            // (-1)^length

  IntVec act_cochar(const IntVec& v) const { return cochar.apply(v); }
  IntVec act_character(const IntVec& m) const { return character.apply(m); }
};

/// All Weyl group elements, identity first, then by increasing word length (BFS order).
std::vector<WeylElement> weyl_elements(const RootDatum& rd);
/// Index of the product a*b in the list.
int weyl_multiply(const std::vector<WeylElement>& w, int a, int b);
int weyl_inverse(const std::vector<WeylElement>& w, int a);
int weyl_find(const std::vector<WeylElement>& w, const IntMat& cochar);

/// Character of T(F_q) given by an exponent vector mod q-1 on the cocharacter basis.
struct TorusCharacter {
  int q = 0;
  IntVec m;

  TorusCharacter() = default;
  TorusCharacter(int q_, IntVec m_);
  bool operator==(const TorusCharacter& o) const { return q == o.q && m == o.m; }
  bool operator<(const TorusCharacter& o) const { return m < o.m; }
  TorusCharacter inverse() const;
  TorusCharacter operator*(const TorusCharacter& o) const;
  std::string to_string() const;
};

TorusCharacter act(const WeylElement& w, const TorusCharacter& chi);

/// W'_chi (full stabilizer) and W_chi (generated by reflections s_alpha with chi o coroot trivial),
/// as sorted index lists into weyl_elements(rd).
struct StabilizerPair {
  std::vector<int> full;
  std::vector<int> reflection;
};

StabilizerPair stabilizers(const RootDatum& rd, const std::vector<WeylElement>& w, const TorusCharacter& chi);
std::vector<TorusCharacter> orbit(const std::vector<WeylElement>& w, const TorusCharacter& chi);
/// All characters of T(F_q) in lexicographic exponent order.
std::vector<TorusCharacter> all_characters(int rank, int q);
/// Subgroup generated by the given element indices.
std::vector<int> generated_subgroup(const std::vector<WeylElement>& w, const std::vector<int>& gens);

}  // namespace bkk
