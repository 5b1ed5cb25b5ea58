#pragma once

// Test-side oracles that share no code with the library: machine-integer Smith reduction,
// homology from boundary ranks, and explicit small resolutions.

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<long long>>;

inline Mat zeros(size_t r, size_t c) { return Mat(r, std::vector<long long>(c, 0)); }

inline Mat identity(size_t n) {
  Mat m = zeros(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  Mat out = zeros(a.size(), cols);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k)
      if (a[i][k])
        for (size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Nonzero invariant factors, via repeated pivoting on the entry of least absolute value.
inline std::vector<long long> invariant_factors(Mat m) {
  std::vector<long long> diag;
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  size_t t = 0;
  while (t < rows && t < cols) {
    long long best = 0;
    size_t bi = 0, bj = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (m[i][j] && (!best || std::llabs(m[i][j]) < best)) best = std::llabs(m[i][j]), bi = i, bj = j;
    if (!best) break;
    std::swap(m[t], m[bi]);
    for (auto& row : m) std::swap(row[t], row[bj]);
    bool clean = true;
    for (size_t i = t + 1; i < rows; ++i) {
      long long q = m[i][t] / m[t][t];
      for (size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
      clean = clean && m[i][t] == 0;
    }
    for (size_t j = t + 1; j < cols; ++j) {
      long long q = m[t][j] / m[t][t];
      for (size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
      clean = clean && m[t][j] == 0;
    }
    if (!clean) continue;
    // Divisibility: fold any entry not divisible by the pivot into the pivot row.
    bool divides = true;
    for (size_t i = t + 1; i < rows && divides; ++i)
      for (size_t j = t + 1; j < cols; ++j)
        if (m[i][j] % m[t][t]) {
          for (size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
          divides = false;
          break;
        }
    if (!divides) continue;
    diag.push_back(std::llabs(m[t][t]));
    ++t;
  }
  return diag;
}

struct Group {
  int rank = 0;
  std::vector<long long> torsion;
  std::string str() const {
    std::string out;
    if (rank == 1) out = "Z";
    if (rank > 1) out = "Z^" + std::to_string(rank);
    for (long long t : torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + std::to_string(t);
    return out.empty() ? "0" : out;
  }
};

// dims[n] = rank of C_n; bd[n] : C_n -> C_{n-1} as dims[n-1] x dims[n] (bd[0] ignored).
// Returns H_0 .. H_{top-1}.
inline std::vector<Group> homology(const std::vector<size_t>& dims, const std::vector<Mat>& bd) {
  const size_t top = dims.size() - 1;
  std::vector<size_t> rk(dims.size() + 1, 0);
  std::vector<std::vector<long long>> inv(dims.size() + 1);
  for (size_t n = 1; n <= top; ++n) {
    inv[n] = invariant_factors(bd[n]);
    rk[n] = inv[n].size();
  }
  std::vector<Group> out;
  for (size_t n = 0; n < top; ++n) {
    Group g;
    g.rank = static_cast<int>(dims[n] - rk[n] - rk[n + 1]);
    for (long long d : inv[n + 1])
      if (d > 1) g.torsion.push_back(d);
    out.push_back(g);
  }
  return out;
}

// H_0 .. H_top of a cyclic group of order n with coefficients in the permutation module of
// `perm` (the generator's action on a finite set), from the 2-periodic free resolution.
inline std::vector<Group> cyclic_group_homology(int n, const std::vector<int>& perm, int top) {
  const size_t k = perm.size();
  Mat p = zeros(k, k);
  for (size_t x = 0; x < k; ++x) p[perm[x]][x] = 1;
  Mat t_minus_1 = p, norm = zeros(k, k), power = identity(k);
  for (size_t i = 0; i < k; ++i) t_minus_1[i][i] -= 1;
  for (int i = 0; i < n; ++i) {
    for (size_t a = 0; a < k; ++a)
      for (size_t b = 0; b < k; ++b) norm[a][b] += power[a][b];
    power = mul(p, power);
  }
  std::vector<size_t> dims(top + 2, k);
  std::vector<Mat> bd(top + 2);
  for (int d = 1; d <= top + 1; ++d) bd[d] = d % 2 ? t_minus_1 : norm;
  return homology(dims, bd);
}

// Number of cliques of each size 1..max_size in a graph on n vertices.
inline std::vector<size_t> clique_counts(int n, const std::vector<std::vector<bool>>& adj, int max_size) {
  std::vector<size_t> counts(max_size, 0);
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int from) -> void {
    for (int v = from; v < n; ++v) {
      bool ok = std::all_of(chosen.begin(), chosen.end(), [&](int u) { return adj[u][v]; });
      if (!ok) continue;
      chosen.push_back(v);
      ++counts[chosen.size() - 1];
      if (static_cast<int>(chosen.size()) < max_size) self(self, v + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return counts;
}

}  // namespace oracle
