#pragma once

// Permutation symmetry: block-diagonal operators with multiplicities, the
// qubit Schur-Weyl decomposition, and orbit bases of permutation-invariant
// operators.

#include <algorithm>
#include <map>
#include <vector>

#include "qstein/sdp.hpp"
#include "qstein/tensor.hpp"

namespace qstein {

/// Operator of the form (+)_k B_k (x) 1_{m_k}.
struct BlockDiag {
  std::vector<Matrix> blocks;
  std::vector<double> multiplicity;

  static BlockDiag single(const Matrix& m) { return {{m}, {1.0}}; }

  std::size_t size() const { return blocks.size(); }

  double trace() const {
    double t = 0.0;
    for (std::size_t k = 0; k < blocks.size(); ++k) t += multiplicity[k] * blocks[k].trace().real();
    return t;
  }

  void check_compatible(const BlockDiag& other, const char* what) const {
    if (other.blocks.size() != blocks.size()) throw std::invalid_argument(std::string(what) + ": block count mismatch");
    for (std::size_t k = 0; k < blocks.size(); ++k)
      if (other.blocks[k].rows() != blocks[k].rows() || other.multiplicity[k] != multiplicity[k])
        throw std::invalid_argument(std::string(what) + ": block shape mismatch");
  }
};

/// Sum_k m_k tr[A_k B_k].
inline double block_inner(const BlockDiag& a, const BlockDiag& b) {
  a.check_compatible(b, "block_inner");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a.multiplicity[k] * (a.blocks[k] * b.blocks[k]).trace().real();
  return acc;
}

/// Invariance under every adjacent transposition of sites.
inline bool is_permutation_invariant(const Matrix& op, const SiteStructure& s, double tol = 1e-9) {
  const int n = s.num_sites();
  for (int i = 0; i + 1 < n; ++i) {
    if (s.dims[static_cast<std::size_t>(i)] != s.dims[static_cast<std::size_t>(i) + 1]) return false;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i) + 1]);
    if ((permute_sites(op, perm, s) - op).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Qubit Schur-Weyl decomposition

struct SpinSector {
  int two_j;
  double multiplicity;
  Matrix isometry;  // 2^n x (2J+1): one copy of the spin-J irrep, weights J..-J
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// One copy of every spin-J irrep in (C^2)^{(x) n}: singlets on leading pairs,
/// |0> elsewhere, then repeated lowering.
inline std::vector<SpinSector> qubit_spin_sectors(int n) {
  if (n < 1) throw std::invalid_argument("qubit_spin_sectors: n must be positive");
  const std::int64_t dim = std::int64_t{1} << n;
  check_capacity(dim, "qubit_spin_sectors");
  std::vector<SpinSector> out;
  for (int k = 0; 2 * k <= n; ++k) {
    const int two_j = n - 2 * k;
    Vector top = Vector::Zero(dim);
    top(0) = 1.0;
    for (int p = 0; p < k; ++p) {
      // singlet on sites 2p, 2p+1 (site 0 is the most significant bit)
      const int b0 = n - 1 - 2 * p;
      const int b1 = b0 - 1;
      Vector next = Vector::Zero(dim);
      for (std::int64_t x = 0; x < dim; ++x) {
        if (top(x) == cplx(0.0)) continue;
        next(x | (std::int64_t{1} << b1)) += top(x) / std::sqrt(2.0);
        next(x | (std::int64_t{1} << b0)) -= top(x) / std::sqrt(2.0);
      }
      top = next;
    }
    Matrix iso(dim, two_j + 1);
    iso.col(0) = top;
    for (int m = 1; m <= two_j; ++m) {
      Vector prev = iso.col(m - 1);
      Vector low = Vector::Zero(dim);
      for (std::int64_t x = 0; x < dim; ++x) {
        if (prev(x) == cplx(0.0)) continue;
        for (int b = 0; b < n; ++b)
          if (!(x & (std::int64_t{1} << b))) low(x | (std::int64_t{1} << b)) += prev(x);
      }
      iso.col(m) = low / low.norm();
    }
    out.push_back({two_j, binomial(n, k) - binomial(n, k - 1), std::move(iso)});
  }
  return out;
}

/// Blocks V_J^dagger op V_J of a permutation-invariant operator on n qubits.
inline BlockDiag to_spin_blocks(const Matrix& op, const std::vector<SpinSector>& sectors) {
  BlockDiag b;
  for (const auto& s : sectors) {
    if (s.isometry.rows() != op.rows()) throw std::invalid_argument("to_spin_blocks: dimension mismatch");
    Matrix blk = s.isometry.adjoint() * op * s.isometry;
    b.blocks.push_back((blk + blk.adjoint()) / 2.0);
    b.multiplicity.push_back(s.multiplicity);
  }
  return b;
}

/// Spin-J representation of a single-qubit operator: the block of A^{(x) n}.
inline BlockDiag iid_spin_blocks(const Matrix& single, int n) {
  if (single.rows() != 2) throw std::invalid_argument("iid_spin_blocks: single-site operator must be 2x2");
  auto sectors = qubit_spin_sectors(n);
  return to_spin_blocks(tensor_power(single, n), sectors);
}

// ---------------------------------------------------------------------------
// Orbit bases

/// Real-linear basis of Hermitian operators on (C^d)^{(x) n} invariant under
/// every site permutation. Orbits of matrix units |x><y| are labelled by the
/// multiset of pairs (x_i, y_i); each orbit O with transpose O^T contributes
/// B_O (O = O^T) or B_O + B_{O^T} and i(B_O - B_{O^T}).
inline std::vector<sdp::SparseHermitian> invariant_hermitian_basis(int d, int n) {
  if (d < 1 || n < 0) throw std::invalid_argument("invariant_hermitian_basis: bad arguments");
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  check_capacity(dim, "invariant_hermitian_basis");
  const int pairs = d * d;
  auto key_of = [&](std::int64_t x, std::int64_t y) {
    std::vector<int> counts(static_cast<std::size_t>(pairs), 0);
    for (int i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>((x % d) * d + (y % d))];
      x /= d;
      y /= d;
    }
    return counts;
  };
  auto transpose_key = [&](const std::vector<int>& c) {
    std::vector<int> t(c.size());
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) t[static_cast<std::size_t>(b * d + a)] = c[static_cast<std::size_t>(a * d + b)];
    return t;
  };
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> orbits;
  for (std::int64_t x = 0; x < dim; ++x)
    for (std::int64_t y = 0; y < dim; ++y) orbits[key_of(x, y)].emplace_back(static_cast<int>(x), static_cast<int>(y));

  std::vector<sdp::SparseHermitian> basis;
  for (const auto& [key, entries] : orbits) {
    const auto tkey = transpose_key(key);
    if (tkey == key) {
      sdp::SparseHermitian s;
      for (auto [x, y] : entries) s.push(x, y, 1.0);
      basis.push_back(std::move(s));
    } else if (key < tkey) {
      const auto& tentries = orbits.at(tkey);
      sdp::SparseHermitian re, im;
      for (auto [x, y] : entries) {
        re.push(x, y, 1.0);
        im.push(x, y, cplx(0.0, 1.0));
      }
      for (auto [x, y] : tentries) {
        re.push(x, y, 1.0);
        im.push(x, y, cplx(0.0, -1.0));
      }
      basis.push_back(std::move(re));
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

/// Sparse embedding of an operator on `sites` into the full structure (identity elsewhere).
inline sdp::SparseHermitian embed_sparse(const sdp::SparseHermitian& local, const SiteStructure& s,
                                         const std::vector<int>& sites) {
  detail::check_sites(sites, s.num_sites(), "embed_sparse");
  const int n = s.num_sites();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int i : sites) in[static_cast<std::size_t>(i)] = true;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  const auto st = detail::strides(s.dims);
  auto place = [&](std::int64_t local_index, const std::vector<int>& which) {
    std::int64_t out = 0;
    for (int k = static_cast<int>(which.size()) - 1; k >= 0; --k) {
      const int site = which[static_cast<std::size_t>(k)];
      const int dk = s.dims[static_cast<std::size_t>(site)];
      out += (local_index % dk) * st[static_cast<std::size_t>(site)];
      local_index /= dk;
    }
    return out;
  };
  std::int64_t dr = 1;
  for (int i : rest) dr *= s.dims[static_cast<std::size_t>(i)];
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(dr));
  for (std::int64_t j = 0; j < dr; ++j) offsets[static_cast<std::size_t>(j)] = place(j, rest);
  sdp::SparseHermitian out;
  for (std::size_t e = 0; e < local.nnz(); ++e) {
    const auto r = place(local.rows[e], sites);
    const auto c = place(local.cols[e], sites);
    for (auto off : offsets) out.push(static_cast<int>(r + off), static_cast<int>(c + off), local.values[e]);
  }
  return out;
}

/// All permutations of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace qstein
