#pragma once

// JSON state files:
//   {"dims":[d1,...], "bipartition":[[a1,b1],...], "matrix":[[[re,im],...],...]}
// Pure states may instead carry "vector":[[re,im],...].

#include <fstream>
#include <string>

#include "json.hpp"
#include "qstein/tensor.hpp"

namespace qstein {

struct StateFile {
  SiteStructure sites;
  Matrix matrix;
};

namespace detail {

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("state file: complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline SiteStructure sites_from_json(const nlohmann::json& j) {
  if (!j.contains("dims")) throw std::invalid_argument("state file: missing \"dims\"");
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  if (j.contains("bipartition")) {
    std::vector<std::pair<int, int>> bp;
    for (const auto& e : j.at("bipartition")) bp.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return SiteStructure(std::move(dims), std::move(bp));
  }
  return SiteStructure(std::move(dims));
}

inline void sites_to_json(const SiteStructure& s, nlohmann::json& j) {
  j["dims"] = s.dims;
  if (s.bipartition) {
    nlohmann::json bp = nlohmann::json::array();
    for (auto [a, b] : *s.bipartition) bp.push_back({a, b});
    j["bipartition"] = bp;
  }
}

}  // namespace detail

inline nlohmann::json state_to_json(const Matrix& m, const SiteStructure& s) {
  check_operator(m, s, "state_to_json");
  nlohmann::json j;
  detail::sites_to_json(s, j);
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(detail::complex_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

inline nlohmann::json pure_to_json(const Vector& v, const SiteStructure& s) {
  if (v.size() != s.total_dim()) throw std::invalid_argument("pure_to_json: dimension mismatch");
  nlohmann::json j;
  detail::sites_to_json(s, j);
  nlohmann::json vec = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) vec.push_back(detail::complex_json(v(i)));
  j["vector"] = std::move(vec);
  return j;
}

/// Parses a state; the matrix is Hermitized on ingestion and rejected if it is not Hermitian within tolerance.
inline StateFile state_from_json(const nlohmann::json& j) {
  StateFile out;
  out.sites = detail::sites_from_json(j);
  const auto d = out.sites.total_dim();
  if (j.contains("matrix")) {
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != d)
      throw std::invalid_argument("state file: matrix row count does not match dims");
    Matrix m(d, d);
    for (std::int64_t i = 0; i < d; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<std::int64_t>(row.size()) != d)
        throw std::invalid_argument("state file: matrix column count does not match dims");
      for (std::int64_t k = 0; k < d; ++k) m(i, k) = detail::complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    out.matrix = hermitize(m);
  } else if (j.contains("vector")) {
    const auto& vec = j.at("vector");
    if (!vec.is_array() || static_cast<std::int64_t>(vec.size()) != d)
      throw std::invalid_argument("state file: vector length does not match dims");
    Vector v(d);
    for (std::int64_t i = 0; i < d; ++i) v(i) = detail::complex_from_json(vec[static_cast<std::size_t>(i)]);
    out.matrix = projector(v);
  } else {
    throw std::invalid_argument("state file: needs \"matrix\" or \"vector\"");
  }
  return out;
}

/// Pure state from a file carrying "vector", or the top eigenvector of a rank-one "matrix".
inline std::pair<Vector, SiteStructure> pure_from_json(const nlohmann::json& j) {
  SiteStructure s = detail::sites_from_json(j);
  const auto d = s.total_dim();
  if (j.contains("vector")) {
    const auto& vec = j.at("vector");
    if (static_cast<std::int64_t>(vec.size()) != d) throw std::invalid_argument("state file: vector length mismatch");
    Vector v(d);
    for (std::int64_t i = 0; i < d; ++i) v(i) = detail::complex_from_json(vec[static_cast<std::size_t>(i)]);
    if (!is_pure_state(v)) throw std::invalid_argument("state file: vector is not normalized");
    return {v, s};
  }
  StateFile f = state_from_json(j);
  auto ed = eigh(f.matrix);
  if (ed.values.size() > 1 && ed.values(ed.values.size() - 2) > 1e-9)
    throw std::invalid_argument("state file: matrix is not rank one");
  return {ed.vectors.col(ed.values.size() - 1), s};
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

inline StateFile read_state(const std::string& path) { return state_from_json(read_json_file(path)); }

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_state(const Matrix& m, const SiteStructure& s, const std::string& path) {
  write_json_file(state_to_json(m, s), path);
}

}  // namespace qstein
