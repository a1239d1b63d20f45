#include "virann/json_io.hpp"

namespace virann {

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw DomainError("expected complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json matrix_to_json(const CMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DomainError("expected matrix as array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  CMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw DomainError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = complex_from_json(j[r][c]);
  }
  return a;
}

}  // namespace virann
