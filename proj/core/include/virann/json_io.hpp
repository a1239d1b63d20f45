#pragma once

#include <nlohmann/json.hpp>

#include "virann/types.hpp"

namespace virann {

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

// Row-major [[ [re,im], ... ], ...]
nlohmann::json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace virann
