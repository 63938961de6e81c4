#pragma once

#include "coca/coca.hpp"
#include "coca/metrics.hpp"
#include "coca/model_selection.hpp"
#include "coca/simulate.hpp"

#include <nlohmann/json.hpp>

namespace coca {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Vector& v);
/// Row-major nested arrays.
Json to_json(const Matrix& m);
Vector vector_from_json(const Json& j);
/// Accepts nested row arrays, or a flat array read as a single column.
Matrix matrix_from_json(const Json& j);

/// Keys beta1, beta2, W1, W2, B1, B2, Omega1, Omega2. W/B/Omega entries may be
/// omitted (no factor / identity noise).
Json to_json(const FactorModelSpec& spec);
FactorModelSpec spec_from_json(const Json& j);

Json to_json(const CocaModel& model);
CocaModel model_from_json(const Json& j);

Json to_json(const CvReport& report);
Json to_json(const EvalReport& report);

FitStatus parse_status(const std::string& s);

}  // namespace coca
