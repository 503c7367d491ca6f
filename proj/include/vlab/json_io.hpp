#pragma once

#include "json.hpp"

#include <string>

#include "vlab/matrix.hpp"
#include "vlab/qform.hpp"

namespace vlab {

using json = nlohmann::json;

// Rationals are JSON integers when integral and small enough, "p/q" strings otherwise.
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json vector_to_json(std::span<const Rat> v);
RatVector vector_from_json(const json& j);

json matrix_to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const json& j);

// {"name": ..., "dim": n, "gram": [[...]]}
json qform_to_json(const QForm& q);
QForm qform_from_json(const json& j);

QForm load_qform_file(const std::string& path);
json load_json_file(const std::string& path);

}  // namespace vlab
