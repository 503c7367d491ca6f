#include "vlab/json_io.hpp"

#include <fstream>

#include "vlab/error.hpp"

namespace vlab {

json rat_to_json(const Rat& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return json(static_cast<std::int64_t>(r.get_num().get_si()));
  return json(to_string(r));
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw ParseError("expected an integer or a \"p/q\" string, got " + j.dump());
}

json vector_to_json(std::span<const Rat> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat_to_json(x));
  return a;
}

RatVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  RatVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

json matrix_to_json(const RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i)));
  return a;
}

RatMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a matrix (array of rows)");
  std::vector<RatVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  if (!rows.empty()) {
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw ParseError("matrix rows have different lengths");
    }
  }
  return RatMatrix::from_rows(rows);
}

json qform_to_json(const QForm& q) {
  json j;
  if (!q.name().empty()) j["name"] = q.name();
  j["dim"] = q.dim();
  j["gram"] = matrix_to_json(q.gram());
  return j;
}

QForm qform_from_json(const json& j) {
  if (!j.is_object() || !j.contains("gram")) throw ParseError("form JSON must be an object with a \"gram\" field");
  RatMatrix g = matrix_from_json(j.at("gram"));
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) throw ParseError("\"dim\" must be an integer");
    const auto dim = j.at("dim").get<std::int64_t>();
    if (dim <= 0 || static_cast<std::size_t>(dim) != g.rows() || g.rows() != g.cols()) {
      throw ParseError("\"dim\" = " + std::to_string(dim) + " does not match the gram matrix");
    }
  }
  std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  return QForm::from_gram(std::move(g), std::move(name));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

QForm load_qform_file(const std::string& path) { return qform_from_json(load_json_file(path)); }

}  // namespace vlab
