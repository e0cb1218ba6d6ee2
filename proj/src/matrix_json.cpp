#include "commtask/matrix_json.hpp"

namespace commtask {

using nlohmann::json;

namespace {

Rational parse_entry(const json &e, long row, long col) {
  std::string where = " at row " + std::to_string(row) + ", column " + std::to_string(col);
  if (e.is_number_integer())
    return Rational(Integer(e.dump(), 10));
  if (e.is_string()) {
    try {
      return parse_rational(e.get<std::string>());
    } catch (const std::invalid_argument &ex) {
      throw ParseError(std::string(ex.what()) + where, row, col);
    }
  }
  if (e.is_number_float())
    throw ParseError("floating-point entry " + e.dump() + where +
                         " (write it as an exact \"p/q\" string)",
                     row, col);
  throw ParseError("entry " + e.dump() + " is not a rational" + where, row, col);
}

} // namespace

QMatrix parse_qmatrix(const json &j) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix must be a nonempty array of rows");
  std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("row 0 is not a nonempty array", 0);
  std::size_t cols = j[0].size();
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json &r = j[i];
    if (!r.is_array())
      throw ParseError("row " + std::to_string(i) + " is not an array", static_cast<long>(i));
    if (r.size() != cols)
      throw ParseError("row " + std::to_string(i) + " has " + std::to_string(r.size()) +
                           " entries, expected " + std::to_string(cols),
                       static_cast<long>(i));
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = parse_entry(r[k], static_cast<long>(i), static_cast<long>(k));
  }
  return m;
}

NamedMatrix parse_matrix(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
  std::optional<std::string> name;
  if (j.is_object()) {
    if (!j.contains("matrix"))
      throw ParseError("object form needs a \"matrix\" member");
    if (j.contains("name")) {
      if (!j["name"].is_string())
        throw ParseError("\"name\" must be a string");
      name = j["name"].get<std::string>();
    }
    j = j["matrix"];
  }
  return NamedMatrix{std::move(name), CommMatrix(parse_qmatrix(j))};
}

json to_json(const QMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      r.push_back(to_string(m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const CommMatrix &m) { return to_json(m.matrix()); }

json to_json(const StochasticPair &p) {
  return json{{"L", to_json(p.left)}, {"R", to_json(p.right)}};
}

std::string serialize(const CommMatrix &m, const std::optional<std::string> &name) {
  if (name)
    return json{{"name", *name}, {"matrix", to_json(m)}}.dump();
  return to_json(m).dump();
}

} // namespace commtask
