#pragma once

#include "commtask/matrix.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace commtask {

/// Malformed matrix text. Row/column are -1 when the error is not tied to an
/// entry.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string &what, long row = -1, long col = -1)
      : std::invalid_argument(what), row_(row), col_(col) {}
  long row() const { return row_; }
  long col() const { return col_; }

private:
  long row_;
  long col_;
};

struct NamedMatrix {
  std::optional<std::string> name;
  CommMatrix matrix;
};

/// Accepts an array of rows, or {"name": ..., "matrix": [...]}. Entries are
/// "p/q" strings or JSON integers; floats are rejected. Throws ParseError for
/// syntax problems and StochasticError for invariant violations.
NamedMatrix parse_matrix(const std::string &text);
QMatrix parse_qmatrix(const nlohmann::json &j);

/// Canonical text: a JSON array of rows of "p/q" strings, or the named object
/// form when a name is given.
std::string serialize(const CommMatrix &m, const std::optional<std::string> &name = {});

nlohmann::json to_json(const QMatrix &m);
nlohmann::json to_json(const CommMatrix &m);
nlohmann::json to_json(const StochasticPair &p);

} // namespace commtask
