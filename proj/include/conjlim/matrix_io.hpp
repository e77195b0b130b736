#pragma once

#include <string>

#include <json.hpp>

#include "conjlim/goodpath.hpp"
#include "conjlim/pathsim.hpp"

namespace conjlim {

using json = nlohmann::json;

// Matrix JSON: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const json& j, const std::string& where = "matrix");

json goodpath_to_json(const GoodPath& gp, const Tolerance& tol = {});
GoodPath goodpath_from_json(const json& j);

json verdict_to_json(const MembershipVerdict& v);
json growth_to_json(const GrowthReport& rep);

/// Parses JSON text; syntax errors are rethrown as Parse errors carrying line and column.
json parse_json_text(const std::string& text, const std::string& source = "input");

/// CSV: one line per matrix row, entries written as re, re+imj or re-imj.
std::string matrix_to_csv(const Matrix& M);
/// Throws Parse with line and column of the first malformed field.
Matrix matrix_from_csv(const std::string& text, const std::string& source = "input");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Loads a matrix from a .json or .csv file.
Matrix load_matrix(const std::string& path);

/// Converts between formats; format is "json" or "csv".
std::string convert_matrix_text(const std::string& text, const std::string& from,
                                const std::string& to, const std::string& source = "input");

} // namespace conjlim
