#pragma once
// JSON matrix/permutation files, atomic writes and CSV emission for the CLI.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qda/densela.hpp"
#include "qda/driver.hpp"

namespace qda::io {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const json& j);

// 0-based image array.
json perm_to_json(const Permutation& p);
Permutation perm_from_json(const json& j);

json read_json(const std::filesystem::path& path);
ComplexMatrix read_matrix(const std::filesystem::path& path);
Permutation read_permutation(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a);

// Round-trip formatting for doubles in CSV cells.
std::string fmt(double v);

// i,absUpdateX,relUpdateX
std::string history_csv(const QdaResult& r);

std::string utc_timestamp();

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qda::io
