#include "qda/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "qda/errors.hpp"

namespace qda::io {

json matrix_to_json(const ComplexMatrix& a) {
  if (!a.all_finite()) throw ContractViolation("refusing to serialize a non-finite matrix");
  std::vector<double> re, im;
  re.reserve(a.size());
  im.reserve(a.size());
  for (const cplx& z : a.entries()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    else im.assign(re.size(), 0.0);
    if (re.size() != rows * cols || im.size() != rows * cols)
      throw ParseError("matrix: re/im length does not match rows*cols");
    std::vector<cplx> e(rows * cols);
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!std::isfinite(re[k]) || !std::isfinite(im[k]))
        throw ParseError("matrix: non-finite entry");
      e[k] = {re[k], im[k]};
    }
    return ComplexMatrix(rows, cols, std::move(e));
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

json perm_to_json(const Permutation& p) { return p.image(); }

Permutation perm_from_json(const json& j) {
  try {
    return Permutation(j.get<std::vector<std::size_t>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("permutation: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("permutation: ") + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ComplexMatrix read_matrix(const std::filesystem::path& path) {
  return matrix_from_json(read_json(path));
}

Permutation read_permutation(const std::filesystem::path& path) {
  return perm_from_json(read_json(path));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(1) + "\n");
}

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& a) {
  write_json(path, matrix_to_json(a));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string history_csv(const QdaResult& r) {
  std::ostringstream os;
  os << "i,absUpdateX,relUpdateX\n";
  for (const auto& h : r.history)
    os << h.index << ',' << fmt(h.absUpdateX) << ',' << fmt(h.relUpdateX) << '\n';
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qda::io
