#include "cohere/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cohere {

namespace {

using nlohmann::json;

Complex parse_pair(const json& cell, const char* where) {
  if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
    throw ParseError(std::string("parse error: ") + where +
                     " entries must be [re, im] number pairs");
  }
  return {cell[0].get<double>(), cell[1].get<double>()};
}

}  // namespace

MatrixFile parse_matrix_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("parse error: invalid JSON: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw ParseError("parse error: top level must be an object with an integer \"dim\"");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 1 || dim > 8) {
    throw ParseError("parse error: dim must be between 1 and 8");
  }
  MatrixFile file;
  file.dim = dim;
  file.entries.resize(dim, dim);

  if (doc.contains("entries")) {
    const json& entries = doc["entries"];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim) * dim) {
      throw ParseError("parse error: \"entries\" must hold dim*dim pairs, row-major");
    }
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        file.entries(j, k) = parse_pair(entries[j * dim + k], "entries");
      }
    }
    return file;
  }

  if (doc.contains("diag") && doc.contains("upper")) {
    const json& diag = doc["diag"];
    const json& upper = doc["upper"];
    const std::size_t upper_count = static_cast<std::size_t>(dim) * (dim - 1) / 2;
    if (!diag.is_array() || diag.size() != static_cast<std::size_t>(dim)) {
      throw ParseError("parse error: \"diag\" must hold dim real numbers");
    }
    if (!upper.is_array() || upper.size() != upper_count) {
      throw ParseError("parse error: \"upper\" must hold dim(dim-1)/2 pairs, row-major");
    }
    for (int j = 0; j < dim; ++j) {
      if (!diag[j].is_number()) {
        throw ParseError("parse error: \"diag\" entries must be numbers");
      }
      file.entries(j, j) = diag[j].get<double>();
    }
    std::size_t idx = 0;
    for (int j = 0; j < dim; ++j) {
      for (int k = j + 1; k < dim; ++k) {
        const Complex v = parse_pair(upper[idx++], "upper");
        file.entries(j, k) = v;
        file.entries(k, j) = std::conj(v);
      }
    }
    return file;
  }

  throw ParseError("parse error: expected \"entries\" or \"diag\"+\"upper\"");
}

std::string serialize_matrix_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      entries.push_back({m(j, k).real(), m(j, k).imag()});
    }
  }
  json doc;
  doc["dim"] = static_cast<int>(m.rows());
  doc["entries"] = std::move(entries);
  return doc.dump();
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << hash;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("parse error: cannot open file " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file " + path);
  }
  out << content;
}

}  // namespace cohere
