/** @file
 * JSON matrix files. Entries are [re, im] pairs, row-major; a compact form
 * gives the real diagonal plus the row-major upper triangle and is completed
 * Hermitian. Serialization round-trips every double exactly.
 */

#ifndef COHERE_IO_HPP
#define COHERE_IO_HPP

#include <stdexcept>
#include <string>

#include "cohere/matrix.hpp"

namespace cohere {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Raw parsed matrix, before density-matrix validation. */
struct MatrixFile {
  int dim = 0;
  Matrix entries;
};

// Accepts {"dim": d, "entries": [[re, im] x d*d]} or
// {"dim": d, "diag": [d reals], "upper": [[re, im] x d(d-1)/2]}.
MatrixFile parse_matrix_json(const std::string& text);

std::string serialize_matrix_json(const Matrix& m);

// FNV-1a 64-bit hash of a byte string, as fixed-width hex.
std::string fnv1a_digest(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cohere

#endif
