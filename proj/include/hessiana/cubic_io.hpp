#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "hessiana/cubic.hpp"

namespace hessiana {

/// Error in a text input, carrying the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Text format:
//   cubic n_vars=<k> field=<rational|p:PRIME>
//   e0 e1 ... e{k-1} : num[/den]        (one line per term, exponents sum to 3)
// Blank lines and lines starting with '#' are ignored.
CubicForm parse_cubic(std::istream& in);
CubicForm parse_cubic_string(const std::string& text);
CubicForm read_cubic_file(const std::filesystem::path& path);
std::string serialize_cubic(const CubicForm& f);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hessiana
