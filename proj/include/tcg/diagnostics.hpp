#pragma once

#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace tcg {

struct Diagnostic {
  std::string kind;  // "skip", "malformed_block", "ambiguous", "retry", ...
  std::string path;
  int line = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

// Thread-safe collector. Rendered as one JSON object per line.
class Diagnostics {
 public:
  void add(Diagnostic d);
  void add(std::string kind, std::string path, int line, std::string message) {
    add(Diagnostic{std::move(kind), std::move(path), line, std::move(message)});
  }

  std::vector<Diagnostic> entries() const;
  std::vector<Diagnostic> of_kind(const std::string& kind) const;
  std::size_t size() const;

  void write_lines(std::ostream& os) const;

 private:
  mutable std::mutex mu_;
  std::vector<Diagnostic> entries_;
};

std::string to_json_line(const Diagnostic& d);

}  // namespace tcg
