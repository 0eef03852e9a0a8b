#include "tcg/diagnostics.hpp"

#include <nlohmann/json.hpp>

namespace tcg {

void Diagnostics::add(Diagnostic d) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(d));
}

std::vector<Diagnostic> Diagnostics::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::vector<Diagnostic> Diagnostics::of_kind(const std::string& kind) const {
  std::lock_guard lock(mu_);
  std::vector<Diagnostic> out;
  for (const auto& d : entries_)
    if (d.kind == kind) out.push_back(d);
  return out;
}

std::size_t Diagnostics::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void Diagnostics::write_lines(std::ostream& os) const {
  for (const auto& d : entries()) os << to_json_line(d) << '\n';
}

std::string to_json_line(const Diagnostic& d) {
  nlohmann::ordered_json j;
  j["kind"] = d.kind;
  j["path"] = d.path;
  if (d.line > 0) j["line"] = d.line;
  j["message"] = d.message;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace tcg
