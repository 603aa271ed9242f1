#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "logflat/field.hpp"

namespace logflat::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr int kReportVersion = 1;

struct Options {
  std::optional<Field> field;  // overrides the file's "field"
  std::string order = "degrevlex";
  std::size_t window = 8;
  bool pretty = true;
};

// Throws Error(Parse) with line and column.
Json parse_problem(const std::string& text);
// Throws Error(Validation): unknown kinds, duplicate names, unresolved references, missing fields.
void validate_problem(const Json& problem);

struct RunResult {
  Json report;
  int exit_code = 0;  // 0, or 1 when some task errored
};
RunResult run_problem(const Json& problem, const Options& options = {});

std::vector<std::string> gallery_names();
std::string gallery_path(const std::string& name);
std::string golden_path(const std::string& name);
// Runs the bundled file and compares with the golden report; throws Error(UnknownGallery).
struct GalleryResult {
  RunResult run;
  bool golden_found = false;
  bool matches = false;
};
GalleryResult run_gallery(const std::string& name, const Options& options = {});

// The report without its timing block.
Json comparable(Json report);
std::string serialize(const Json& report, bool pretty);

// argv without the program name; returns the exit code (2 for parse and validation errors).
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logflat::cli
