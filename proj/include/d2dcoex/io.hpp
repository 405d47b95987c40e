#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace d2dcoex {

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Stages several output files; nothing appears under the final names until
/// commit() succeeds. Staged temp files are removed if never committed.
class OutputBatch {
 public:
  OutputBatch() = default;
  OutputBatch(const OutputBatch&) = delete;
  OutputBatch& operator=(const OutputBatch&) = delete;
  ~OutputBatch();

  void add(std::filesystem::path path, std::string content);
  void commit();

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> pending_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
};

/// "%.9g"-style formatting used by every report file.
std::string format_sig9(double v);

}  // namespace d2dcoex
