#include "d2dcoex/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "d2dcoex/errors.hpp"

namespace d2dcoex {

std::string format_sig9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  OutputBatch batch;
  batch.add(path, content);
  batch.commit();
}

OutputBatch::~OutputBatch() {
  std::error_code ec;
  for (const auto& [tmp, final_path] : staged_) std::filesystem::remove(tmp, ec);
}

void OutputBatch::add(std::filesystem::path path, std::string content) {
  pending_.emplace_back(std::move(path), std::move(content));
}

void OutputBatch::commit() {
  for (const auto& [path, content] : pending_) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
      staged_.emplace_back(tmp, path);
      out << content;
      out.flush();
      if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  for (const auto& [tmp, final_path] : staged_) std::filesystem::rename(tmp, final_path);
  staged_.clear();
  pending_.clear();
}

}  // namespace d2dcoex
