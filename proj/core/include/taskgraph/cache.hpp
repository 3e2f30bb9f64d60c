#ifndef TASKGRAPH_CACHE_HPP
#define TASKGRAPH_CACHE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace taskgraph {

/// Hex-encoded SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// One-file-per-key response cache. Values are raw response bytes. Writes
/// go to a temp file first and are renamed into place, so concurrent
/// writers at worst redo work; readers never observe partial content.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, std::string_view bytes) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_CACHE_HPP
