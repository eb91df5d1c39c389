#pragma once

// Internal helper for reading YAML documents with key-path and line
// diagnostics. Every key a section reads is recorded so `finish()` can reject
// typos instead of silently falling back to defaults.

#include <set>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <yaml-cpp/yaml.h>

#include "foilsim/vehicle_model.hpp"

namespace foilsim::detail {

YAML::Node parse_yaml(std::string_view text);

class Section {
 public:
  Section(YAML::Node node, std::string path);

  bool present() const { return node_.IsDefined() && !node_.IsNull(); }
  bool has(const std::string& key) const;
  const std::string& path() const { return path_; }
  const YAML::Node& node() const { return node_; }

  void get(const std::string& key, double& out);
  void get(const std::string& key, bool& out);
  void get(const std::string& key, int& out);
  void get(const std::string& key, std::string& out);
  /// Reads degrees from the file into radians.
  void get_deg(const std::string& key, double& out);
  void get_vec3(const std::string& key, Eigen::Vector3d& out);
  void require(const std::string& key) const;

  Section child(const std::string& key);
  /// Raw node for custom parsing; marks the key as read.
  YAML::Node take(const std::string& key);
  std::string key_path(const std::string& key) const;

  /// Throws on keys that were present but never read.
  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  [[noreturn]] static void fail_at(const YAML::Node& node, const std::string& key_path,
                                   const std::string& what);

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> consumed_;
};

double as_double(const YAML::Node& node, const std::string& key_path);

}  // namespace foilsim::detail
