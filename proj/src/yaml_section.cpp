#include "yaml_section.hpp"

#include <cmath>
#include <sstream>

namespace foilsim::detail {

namespace {

std::string line_suffix(const YAML::Node& node) {
  if (!node.IsDefined()) return {};
  const auto mark = node.Mark();
  if (mark.line < 0) return {};
  return " (line " + std::to_string(mark.line + 1) + ")";
}

}  // namespace

YAML::Node parse_yaml(std::string_view text) {
  try {
    auto root = YAML::Load(std::string(text));
    if (!root.IsDefined() || root.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) {
      throw ConfigError("document root must be a mapping" + line_suffix(root));
    }
    return root;
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error at line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
}

double as_double(const YAML::Node& node, const std::string& key_path) {
  if (!node.IsScalar()) Section::fail_at(node, key_path, "expected a number");
  double value = 0.0;
  try {
    value = node.as<double>();
  } catch (const YAML::Exception&) {
    Section::fail_at(node, key_path, "expected a number, got '" + node.Scalar() + "'");
  }
  if (!std::isfinite(value)) Section::fail_at(node, key_path, "value must be finite");
  return value;
}

Section::Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
  if (present() && !node_.IsMap()) fail_at(node_, path_, "expected a mapping");
}

bool Section::has(const std::string& key) const {
  return present() && node_[key].IsDefined() && !node_[key].IsNull();
}

std::string Section::key_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

YAML::Node Section::take(const std::string& key) {
  consumed_.insert(key);
  if (!present()) return {};
  const YAML::Node& view = node_;  // const access does not insert missing keys
  return view[key];
}

void Section::get(const std::string& key, double& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  out = as_double(n, key_path(key));
}

void Section::get(const std::string& key, bool& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  try {
    out = n.as<bool>();
  } catch (const YAML::Exception&) {
    fail_at(n, key_path(key), "expected true or false");
  }
}

void Section::get(const std::string& key, int& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  const double value = as_double(n, key_path(key));
  if (value != std::floor(value) || std::abs(value) > 1e9) fail_at(n, key_path(key), "expected an integer");
  out = static_cast<int>(value);
}

void Section::get(const std::string& key, std::string& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  if (!n.IsScalar()) fail_at(n, key_path(key), "expected a string");
  out = n.Scalar();
}

void Section::get_deg(const std::string& key, double& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  out = deg2rad(as_double(n, key_path(key)));
}

void Section::get_vec3(const std::string& key, Eigen::Vector3d& out) {
  auto n = take(key);
  if (!n.IsDefined() || n.IsNull()) return;
  if (!n.IsSequence() || n.size() != 3) fail_at(n, key_path(key), "expected a list of 3 numbers");
  for (std::size_t i = 0; i < 3; ++i) out[static_cast<Eigen::Index>(i)] = as_double(n[i], key_path(key));
}

void Section::require(const std::string& key) const {
  if (!has(key)) {
    throw ConfigError("missing required key '" + key_path(key) + "'" + line_suffix(node_));
  }
}

Section Section::child(const std::string& key) { return Section(take(key), key_path(key)); }

void Section::finish() const {
  if (!present()) return;
  for (const auto& kv : node_) {
    const auto key = kv.first.Scalar();
    if (!consumed_.count(key)) fail_at(kv.first, key_path(key), "unknown key");
  }
}

void Section::fail(const std::string& key, const std::string& what) const {
  YAML::Node n = present() ? node_[key] : YAML::Node();
  fail_at(n.IsDefined() ? n : node_, key_path(key), what);
}

void Section::fail_at(const YAML::Node& node, const std::string& key_path, const std::string& what) {
  std::ostringstream os;
  os << key_path << ": " << what << line_suffix(node);
  throw ConfigError(os.str());
}

}  // namespace foilsim::detail
