#pragma once

#include <map>
#include <string>

#include "clsgen/tensor.hpp"

namespace clsgen {

// Versioned checkpoint container. Layout (all integers little-endian):
//   magic "CLSG" | u32 version | u64 n_meta {u32 klen, key, u32 vlen, value}*
//   | u64 n_tensors {u32 nlen, name, u32 ndim, i64 dims[], f64 data[]}*
// Doubles are IEEE-754 binary64, little-endian. Round-trips are bit-exact.
struct Checkpoint {
  static constexpr uint32_t kFormatVersion = 1;

  std::map<std::string, std::string> metadata;
  std::map<std::string, Tensor> tensors;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  // Serialized bytes (same encoding as the file).
  std::string serialize() const;
  static Checkpoint deserialize(std::string_view bytes);

  bool has(const std::string& name) const { return tensors.count(name) > 0; }
  const Tensor& tensor(const std::string& name) const;
  const std::string& meta(const std::string& key) const;
  std::string meta_or(const std::string& key, const std::string& fallback) const;
};

}  // namespace clsgen
