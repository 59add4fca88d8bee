#include "clsgen/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "clsgen/errors.hpp"

namespace clsgen {

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  put_u64(out, bits);
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() {
    uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }

  std::string str(size_t n) {
    need(n);
    std::string s(b_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == b_.size(); }

 private:
  void need(size_t n) {
    if (pos_ + n > b_.size()) throw DataError("checkpoint: truncated container");
  }
  std::string_view b_;
  size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::serialize() const {
  std::string out;
  out += "CLSG";
  put_u32(out, kFormatVersion);
  put_u64(out, metadata.size());
  for (const auto& [k, v] : metadata) {
    put_u32(out, static_cast<uint32_t>(k.size()));
    out += k;
    put_u32(out, static_cast<uint32_t>(v.size()));
    out += v;
  }
  put_u64(out, tensors.size());
  for (const auto& [name, t] : tensors) {
    put_u32(out, static_cast<uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<uint32_t>(t.shape.size()));
    for (int64_t d : t.shape) put_u64(out, static_cast<uint64_t>(d));
    for (double x : t.data) put_f64(out, x);
  }
  return out;
}

Checkpoint Checkpoint::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.str(4) != "CLSG") throw DataError("checkpoint: bad magic (expected CLSG)");
  uint32_t version = r.u32();
  if (version != kFormatVersion) throw DataError("checkpoint: unsupported format version " + std::to_string(version));
  Checkpoint ck;
  uint64_t n_meta = r.u64();
  for (uint64_t i = 0; i < n_meta; ++i) {
    std::string k = r.str(r.u32());
    std::string v = r.str(r.u32());
    ck.metadata.emplace(std::move(k), std::move(v));
  }
  uint64_t n_tensors = r.u64();
  for (uint64_t i = 0; i < n_tensors; ++i) {
    std::string name = r.str(r.u32());
    uint32_t ndim = r.u32();
    Tensor t;
    t.shape.resize(ndim);
    for (uint32_t d = 0; d < ndim; ++d) t.shape[d] = static_cast<int64_t>(r.u64());
    int64_t count = Tensor::shape_product(t.shape);
    t.data.resize(static_cast<size_t>(count));
    for (int64_t j = 0; j < count; ++j) t.data[static_cast<size_t>(j)] = r.f64();
    ck.tensors.emplace(std::move(name), std::move(t));
  }
  if (!r.done()) throw DataError("checkpoint: trailing bytes after container");
  return ck;
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("checkpoint: cannot open for write: " + path);
  std::string bytes = serialize();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw DataError("checkpoint: write failed: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("checkpoint: cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

const Tensor& Checkpoint::tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw DataError("checkpoint: missing tensor " + name);
  return it->second;
}

const std::string& Checkpoint::meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) throw DataError("checkpoint: missing metadata " + key);
  return it->second;
}

std::string Checkpoint::meta_or(const std::string& key, const std::string& fallback) const {
  auto it = metadata.find(key);
  return it == metadata.end() ? fallback : it->second;
}

}  // namespace clsgen
