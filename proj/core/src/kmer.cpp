#include "clsgen/kmer.hpp"

#include <unordered_map>

#include "clsgen/errors.hpp"

namespace clsgen::analysis {

double kmer_uniqueness(const std::vector<std::string>& sequences, int k) {
  if (k < 1) throw DataError("kmer_uniqueness: k must be >= 1");
  std::unordered_map<std::string, int64_t> counts;
  for (const std::string& s : sequences) {
    if (static_cast<int>(s.size()) < k) continue;
    for (size_t i = 0; i + static_cast<size_t>(k) <= s.size(); ++i) counts[s.substr(i, static_cast<size_t>(k))]++;
  }
  if (counts.empty()) throw DataError("kmer_uniqueness: all sequences shorter than k");
  int64_t unique = 0;
  for (const auto& [_, c] : counts)
    if (c == 1) ++unique;
  return static_cast<double>(unique) / static_cast<double>(counts.size());
}

}  // namespace clsgen::analysis
