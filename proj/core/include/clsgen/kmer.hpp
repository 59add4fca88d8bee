#pragma once

#include <string>
#include <vector>

namespace clsgen::analysis {

// Fraction of k-mers occurring exactly once across the whole set:
// |{kmers with count 1}| / |distinct kmers|. Sequences shorter than k
// contribute no windows; it is an error if none contributes any.
double kmer_uniqueness(const std::vector<std::string>& sequences, int k);

}  // namespace clsgen::analysis
