#pragma once

#include <string>
#include <vector>

#include "clsgen/corpus.hpp"

namespace clsgen::analysis {

// PAM30 substitution score for two residues.
int pam30(char a, char b);
// FNV-1a checksum of the vendored PAM30 table (guards accidental edits).
uint64_t pam30_checksum();

inline constexpr int kGapOpen = -9;    // charged on the first gap position
inline constexpr int kGapExtend = -1;  // each additional position

struct AlignmentResult {
  double score = 0;
  std::string aligned_a;  // with '-' gap characters
  std::string aligned_b;
  double identity_pct = 0;  // identical columns / alignment columns * 100
  double positive_pct = 0;  // columns with positive PAM30 score / columns * 100
  double gap_pct = 0;       // gap columns / alignment columns * 100
  double coverage_pct = 0;  // both-residue columns / len(a) * 100 (query coverage)
};

// Affine-gap global alignment (Gotoh three-matrix DP) under PAM30 with
// open -9 / extend -1: a gap of length L costs -9 + (L-1)*(-1). Traceback
// ties break match > delete (gap in b) > insert (gap in a).
AlignmentResult global_align(const std::string& a, const std::string& b);

struct NoveltyRow {
  size_t candidate_index = 0;
  std::string best_match;  // training sequence achieving the max score
  AlignmentResult alignment;
};

// Best global alignment of each candidate against every training sequence of
// the corpus. Score ties break by lexicographic subject order, so the report
// is invariant to corpus ordering. Parallel over candidates.
std::vector<NoveltyRow> novelty_report(const std::vector<corpus::PeptideSequence>& candidates,
                                       const corpus::LabeledCorpus& corpus, int threads = 1);

}  // namespace clsgen::analysis
