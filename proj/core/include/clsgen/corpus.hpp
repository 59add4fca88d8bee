#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clsgen/layers.hpp"
#include "clsgen/rng.hpp"

namespace clsgen::corpus {

// The 20 natural amino acids, alphabetical.
inline constexpr std::string_view kAlphabet = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kDefaultMaxSeqLength = 25;

// Token table: 20 residues plus PAD/SOS/EOS/UNK.
inline constexpr int kPad = 0;
inline constexpr int kSos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kResidueBase = 4;
inline constexpr int kVocabSize = 24;

bool is_natural_residue(char c);
int token_of_residue(char c);      // residue char -> token id
char residue_of_token(int token);  // token id -> residue char

enum class RejectReason { kNonNaturalResidue, kLowercasePresent, kTooLong, kEmpty };

std::string_view reject_reason_name(RejectReason r);

class PeptideSequence;
// Returns a PeptideSequence iff all invariants hold; otherwise the typed
// rejection. Never normalizes the input.
std::variant<PeptideSequence, RejectReason> validate_sequence(std::string_view raw,
                                                              int max_seq_length = kDefaultMaxSeqLength);

// Validated peptide sequence; uppercase, natural residues only.
class PeptideSequence {
 public:
  PeptideSequence() = default;
  const std::string& str() const { return s_; }
  size_t size() const { return s_.size(); }
  bool operator==(const PeptideSequence& o) const { return s_ == o.s_; }
  bool operator<(const PeptideSequence& o) const { return s_ < o.s_; }

 private:
  explicit PeptideSequence(std::string s) : s_(std::move(s)) {}
  std::string s_;
  friend std::variant<PeptideSequence, RejectReason> validate_sequence(std::string_view, int);
};

enum class Attribute { kAmp, kToxic, kBroadSpectrum, kStructured, kHormone, kAntihypertensive, kAnticancer };

inline constexpr Attribute kAllAttributes[] = {Attribute::kAmp,        Attribute::kToxic,
                                               Attribute::kBroadSpectrum, Attribute::kStructured,
                                               Attribute::kHormone,    Attribute::kAntihypertensive,
                                               Attribute::kAnticancer};

std::string_view attribute_name(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view name);  // case-insensitive, common aliases

enum class Split { kTrain, kHeldout, kTest };
std::string_view split_name(Split s);

// Seeded split assignment: a pure function of (sequence, seed); thresholds
// 0.8 / 0.9 over a 53-bit uniform derived from the sequence hash.
Split split_of(std::string_view sequence, uint64_t seed);

struct CorpusEntry {
  PeptideSequence seq;
  std::map<Attribute, int> labels;  // sparse; value in {0,1}
  Split split = Split::kTrain;
};

struct IngestReport {
  int64_t total = 0;
  int64_t accepted = 0;
  std::map<RejectReason, int64_t> rejected;

  std::string to_json() const;
};

class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  LabeledCorpus(std::vector<CorpusEntry> entries, int max_seq_length, uint64_t split_seed);

  const std::vector<CorpusEntry>& entries() const { return entries_; }
  int max_seq_length() const { return max_seq_length_; }
  uint64_t split_seed() const { return split_seed_; }

  bool contains(const std::string& sequence) const { return index_.count(sequence) > 0; }
  std::vector<size_t> split_indices(Split s) const;
  // Train-split indices with / without at least one label.
  std::vector<size_t> labeled_train_indices() const;
  std::vector<size_t> unlabeled_train_indices() const;
  // Entries in a given split carrying a label for `a`.
  std::vector<size_t> labeled_indices(Attribute a, Split s) const;

  // Token row of width max_seq_length+2: [SOS, residues, EOS, PAD...].
  std::vector<int> tokenize(const PeptideSequence& seq) const;
  static std::string detokenize(const std::vector<int>& row);

 private:
  std::vector<CorpusEntry> entries_;
  std::map<std::string, size_t> index_;
  int max_seq_length_ = kDefaultMaxSeqLength;
  uint64_t split_seed_ = 0;
};

// Loads sequences (FASTA or single-column CSV with `sequence` header) plus
// label CSVs with header `sequence,attribute,value`. Invalid sequences are
// counted and skipped; duplicates keep the first occurrence and merge labels.
LabeledCorpus load_corpus(const std::string& seq_file, const std::vector<std::string>& label_files, uint64_t seed,
                          int max_seq_length, IngestReport* report = nullptr);

// Upsampling ratio labeled:unlabeled, e.g. {1, 20}.
struct UpsampleRatio {
  int labeled = 1;
  int unlabeled = 20;
};

// Infinite, seed-deterministic stream of framed token batches over the train
// split. When a ratio is configured, each row is drawn from the labeled pool
// with probability labeled/(labeled+unlabeled), otherwise uniformly from all
// train entries. One stream per consumer thread.
class BatchStream {
 public:
  BatchStream(const LabeledCorpus& corpus, int batch_size, std::optional<UpsampleRatio> ratio, uint64_t seed);

  tc::IMat next();
  // Indices of corpus entries used in the most recent batch.
  const std::vector<size_t>& last_rows() const { return last_rows_; }

 private:
  const LabeledCorpus* corpus_;
  int batch_size_;
  std::optional<UpsampleRatio> ratio_;
  Rng rng_;
  std::vector<size_t> train_;
  std::vector<size_t> labeled_;
  std::vector<size_t> unlabeled_;
  std::vector<size_t> last_rows_;
};

}  // namespace clsgen::corpus
