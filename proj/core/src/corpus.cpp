#include "clsgen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <fstream>
#include <sstream>

#include "clsgen/errors.hpp"
#include "json.hpp"

namespace clsgen::corpus {

namespace {

// token_of_residue lookup built once.
const std::array<int, 256>& residue_token_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    int id = kResidueBase;
    for (char c : kAlphabet) t[static_cast<unsigned char>(c)] = id++;
    return t;
  }();
  return table;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(strip(cur));
  return out;
}

}  // namespace

bool is_natural_residue(char c) { return residue_token_table()[static_cast<unsigned char>(c)] >= 0; }

int token_of_residue(char c) {
  int t = residue_token_table()[static_cast<unsigned char>(c)];
  if (t < 0) throw DataError(std::string("not a natural residue: ") + c);
  return t;
}

char residue_of_token(int token) {
  if (token < kResidueBase || token >= kVocabSize) throw DataError("token is not a residue: " + std::to_string(token));
  return kAlphabet[static_cast<size_t>(token - kResidueBase)];
}

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::kNonNaturalResidue: return "non_natural_residue";
    case RejectReason::kLowercasePresent: return "lowercase_present";
    case RejectReason::kTooLong: return "too_long";
    case RejectReason::kEmpty: return "empty";
  }
  return "unknown";
}

std::variant<PeptideSequence, RejectReason> validate_sequence(std::string_view raw, int max_seq_length) {
  if (raw.empty()) return RejectReason::kEmpty;
  for (char c : raw) {
    if (std::islower(static_cast<unsigned char>(c))) return RejectReason::kLowercasePresent;
    if (!is_natural_residue(c)) return RejectReason::kNonNaturalResidue;
  }
  if (static_cast<int>(raw.size()) > max_seq_length) return RejectReason::kTooLong;
  return PeptideSequence(std::string(raw));
}

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kAmp: return "amp";
    case Attribute::kToxic: return "toxic";
    case Attribute::kBroadSpectrum: return "broad_spectrum";
    case Attribute::kStructured: return "structured";
    case Attribute::kHormone: return "hormone";
    case Attribute::kAntihypertensive: return "antihypertensive";
    case Attribute::kAnticancer: return "anticancer";
  }
  return "unknown";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
  std::string n = lower(name);
  if (n == "amp" || n == "antimicrobial") return Attribute::kAmp;
  if (n == "toxic" || n == "toxicity") return Attribute::kToxic;
  if (n == "broad_spectrum" || n == "broadspectrum" || n == "broad") return Attribute::kBroadSpectrum;
  if (n == "structured" || n == "structure" || n == "struct") return Attribute::kStructured;
  if (n == "hormone") return Attribute::kHormone;
  if (n == "antihypertensive") return Attribute::kAntihypertensive;
  if (n == "anticancer") return Attribute::kAnticancer;
  return std::nullopt;
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kHeldout: return "heldout";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Split split_of(std::string_view sequence, uint64_t seed) {
  uint64_t h = fnv1a64(sequence) ^ mix64(seed);
  double u = static_cast<double>(mix64(h) >> 11) * 0x1.0p-53;
  if (u < 0.8) return Split::kTrain;
  if (u < 0.9) return Split::kHeldout;
  return Split::kTest;
}

std::string IngestReport::to_json() const {
  nlohmann::json j;
  j["total"] = total;
  j["accepted"] = accepted;
  nlohmann::json rej = nlohmann::json::object();
  for (const auto& [reason, count] : rejected) rej[std::string(reject_reason_name(reason))] = count;
  j["rejected"] = rej;
  return j.dump(2);
}

LabeledCorpus::LabeledCorpus(std::vector<CorpusEntry> entries, int max_seq_length, uint64_t split_seed)
    : entries_(std::move(entries)), max_seq_length_(max_seq_length), split_seed_(split_seed) {
  for (size_t i = 0; i < entries_.size(); ++i) {
    auto [it, fresh] = index_.emplace(entries_[i].seq.str(), i);
    (void)it;
    if (!fresh) throw DataError("corpus: duplicate sequence after deduplication: " + entries_[i].seq.str());
  }
}

std::vector<size_t> LabeledCorpus::split_indices(Split s) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == s) out.push_back(i);
  return out;
}

std::vector<size_t> LabeledCorpus::labeled_train_indices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == Split::kTrain && !entries_[i].labels.empty()) out.push_back(i);
  return out;
}

std::vector<size_t> LabeledCorpus::unlabeled_train_indices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == Split::kTrain && entries_[i].labels.empty()) out.push_back(i);
  return out;
}

std::vector<size_t> LabeledCorpus::labeled_indices(Attribute a, Split s) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == s && entries_[i].labels.count(a)) out.push_back(i);
  return out;
}

std::vector<int> LabeledCorpus::tokenize(const PeptideSequence& seq) const {
  std::vector<int> row(static_cast<size_t>(max_seq_length_) + 2, kPad);
  row[0] = kSos;
  size_t i = 1;
  for (char c : seq.str()) row[i++] = token_of_residue(c);
  row[i] = kEos;
  return row;
}

std::string LabeledCorpus::detokenize(const std::vector<int>& row) {
  std::string out;
  for (int t : row) {
    if (t == kSos || t == kPad) continue;
    if (t == kEos) break;
    if (t == kUnk) throw DataError("detokenize: UNK token has no residue");
    out.push_back(residue_of_token(t));
  }
  return out;
}

namespace {

std::vector<std::string> read_sequences_fasta(std::istream& in) {
  std::vector<std::string> seqs;
  std::string line, cur;
  bool in_record = false;
  while (std::getline(in, line)) {
    std::string t = strip(line);
    if (t.empty() || t[0] == ';') continue;
    if (t[0] == '>') {
      if (in_record) seqs.push_back(cur);
      cur.clear();
      in_record = true;
    } else if (in_record) {
      cur += t;
    } else {
      // Sequence data before any header: treat as a record of its own.
      in_record = true;
      cur = t;
    }
  }
  if (in_record) seqs.push_back(cur);
  return seqs;
}

std::vector<std::string> read_sequences_csv(std::istream& in, const std::string& path) {
  std::vector<std::string> seqs;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty sequence CSV: " + path);
  std::vector<std::string> header = split_csv_row(line);
  int seq_col = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (lower(header[i]) == "sequence") seq_col = static_cast<int>(i);
  if (seq_col < 0) throw DataError("sequence CSV missing `sequence` column: " + path);
  size_t row_idx = 1;
  while (std::getline(in, line)) {
    ++row_idx;
    if (strip(line).empty()) continue;
    std::vector<std::string> cols = split_csv_row(line);
    if (static_cast<int>(cols.size()) <= seq_col)
      throw DataError(path + ": malformed row " + std::to_string(row_idx));
    seqs.push_back(cols[static_cast<size_t>(seq_col)]);
  }
  return seqs;
}

}  // namespace

LabeledCorpus load_corpus(const std::string& seq_file, const std::vector<std::string>& label_files, uint64_t seed,
                          int max_seq_length, IngestReport* report) {
  std::ifstream in(seq_file);
  if (!in) throw DataError("cannot open sequence file: " + seq_file);

  // Sniff the format: FASTA starts with '>' (or ';' comments).
  int first = in.peek();
  std::vector<std::string> raw;
  if (first == '>' || first == ';') {
    raw = read_sequences_fasta(in);
  } else {
    raw = read_sequences_csv(in, seq_file);
  }

  IngestReport rep;
  rep.total = static_cast<int64_t>(raw.size());
  std::vector<CorpusEntry> entries;
  std::map<std::string, size_t> index;
  for (const std::string& r : raw) {
    auto v = validate_sequence(r, max_seq_length);
    if (std::holds_alternative<RejectReason>(v)) {
      rep.rejected[std::get<RejectReason>(v)]++;
      continue;
    }
    rep.accepted++;
    PeptideSequence seq = std::get<PeptideSequence>(v);
    if (index.count(seq.str())) continue;  // first occurrence wins
    CorpusEntry e;
    e.seq = seq;
    e.split = split_of(seq.str(), seed);
    index.emplace(seq.str(), entries.size());
    entries.push_back(std::move(e));
  }

  for (const std::string& lf : label_files) {
    std::ifstream lin(lf);
    if (!lin) throw DataError("cannot open label file: " + lf);
    std::string line;
    if (!std::getline(lin, line)) throw DataError("empty label file: " + lf);
    std::vector<std::string> header = split_csv_row(line);
    if (header.size() < 3 || lower(header[0]) != "sequence" || lower(header[1]) != "attribute" ||
        lower(header[2]) != "value")
      throw DataError(lf + ": expected header `sequence,attribute,value`");
    size_t row_idx = 1;
    while (std::getline(lin, line)) {
      ++row_idx;
      if (strip(line).empty()) continue;
      std::vector<std::string> cols = split_csv_row(line);
      if (cols.size() < 3) throw DataError(lf + ": malformed row " + std::to_string(row_idx));
      auto attr = parse_attribute(cols[1]);
      if (!attr) throw DataError(lf + ": unknown attribute `" + cols[1] + "` at row " + std::to_string(row_idx));
      int value;
      if (cols[2] == "0")
        value = 0;
      else if (cols[2] == "1")
        value = 1;
      else
        throw DataError(lf + ": label value must be 0 or 1 at row " + std::to_string(row_idx));
      auto it = index.find(cols[0]);
      if (it == index.end()) continue;  // label for a sequence not in the corpus: ignored
      entries[it->second].labels[*attr] = value;
    }
  }

  if (report) *report = rep;
  return LabeledCorpus(std::move(entries), max_seq_length, seed);
}

BatchStream::BatchStream(const LabeledCorpus& corpus, int batch_size, std::optional<UpsampleRatio> ratio,
                         uint64_t seed)
    : corpus_(&corpus), batch_size_(batch_size), ratio_(ratio), rng_(seed) {
  train_ = corpus.split_indices(Split::kTrain);
  if (train_.empty()) throw DataError("batch stream: empty train split");
  if (ratio_) {
    labeled_ = corpus.labeled_train_indices();
    unlabeled_ = corpus.unlabeled_train_indices();
    if (labeled_.empty() || unlabeled_.empty())
      throw DataError("batch stream: upsampling requires both labeled and unlabeled train entries");
  }
}

tc::IMat BatchStream::next() {
  const int width = corpus_->max_seq_length() + 2;
  tc::IMat batch(batch_size_, width);
  last_rows_.assign(static_cast<size_t>(batch_size_), 0);
  double p_labeled = 0.0;
  if (ratio_) p_labeled = static_cast<double>(ratio_->labeled) / (ratio_->labeled + ratio_->unlabeled);
  for (int b = 0; b < batch_size_; ++b) {
    size_t idx;
    if (ratio_) {
      if (rng_.uniform01() < p_labeled)
        idx = labeled_[rng_.below(labeled_.size())];
      else
        idx = unlabeled_[rng_.below(unlabeled_.size())];
    } else {
      idx = train_[rng_.below(train_.size())];
    }
    last_rows_[static_cast<size_t>(b)] = idx;
    std::vector<int> row = corpus_->tokenize(corpus_->entries()[idx].seq);
    for (int c = 0; c < width; ++c) batch(b, c) = row[static_cast<size_t>(c)];
  }
  return batch;
}

}  // namespace clsgen::corpus
