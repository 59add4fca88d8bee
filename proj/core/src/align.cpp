#include "clsgen/align.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "clsgen/errors.hpp"
#include "clsgen/rng.hpp"

namespace clsgen::analysis {

namespace {

// NCBI PAM30, rows/cols in order A R N D C Q E G H I L K M F P S T W Y V.
constexpr const char* kPamOrder = "ARNDCQEGHILKMFPSTWYV";
constexpr int kPamTable[20][20] = {
    /*A*/ {6, -7, -4, -3, -6, -4, -2, -2, -7, -5, -6, -7, -5, -8, -2, 0, -1, -13, -8, -2},
    /*R*/ {-7, 8, -6, -10, -8, -2, -9, -9, -2, -5, -8, 0, -4, -9, -4, -3, -6, -2, -10, -8},
    /*N*/ {-4, -6, 8, 2, -11, -3, -2, -3, 0, -5, -7, -1, -9, -9, -6, 0, -2, -8, -4, -8},
    /*D*/ {-3, -10, 2, 8, -14, -2, 2, -3, -4, -7, -12, -4, -11, -15, -8, -4, -5, -15, -11, -8},
    /*C*/ {-6, -8, -11, -14, 10, -14, -14, -9, -7, -6, -15, -14, -13, -13, -8, -3, -8, -15, -4, -6},
    /*Q*/ {-4, -2, -3, -2, -14, 8, 1, -7, 1, -8, -5, -3, -4, -13, -3, -5, -5, -13, -12, -7},
    /*E*/ {-2, -9, -2, 2, -14, 1, 8, -4, -5, -5, -9, -4, -7, -14, -5, -4, -6, -17, -8, -6},
    /*G*/ {-2, -9, -3, -3, -9, -7, -4, 6, -9, -11, -10, -7, -8, -9, -6, -2, -6, -15, -14, -5},
    /*H*/ {-7, -2, 0, -4, -7, 1, -5, -9, 9, -9, -6, -6, -10, -6, -4, -6, -7, -7, -3, -6},
    /*I*/ {-5, -5, -5, -7, -6, -8, -5, -11, -9, 8, -1, -6, -1, -2, -8, -7, -2, -14, -6, 2},
    /*L*/ {-6, -8, -7, -12, -15, -5, -9, -10, -6, -1, 7, -8, 1, -3, -7, -8, -7, -6, -7, -2},
    /*K*/ {-7, 0, -1, -4, -14, -3, -4, -7, -6, -6, -8, 7, -2, -14, -6, -4, -3, -12, -9, -9},
    /*M*/ {-5, -4, -9, -11, -13, -4, -7, -8, -10, -1, 1, -2, 11, -4, -8, -5, -4, -13, -11, -1},
    /*F*/ {-8, -9, -9, -15, -13, -13, -14, -9, -6, -2, -3, -14, -4, 9, -10, -6, -9, -4, 2, -8},
    /*P*/ {-2, -4, -6, -8, -8, -3, -5, -6, -4, -8, -7, -6, -8, -10, 8, -2, -4, -14, -13, -6},
    /*S*/ {0, -3, 0, -4, -3, -5, -4, -2, -6, -7, -8, -4, -5, -6, -2, 6, 0, -5, -7, -6},
    /*T*/ {-1, -6, -2, -5, -8, -5, -6, -6, -7, -2, -7, -3, -4, -9, -4, 0, 7, -13, -6, -3},
    /*W*/ {-13, -2, -8, -15, -15, -13, -17, -15, -7, -14, -6, -12, -13, -4, -14, -5, -13, 13, -5, -15},
    /*Y*/ {-8, -10, -4, -11, -4, -12, -8, -14, -3, -6, -7, -9, -11, 2, -13, -7, -6, -5, 10, -7},
    /*V*/ {-2, -8, -8, -8, -6, -7, -6, -5, -6, 2, -2, -9, -1, -8, -6, -6, -3, -15, -7, 7},
};

const std::array<int, 256>& pam_index_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    for (int i = 0; i < 20; ++i) t[static_cast<unsigned char>(kPamOrder[i])] = i;
    return t;
  }();
  return table;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

int pam30(char a, char b) {
  int ia = pam_index_table()[static_cast<unsigned char>(a)];
  int ib = pam_index_table()[static_cast<unsigned char>(b)];
  if (ia < 0 || ib < 0) throw DataError("pam30: not a natural residue pair");
  return kPamTable[ia][ib];
}

uint64_t pam30_checksum() {
  std::string bytes;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      bytes += std::to_string(kPamTable[i][j]);
      bytes += ',';
    }
  return fnv1a64(bytes);
}

AlignmentResult global_align(const std::string& a, const std::string& b) {
  const size_t n = a.size(), m = b.size();
  // M: ends with substitution; X: ends with gap in b (consumes a, "delete");
  // Y: ends with gap in a (consumes b, "insert").
  std::vector<std::vector<double>> M(n + 1, std::vector<double>(m + 1, kNegInf));
  std::vector<std::vector<double>> X = M, Y = M;
  M[0][0] = 0.0;
  for (size_t i = 1; i <= n; ++i) X[i][0] = kGapOpen + static_cast<double>(i - 1) * kGapExtend;
  for (size_t j = 1; j <= m; ++j) Y[0][j] = kGapOpen + static_cast<double>(j - 1) * kGapExtend;

  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      double s = pam30(a[i - 1], b[j - 1]);
      M[i][j] = s + std::max({M[i - 1][j - 1], X[i - 1][j - 1], Y[i - 1][j - 1]});
      X[i][j] = std::max({M[i - 1][j] + kGapOpen, X[i - 1][j] + kGapExtend, Y[i - 1][j] + kGapOpen});
      Y[i][j] = std::max({M[i][j - 1] + kGapOpen, X[i][j - 1] + kGapOpen, Y[i][j - 1] + kGapExtend});
    }
  }

  AlignmentResult res;
  res.score = std::max({M[n][m], X[n][m], Y[n][m]});

  // Traceback, tie order M > X > Y.
  std::string ra, rb;
  size_t i = n, j = m;
  int state;  // 0 = M, 1 = X, 2 = Y
  if (res.score == M[n][m])
    state = 0;
  else if (res.score == X[n][m])
    state = 1;
  else
    state = 2;
  while (i > 0 || j > 0) {
    if (state == 0) {
      double prev = M[i][j] - pam30(a[i - 1], b[j - 1]);
      ra.push_back(a[i - 1]);
      rb.push_back(b[j - 1]);
      --i;
      --j;
      if (prev == M[i][j])
        state = 0;
      else if (prev == X[i][j])
        state = 1;
      else
        state = 2;
    } else if (state == 1) {
      ra.push_back(a[i - 1]);
      rb.push_back('-');
      double cur = X[i][j];
      --i;
      if (cur == M[i][j] + kGapOpen)
        state = 0;
      else if (cur == X[i][j] + kGapExtend)
        state = 1;
      else
        state = 2;
      if (i == 0 && j == 0) break;
    } else {
      ra.push_back('-');
      rb.push_back(b[j - 1]);
      double cur = Y[i][j];
      --j;
      if (cur == M[i][j] + kGapOpen)
        state = 0;
      else if (cur == X[i][j] + kGapOpen)
        state = 1;
      else
        state = 2;
      if (i == 0 && j == 0) break;
    }
  }
  std::reverse(ra.begin(), ra.end());
  std::reverse(rb.begin(), rb.end());
  res.aligned_a = ra;
  res.aligned_b = rb;

  const double cols = static_cast<double>(ra.size());
  if (cols > 0) {
    int ident = 0, pos = 0, gaps = 0, both = 0;
    for (size_t k = 0; k < ra.size(); ++k) {
      if (ra[k] == '-' || rb[k] == '-') {
        ++gaps;
        continue;
      }
      ++both;
      if (ra[k] == rb[k]) ++ident;
      if (pam30(ra[k], rb[k]) > 0) ++pos;
    }
    res.identity_pct = 100.0 * ident / cols;
    res.positive_pct = 100.0 * pos / cols;
    res.gap_pct = 100.0 * gaps / cols;
    res.coverage_pct = n > 0 ? 100.0 * both / static_cast<double>(n) : 0.0;
  }
  return res;
}

std::vector<NoveltyRow> novelty_report(const std::vector<corpus::PeptideSequence>& candidates,
                                       const corpus::LabeledCorpus& corpus, int threads) {
  // Novelty is judged against everything ingested, not only the train split.
  std::vector<const std::string*> subjects;
  subjects.reserve(corpus.entries().size());
  for (const auto& e : corpus.entries()) subjects.push_back(&e.seq.str());
  if (subjects.empty()) throw DataError("novelty_report: empty corpus");

  std::vector<NoveltyRow> rows(candidates.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      NoveltyRow best;
      best.candidate_index = c;
      bool first = true;
      for (const std::string* s : subjects) {
        AlignmentResult r = global_align(candidates[c].str(), *s);
        if (first || r.score > best.alignment.score ||
            (r.score == best.alignment.score && *s < best.best_match)) {
          best.alignment = r;
          best.best_match = *s;
          first = false;
        }
      }
      rows[c] = std::move(best);
    }
  };

  int t = std::max(1, threads);
  if (t == 1 || candidates.size() < 2) {
    work(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (candidates.size() + t - 1) / t;
    for (int k = 0; k < t; ++k) {
      size_t b = std::min(candidates.size(), static_cast<size_t>(k) * chunk);
      size_t e = std::min(candidates.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace clsgen::analysis
