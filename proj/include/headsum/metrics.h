#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "headsum/tokens.h"

namespace headsum {

/// Multiset of n-token windows. Marker tokens are stripped before
/// windowing, so bags built from marker-wrapped sentences and from bare
/// content agree.
struct NgramBag {
  int n = 1;
  std::unordered_map<std::string, int> counts;  // packed ids -> multiplicity
  long total = 0;                                // sum of multiplicities

  bool empty() const { return total == 0; }
};

NgramBag ngrams(std::span<const TokenId> tokens, int n);
NgramBag ngrams(const TokenSeq& seq, int n);

/// Multiset union: multiplicities add.
void merge_into(NgramBag& bag, const NgramBag& other);

/// Clipped-overlap F1 of two same-order bags. Empty pred or target -> 0.
double rouge_n(const NgramBag& pred, const NgramBag& target);

/// Longest-common-subsequence F1. Markers excluded; empty input -> 0.
double rouge_l(std::span<const TokenId> pred, std::span<const TokenId> target);
double rouge_l(const TokenSeq& pred, const TokenSeq& target);

/// min(1, |pred|/|target|) times the plain geometric mean of clipped n-gram
/// precisions for n = 1..max_n. Any zero precision gives 0; no smoothing.
double bleu(std::span<const TokenId> pred, std::span<const TokenId> target,
            int max_n = 4);
double bleu(const TokenSeq& pred, const TokenSeq& target, int max_n = 4);

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct PrfCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

/// Precision/recall/F1 from counts. Zero-denominator conventions: an
/// empty prediction scores precision 0 when sentences were missed and 1
/// otherwise; recall is 1 whenever there was nothing to recall.
PRF prf(long tp, long fp, long fn);

enum class PrfMode {
  kDocument,  // macro average of per-article PRF
  kSentence,  // PRF of pooled counts
};

PRF aggregate_prf(const std::vector<PrfCounts>& per_doc, PrfMode mode);

double f1_of(double precision, double recall);

}  // namespace headsum
