#include "headsum/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "headsum/errors.h"

namespace headsum {

namespace {

std::string pack_window(std::span<const TokenId> tokens, std::size_t start, int n) {
  std::string key(static_cast<std::size_t>(n) * sizeof(TokenId), '\0');
  std::memcpy(key.data(), tokens.data() + start,
              static_cast<std::size_t>(n) * sizeof(TokenId));
  return key;
}

std::vector<TokenId> without_markers(std::span<const TokenId> tokens) {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (TokenId id : tokens) {
    if (!is_marker(id)) out.push_back(id);
  }
  return out;
}

}  // namespace

NgramBag ngrams(std::span<const TokenId> tokens, int n) {
  if (n < 1) throw std::invalid_argument("ngram order must be >= 1");
  NgramBag bag;
  bag.n = n;
  std::vector<TokenId> content = without_markers(tokens);
  if (static_cast<int>(content.size()) < n) return bag;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= content.size(); ++i) {
    ++bag.counts[pack_window(content, i, n)];
    ++bag.total;
  }
  return bag;
}

NgramBag ngrams(const TokenSeq& seq, int n) {
  return ngrams(std::span<const TokenId>(seq.ids), n);
}

void merge_into(NgramBag& bag, const NgramBag& other) {
  if (bag.n != other.n) throw std::invalid_argument("ngram order mismatch in merge");
  for (const auto& [key, count] : other.counts) bag.counts[key] += count;
  bag.total += other.total;
}

double f1_of(double precision, double recall) {
  double denom = precision + recall;
  if (denom <= 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

double rouge_n(const NgramBag& pred, const NgramBag& target) {
  if (pred.n != target.n) {
    throw std::invalid_argument("rouge_n: bags have different orders");
  }
  if (pred.empty() || target.empty()) return 0.0;
  // Clipped multiplicity intersection; iterate the smaller map.
  const NgramBag& small = pred.counts.size() <= target.counts.size() ? pred : target;
  const NgramBag& large = &small == &pred ? target : pred;
  long overlap = 0;
  for (const auto& [key, count] : small.counts) {
    auto it = large.counts.find(key);
    if (it != large.counts.end()) overlap += std::min(count, it->second);
  }
  double precision = static_cast<double>(overlap) / static_cast<double>(pred.total);
  double recall = static_cast<double>(overlap) / static_cast<double>(target.total);
  return f1_of(precision, recall);
}

double rouge_l(std::span<const TokenId> pred, std::span<const TokenId> target) {
  std::vector<TokenId> a = without_markers(pred);
  std::vector<TokenId> b = without_markers(target);
  if (a.empty() || b.empty()) return 0.0;
  // Two-row LCS table.
  std::vector<long> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  long lcs = prev[b.size()];
  double precision = static_cast<double>(lcs) / static_cast<double>(a.size());
  double recall = static_cast<double>(lcs) / static_cast<double>(b.size());
  return f1_of(precision, recall);
}

double rouge_l(const TokenSeq& pred, const TokenSeq& target) {
  return rouge_l(std::span<const TokenId>(pred.ids),
                 std::span<const TokenId>(target.ids));
}

double bleu(std::span<const TokenId> pred, std::span<const TokenId> target, int max_n) {
  if (max_n < 1) throw std::invalid_argument("bleu: max_n must be >= 1");
  std::vector<TokenId> p = without_markers(pred);
  std::vector<TokenId> t = without_markers(target);
  if (t.empty()) throw std::invalid_argument("bleu: empty target");
  if (p.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    NgramBag pb = ngrams(std::span<const TokenId>(p), n);
    NgramBag tb = ngrams(std::span<const TokenId>(t), n);
    if (pb.empty()) return 0.0;  // |pred| < n
    long matched = 0;
    for (const auto& [key, count] : pb.counts) {
      auto it = tb.counts.find(key);
      if (it != tb.counts.end()) matched += std::min(count, it->second);
    }
    if (matched == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched) / static_cast<double>(pb.total));
  }
  double brevity = std::min(1.0, static_cast<double>(p.size()) /
                                     static_cast<double>(t.size()));
  return brevity * std::exp(log_sum / max_n);
}

double bleu(const TokenSeq& pred, const TokenSeq& target, int max_n) {
  return bleu(std::span<const TokenId>(pred.ids),
              std::span<const TokenId>(target.ids), max_n);
}

PRF prf(long tp, long fp, long fn) {
  if (tp < 0 || fp < 0 || fn < 0) {
    throw std::invalid_argument("prf: counts must be non-negative");
  }
  PRF out;
  if (tp + fp > 0) {
    out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    out.precision = fn > 0 ? 0.0 : 1.0;
  }
  if (tp + fn > 0) {
    out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    // Nothing to recall: vacuously perfect, even when junk was predicted.
    out.recall = 1.0;
  }
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

PRF aggregate_prf(const std::vector<PrfCounts>& per_doc, PrfMode mode) {
  if (per_doc.empty()) {
    throw std::invalid_argument("aggregate_prf: empty input");
  }
  if (mode == PrfMode::kSentence) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& c : per_doc) {
      tp += c.tp;
      fp += c.fp;
      fn += c.fn;
    }
    return prf(tp, fp, fn);
  }
  PRF sum;
  for (const auto& c : per_doc) {
    PRF one = prf(c.tp, c.fp, c.fn);
    sum.precision += one.precision;
    sum.recall += one.recall;
    sum.f1 += one.f1;
  }
  double n = static_cast<double>(per_doc.size());
  return PRF{sum.precision / n, sum.recall / n, sum.f1 / n};
}

}  // namespace headsum
