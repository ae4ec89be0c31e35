#pragma once

#include <vector>

#include "headsum/corpus.h"
#include "headsum/tokens.h"

// Brute-force re-implementations used as test oracles. They share no code
// with the library: windows are enumerated as literal token vectors and
// clip-counted after sorting.
namespace refimpl {

std::vector<std::vector<headsum::TokenId>> windows(
    const std::vector<headsum::TokenId>& tokens, int n);

// Clipped F1 over two window multisets. Uses the same final arithmetic as
// the library (2PR/(P+R) from integer counts) so greedy comparisons based
// on it agree exactly.
double window_f1(std::vector<std::vector<headsum::TokenId>> pred,
                 std::vector<std::vector<headsum::TokenId>> target);

// Inputs must be marker-free.
double rouge_n_f1(const std::vector<headsum::TokenId>& pred,
                  const std::vector<headsum::TokenId>& target, int n);

// ROUGE-1 + ROUGE-2 of the union of the picked sentences' window multisets
// against the union over the abstractive summary sentences.
double rouge_total(const headsum::Document& doc, const std::vector<int>& picks_1based);

// Greedy sentence selection replayed with a full per-round scan: strict
// improvement, lowest index on ties. Picks are returned in commit order.
std::vector<int> greedy_replay(const headsum::Document& doc, int tau,
                               std::vector<double>* totals = nullptr);

}  // namespace refimpl
