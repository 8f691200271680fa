#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogme/rational.hpp"
#include "cogme/taxonomy.hpp"

namespace cogme {

class TokenSequence;

// Lowercases, trims, drops trailing '.', '!' and '?' and splits on
// whitespace. Empty input yields an empty sequence.
TokenSequence normalize(std::string_view text);

// Lowercase, non-empty tokens. Only normalize() creates them.
class TokenSequence {
 public:
  TokenSequence() = default;

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  bool operator==(const TokenSequence&) const = default;

 private:
  friend TokenSequence normalize(std::string_view text);
  std::vector<std::string> tokens_;
};

std::vector<TokenSequence> normalize_all(std::span<const std::string> texts);

// Corpus score plus per-pair values. `exact` is set for metrics whose value is
// a rational number (everything except BLEU).
struct MetricScore {
  std::string metric;
  double value = 0;
  std::optional<Rational> exact;
  std::vector<double> pairs;
  std::vector<Rational> exact_pairs;
};

// Fraction of pairs whose normalized sequences are identical.
MetricScore exact_accuracy(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands);

struct BleuOptions {
  int max_n = 4;
  // Add-one smoothing of the precisions of order 2 and above.
  bool smooth = false;
};

// Clipped n-gram match counts summed over a corpus.
struct BleuStats {
  std::vector<long long> matches;  // index n-1
  std::vector<long long> totals;   // candidate n-grams of order n
  long long ref_length = 0;
  long long cand_length = 0;

  Rational precision(int n) const;  // unsmoothed p_n; 0 when there are no n-grams
};

BleuStats bleu_stats(std::span<const TokenSequence> refs,
                     std::span<const TokenSequence> cands, int max_n = 4);

// Geometric mean of the modified precisions times min(1, exp(1 - r/c)).
double bleu_from_stats(const BleuStats& stats, BleuOptions options = {});

// Corpus BLEU with sentence-level per-pair values. Throws DataError on an
// empty corpus, mismatched sizes or max_n < 1.
MetricScore bleu(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands,
                 BleuOptions options = {});

struct PrfScore {
  Rational precision;
  Rational recall;
  Rational f;
};

// F = (1 + b^2) P R / (R + b^2 P); zero when there is no overlap.
PrfScore rouge_n(const TokenSequence& ref, const TokenSequence& cand, int n,
                 const Rational& beta = 1);
PrfScore rouge_l(const TokenSequence& ref, const TokenSequence& cand,
                 const Rational& beta = 1);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct MeteorOptions {
  Rational alpha = Rational(9, 10);  // Fmean = PR / (alpha P + (1 - alpha) R)
  int beta = 3;                      // fragmentation exponent
  Rational gamma = Rational(1, 2);   // fragmentation weight
};

struct MeteorDetail {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  Rational precision;
  Rational recall;
  Rational fmean;
  Rational penalty;
  Rational score;
};

// Greedy left-to-right unigram alignment: exact matches first, then tokens
// sharing an immediate parent in `taxonomy` when one is given.
MeteorDetail meteor_lite(const TokenSequence& ref, const TokenSequence& cand,
                         const Taxonomy* taxonomy = nullptr, const MeteorOptions& options = {});

// 2 * depth(deepest common ancestor) / (depth(a) + depth(b)). Empty when
// either lemma is missing from the taxonomy.
std::optional<Rational> wup_similarity(std::string_view a, std::string_view b,
                                       const Taxonomy& taxonomy);

struct WupsOptions {
  Rational threshold = Rational(9, 10);
  Rational down_weight = Rational(1, 10);  // applied below the threshold
};

// Thresholded Wu-Palmer set similarity of one answer pair. Tokens outside the
// taxonomy fall back to exact match.
Rational wups_pair(const TokenSequence& ref, const TokenSequence& cand,
                   const Taxonomy& taxonomy, const WupsOptions& options = {});

// Corpus means of the per-pair F scores / METEOR scores / WUPS values.
MetricScore rouge_n_corpus(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands, int n,
                           const Rational& beta = 1);
MetricScore rouge_l_corpus(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands, const Rational& beta = 1);
MetricScore meteor_corpus(std::span<const TokenSequence> refs,
                          std::span<const TokenSequence> cands,
                          const Taxonomy* taxonomy = nullptr,
                          const MeteorOptions& options = {});
MetricScore wups(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands,
                 const Taxonomy& taxonomy, const WupsOptions& options = {});

}  // namespace cogme
