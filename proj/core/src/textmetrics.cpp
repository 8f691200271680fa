#include "cogme/textmetrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "cogme/errors.hpp"

namespace cogme {

TokenSequence normalize(std::string_view text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!lowered.empty() && (is_space(lowered.back()) || lowered.back() == '.' ||
                              lowered.back() == '!' || lowered.back() == '?')) {
    lowered.pop_back();
  }
  TokenSequence out;
  std::string current;
  for (char c : lowered) {
    if (is_space(c)) {
      if (!current.empty()) out.tokens_.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.tokens_.push_back(std::move(current));
  return out;
}

std::vector<TokenSequence> normalize_all(std::span<const std::string> texts) {
  std::vector<TokenSequence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(normalize(t));
  return out;
}

namespace {

void check_corpus(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands) {
  if (cands.empty()) throw DataError("empty candidate corpus");
  if (refs.size() != cands.size()) {
    throw DataError("reference and candidate counts differ (" + std::to_string(refs.size()) +
                    " vs " + std::to_string(cands.size()) + ")");
  }
}

using NgramCounts = std::unordered_map<std::string, long long>;

NgramCounts ngrams(const TokenSequence& s, int n) {
  NgramCounts counts;
  const auto size = static_cast<long long>(s.size());
  for (long long i = 0; i + n <= size; ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k > 0) key += '\x1f';
      key += s[static_cast<std::size_t>(i + k)];
    }
    ++counts[key];
  }
  return counts;
}

long long clipped_overlap(const NgramCounts& cand, const NgramCounts& ref) {
  long long overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

long long total(const NgramCounts& counts) {
  long long sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

Rational f_measure(const Rational& precision, const Rational& recall, const Rational& beta) {
  const Rational b2 = beta * beta;
  const Rational denominator = recall + b2 * precision;
  if (denominator == 0) return 0;
  return (1 + b2) * precision * recall / denominator;
}

MetricScore mean_score(std::string name, std::vector<Rational> values) {
  MetricScore s;
  s.metric = std::move(name);
  Rational sum = 0;
  for (const auto& v : values) {
    sum += v;
    s.pairs.push_back(to_double(v));
  }
  s.exact = sum / Rational(static_cast<long long>(values.size()));
  s.value = to_double(*s.exact);
  s.exact_pairs = std::move(values);
  return s;
}

}  // namespace

MetricScore exact_accuracy(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands) {
  check_corpus(refs, cands);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < refs.size(); ++i) values.emplace_back(refs[i] == cands[i] ? 1 : 0);
  return mean_score("accuracy", std::move(values));
}

Rational BleuStats::precision(int n) const {
  const auto i = static_cast<std::size_t>(n - 1);
  if (i >= totals.size() || totals[i] == 0) return 0;
  return Rational(matches[i], totals[i]);
}

BleuStats bleu_stats(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands,
                     int max_n) {
  if (max_n < 1) throw DataError("max_n must be at least 1");
  BleuStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_n), 0);
  stats.totals.assign(static_cast<std::size_t>(max_n), 0);
  for (std::size_t i = 0; i < refs.size() && i < cands.size(); ++i) {
    stats.ref_length += static_cast<long long>(refs[i].size());
    stats.cand_length += static_cast<long long>(cands[i].size());
    for (int n = 1; n <= max_n; ++n) {
      const auto cand = ngrams(cands[i], n);
      stats.matches[static_cast<std::size_t>(n - 1)] += clipped_overlap(cand, ngrams(refs[i], n));
      stats.totals[static_cast<std::size_t>(n - 1)] += total(cand);
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats, BleuOptions options) {
  if (stats.cand_length == 0) return 0;
  double log_sum = 0;
  const int max_n = static_cast<int>(stats.totals.size());
  for (int n = 1; n <= max_n; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    double m = static_cast<double>(stats.matches[i]);
    double t = static_cast<double>(stats.totals[i]);
    if (options.smooth && n > 1) {
      m += 1;
      t += 1;
    }
    if (m == 0 || t == 0) return 0;
    log_sum += std::log(m / t);
  }
  const double r = static_cast<double>(stats.ref_length);
  const double c = static_cast<double>(stats.cand_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return std::min(1.0, bp * std::exp(log_sum / max_n));
}

MetricScore bleu(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands,
                 BleuOptions options) {
  check_corpus(refs, cands);
  MetricScore s;
  s.metric = "bleu";
  s.value = bleu_from_stats(bleu_stats(refs, cands, options.max_n), options);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    s.pairs.push_back(bleu_from_stats(bleu_stats(refs.subspan(i, 1), cands.subspan(i, 1),
                                                 options.max_n),
                                      options));
  }
  return s;
}

PrfScore rouge_n(const TokenSequence& ref, const TokenSequence& cand, int n,
                 const Rational& beta) {
  if (n < 1) throw DataError("rouge n must be at least 1");
  const auto ref_grams = ngrams(ref, n);
  const auto cand_grams = ngrams(cand, n);
  const long long ref_total = total(ref_grams);
  const long long cand_total = total(cand_grams);
  if (ref_total == 0 || cand_total == 0) return {};
  const long long overlap = clipped_overlap(cand_grams, ref_grams);
  PrfScore s;
  s.precision = Rational(overlap, cand_total);
  s.recall = Rational(overlap, ref_total);
  s.f = f_measure(s.precision, s.recall, beta);
  return s;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> previous(b.size() + 1, 0);
  std::vector<std::size_t> current(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      current[j] = a[i - 1] == b[j - 1] ? previous[j - 1] + 1
                                        : std::max(previous[j], current[j - 1]);
    }
    std::swap(previous, current);
  }
  return previous[b.size()];
}

PrfScore rouge_l(const TokenSequence& ref, const TokenSequence& cand, const Rational& beta) {
  if (ref.empty() || cand.empty()) return {};
  const auto lcs = static_cast<long long>(lcs_length(ref.tokens(), cand.tokens()));
  PrfScore s;
  s.precision = Rational(lcs, static_cast<long long>(cand.size()));
  s.recall = Rational(lcs, static_cast<long long>(ref.size()));
  s.f = f_measure(s.precision, s.recall, beta);
  return s;
}

namespace {

bool share_parent(const std::string& a, const std::string& b, const Taxonomy& taxonomy) {
  if (!taxonomy.contains(a) || !taxonomy.contains(b)) return false;
  const auto& pa = taxonomy.parents(a);
  const auto& pb = taxonomy.parents(b);
  return std::any_of(pa.begin(), pa.end(), [&](const std::string& p) {
    return std::find(pb.begin(), pb.end(), p) != pb.end();
  });
}

}  // namespace

MeteorDetail meteor_lite(const TokenSequence& ref, const TokenSequence& cand,
                         const Taxonomy* taxonomy, const MeteorOptions& options) {
  MeteorDetail d;
  if (ref.empty() || cand.empty()) return d;

  constexpr std::size_t kUnaligned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> aligned(cand.size(), kUnaligned);  // cand -> ref position
  std::vector<bool> ref_used(ref.size(), false);
  auto stage = [&](auto&& matches) {
    for (std::size_t c = 0; c < cand.size(); ++c) {
      if (aligned[c] != kUnaligned) continue;
      for (std::size_t r = 0; r < ref.size(); ++r) {
        if (!ref_used[r] && matches(cand[c], ref[r])) {
          aligned[c] = r;
          ref_used[r] = true;
          break;
        }
      }
    }
  };
  stage([](const std::string& a, const std::string& b) { return a == b; });
  if (taxonomy != nullptr) {
    stage([&](const std::string& a, const std::string& b) {
      return share_parent(a, b, *taxonomy);
    });
  }

  std::size_t previous_c = kUnaligned;
  std::size_t previous_r = kUnaligned;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    if (aligned[c] == kUnaligned) continue;
    ++d.matches;
    const bool continues = previous_c != kUnaligned && c == previous_c + 1 &&
                           aligned[c] == previous_r + 1;
    if (!continues) ++d.chunks;
    previous_c = c;
    previous_r = aligned[c];
  }
  if (d.matches == 0) return d;

  const auto m = static_cast<long long>(d.matches);
  d.precision = Rational(m, static_cast<long long>(cand.size()));
  d.recall = Rational(m, static_cast<long long>(ref.size()));
  d.fmean = d.precision * d.recall /
            (options.alpha * d.precision + (1 - options.alpha) * d.recall);
  const Rational fragmentation(static_cast<long long>(d.chunks), m);
  Rational power = 1;
  for (int i = 0; i < options.beta; ++i) power *= fragmentation;
  d.penalty = options.gamma * power;
  d.score = d.fmean * (1 - d.penalty);
  return d;
}

std::optional<Rational> wup_similarity(std::string_view a, std::string_view b,
                                       const Taxonomy& taxonomy) {
  if (!taxonomy.contains(a) || !taxonomy.contains(b)) return std::nullopt;
  const auto ancestors_a = taxonomy.ancestors_of(a);
  const auto ancestors_b = taxonomy.ancestors_of(b);
  int deepest = 0;
  for (const auto& x : ancestors_a) {
    if (ancestors_b.contains(x)) deepest = std::max(deepest, taxonomy.depth(x));
  }
  return Rational(2 * deepest, taxonomy.depth(a) + taxonomy.depth(b));
}

namespace {

Rational word_similarity(const std::string& a, const std::string& b, const Taxonomy& taxonomy,
                         const WupsOptions& options) {
  const auto w = wup_similarity(a, b, taxonomy);
  if (!w) return a == b ? 1 : 0;
  return *w >= options.threshold ? *w : options.down_weight * *w;
}

// Product over `from` of the best similarity to any word in `to`.
Rational directed_product(const std::set<std::string>& from, const std::set<std::string>& to,
                          const Taxonomy& taxonomy, const WupsOptions& options) {
  Rational product = 1;
  for (const auto& x : from) {
    Rational best = 0;
    for (const auto& y : to) best = std::max(best, word_similarity(x, y, taxonomy, options));
    product *= best;
    if (product == 0) break;
  }
  return product;
}

}  // namespace

Rational wups_pair(const TokenSequence& ref, const TokenSequence& cand, const Taxonomy& taxonomy,
                   const WupsOptions& options) {
  const std::set<std::string> answer(cand.begin(), cand.end());
  const std::set<std::string> truth(ref.begin(), ref.end());
  if (answer.empty() || truth.empty()) return 0;
  return std::min(directed_product(answer, truth, taxonomy, options),
                  directed_product(truth, answer, taxonomy, options));
}

MetricScore rouge_n_corpus(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands, int n, const Rational& beta) {
  check_corpus(refs, cands);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < refs.size(); ++i) values.push_back(rouge_n(refs[i], cands[i], n, beta).f);
  return mean_score("rouge-" + std::to_string(n), std::move(values));
}

MetricScore rouge_l_corpus(std::span<const TokenSequence> refs,
                           std::span<const TokenSequence> cands, const Rational& beta) {
  check_corpus(refs, cands);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < refs.size(); ++i) values.push_back(rouge_l(refs[i], cands[i], beta).f);
  return mean_score("rouge-l", std::move(values));
}

MetricScore meteor_corpus(std::span<const TokenSequence> refs,
                          std::span<const TokenSequence> cands, const Taxonomy* taxonomy,
                          const MeteorOptions& options) {
  check_corpus(refs, cands);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    values.push_back(meteor_lite(refs[i], cands[i], taxonomy, options).score);
  }
  return mean_score("meteor-lite", std::move(values));
}

MetricScore wups(std::span<const TokenSequence> refs, std::span<const TokenSequence> cands,
                 const Taxonomy& taxonomy, const WupsOptions& options) {
  check_corpus(refs, cands);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    values.push_back(wups_pair(refs[i], cands[i], taxonomy, options));
  }
  return mean_score("wups", std::move(values));
}

}  // namespace cogme
