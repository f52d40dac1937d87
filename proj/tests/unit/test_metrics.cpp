#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sadele/metrics.h"
#include "test_support.h"

using namespace sadele;
using sadele::testing::data_path;
using sadele::testing::expect_error;

namespace {

TokenList toks(std::string_view s) { return eval_tokens(s); }

using Counts = std::map<TokenList, int>;

Counts ngrams(const TokenList& t, std::size_t n) {
  Counts c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++c[TokenList(t.begin() + i, t.begin() + i + n)];
  return c;
}

int total(const Counts& c) {
  int s = 0;
  for (const auto& [k, v] : c) s += v;
  return s;
}

Counts intersect(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    if (it != b.end()) out[k] = std::min(v, it->second);
  }
  return out;
}

Counts minus(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    const int rest = v - (it == b.end() ? 0 : it->second);
    if (rest > 0) out[k] = rest;
  }
  return out;
}

double ratio(int num, int den_a, int den_b, int den) {
  if (den_a == 0 && den_b == 0) return 1.0;
  if (den_a == 0 || den_b == 0) return 0.0;
  return static_cast<double>(num) / den;
}

/// Straight transcription of the SARI definition over count maps.
double oracle_sari(const TokenList& s, const TokenList& h, const TokenList& r) {
  double sum = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto S = ngrams(s, n), H = ngrams(h, n), R = ngrams(r, n);
    if (S.empty() && H.empty() && R.empty()) continue;
    ++orders;
    auto f1 = [](const Counts& cand, const Counts& ref) {
      const int hit = total(intersect(cand, ref));
      const double p = ratio(hit, total(cand), total(ref), total(cand));
      const double rc = ratio(hit, total(cand), total(ref), total(ref));
      return p + rc == 0.0 ? 0.0 : 2 * p * rc / (p + rc);
    };
    const double keep = f1(intersect(S, H), intersect(S, R));
    const double add = f1(minus(H, S), minus(R, S));
    const auto del_c = minus(S, H), del_r = minus(S, R);
    const double del =
        ratio(total(intersect(del_c, del_r)), total(del_c), total(del_r), total(del_c));
    sum += (keep + add + del) / 3.0;
  }
  return orders == 0 ? 0.0 : 100.0 * sum / orders;
}

TokenList random_tokens(std::mt19937& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  TokenList t(1 + rng() % max_len);
  for (auto& w : t) w = vocab[rng() % vocab.size()];
  return t;
}

}  // namespace

TEST_CASE("BLEU examples") {
  const std::vector<TokenList> refs = {toks("Zor bir durum ."), toks("Yeni bir dil öğreniyor .")};
  CHECK(bleu_corpus(refs, refs) == doctest::Approx(100.0));

  const std::vector<TokenList> h = {toks("a b c d")};
  const std::vector<TokenList> r = {toks("a b c d e")};
  CHECK(bleu_corpus(h, r) == doctest::Approx(77.880078).epsilon(1e-8));

  const std::vector<TokenList> no4 = {toks("a b c x d e f")};
  const std::vector<TokenList> ref4 = {toks("a b c y d e f")};
  CHECK(bleu_corpus(no4, ref4) == 0.0);

  // Casefolded comparison.
  const std::vector<TokenList> upper = {toks("ZOR BİR DURUM .")};
  const std::vector<TokenList> lower = {toks("zor bir durum .")};
  CHECK(bleu_corpus(upper, lower) == doctest::Approx(100.0));

  // Short sentences: orders without hypothesis n-grams are left out.
  const std::vector<TokenList> tiny = {toks("zor"), toks("bir durum")};
  CHECK(bleu_corpus(tiny, tiny) == doctest::Approx(100.0));
  const std::vector<TokenList> one = {toks("a")};
  const std::vector<TokenList> four = {toks("a b c d")};
  CHECK(bleu_corpus(one, four) == doctest::Approx(100.0 * std::exp(-3.0)));
  const std::vector<TokenList> blank = {TokenList{}};
  CHECK(bleu_corpus(blank, four) == 0.0);

  const std::vector<TokenList> empty;
  CHECK(expect_error([&] { bleu_corpus(empty, empty); }).code() == ErrorCode::EmptyInput);
  CHECK(expect_error([&] { bleu_corpus(h, refs); }).code() == ErrorCode::LengthMismatch);
}

TEST_CASE("BLEU properties") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<TokenList> hyps, refs;
    for (std::size_t i = 0; i < n; ++i) {
      hyps.push_back(random_tokens(rng, 9));
      refs.push_back(random_tokens(rng, 9));
    }
    const double b = bleu_corpus(hyps, refs);
    CHECK(b >= 0.0);
    CHECK(b <= 100.0 + 1e-9);
    CHECK(bleu_corpus(refs, refs) == doctest::Approx(100.0));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<TokenList> hp, rp;
    for (auto i : perm) {
      hp.push_back(hyps[i]);
      rp.push_back(refs[i]);
    }
    CHECK(bleu_corpus(hp, rp) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("SARI examples") {
  CHECK(sari_sentence(toks("a b c d"), toks("a b e d"), toks("a b e d")) == doctest::Approx(100.0));
  CHECK(sari_sentence(toks("a b c"), toks("a b c"), toks("a b c")) == doctest::Approx(100.0));
  CHECK(sari_sentence(toks("a b c"), toks("a b c"), toks("a b d")) ==
        doctest::Approx(16.296296).epsilon(1e-7));
  CHECK(expect_error([] { sari_sentence({}, toks("a"), toks("a")); }).code() ==
        ErrorCode::EmptyInput);
  CHECK(expect_error([] { sari_sentence(toks("a"), toks("a"), {}); }).code() ==
        ErrorCode::EmptyInput);
}

TEST_CASE("SARI corpus examples") {
  const std::vector<TokenList> src = {toks("a b c d"), toks("a b c")};
  const std::vector<TokenList> hyp = {toks("a b e d"), toks("a b c")};
  const std::vector<TokenList> ref = {toks("a b e d"), toks("a b d")};
  CHECK(sari_corpus(src, hyp, ref) == doctest::Approx(58.148148).epsilon(1e-7));

  const std::vector<TokenList> one_src = {src[1]}, one_hyp = {hyp[1]}, one_ref = {ref[1]};
  CHECK(sari_corpus(one_src, one_hyp, one_ref) == sari_sentence(src[1], hyp[1], ref[1]));

  const std::vector<TokenList> short_hyp = {hyp[0]};
  CHECK(expect_error([&] { sari_corpus(src, short_hyp, ref); }).code() ==
        ErrorCode::LengthMismatch);

  // hyp = ref with every hyp differing from its source.
  const std::vector<TokenList> s2 = {toks("müşkül bir durum ."), toks("yeni bir lisan öğreniyor .")};
  const std::vector<TokenList> r2 = {toks("zor bir durum ."), toks("yeni bir dil öğreniyor .")};
  CHECK(sari_corpus(s2, r2, r2) == doctest::Approx(100.0));
}

TEST_CASE("SARI agrees with an independent transcription") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_tokens(rng, 6);
    const auto h = rng() % 5 == 0 ? TokenList{} : random_tokens(rng, 6);
    const auto r = random_tokens(rng, 6);
    const double got = sari_sentence(s, h, r);
    CHECK(got == doctest::Approx(oracle_sari(s, h, r)).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 100.0 + 1e-9);
    CHECK(sari_sentence(s, r, r) == doctest::Approx(100.0));
  }
}

TEST_CASE("SARI is invariant under consistent token relabeling") {
  std::mt19937 rng(13);
  const std::map<std::string, std::string> relabel = {
      {"a", "kitap"}, {"b", "okuyor"}, {"c", "sürekli"}, {"d", "."}, {"e", "mütemadiyen"}};
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_tokens(rng, 6), h = random_tokens(rng, 6), r = random_tokens(rng, 6);
    const double before = sari_sentence(s, h, r);
    for (auto* list : {&s, &h, &r}) {
      for (auto& w : *list) w = relabel.at(w);
    }
    CHECK(sari_sentence(s, h, r) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("eval_tokens") {
  CHECK(eval_tokens("").empty());
  CHECK(eval_tokens("   ").empty());
  CHECK(eval_tokens("Zor bir durum.") == TokenList{"Zor", "bir", "durum", "."});
}

TEST_CASE("evaluate_outputs and report formatting") {
  const auto corpus = load_parallel(data_path("pairs3.tsv"));
  std::vector<std::string> perfect;
  for (const auto& p : corpus.pairs) perfect.push_back(p.simple);
  const auto row = evaluate_outputs(corpus, perfect, "oracle");
  CHECK(row.label == "oracle");
  CHECK(row.bleu == doctest::Approx(100.0));
  CHECK(row.sari == doctest::Approx(100.0));
  CHECK(row.features.empty());

  const std::vector<std::string> too_few = {perfect[0]};
  CHECK(expect_error([&] { evaluate_outputs(corpus, too_few, "x"); }).code() ==
        ErrorCode::LengthMismatch);

  EvalReport report{row.bleu, row.sari, {row}};
  const auto table = format_report_table(report);
  CHECK(table.find("Model") != std::string::npos);
  CHECK(table.find("100.00") != std::string::npos);
  const auto json = format_report_json(report);
  CHECK(json.find("\"rows\"") != std::string::npos);
  CHECK(json.find("\"oracle\"") != std::string::npos);
}

TEST_CASE("ablation report on the three-sentence fixture") {
  const auto tagger = PosLexicon::load(data_path("pos.tsv"));
  const auto freq = load_frequency_table(data_path("freq.tsv"));
  const auto emb = load_embeddings(data_path("emb.txt"));
  const auto mlm = TableBackend::load(data_path("mlm_table.tsv"));
  const Resources res{tagger, freq, emb, mlm};
  const auto corpus = load_parallel(data_path("pairs3.tsv"));

  const auto report = ablation_report(corpus, res, PipelineConfig{});
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].label == kBaselineLabel);
  CHECK(report.rows[1].label == kSimilarityLabel);
  CHECK(report.rows[2].label == kLmLabel);
  CHECK(report.rows[0].features.size() == 2);
  CHECK(report.rows[2].features.size() == 4);
  CHECK(report.bleu == report.rows[2].bleu);
  CHECK(report.sari == report.rows[2].sari);
  // Frozen from the first verified run.
  CHECK(report.rows[0].bleu == doctest::Approx(50.19120807749993).epsilon(1e-12));
  CHECK(report.rows[0].sari == doctest::Approx(44.10934744268078).epsilon(1e-12));
  CHECK(report.rows[1].bleu == doctest::Approx(85.4867328096609).epsilon(1e-12));
  CHECK(report.rows[1].sari == doctest::Approx(73.12169312169313).epsilon(1e-12));
  CHECK(report.rows[2].bleu == doctest::Approx(100.0));
  CHECK(report.rows[2].sari == doctest::Approx(100.0));

  // Nothing complex: every row is the identity.
  ParallelCorpus plain;
  plain.pairs.push_back({"Hak söz söyleyenin dostu az olur .", "Hak söz söyleyenin dostu az olur ."});
  const auto same = ablation_report(plain, res, PipelineConfig{});
  for (const auto& r : same.rows) {
    CHECK(r.bleu == same.rows[0].bleu);
    CHECK(r.sari == same.rows[0].sari);
  }
}
