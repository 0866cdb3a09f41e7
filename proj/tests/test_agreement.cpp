#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lexsev/agreement.hpp"

using namespace lexsev;

namespace {

constexpr double kTol = 1e-9;
using C = ClassLabel;

// Six lines with hand-countable occurrences of "b*tch", "tr*sh" and "white tr*sh".
LabeledCorpus six_lines(const Normalizer& n) {
  return LabeledCorpus::from_texts("six",
                                   {
                                       {"b*tch b*tch white tr*sh", C::Hate},
                                       {"tr*sh talk", C::Hate},
                                       {"b*tch", C::RelativeHate},
                                       {"white tr*sh and tr*sh", C::RelativeHate},
                                       {"tr*sh day", C::NoHate},
                                       {"nothing here", C::NoHate},
                                   },
                                   n);
}

TermList six_list(const Normalizer& n) { return TermList::from_strings("L", {"b*tch", "tr*sh", "white tr*sh", "eurotr*sh"}, n); }

}  // namespace

TEST(TermStats, CountsOnSyntheticCorpus) {
  Normalizer n;
  auto stats = term_class_stats(six_lines(n), six_list(n));
  ASSERT_EQ(stats.terms.size(), 3u);
  ASSERT_EQ(stats.zero_frequency.size(), 1u);
  EXPECT_EQ(stats.zero_frequency[0].key(), "eurotr*sh");

  const auto* b = stats.find("b*tch");
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->freq[C::Hate], 2u);
  EXPECT_EQ(b->lines[C::Hate], 1u);
  EXPECT_EQ(b->lines[C::RelativeHate], 1u);
  EXPECT_EQ(b->lines[C::NoHate], 0u);

  const auto* t = stats.find("tr*sh");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->freq[C::Hate], 1u);  // the nested occurrence belongs to "white tr*sh"
  EXPECT_EQ(t->freq[C::RelativeHate], 1u);
  EXPECT_EQ(t->lines[C::NoHate], 1u);
  EXPECT_NEAR(*t->percent_lines(C::NoHate), 50.0, kTol);

  const auto* w = stats.find("white tr*sh");
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->lines[C::Hate], 1u);
  EXPECT_EQ(w->lines[C::RelativeHate], 1u);

  for (const auto& s : stats.terms)
    for (auto c : kAllClasses) {
      EXPECT_LE(s.lines[c], s.freq[c]);
      EXPECT_LE(s.lines[c], s.class_size[c]);
    }
}

TEST(TermStats, PercentUndefinedForEmptyClass) {
  Normalizer n;
  auto c = LabeledCorpus::from_texts("c", {{"b*tch", C::Hate}, {"x", C::NoHate}}, n);
  auto stats = term_class_stats(c, TermList::from_strings("L", {"b*tch"}, n));
  EXPECT_FALSE(stats.terms[0].percent_lines(C::RelativeHate).has_value());
}

TEST(TopTerms, FrequencyThenLexicographic) {
  Normalizer n(NormalizationConfig{.placeholder_patterns = {}, .stop_words = {}, .remove_stop_words = false,
                                   .stemmer = Stemmer::None});
  auto c = LabeledCorpus::from_texts("c", {{"d c b a a b", C::Hate}, {"c", C::Hate}}, n);
  auto stats = term_class_stats(c, TermList::from_strings("L", {"a", "b", "c", "d"}, n));
  auto top = top_terms(stats, C::Hate, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0], (RankedTerm{"a", 2}));
  EXPECT_EQ(top[1], (RankedTerm{"b", 2}));
  EXPECT_EQ(top[2], (RankedTerm{"c", 2}));
  EXPECT_EQ(top_terms(stats, C::Hate, 10).size(), 4u);
  EXPECT_TRUE(top_terms(stats, C::NoHate, 5).empty());
}

TEST(TopTerms, MatchesBruteForceOrder) {
  std::mt19937 rng(5);
  Normalizer n(NormalizationConfig{.placeholder_patterns = {}, .stop_words = {}, .remove_stop_words = false,
                                   .stemmer = Stemmer::None});
  const std::vector<std::string> vocab{"p", "q", "r", "s", "t", "u"};
  auto list = TermList::from_strings("L", vocab, n);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, ClassLabel>> rows;
    for (int i = 0; i < 10; ++i) rows.emplace_back(vocab[rng() % 6] + " " + vocab[rng() % 6], C::Hate);
    auto stats = term_class_stats(LabeledCorpus::from_texts("c", rows, n), list);
    std::vector<std::pair<long, std::string>> expect;
    for (const auto& s : stats.terms)
      if (s.freq[C::Hate]) expect.emplace_back(-static_cast<long>(s.freq[C::Hate]), s.term.key());
    std::sort(expect.begin(), expect.end());
    auto top = top_terms(stats, C::Hate, 3);
    for (std::size_t i = 0; i < top.size(); ++i) EXPECT_EQ(top[i].term, expect[i].second);
  }
}

TEST(OuterJoin, MissingCellsAreAbsent) {
  Normalizer n;
  auto stats = term_class_stats(six_lines(n), six_list(n));
  auto rows = outer_join(stats, JoinValue::Frequency);
  auto b = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.term == "b*tch"; });
  ASSERT_NE(b, rows.end());
  EXPECT_EQ(*b->cells[C::Hate], 2.0);
  EXPECT_FALSE(b->cells[C::NoHate].has_value());
  auto pct = outer_join(stats, JoinValue::PercentLines);
  EXPECT_NEAR(*pct[0].cells[C::Hate], 50.0, kTol);
}

TEST(Metrics, Hatefulness) {
  EXPECT_EQ(hatefulness(0), 0);
  EXPECT_EQ(hatefulness(1), 1);
  EXPECT_EQ(hatefulness(249), 1);
}

TEST(Metrics, RatioBoundedRelativeness) {
  EXPECT_NEAR(*relativeness_ratio(249, 1), 0.996, kTol);
  EXPECT_NEAR(*relativeness_ratio(106, 680), 106.0 / 786.0, kTol);
  EXPECT_NEAR(*relativeness_ratio(10723, 11), 10723.0 / 10734.0, kTol);
  EXPECT_FALSE(relativeness_ratio(0, 0).has_value());
  EXPECT_EQ(*relativeness_ratio(0, 1), 0.0);
}

TEST(Metrics, ProseRelativeness) {
  EXPECT_NEAR(*relativeness_prose(3, 4), 0.75, kTol);
  EXPECT_TRUE(std::isinf(*relativeness_prose(3, 0)));
  EXPECT_FALSE(relativeness_prose(0, 0).has_value());
  EXPECT_NEAR(*relativeness_prose(10, 2), 5.0, kTol);  // unbounded above
}

TEST(Metrics, Offensiveness) {
  EXPECT_NEAR(*offensiveness(1, 0.996), 2 * 0.996 / 1.996, kTol);
  EXPECT_NEAR(*offensiveness(1, 1.0), 1.0, kTol);
  EXPECT_EQ(*offensiveness(0, 0.5), 0.0);
  EXPECT_FALSE(offensiveness(0, std::nullopt).has_value());
  EXPECT_FALSE(offensiveness(0, 0.0).has_value());
  EXPECT_NEAR(*offensiveness(1, 0.25, MeanKind::Geometric), 0.5, kTol);
  EXPECT_NEAR(*offensiveness(1, std::numeric_limits<double>::infinity()), 2.0, kTol);
}

TEST(Metrics, HarmonicBetweennessAndMonotone) {
  double prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    double r = i / 1000.0;
    double o = *offensiveness(1, r);
    EXPECT_LE(std::min(1.0, r), o + kTol);
    EXPECT_GE(std::max(1.0, r), o - kTol);
    EXPECT_GT(o, prev);
    prev = o;
  }
}

TEST(IntraAgreement, HandComputedRecords) {
  Normalizer n;
  auto recs = intra_agreement(six_lines(n), six_list(n));
  ASSERT_EQ(recs.size(), 3u);
  auto find = [&](const std::string& k) {
    return *std::find_if(recs.begin(), recs.end(), [&](const auto& r) { return r.term.key() == k; });
  };
  auto t = find("tr*sh");
  EXPECT_EQ(t.at(MetricCase::HateOnly).hatefulness, 1);
  EXPECT_NEAR(*t.at(MetricCase::HateOnly).relativeness, 0.5, kTol);  // p=1, n=1
  EXPECT_NEAR(*t.at(MetricCase::HatePlusRelative).relativeness, 2.0 / 3.0, kTol);
  EXPECT_NEAR(*t.at(MetricCase::HatePlusRelative).offensiveness, 2 * (2.0 / 3) / (1 + 2.0 / 3), kTol);
  auto b = find("b*tch");
  EXPECT_NEAR(*b.at(MetricCase::HateOnly).relativeness, 1.0, kTol);
  EXPECT_EQ(b.at(MetricCase::HatePlusRelative).positive_lines, 2u);
  EXPECT_EQ(b.at(MetricCase::HatePlusRelative).positive_class_size, 4u);
}

TEST(IntraAgreement, EurotrashLikeTermIsUndefined) {
  Normalizer n;
  auto c = LabeledCorpus::from_texts("c", {{"eurotr*sh", C::RelativeHate}, {"x", C::Hate}, {"y", C::NoHate}}, n);
  auto recs = intra_agreement(c, TermList::from_strings("L", {"eurotr*sh"}, n));
  ASSERT_EQ(recs.size(), 1u);
  const auto& h = recs[0].at(MetricCase::HateOnly);
  EXPECT_EQ(h.hatefulness, 0);
  EXPECT_FALSE(h.relativeness.has_value());
  EXPECT_FALSE(h.offensiveness.has_value());
  const auto& hr = recs[0].at(MetricCase::HatePlusRelative);
  EXPECT_EQ(hr.hatefulness, 1);
  EXPECT_NEAR(*hr.offensiveness, 1.0, kTol);
}

TEST(InterAgreement, MembershipAndDedup) {
  Normalizer n;
  std::vector<TermList> lists{TermList::from_strings("A", {"b*tch", "tr*sh"}, n),
                              TermList::from_strings("B", {"B*tch", "white tr*sh"}, n)};
  auto recs = inter_agreement(six_lines(n), lists);
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) {
    EXPECT_FALSE(r.membership.empty());
    if (r.term.key() == "b*tch") {
      EXPECT_EQ(r.membership, (std::vector<std::string>{"A", "B"}));
    }
    if (r.term.key() == "tr*sh") {
      EXPECT_EQ(r.membership, (std::vector<std::string>{"A"}));
    }
  }
}

TEST(InterAgreement, SingleListEqualsIntra) {
  Normalizer n;
  auto corpus = six_lines(n);
  std::vector<TermList> lists{six_list(n)};
  auto inter = inter_agreement(corpus, lists);
  auto intra = intra_agreement(corpus, lists[0]);
  ASSERT_EQ(inter.size(), intra.size());
  for (std::size_t i = 0; i < inter.size(); ++i) {
    EXPECT_EQ(inter[i].term.key(), intra[i].term.key());
    EXPECT_EQ(inter[i].membership, std::vector<std::string>{"L"});
    for (auto mc : kAllMetricCases) EXPECT_EQ(inter[i].at(mc).offensiveness, intra[i].at(mc).offensiveness);
  }
}

TEST(SevereList, StrictThresholdAndNaming) {
  Normalizer n;
  auto recs = inter_agreement(six_lines(n), std::vector<TermList>{six_list(n)});
  auto s = severe_list(recs, MetricCase::HateOnly, 0.7);
  EXPECT_EQ(s.name(), "Offensiveness(Hate)(0.7)");
  std::set<std::string> keys;
  for (const auto& e : s.entries()) keys.insert(e.key());
  EXPECT_EQ(keys, (std::set<std::string>{"b*tch", "white tr*sh"}));
  EXPECT_TRUE(severe_list(recs, MetricCase::HateOnly, 1.0).empty());
  EXPECT_EQ(severe_list_name(MetricCase::HatePlusRelative, 0.46), "Offensiveness(Hate+Relative)(0.46)");
}

TEST(SevereList, ExcludesUndefined) {
  InterAgreementRecord r;
  r.term = NormalizedTerm{"eurotr*sh", {"eurotr*sh"}};
  r.membership = {"L"};
  std::vector<InterAgreementRecord> recs{r};
  EXPECT_TRUE(severe_list(recs, MetricCase::HateOnly, 0.0).empty());
}

TEST(SevereList, AntitoneInThreshold) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<InterAgreementRecord> recs;
    for (int i = 0; i < 30; ++i) {
      InterAgreementRecord r;
      r.term = NormalizedTerm{"t" + std::to_string(i), {"t" + std::to_string(i)}};
      auto& m = r.cases[0];
      m.hatefulness = u(rng) < 0.8;
      m.relativeness = u(rng) < 0.1 ? std::nullopt : std::optional<double>(u(rng));
      m.offensiveness = offensiveness(m.hatefulness, m.relativeness);
      recs.push_back(r);
    }
    double t1 = u(rng), t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    auto a = severe_list(recs, MetricCase::HateOnly, t1), b = severe_list(recs, MetricCase::HateOnly, t2);
    for (const auto& e : b.entries()) EXPECT_TRUE(a.contains(e.key()));
  }
}

TEST(SevereList, SidecarFields) {
  Normalizer n;
  std::vector<TermList> lists{six_list(n)};
  auto recs = inter_agreement(six_lines(n), lists);
  auto s = severe_list(recs, MetricCase::HateOnly, 0.7);
  auto j = severe_list_sidecar(s, MetricCase::HateOnly, 0.7, lists, "six");
  EXPECT_EQ(j["min_offense"], 0.7);
  EXPECT_EQ(j["case"], "hate");
  EXPECT_EQ(j["term_count"], s.size());
  EXPECT_EQ(j["source_lists"][0]["name"], "L");
}

TEST(Summary, RowsPartitionEachClass) {
  Normalizer n;
  std::vector<LabeledCorpus> corpora{six_lines(n)};
  std::vector<TermList> lists{six_list(n), TermList::from_strings("Z", {"zzz"}, n)};
  auto rows = summary_n_hate_terms(corpora, lists);
  std::map<std::pair<int, std::string>, double> pct;
  for (const auto& r : rows) pct[{static_cast<int>(r.cls), r.list}] += r.percent();
  for (const auto& [k, v] : pct) EXPECT_NEAR(v, 100.0, 1e-9);
  auto z = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.list == "Z"; });
  EXPECT_EQ(z->n_terms, 0u);
  EXPECT_NEAR(z->percent(), 100.0, kTol);
  // Hate class of L: line 1 has 3 occurrences, line 2 has 1.
  std::set<std::size_t> ns;
  for (const auto& r : rows)
    if (r.list == "L" && r.cls == C::Hate) ns.insert(r.n_terms);
  EXPECT_EQ(ns, (std::set<std::size_t>{1, 3}));
}
