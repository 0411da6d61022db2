#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "refagree/domain.hpp"
#include "refagree/errors.hpp"

namespace refagree {
namespace {

constexpr const char* kHeader =
    "uoa_id,uoa_name,institution,submission_label,n_outputs,n_matched,pp_4star,n_top10\n";

std::vector<UoaDataset> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_datasets(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

TEST(ParseDataset, SingleRowEchoesFields) {
  auto all = parse(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30,25\n");
  ASSERT_EQ(all.size(), 1u);
  const auto& ds = all[0];
  EXPECT_EQ(ds.uoa_id, 9);
  EXPECT_EQ(ds.uoa_name, "Physics");
  ASSERT_EQ(ds.records.size(), 1u);
  const auto& r = ds.records[0];
  EXPECT_EQ(r.institution, "Univ A");
  EXPECT_EQ(r.submission_label, "");
  EXPECT_EQ(r.n_outputs, 100);
  EXPECT_EQ(r.n_matched, 95);
  EXPECT_DOUBLE_EQ(r.pp_4star, 0.30);
  EXPECT_EQ(r.n_top10, 25);
}

TEST(ParseDataset, Top10ExceedingMatchedNamesRow) {
  const auto msg = error_of(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30,25\n" +
                            "9,Physics,Univ B,,100,95,0.30,96\n");
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("n_top10"), std::string::npos) << msg;
}

TEST(ParseDataset, SeparateSubmissionLabelsAreDistinct) {
  auto all = parse(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30,25\n" +
                   "9,Physics,Univ A,B,50,40,0.20,5\n");
  ASSERT_EQ(all[0].records.size(), 2u);
  EXPECT_EQ(record_key(all[0].records[1]), "Univ A [B]");
}

TEST(ParseDataset, DuplicateSubmissionRejected) {
  const auto msg = error_of(std::string(kHeader) + "9,Physics,Univ A,B,100,95,0.30,25\n" +
                            "9,Physics,Univ A,B,50,40,0.20,5\n");
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
}

TEST(ParseDataset, SameInstitutionInDifferentUoasIsFine) {
  auto all = parse(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30,25\n" +
                   "10,Mathematical Sciences,Univ A,,100,95,0.30,25\n");
  EXPECT_EQ(all.size(), 2u);
}

TEST(ParseDataset, MalformedRows) {
  EXPECT_NE(error_of(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30\n").find("row 2"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "9,Physics,Univ A,,1x0,95,0.30,25\n").find("n_outputs"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "9,Physics,Univ A,,100,95,1.30,25\n").find("pp_4star"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "9,Physics,Univ A,,100,101,0.30,25\n").find("n_matched"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "0,Physics,Univ A,,100,95,0.30,25\n").find("uoa_id"),
            std::string::npos);
  EXPECT_NE(error_of("uoa,uoa_name,institution,submission_label,n_outputs,n_matched,pp_4star,n_top10\n")
                .find("row 1"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "9,Physics,Univ A,,100,95,0.30,25\n9,Phys,Univ B,,1,1,0,0\n")
                .find("conflicts"),
            std::string::npos);
}

TEST(ParseDataset, QuotedFieldsAndCrLf) {
  auto all = parse(std::string(kHeader) +
                   "25,Education,\"Goldsmiths, University of London\",A,60,30,0.25,3\r\n");
  EXPECT_EQ(all[0].records[0].institution, "Goldsmiths, University of London");
  EXPECT_EQ(all[0].records[0].submission_label, "A");
}

TEST(ParseDataset, OptionalStarColumns) {
  const std::string header =
      "uoa_id,uoa_name,institution,submission_label,n_outputs,n_matched,pp_4star,n_top10,pp_3star,"
      "pp_2star,pp_1star\n";
  auto all = parse(header + "9,Physics,Univ A,,100,95,0.30,25,0.5,0.15,0.05\n" +
                   "9,Physics,Univ B,,100,95,0.30,25,,,\n");
  EXPECT_DOUBLE_EQ(*all[0].records[0].pp_3star, 0.5);
  EXPECT_FALSE(all[0].records[1].pp_3star.has_value());
  const auto msg = error_of(header + "9,Physics,Univ A,,100,95,0.30,25,0.5,0.3,0.05\n");
  EXPECT_NE(msg.find("profile"), std::string::npos) << msg;
}

TEST(ParseDataset, MultipleUoasSplitAndOrdered) {
  auto all = parse(std::string(kHeader) + "10,Maths,U1,,10,10,0.1,1\n9,Physics,U1,,10,10,0.1,1\n" +
                   "10,Maths,U2,,10,10,0.2,2\n");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].uoa_id, 9);
  EXPECT_EQ(all[1].uoa_id, 10);
  EXPECT_EQ(all[1].records[1].institution, "U2");
  std::istringstream in(std::string(kHeader) + "10,Maths,U1,,10,10,0.1,1\n9,Physics,U1,,10,10,0.1,1\n");
  EXPECT_THROW(parse_dataset(in), DataError);
}

TEST(ParseDataset, RoundTripProperty) {
  std::mt19937_64 gen(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<UoaDataset> datasets;
    const int n_uoa = 1 + static_cast<int>(gen() % 3);
    const bool stars = gen() % 2;
    for (int u = 0; u < n_uoa; ++u) {
      UoaDataset ds{u + 1, "UoA, \"" + std::to_string(u) + "\"", {}};
      const int n = 1 + static_cast<int>(gen() % 6);
      for (int k = 0; k < n; ++k) {
        SubmissionRecord r;
        r.institution = "Inst " + std::to_string(k) + (k % 2 ? ", Ltd" : "");
        r.submission_label = k % 3 == 0 ? "" : "L";
        r.n_outputs = 1 + static_cast<std::int64_t>(gen() % 500);
        r.n_matched = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(r.n_outputs + 1));
        r.n_top10 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(r.n_matched + 1));
        std::uniform_real_distribution<double> unit(0.0, 0.25);
        r.pp_4star = unit(gen);
        if (stars) {
          r.pp_3star = unit(gen);
          r.pp_2star = unit(gen);
          if (gen() % 2) r.pp_1star = unit(gen);
        }
        ds.records.push_back(r);
      }
      datasets.push_back(ds);
    }
    std::ostringstream out;
    write_datasets(out, datasets);
    const auto back = parse(out.str());
    ASSERT_EQ(back.size(), datasets.size());
    for (std::size_t u = 0; u < back.size(); ++u) {
      EXPECT_EQ(back[u].uoa_id, datasets[u].uoa_id);
      EXPECT_EQ(back[u].uoa_name, datasets[u].uoa_name);
      EXPECT_EQ(back[u].records, datasets[u].records);
    }
  }
}

TEST(Derive, Arithmetic) {
  SubmissionRecord r{"U", "", 100, 95, 0.30, 19};
  const auto d = derive(r);
  ASSERT_TRUE(d.pp_top10);
  EXPECT_DOUBLE_EQ(*d.pp_top10, 0.2);
  EXPECT_DOUBLE_EQ(d.p_4star, 30.0);
  EXPECT_DOUBLE_EQ(d.p_top10, 19.0);
  EXPECT_DOUBLE_EQ(d.wos_coverage, 0.95);
}

TEST(Derive, NoMatchedOutputsLeavesPpTop10Undefined) {
  const auto d = derive({"U", "", 40, 0, 0.25, 0});
  EXPECT_FALSE(d.pp_top10);
  EXPECT_EQ(d.p_top10, 0.0);
  EXPECT_DOUBLE_EQ(d.p_4star, 10.0);
}

TEST(Derive, ClinicalMedicineCoverage) {
  // 13 400 outputs at 94.8% coverage
  SubmissionRecord r{"Clinical Medicine (all)", "", 13400, 12703, 3107.0 / 13400, 5385};
  const auto d = derive(r);
  EXPECT_NEAR(d.wos_coverage, 0.948, 0.0005);
  EXPECT_NEAR(d.p_4star, 3107.0, 1e-9);
}

TEST(Derive, ConsistencyProperty) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 1000; ++i) {
    SubmissionRecord r;
    r.institution = "x";
    r.n_outputs = static_cast<std::int64_t>(gen() % 1000);
    r.n_matched = r.n_outputs ? static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(r.n_outputs + 1)) : 0;
    r.n_top10 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(r.n_matched + 1));
    r.pp_4star = std::uniform_real_distribution<double>(0, 1)(gen);
    const auto d = derive(r);
    EXPECT_EQ(d.p_top10, static_cast<double>(r.n_top10));
    EXPECT_LE(d.p_4star, static_cast<double>(r.n_outputs));
    EXPECT_EQ(d.pp_top10.has_value(), r.n_matched > 0);
  }
}

TEST(FilterEvaluable, ExcludesUnmatched) {
  UoaDataset ds{1, "x", {{"A", "", 10, 5, 0.1, 1}, {"B", "", 10, 0, 0.2, 0}, {"C", "", 10, 8, 0.3, 2}}};
  const auto split = filter_evaluable(ds);
  EXPECT_EQ(split.dataset.records.size(), 2u);
  EXPECT_EQ(split.excluded, 1u);
  EXPECT_EQ(split.dataset.records[1].institution, "C");
}

TEST(FilterEvaluable, IdentityWhenAllEvaluable) {
  UoaDataset ds{1, "x", {{"A", "", 10, 5, 0.1, 1}, {"C", "", 10, 8, 0.3, 2}}};
  const auto split = filter_evaluable(ds);
  EXPECT_EQ(split.dataset.records, ds.records);
  EXPECT_EQ(split.excluded, 0u);
}

TEST(FilterEvaluable, NothingLeftIsAnError) {
  UoaDataset ds{1, "x", {{"A", "", 10, 0, 0.1, 0}, {"B", "", 0, 0, 0.0, 0}}};
  try {
    filter_evaluable(ds);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("no evaluable records"), std::string::npos);
  }
}

}  // namespace
}  // namespace refagree
