#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "hyperchord/io.hpp"

namespace hc = hyperchord;

TEST(BatchCsv, RoundTripsExactly) {
  for (auto kind : {hc::SamplerKind::geometric, hc::SamplerKind::angular}) {
    const auto batch = hc::sample_chords(kind, 7, 0.3, 500, {123456789012345ULL, 4});
    std::stringstream ss;
    hc::write_batch_csv(ss, batch);
    const auto back = hc::read_batch_csv(ss);
    EXPECT_EQ(back.n, batch.n);
    EXPECT_EQ(back.r, batch.r);
    EXPECT_EQ(back.sampler, batch.sampler);
    EXPECT_EQ(back.seed, batch.seed);
    EXPECT_EQ(back.values, batch.values);
  }
}

TEST(BatchCsv, RejectsMalformedInput) {
  std::istringstream missing("# n,r,sampler,seed,stream_id\n");
  EXPECT_THROW(hc::read_batch_csv(missing), hc::domain_error);
  std::istringstream sampler("# n,r,sampler,seed,stream_id\n# 3,1,magic,1,0\nchord_length\n");
  EXPECT_THROW(hc::read_batch_csv(sampler), hc::domain_error);
  std::istringstream value("# n,r,sampler,seed,stream_id\n# 3,1,geometric,1,0\nchord_length\nabc\n");
  EXPECT_THROW(hc::read_batch_csv(value), hc::domain_error);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(hc::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(hc::format_double(2.0), "2");
}

TEST(Json, ReportFields) {
  hc::SampleBatch batch;
  batch.n = 3;
  batch.values = {1.0, 1.2};
  const auto j = hc::to_json(hc::estimate_radius(batch));
  for (const char* key : {"n", "r_true", "m", "r_hat", "var_closed_form", "crlb", "efficiency",
                          "empirical_var", "plug_in", "crlb_note"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["crlb"].is_null());
  EXPECT_EQ(j["plug_in"], true);
  const auto g = hc::to_json(hc::gap_row(19));
  EXPECT_EQ(g["n"], 19);
}

TEST(Csv, GapTable) {
  const auto rows = hc::gap_table(2, 4);
  std::ostringstream os;
  hc::write_csv(os, std::span<const hc::GapRow>(rows));
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, 10), "n,c_n,gap\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
