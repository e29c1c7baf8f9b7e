#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ckn/errors.hpp"
#include "ckn/region_scan.hpp"

namespace {

ckn::ScanJob small_job() {
  ckn::ScanJob job;
  job.n = 3;
  job.p = 2.5;
  job.q_range = {3.0, 14.0, 6};
  job.a_range = {-0.4, 6.0, 7};
  return job;
}

std::string csv_of(const std::vector<ckn::ScanRecord>& records) {
  std::ostringstream os;
  ckn::write_csv(os, records);
  return os.str();
}

}  // namespace

TEST(Range, EndpointsAndSingleStep) {
  const ckn::Range r{1.0, 2.0, 5};
  EXPECT_EQ(r.at(0), 1.0);
  EXPECT_EQ(r.at(4), 2.0);
  EXPECT_EQ(r.at(2), 1.5);
  EXPECT_EQ((ckn::Range{3.0, 9.0, 1}.at(0)), 3.0);
}

TEST(Scan, RowMajorOrder) {
  const auto records = ckn::run_scan(small_job(), ckn::Execution::kSerial);
  ASSERT_EQ(records.size(), 42u);
  EXPECT_EQ(records[0].q, 3.0);
  EXPECT_EQ(records[1].q, 3.0);
  EXPECT_EQ(records[7].q, small_job().q_range.at(1));
  EXPECT_EQ(records[6].a, 6.0);
}

TEST(Scan, SerialAndParallelIdentical) {
  const auto job = small_job();
  const auto serial = csv_of(ckn::run_scan(job, ckn::Execution::kSerial));
  EXPECT_EQ(serial, csv_of(ckn::run_scan(job, ckn::Execution::kParallel, 4)));
  EXPECT_EQ(serial, csv_of(ckn::run_scan(job, ckn::Execution::kParallel, 3)));
}

TEST(Scan, CsvRoundTrip) {
  auto job = small_job();
  job.with_spectral = true;
  job.q_range.steps = 2;
  job.a_range.steps = 2;
  job.grid = ckn::GridOverride{14.0, 257};
  const auto records = ckn::run_scan(job);
  std::istringstream in(csv_of(records));
  EXPECT_EQ(ckn::read_csv(in), records);
}

TEST(Scan, JsonRoundTrip) {
  const auto records = ckn::run_scan(small_job());
  std::stringstream buf;
  ckn::write_json(buf, records);
  EXPECT_EQ(ckn::read_json(buf), records);
}

TEST(Scan, PointErrorsAreCapturedPerRecord) {
  auto job = small_job();
  job.with_spectral = true;
  job.q_range = {3.0, 3.0, 1};
  job.a_range = {1.0, 2.0, 2};
  job.grid = ckn::GridOverride{1.5, 64};
  const auto records = ckn::run_scan(job);
  ASSERT_EQ(records.size(), 2u);
  for (const auto& r : records) {
    EXPECT_FALSE(r.error.empty());
    EXPECT_FALSE(r.mu_min.has_value());
  }
  std::istringstream in(csv_of(records));
  EXPECT_EQ(ckn::read_csv(in), records);
}

TEST(Scan, InvalidJobs) {
  auto job = small_job();
  job.q_range.hi = 16.0;
  EXPECT_THROW(ckn::run_scan(job), ckn::DomainError);
  job = small_job();
  job.a_range.lo = -0.6;
  EXPECT_THROW(job.validate(), ckn::DomainError);
  job = small_job();
  job.q_range.steps = 0;
  EXPECT_THROW(job.validate(), ckn::DomainError);
}

TEST(Scan, ParseJobFile) {
  const auto job = ckn::parse_scan_job(R"({"n": 3, "p": 2.5, "q_range": [3, 14, 4],
      "a_range": {"lo": 0, "hi": 5, "steps": 3}, "format": "json", "output_path": "x.json"})");
  EXPECT_EQ(job.q_range.steps, 4);
  EXPECT_EQ(job.a_range.hi, 5.0);
  EXPECT_EQ(job.format, ckn::ScanFormat::kJson);
  EXPECT_THROW(ckn::parse_scan_job("{"), ckn::DomainError);
  EXPECT_THROW(ckn::parse_scan_job(R"({"n": 3, "p": 2.5})"), ckn::DomainError);
  EXPECT_THROW(ckn::parse_scan_job(R"({"n": 3, "p": 2.5, "q_range": [3, 14, 4], "a_range": [0, 5, 3], "format": "xml"})"),
               ckn::DomainError);
}

TEST(Scan, EmitWritesFile) {
  auto job = small_job();
  job.output_path = (std::filesystem::temp_directory_path() / "ckn_scan_emit.csv").string();
  const auto records = ckn::run_scan(job);
  ckn::emit(records, job);
  std::ifstream in(job.output_path);
  EXPECT_EQ(ckn::read_csv(in), records);
  std::filesystem::remove(job.output_path);
}

TEST(Scan, LowerThresholdStatus) {
  auto job = small_job();
  EXPECT_EQ(ckn::lower_threshold_status(job), "NONNEGATIVE");
  job.n = 2;
  job.p = 2.5;
  EXPECT_EQ(ckn::lower_threshold_status(job), "UNKNOWN");
}

TEST(Scan, SeventeenDigitFormat) {
  EXPECT_EQ(ckn::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(ckn::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Scan, EmptyRecordsGiveHeaderOnly) {
  EXPECT_EQ(csv_of({}), std::string(ckn::kScanCsvHeader) + "\n");
}

TEST(Scan, SinglePoint) {
  ckn::ScanJob job;
  job.n = 3;
  job.p = 2.0;
  job.q_range = {3.0, 3.0, 1};
  job.a_range = {2.0, 2.0, 1};
  const auto records = ckn::run_scan(job);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].classification, ckn::Classification::kSymmetryBreaking);
  EXPECT_TRUE(records[0].error.empty());
}

TEST(Scan, RadialConstantFollowsScalingAlongRow) {
  const auto job = small_job();
  const auto records = ckn::run_scan(job);
  for (int j = 1; j < job.a_range.steps; ++j) {
    const auto& prev = records[static_cast<std::size_t>(j - 1)];
    const auto& cur = records[static_cast<std::size_t>(j)];
    const auto params = ckn::CknParams::validate(job.n, job.p, prev.q, prev.a);
    EXPECT_NEAR(ckn::scaling_law(params, cur.a, prev.s_rad), cur.s_rad, 1e-10 * cur.s_rad);
    EXPECT_EQ(prev.a_star, cur.a_star);
  }
}

TEST(Scan, FineBoundaryBracketsThreshold) {
  ckn::ScanJob job;
  job.n = 4;
  job.p = 1.7;
  job.q_range = {1.9, 2.9, 5};
  job.a_range = {-2.25, 5.0, 400};
  const auto records = ckn::run_scan(job);
  for (int i = 0; i < job.q_range.steps; ++i) {
    const double astar = ckn::a_star(job.n, job.p, job.q_range.at(i));
    int flips = 0;
    for (int j = 1; j < job.a_range.steps; ++j) {
      const auto& prev = records[static_cast<std::size_t>(i * 400 + j - 1)];
      const auto& cur = records[static_cast<std::size_t>(i * 400 + j)];
      if (prev.classification == cur.classification) continue;
      ++flips;
      EXPECT_LE(prev.a, astar);
      EXPECT_GE(cur.a, astar);
    }
    EXPECT_EQ(flips, 1) << "q=" << job.q_range.at(i);
  }
}
