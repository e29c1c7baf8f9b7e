#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckn/second_variation.hpp"

namespace ckn {

// `steps` equally spaced points from lo to hi inclusive; steps = 1 is {lo}.
struct Range {
  double lo;
  double hi;
  int steps;
  double at(int i) const noexcept {
    if (steps == 1 || i == 0) return lo;
    return i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1);
  }
};

enum class ScanFormat { kCsv, kJson };

struct GridOverride {
  double halfwidth = 12.0;
  int count = 1024;
};

struct ScanJob {
  int n = 3;
  double p = 2.0;
  Range q_range{};
  Range a_range{};
  bool with_spectral = false;
  std::optional<GridOverride> grid;
  std::string output_path;
  ScanFormat format = ScanFormat::kCsv;

  // Throws DomainError(kInvalidScanJob) unless p < q_lo <= q_hi < p*,
  // p - n < a_lo <= a_hi and steps >= 1.
  void validate() const;
};

ScanJob parse_scan_job(std::string_view json_text);

struct ScanRecord {
  double q = 0.0;
  double a = 0.0;
  double D = 0.0;
  double a_star = 0.0;
  Classification classification = Classification::kInconclusive;
  double s_rad = 0.0;
  std::optional<double> mu_min;
  std::string error;  // empty when the point evaluated cleanly

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

enum class Execution { kSerial, kParallel };

// One record per (q, a), q outer and a inner. Output order and contents do
// not depend on `execution` or `threads` (0 = hardware concurrency).
std::vector<ScanRecord> run_scan(const ScanJob& job, Execution execution = Execution::kParallel,
                                 unsigned threads = 0);

inline constexpr std::string_view kScanCsvHeader = "q,a,D,a_star,classification,s_rad,mu_min,error";

void write_csv(std::ostream& out, std::span<const ScanRecord> records);
void write_json(std::ostream& out, std::span<const ScanRecord> records);
std::vector<ScanRecord> read_csv(std::istream& in);
std::vector<ScanRecord> read_json(std::istream& in);

// Writes records to job.output_path in job.format.
void emit(std::span<const ScanRecord> records, const ScanJob& job);

// Status of whether the true threshold exceeds p - n: settled (nonnegative
// threshold) for p < n, open for p >= n.
std::string_view lower_threshold_status(const ScanJob& job) noexcept;

// %.17g, the shortest fixed format that round-trips every double.
std::string format_double(double value);

}  // namespace ckn
