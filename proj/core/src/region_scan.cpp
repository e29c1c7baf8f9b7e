#include "ckn/region_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ckn/errors.hpp"
#include "ckn/radial_extremal.hpp"
#include "ckn/spectral.hpp"

namespace ckn {
namespace {

using nlohmann::json;

[[noreturn]] void bad_job(const std::string& detail) { throw DomainError(DomainReason::kInvalidScanJob, detail); }

ScanRecord evaluate_point(const ScanJob& job, double q, double a) {
  ScanRecord rec;
  rec.q = q;
  rec.a = a;
  try {
    const CknParams params = CknParams::validate(job.n, job.p, q, a);
    rec.D = discriminant_D(params);
    rec.a_star = a_star(job.n, job.p, q);
    rec.classification = classify(params);
    rec.s_rad = s_rad(params);
    if (job.with_spectral) {
      const LogGrid grid = job.grid ? LogGrid::symmetric(job.grid->halfwidth, job.grid->count) : default_grid(params);
      rec.mu_min = mu_min(params, grid).mu_min;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw Error("malformed number '" + text + "'");
  return v;
}

json to_json(const ScanRecord& r) {
  json j;
  j["q"] = r.q;
  j["a"] = r.a;
  j["D"] = r.D;
  j["a_star"] = r.a_star;
  j["classification"] = std::string(to_string(r.classification));
  j["s_rad"] = r.s_rad;
  j["mu_min"] = r.mu_min ? json(*r.mu_min) : json(nullptr);
  j["error"] = r.error;
  return j;
}

Range parse_range(const json& j, const char* key) {
  if (!j.contains(key)) bad_job(std::string("missing '") + key + "'");
  const json& r = j.at(key);
  if (r.is_array() && r.size() == 3) return Range{r[0].get<double>(), r[1].get<double>(), r[2].get<int>()};
  if (r.is_object()) return Range{r.at("lo").get<double>(), r.at("hi").get<double>(), r.at("steps").get<int>()};
  bad_job(std::string("'") + key + "' must be [lo, hi, steps] or {lo, hi, steps}");
}

}  // namespace

void ScanJob::validate() const {
  std::ostringstream os;
  os.precision(17);
  if (n < 2 || !(p > 1.0)) {
    os << "need n >= 2 and p > 1 (n=" << n << ", p=" << p << ")";
    bad_job(os.str());
  }
  if (q_range.steps < 1 || a_range.steps < 1) bad_job("range steps must be >= 1");
  const double p_star = critical_exponent(n, p);
  if (!(q_range.lo > p) || !(q_range.hi >= q_range.lo) || !(q_range.hi < p_star)) {
    os << "q range [" << q_range.lo << ", " << q_range.hi << "] must satisfy p < lo <= hi < p*=" << p_star;
    bad_job(os.str());
  }
  if (!(a_range.lo > p - n) || !(a_range.hi >= a_range.lo)) {
    os << "a range [" << a_range.lo << ", " << a_range.hi << "] must satisfy p-n < lo <= hi";
    bad_job(os.str());
  }
  if (grid && (!(grid->halfwidth > 0.0) || grid->count < kMinGridCount)) bad_job("grid override is invalid");
}

ScanJob parse_scan_job(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad_job(std::string("job file is not valid JSON: ") + e.what());
  }
  ScanJob job;
  try {
    job.n = j.at("n").get<int>();
    job.p = j.at("p").get<double>();
    job.q_range = parse_range(j, "q_range");
    job.a_range = parse_range(j, "a_range");
    job.with_spectral = j.value("with_spectral", false);
    if (j.contains("grid")) {
      GridOverride g;
      g.halfwidth = j["grid"].value("s_halfwidth", g.halfwidth);
      g.count = j["grid"].value("count", g.count);
      job.grid = g;
    }
    job.output_path = j.value("output_path", std::string());
    const std::string format = j.value("format", std::string("csv"));
    if (format == "csv") {
      job.format = ScanFormat::kCsv;
    } else if (format == "json") {
      job.format = ScanFormat::kJson;
    } else {
      bad_job("format must be 'csv' or 'json'");
    }
  } catch (const json::exception& e) {
    bad_job(std::string("malformed job: ") + e.what());
  }
  job.validate();
  return job;
}

std::vector<ScanRecord> run_scan(const ScanJob& job, Execution execution, unsigned threads) {
  job.validate();
  const std::size_t rows = static_cast<std::size_t>(job.q_range.steps);
  const std::size_t cols = static_cast<std::size_t>(job.a_range.steps);
  std::vector<ScanRecord> records(rows * cols);
  auto work = [&](std::size_t index) {
    const int i = static_cast<int>(index / cols);
    const int j = static_cast<int>(index % cols);
    records[index] = evaluate_point(job, job.q_range.at(i), job.a_range.at(j));
  };

  if (execution == Execution::kSerial) {
    for (std::size_t k = 0; k < records.size(); ++k) work(k);
    return records;
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, records.size())));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < records.size(); k = next.fetch_add(1)) work(k);
      });
    }
  }
  return records;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, std::span<const ScanRecord> records) {
  out << kScanCsvHeader << '\n';
  for (const ScanRecord& r : records) {
    out << format_double(r.q) << ',' << format_double(r.a) << ',' << format_double(r.D) << ','
        << format_double(r.a_star) << ',' << to_string(r.classification) << ',' << format_double(r.s_rad) << ','
        << (r.mu_min ? format_double(*r.mu_min) : std::string()) << ',' << csv_field(r.error) << '\n';
  }
}

void write_json(std::ostream& out, std::span<const ScanRecord> records) {
  json arr = json::array();
  for (const ScanRecord& r : records) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

std::vector<ScanRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kScanCsvHeader) throw Error("scan CSV header mismatch");
  std::vector<ScanRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw Error("scan CSV row has " + std::to_string(f.size()) + " fields: " + line);
    ScanRecord r;
    r.q = parse_double(f[0]);
    r.a = parse_double(f[1]);
    r.D = parse_double(f[2]);
    r.a_star = parse_double(f[3]);
    r.classification = classification_from_string(f[4]);
    r.s_rad = parse_double(f[5]);
    if (!f[6].empty()) r.mu_min = parse_double(f[6]);
    r.error = f[7];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ScanRecord> read_json(std::istream& in) {
  const json arr = json::parse(in);
  std::vector<ScanRecord> records;
  for (const json& j : arr) {
    ScanRecord r;
    r.q = j.at("q").get<double>();
    r.a = j.at("a").get<double>();
    r.D = j.at("D").get<double>();
    r.a_star = j.at("a_star").get<double>();
    r.classification = classification_from_string(j.at("classification").get<std::string>());
    r.s_rad = j.at("s_rad").get<double>();
    if (!j.at("mu_min").is_null()) r.mu_min = j.at("mu_min").get<double>();
    r.error = j.at("error").get<std::string>();
    records.push_back(std::move(r));
  }
  return records;
}

void emit(std::span<const ScanRecord> records, const ScanJob& job) {
  std::ofstream out(job.output_path, std::ios::binary);
  if (!out) throw Error("cannot open '" + job.output_path + "' for writing");
  if (job.format == ScanFormat::kCsv) {
    write_csv(out, records);
  } else {
    write_json(out, records);
  }
  out.flush();
  if (!out) throw Error("write to '" + job.output_path + "' failed");
}

std::string_view lower_threshold_status(const ScanJob& job) noexcept {
  return job.p < job.n ? "NONNEGATIVE" : "UNKNOWN";
}

}  // namespace ckn
