#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckn/errors.hpp"
#include "ckn/params.hpp"
#include "ckn/radial_extremal.hpp"
#include "ckn/region_scan.hpp"
#include "ckn/second_variation.hpp"
#include "ckn/spectral.hpp"
#include "ckn/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitRadial = 10;
constexpr int kExitInconclusive = 11;
constexpr int kExitUsage = 64;

enum class Format { kTable, kCsv, kJson };

using Value = std::variant<double, long long, bool, std::string>;
struct Field {
  std::string key;
  Value value;
};
using Record = std::vector<Field>;

std::string shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string text(const Value& v) {
  struct {
    std::string operator()(double x) const { return shortest(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return x; }
  } visitor;
  return std::visit(visitor, v);
}

nlohmann::ordered_json to_json(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
  if (const long long* i = std::get_if<long long>(&v)) return *i;
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Field& f : r) j[f.key] = to_json(f.value);
  return j;
}

void write_csv_rows(std::ostream& out, const std::vector<Record>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows.front().size(); ++i) out << (i ? "," : "") << rows.front()[i].key;
  out << '\n';
  for (const Record& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << text(r[i].value);
    out << '\n';
  }
}

// A summary record, optionally followed by a table of rows.
void render(std::ostream& out, Format format, const Record& summary, const std::vector<Record>& rows = {}) {
  switch (format) {
    case Format::kJson: {
      nlohmann::ordered_json j = to_json(summary);
      if (!rows.empty()) {
        j["rows"] = nlohmann::ordered_json::array();
        for (const Record& r : rows) j["rows"].push_back(to_json(r));
      }
      out << j.dump(2) << '\n';
      return;
    }
    case Format::kCsv:
      if (rows.empty()) {
        write_csv_rows(out, {summary});
      } else {
        write_csv_rows(out, rows);
      }
      return;
    case Format::kTable: {
      std::size_t width = 0;
      for (const Field& f : summary) width = std::max(width, f.key.size());
      for (const Field& f : summary) out << f.key << std::string(width - f.key.size() + 2, ' ') << text(f.value) << '\n';
      if (!rows.empty()) {
        if (!summary.empty()) out << '\n';
        std::vector<std::size_t> widths;
        for (const Field& f : rows.front()) widths.push_back(f.key.size());
        for (const Record& r : rows)
          for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], text(r[i].value).size());
        auto line = [&](auto&& cell) {
          for (std::size_t i = 0; i < widths.size(); ++i) {
            const std::string c = cell(i);
            out << (i ? "  " : "") << std::string(widths[i] - c.size(), ' ') << c;
          }
          out << '\n';
        };
        line([&](std::size_t i) { return rows.front()[i].key; });
        for (const Record& r : rows) line([&](std::size_t i) { return text(r[i].value); });
      }
      return;
    }
  }
}

struct Common {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  double a = 0.0;
  std::string format = "table";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_weight) {
  cmd->add_option("--n", c.n, "dimension")->required();
  cmd->add_option("--p", c.p, "gradient exponent")->required();
  cmd->add_option("--q", c.q, "norm exponent")->required();
  if (with_weight) cmd->add_option("--a", c.a, "weight exponent")->required();
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", c.out, "output path (default: standard output)");
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::kCsv;
  if (f == "json") return Format::kJson;
  return Format::kTable;
}

// Opens --out when given, standard output otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ckn::Error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_check(const Common& c) {
  const auto params = ckn::CknParams::validate(c.n, c.p, c.q, c.a);
  const auto cls = ckn::classify(params);
  const double astar = ckn::a_star(c.n, c.p, c.q);
  Sink sink(c.out);
  render(sink.stream(), parse_format(c.format),
         {{"classification", std::string(ckn::to_string(cls))},
          {"D", ckn::discriminant_D(params)},
          {"a_star", astar},
          {"margin", c.a - astar}});
  switch (cls) {
    case ckn::Classification::kSymmetryBreaking: return kExitOk;
    case ckn::Classification::kRadialProved: return kExitRadial;
    case ckn::Classification::kInconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_astar(const Common& c) {
  const double astar = ckn::a_star(c.n, c.p, c.q);
  Sink sink(c.out);
  render(sink.stream(), parse_format(c.format), {{"a_star", astar}});
  return kExitOk;
}

struct ExtremalArgs {
  double r_min = 1e-3;
  double r_max = 1e3;
  int samples = 50;
};

int cmd_extremal(const Common& c, const ExtremalArgs& x) {
  const auto params = ckn::CknParams::validate(c.n, c.p, c.q, c.a);
  if (!(x.r_min > 0.0) || !(x.r_max >= x.r_min) || x.samples < 1) {
    throw ckn::DomainError(ckn::DomainReason::kNonPositiveArgument, "need 0 < r-min <= r-max and samples >= 1");
  }
  const ckn::RadialExtremal ext(params);
  std::vector<Record> rows;
  for (int i = 0; i < x.samples; ++i) {
    const double t = x.samples == 1 ? 0.0 : static_cast<double>(i) / (x.samples - 1);
    const double r = x.r_min * std::pow(x.r_max / x.r_min, t);
    const auto terms = ext.el_terms(r);
    rows.push_back({{"r", r},
                    {"U", ext.value(r)},
                    {"dU", ext.derivative(r)},
                    {"residual", std::abs(terms.residual()) / terms.scale()}});
  }
  Sink sink(c.out);
  const Format f = parse_format(c.format);
  render(sink.stream(), f == Format::kTable ? Format::kCsv : f, f == Format::kJson ? Record{{"C", ext.normalization()}, {"gamma", ext.gamma()}} : Record{},
         rows);
  return kExitOk;
}

int cmd_secondvar(const Common& c, const std::string& beta_text) {
  const auto params = ckn::CknParams::validate(c.n, c.p, c.q, c.a);
  double beta = 0.0;
  if (beta_text == "auto") {
    beta = ckn::argmin_beta(params);
  } else {
    std::size_t used = 0;
    try {
      beta = std::stod(beta_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != beta_text.size()) throw CLI::ValidationError("--beta", "expected 'auto' or a number");
  }
  const auto r = ckn::compute_I(params, beta);
  Sink sink(c.out);
  render(sink.stream(), parse_format(c.format),
         {{"beta", r.beta},
          {"I0", r.I0},
          {"I1", r.I1},
          {"I2", r.I2},
          {"s1", r.s1},
          {"s2", r.s2},
          {"M", r.M},
          {"P", r.P},
          {"D", r.D},
          {"reduction1_residual", r.reduction1_residual},
          {"reduction2_residual", r.reduction2_residual},
          {"reductions", std::string(r.reductions_hold() ? "OK" : "FAILED")}});
  return r.reductions_hold() ? kExitOk : kExitConvergence;
}

struct EigenArgs {
  std::optional<int> grid_count;
  std::optional<double> s_halfwidth;
  std::string dump_eigvec;
};

int cmd_eigen(const Common& c, const EigenArgs& e) {
  const auto params = ckn::CknParams::validate(c.n, c.p, c.q, c.a);
  const ckn::LogGrid grid = (e.grid_count || e.s_halfwidth)
                                ? ckn::LogGrid::symmetric(e.s_halfwidth.value_or(ckn::kDefaultHalfwidth),
                                                          e.grid_count.value_or(ckn::kDefaultGridCount))
                                : ckn::default_grid(params);
  const auto rep = ckn::mu_min(params, grid);
  if (!e.dump_eigvec.empty()) {
    std::ofstream dump(e.dump_eigvec, std::ios::binary);
    if (!dump) throw ckn::Error("cannot open '" + e.dump_eigvec + "' for writing");
    dump << "r,v\n";
    for (int i = 0; i < rep.eigvec.grid.count(); ++i) {
      dump << ckn::format_double(rep.eigvec.grid.radius(i)) << ','
           << ckn::format_double(rep.eigvec.values[static_cast<std::size_t>(i)]) << '\n';
    }
  }
  Sink sink(c.out);
  render(sink.stream(), parse_format(c.format),
         {{"mu_min", rep.mu_min},
          {"threshold", rep.threshold},
          {"certified_breaking", rep.certified_breaking},
          {"witness_ratio", rep.witness_ratio},
          {"residual", rep.residual},
          {"sign_changes", static_cast<long long>(rep.sign_changes)},
          {"s_min", rep.grid.s_min()},
          {"s_max", rep.grid.s_max()},
          {"grid_count", static_cast<long long>(rep.grid.count())}});
  return kExitOk;
}

struct ScanArgs {
  std::string job;
  int n = 0;
  double p = 0.0;
  std::vector<double> q_range;
  std::vector<double> a_range;
  bool spectral = false;
  bool serial = false;
  unsigned threads = 0;
  std::string format = "csv";
  std::string out;
};

int cmd_scan(const ScanArgs& s) {
  ckn::ScanJob job;
  if (!s.job.empty()) {
    std::ifstream in(s.job, std::ios::binary);
    if (!in) throw ckn::Error("cannot read job file '" + s.job + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    job = ckn::parse_scan_job(buf.str());
  } else {
    if (s.n == 0 || s.q_range.size() != 3 || s.a_range.size() != 3) {
      throw CLI::ValidationError("scan", "either --job or all of --n --p --q-range --a-range are required");
    }
    job.n = s.n;
    job.p = s.p;
    job.q_range = {s.q_range[0], s.q_range[1], static_cast<int>(s.q_range[2])};
    job.a_range = {s.a_range[0], s.a_range[1], static_cast<int>(s.a_range[2])};
    job.with_spectral = s.spectral;
    job.format = s.format == "json" ? ckn::ScanFormat::kJson : ckn::ScanFormat::kCsv;
  }
  if (!s.out.empty()) job.output_path = s.out;
  job.validate();
  const auto records = ckn::run_scan(job, s.serial ? ckn::Execution::kSerial : ckn::Execution::kParallel, s.threads);
  if (job.output_path.empty()) {
    if (job.format == ckn::ScanFormat::kCsv) {
      ckn::write_csv(std::cout, records);
    } else {
      ckn::write_json(std::cout, records);
    }
  } else {
    ckn::emit(records, job);
  }
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  std::cerr << "scan: " << records.size() << " points, " << failed << " with errors; lower threshold above p-n: "
            << ckn::lower_threshold_status(job) << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& level_text, const Common& c) {
  const auto level = level_text == "full" ? ckn::VerifyLevel::kFull : ckn::VerifyLevel::kFast;
  const auto results = ckn::run_verify(level);
  const bool ok = ckn::all_passed(results);
  Sink sink(c.out);
  const Format f = parse_format(c.format);
  std::vector<Record> rows;
  for (const auto& r : results) {
    rows.push_back({{"battery", r.name},
                    {"status", std::string(r.passed() ? "PASS" : "FAIL")},
                    {"checks", static_cast<long long>(r.checks)},
                    {"failures", static_cast<long long>(r.failures)},
                    {"worst", r.worst},
                    {"tolerance", r.tolerance},
                    {"first_failure", r.first_failure}});
  }
  render(sink.stream(), f,
         {{"level", level_text},
          {"seed", static_cast<long long>(ckn::kVerifySeed)},
          {"result", std::string(ok ? "PASS" : "FAIL")}},
         rows);
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caffarelli-Kohn-Nirenberg best constants and symmetry breaking"};
  app.require_subcommand(1);

  Common common;
  ExtremalArgs extremal_args;
  std::string beta = "auto";
  EigenArgs eigen_args;
  ScanArgs scan_args;
  std::string level = "fast";

  auto* check = app.add_subcommand("check", "classify (n, p, q, a)");
  add_common(check, common, true);
  add_output(check, common);

  auto* astar = app.add_subcommand("astar", "explicit breaking threshold a*(n, p, q)");
  add_common(astar, common, false);
  add_output(astar, common);

  auto* extremal = app.add_subcommand("extremal", "sample the radial extremal and its residual");
  add_common(extremal, common, true);
  add_output(extremal, common);
  extremal->add_option("--r-min", extremal_args.r_min);
  extremal->add_option("--r-max", extremal_args.r_max);
  extremal->add_option("--samples", extremal_args.samples);

  auto* secondvar = app.add_subcommand("secondvar", "second-variation integrals along r^{beta H} U^{q/p}");
  add_common(secondvar, common, true);
  add_output(secondvar, common);
  secondvar->add_option("--beta", beta, "'auto' (= Q/p) or a number");

  auto* eigen = app.add_subcommand("eigen", "smallest eigenvalue of the linearized pencil");
  add_common(eigen, common, true);
  add_output(eigen, common);
  eigen->add_option("--grid-count", eigen_args.grid_count);
  eigen->add_option("--s-halfwidth", eigen_args.s_halfwidth);
  eigen->add_option("--dump-eigvec", eigen_args.dump_eigvec, "write the eigenvector as CSV r,v");

  auto* scan = app.add_subcommand("scan", "classify a (q, a) grid");
  scan->add_option("--job", scan_args.job, "JSON job file");
  scan->add_option("--n", scan_args.n);
  scan->add_option("--p", scan_args.p);
  scan->add_option("--q-range", scan_args.q_range, "lo hi steps")->expected(3);
  scan->add_option("--a-range", scan_args.a_range, "lo hi steps")->expected(3);
  scan->add_flag("--spectral", scan_args.spectral, "also compute mu_min per point");
  scan->add_flag("--serial", scan_args.serial);
  scan->add_option("--threads", scan_args.threads);
  scan->add_option("--format", scan_args.format)->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--out", scan_args.out);

  auto* verify = app.add_subcommand("verify", "run the built-in cross-check batteries");
  verify->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));
  add_output(verify, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(common);
    if (*astar) return cmd_astar(common);
    if (*extremal) return cmd_extremal(common, extremal_args);
    if (*secondvar) return cmd_secondvar(common, beta);
    if (*eigen) return cmd_eigen(common, eigen_args);
    if (*scan) return cmd_scan(scan_args);
    if (*verify) return cmd_verify(level, common);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ckn::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ckn::GridError& e) {
    std::cerr << "grid error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ckn::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const ckn::TailError& e) {
    std::cerr << "tail error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
