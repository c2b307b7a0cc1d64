#include "fuseplan/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include <json.hpp>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

constexpr std::string_view kHeader = "app,setup,latency_ms,cost_traditional_pmi,cost_instance_pmi,invocations,cold_starts";

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (in_quotes) throw ValidationError("unterminated quote in results CSV");
  return fields;
}

template <class T>
T parse_number(const std::string& field, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ValidationError("results line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<ResultRow> evaluate_space(const AppGraph& app, const SetupSpace& space, const PlatformModel& platform,
                                      const PricingConfig& pricing, unsigned jobs) {
  validate(platform);
  std::vector<ResultRow> rows(space.size());
  const PricingModel traditional = pricing.traditional;
  const PricingModel instance_based = pricing.instance_based;

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const FusionSetup setup = space.at(i);
      const SimResult result = simulate(app, setup, platform);
      rows[i] = {app.name(),
                 setup_string(setup),
                 result.latency_ms,
                 cost_of(result, setup, traditional),
                 cost_of(result, setup, instance_based),
                 result.invocations.size(),
                 result.cold_starts()};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, rows.size()));
  if (workers == 1) {
    work(0, rows.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (rows.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(rows.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_results_csv(std::span<const ResultRow> rows) {
  std::string out(kHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += csv_field(r.app);
    out += ',';
    out += csv_field(r.setup);
    out += ',' + format_double(r.latency_ms);
    out += ',' + format_double(r.cost_traditional_pmi);
    out += ',' + format_double(r.cost_instance_pmi);
    out += ',' + std::to_string(r.invocations);
    out += ',' + std::to_string(r.cold_starts);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) throw ValidationError("results CSV header mismatch");
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ValidationError("results line " + std::to_string(line_no) + ": expected 7 fields");
    rows.push_back({f[0], f[1], parse_number<double>(f[2], line_no), parse_number<double>(f[3], line_no),
                    parse_number<double>(f[4], line_no), parse_number<std::size_t>(f[5], line_no),
                    parse_number<std::size_t>(f[6], line_no)});
  }
  return rows;
}

std::vector<SetupMetrics> metrics_from_rows(std::span<const ResultRow> rows, PricingKind kind) {
  std::vector<SetupMetrics> out;
  out.reserve(rows.size());
  for (const ResultRow& r : rows) {
    out.push_back(
        {r.setup, r.latency_ms, kind == PricingKind::kTraditional ? r.cost_traditional_pmi : r.cost_instance_pmi});
  }
  return out;
}

std::string sweep_report_json(const SweepReport& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["pricing"] = report.pricing_model_id;
  doc["steps"] = report.steps;
  doc["coverage"] = json::object();
  for (const auto& [setup, count] : report.coverage_counts) doc["coverage"][setup] = report.coverage_pct(setup);
  doc["coverage_counts"] = json::object();
  for (const auto& [setup, count] : report.coverage_counts) doc["coverage_counts"][setup] = count;
  doc["partition_coverage"] = json::object();
  for (const auto& [partition, count] : report.partition_counts) {
    doc["partition_coverage"][partition] = report.partition_coverage_pct(partition);
  }
  doc["partition_coverage_counts"] = json::object();
  for (const auto& [partition, count] : report.partition_counts) doc["partition_coverage_counts"][partition] = count;
  doc["alpha_breakpoints"] = json::array();
  for (const auto& bp : report.breakpoints) {
    doc["alpha_breakpoints"].push_back({{"from_alpha", bp.from_alpha}, {"to_alpha", bp.to_alpha}, {"winner", bp.winner}});
  }
  doc["pareto"] = json::array();
  for (const auto& m : report.pareto) {
    doc["pareto"].push_back({{"setup", m.setup_name}, {"latency_ms", m.latency_ms}, {"cost_pmi_usd", m.cost_pmi_usd}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace fuseplan
