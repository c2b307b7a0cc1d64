#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "fuseplan/error.hpp"
#include "fuseplan/workload.hpp"

namespace fuseplan {

namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

}  // namespace

std::map<std::string, double> ingest_trace(std::string_view csv_text, const AppGraph& app) {
  std::map<std::string, std::vector<double>> samples;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!csv_text.empty()) {
    const std::size_t nl = csv_text.find('\n');
    const std::string_view line = trim_cr(csv_text.substr(0, nl));
    csv_text = nl == std::string_view::npos ? std::string_view{} : csv_text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "task,duration_ms") throw ValidationError("trace CSV must start with header 'task,duration_ms'");
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": expected two fields");
    }
    const std::string task(line.substr(0, comma));
    const std::string_view field = line.substr(comma + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": bad duration '" + std::string(field) + "'");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ValidationError("non-positive duration for task '" + task + "' on line " + std::to_string(line_no));
    }
    if (!app.find(task)) throw ValidationError("trace names unknown task '" + task + "'");
    samples[task].push_back(value);
  }
  if (!header_seen) throw ValidationError("trace CSV is empty");

  std::map<std::string, double> medians;
  for (const Task& task : app.tasks()) {
    auto it = samples.find(task.name);
    if (it == samples.end()) throw ValidationError("missing task " + task.name);
    medians[task.name] = median(std::move(it->second));
  }
  return medians;
}

AppGraph apply_measured_work(const AppGraph& app, const std::map<std::string, double>& medians) {
  std::vector<double> work;
  for (const Task& task : app.tasks()) {
    auto it = medians.find(task.name);
    if (it == medians.end()) throw ValidationError("missing task " + task.name);
    work.push_back(it->second);
  }
  return app.with_base_work(work);
}

}  // namespace fuseplan
