#include "slsim/request_log.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace slsim {

namespace {

constexpr std::string_view kHeader =
    "start_time,response_time,is_cold,instance_id";

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  return line;
}

double parse_double(std::string_view field, std::size_t line_no,
                    const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ConfigError("request log line " + std::to_string(line_no) +
                      ": bad " + std::string(what) + " value '" +
                      std::string(field) + "'");
  }
  return value;
}

bool parse_is_cold(std::string_view field, std::size_t line_no) {
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  throw ConfigError("request log line " + std::to_string(line_no) +
                    ": is_cold must be one of 0/1/true/false, got '" +
                    std::string(field) + "'");
}

}  // namespace

std::vector<RequestRecord> read_request_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kHeader) {
    throw ConfigError("request log must start with header '" +
                      std::string(kHeader) + "'");
  }
  std::vector<RequestRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    std::array<std::string_view, 4> fields;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < 3; ++f) {
      const std::size_t comma = row.find(',', pos);
      if (comma == std::string_view::npos) {
        throw ConfigError("request log line " + std::to_string(line_no) +
                          ": expected 4 comma-separated fields");
      }
      fields[f] = row.substr(pos, comma - pos);
      pos = comma + 1;
    }
    fields[3] = row.substr(pos);
    RequestRecord rec;
    rec.start_time = parse_double(fields[0], line_no, "start_time");
    rec.response_time = parse_double(fields[1], line_no, "response_time");
    if (!(rec.response_time > 0.0)) {
      throw ConfigError("request log line " + std::to_string(line_no) +
                        ": response_time must be > 0");
    }
    rec.is_cold = parse_is_cold(fields[2], line_no);
    rec.instance_id = std::string(fields[3]);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_request_csv(const std::vector<RequestRecord>& records,
                       std::ostream& out) {
  out << kHeader << '\n';
  char buf[64];
  for (const RequestRecord& rec : records) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,", rec.start_time,
                  rec.response_time);
    out << buf << (rec.is_cold ? '1' : '0') << ',' << rec.instance_id << '\n';
  }
}

ParameterEstimate estimate_parameters(std::vector<RequestRecord> records) {
  std::vector<double> warm;
  std::vector<double> cold;
  for (const RequestRecord& rec : records) {
    (rec.is_cold ? cold : warm).push_back(rec.response_time);
  }
  if (cold.empty()) {
    throw ConfigError("parameter estimation needs at least one cold record");
  }
  if (warm.empty()) {
    throw ConfigError("parameter estimation needs at least one warm record");
  }
  std::sort(records.begin(), records.end(),
            [](const RequestRecord& a, const RequestRecord& b) {
              return a.start_time < b.start_time;
            });
  const double span = records.back().start_time - records.front().start_time;
  if (!(span > 0.0)) {
    throw ConfigError("parameter estimation needs a positive time span "
                      "between the first and last request");
  }
  const auto mean_of = [](const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  };
  const double warm_mean = mean_of(warm);
  const double cold_mean = mean_of(cold);
  return ParameterEstimate{
      static_cast<double>(records.size() - 1) / span,
      warm_mean,
      cold_mean,
      ProcessSpec::empirical(std::move(warm)),
      ProcessSpec::empirical(std::move(cold)),
  };
}

EmpiricalMetrics empirical_metrics(const std::vector<RequestRecord>& records,
                                   const EmpiricalMetricsOptions& options) {
  if (records.empty()) {
    throw ConfigError("empirical metrics need a non-empty request log");
  }
  if (!(options.window > 0.0) || !(options.sample_step > 0.0)) {
    throw ConfigError("empirical metrics window and sample_step must be > 0");
  }

  EmpiricalMetrics metrics;
  std::size_t cold_count = 0;
  for (const RequestRecord& rec : records) {
    if (rec.is_cold) ++cold_count;
  }
  metrics.cold_start_probability =
      static_cast<double>(cold_count) / static_cast<double>(records.size());

  std::vector<double> starts;
  std::vector<std::pair<double, const std::string*>> completions;
  starts.reserve(records.size());
  completions.reserve(records.size());
  double t0 = records.front().start_time;
  double t_end = 0.0;
  for (const RequestRecord& rec : records) {
    starts.push_back(rec.start_time);
    const double completion = rec.start_time + rec.response_time;
    completions.emplace_back(completion, &rec.instance_id);
    t0 = std::min(t0, rec.start_time);
    t_end = std::max(t_end, completion);
  }
  std::sort(starts.begin(), starts.end());
  std::sort(completions.begin(), completions.end());

  metrics.t0 = t0;
  metrics.sample_step = options.sample_step;

  // Sliding multiset of instance ids whose completions fall in
  // (t - window, t]; its unique-id count is the warm-pool estimate.
  std::map<std::string_view, std::size_t> in_window;
  std::size_t unique = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t started = 0;

  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * options.sample_step;
    if (t > t_end) break;
    while (hi < completions.size() && completions[hi].first <= t) {
      if (++in_window[*completions[hi].second] == 1) ++unique;
      ++hi;
    }
    while (lo < completions.size() && completions[lo].first <= t - options.window) {
      auto it = in_window.find(*completions[lo].second);
      if (--it->second == 0) {
        in_window.erase(it);
        --unique;
      }
      ++lo;
    }
    while (started < starts.size() && starts[started] <= t) ++started;
    const double pool = static_cast<double>(unique);
    // hi already counts completions at or before t, so started - hi is
    // the number of requests in flight at t.
    const double running = static_cast<double>(started - hi);
    metrics.warm_pool_count_series.push_back(pool);
    metrics.running_count_series.push_back(running);
    metrics.idle_count_series.push_back(pool - running);
  }

  const auto mean_of = [](const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  };
  const double pool_mean = mean_of(metrics.warm_pool_count_series);
  const double idle_mean = mean_of(metrics.idle_count_series);
  if (pool_mean > 0.0) {
    metrics.wasted_capacity = std::clamp(idle_mean / pool_mean, 0.0, 1.0);
  }
  return metrics;
}

}  // namespace slsim
