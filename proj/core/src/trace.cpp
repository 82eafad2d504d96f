#include "mctsvs/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mctsvs/errors.hpp"

namespace mctsvs {

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double RunTrace::final_best() const {
  return records.empty() ? -std::numeric_limits<double>::infinity() : records.back().best_y;
}

double RunTrace::mean_recall() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (std::find(r.events.begin(), r.events.end(), event::init) != r.events.end()) continue;
    sum += r.recall;
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

double RunTrace::mean_time_per_eval_ms(std::int64_t at) const {
  at = std::min<std::int64_t>(at, static_cast<std::int64_t>(records.size()));
  if (at < 2) return std::numeric_limits<double>::quiet_NaN();
  const std::int64_t from = at / 2;
  const double t1 = records[static_cast<std::size_t>(at - 1)].elapsed_ms;
  const double t0 = records[static_cast<std::size_t>(from - 1)].elapsed_ms;
  return (t1 - t0) / static_cast<double>(at - from);
}

TraceRecorder::TraceRecorder(const ObjectiveSpec& spec, std::string method, std::uint64_t seed)
    : spec_(spec), start_(Clock::now()) {
  trace_.problem = spec.name();
  trace_.method = std::move(method);
  trace_.seed = seed;
  trace_.dimension = spec.dimension();
}

double TraceRecorder::evaluate(const Eigen::VectorXd& x, const VariableIndexSet& selected,
                               double recall) {
  const auto before = Clock::now();
  const double y = spec_.evaluate(x);
  const auto after = Clock::now();
  excluded_ += after - before;

  TraceRecord rec;
  rec.eval_index = evaluations() + 1;
  rec.x = x;
  rec.y = y;
  rec.best_y = trace_.records.empty() ? y : std::max(trace_.records.back().best_y, y);
  rec.selected = selected;
  rec.recall = recall;
  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(after - start_ - excluded_).count();
  rec.events = std::move(pending_);
  pending_.clear();
  trace_.records.push_back(std::move(rec));
  return y;
}

void TraceRecorder::tag_next(std::string event) { pending_.push_back(std::move(event)); }

void TraceRecorder::tag_last(std::string event) {
  if (trace_.records.empty()) {
    tag_next(std::move(event));
  } else {
    trace_.records.back().events.push_back(std::move(event));
  }
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path, bool with_timing) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << trace.seed << ',' << r.eval_index << ',' << format_double(r.y) << ','
        << format_double(r.best_y) << ',' << r.selected.to_mask_string(trace.dimension) << ','
        << format_double(r.recall) << ',';
    if (with_timing) out << format_double(r.elapsed_ms);
    out << ',';
    for (std::size_t i = 0; i < r.events.size(); ++i) {
      if (i) out << '|';
      out << r.events[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

std::vector<CsvRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader) {
    throw IoError(path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line, ',');
    if (f.size() != 8) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
    }
    CsvRow row;
    row.seed = std::stoull(f[0]);
    row.eval_index = std::stoll(f[1]);
    row.y = parse_double(f[2], path, lineno);
    row.best_y = parse_double(f[3], path, lineno);
    row.selected_mask = f[4];
    row.recall = parse_double(f[5], path, lineno);
    if (!f[6].empty()) {
      row.elapsed_ms = parse_double(f[6], path, lineno);
      row.has_elapsed = true;
    }
    if (!f[7].empty()) row.events = split_fields(f[7], '|');
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mctsvs
