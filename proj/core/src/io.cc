// Copyright 2026 The schedbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schedbound/io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace schedbound {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

InvalidInstanceError::InvalidInstanceError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("invalid instance:\n" + format_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, end);
}

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    Line line{number, {}};
    for (std::string tok; fields >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

int to_int(const std::string& tok, int line) {
  int value = 0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || end != tok.data() + tok.size()) {
    throw ParseError(line, "expected integer, got '" + tok + "'");
  }
  return value;
}

double to_double(const std::string& tok, int line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || end != tok.data() + tok.size()) {
    throw ParseError(line, "expected number, got '" + tok + "'");
  }
  return value;
}

void expect_fields(const Line& line, size_t count, const char* what) {
  if (line.tokens.size() != count) {
    throw ParseError(line.number, std::string(what) + " needs " +
                                      std::to_string(count) + " fields, got " +
                                      std::to_string(line.tokens.size()));
  }
}

void check_range(int value, int lo, int hi, int line, const char* what) {
  if (value < lo || value > hi) {
    throw ParseError(line, std::string(what) + " " + std::to_string(value) +
                               " outside " + std::to_string(lo) + ".." +
                               std::to_string(hi));
  }
}

enum class Section { kNone, kHeader, kCapacity, kActivity, kProfit, kPrecedence };

bool section_keyword(const std::string& tok, Section* section) {
  if (tok == "HEADER") *section = Section::kHeader;
  else if (tok == "CAPACITY") *section = Section::kCapacity;
  else if (tok == "ACTIVITY") *section = Section::kActivity;
  else if (tok == "PROFIT") *section = Section::kProfit;
  else if (tok == "PRECEDENCE") *section = Section::kPrecedence;
  else return false;
  return true;
}

}  // namespace

GpspInstance parse_native(std::istream& in) {
  const std::vector<Line> lines = tokenize(in);
  Section section = Section::kNone;
  bool have_header = false;
  int declared_activities = 0;
  GpspInstance inst;
  // Activity being read and how many mode lines it still needs.
  Activity pending;
  int pending_modes = 0;
  int pending_line = 0;

  auto flush_pending = [&]() {
    if (pending_modes > 0) {
      throw ParseError(pending_line, "activity is missing " +
                                         std::to_string(pending_modes) +
                                         " mode line(s)");
    }
  };

  for (const Line& line : lines) {
    Section next;
    if (line.tokens.size() == 1 && section_keyword(line.tokens[0], &next)) {
      flush_pending();
      if (next != Section::kHeader && !have_header) {
        throw ParseError(line.number, "HEADER must come first");
      }
      section = next;
      continue;
    }
    switch (section) {
      case Section::kNone:
        throw ParseError(line.number, "data outside any section");
      case Section::kHeader: {
        if (have_header) throw ParseError(line.number, "duplicate header line");
        expect_fields(line, 4, "header");
        const int horizon = to_int(line.tokens[0], line.number);
        const int resources = to_int(line.tokens[1], line.number);
        declared_activities = to_int(line.tokens[2], line.number);
        const int clusters = to_int(line.tokens[3], line.number);
        if (horizon < 1) throw ParseError(line.number, "horizon must be positive");
        if (resources < 0 || declared_activities < 0 || clusters < 0) {
          throw ParseError(line.number, "counts must be nonnegative");
        }
        inst = GpspInstance(horizon, resources, clusters);
        for (int r = 0; r < resources; ++r) {
          for (int t = 1; t <= horizon; ++t) {
            inst.set_capacity(r, t, std::numeric_limits<double>::quiet_NaN());
          }
        }
        have_header = true;
        break;
      }
      case Section::kCapacity: {
        expect_fields(line, 3, "capacity");
        const int r = to_int(line.tokens[0], line.number);
        check_range(r, 1, inst.num_resources(), line.number, "resource");
        const double q = to_double(line.tokens[2], line.number);
        if (line.tokens[1] == "*") {
          for (int t = 1; t <= inst.horizon(); ++t) inst.set_capacity(r - 1, t, q);
        } else {
          const int t = to_int(line.tokens[1], line.number);
          check_range(t, 1, inst.horizon(), line.number, "period");
          inst.set_capacity(r - 1, t, q);
        }
        break;
      }
      case Section::kActivity: {
        if (pending_modes > 0) {
          expect_fields(line, 1 + static_cast<size_t>(inst.num_resources()), "mode");
          Mode mode;
          mode.duration = to_int(line.tokens[0], line.number);
          for (int r = 0; r < inst.num_resources(); ++r) {
            mode.usage.push_back(to_double(line.tokens[1 + r], line.number));
          }
          pending.modes.push_back(std::move(mode));
          if (--pending_modes == 0) inst.add_activity(std::move(pending));
          break;
        }
        expect_fields(line, 5, "activity");
        const int id = to_int(line.tokens[0], line.number);
        if (id != inst.num_activities() + 1) {
          throw ParseError(line.number, "activity ids must be consecutive from 1");
        }
        if (id > declared_activities) {
          throw ParseError(line.number, "more activities than declared");
        }
        pending = Activity{};
        pending.cluster = to_int(line.tokens[1], line.number) - 1;
        pending.release = to_int(line.tokens[2], line.number);
        const std::string& due = line.tokens[3];
        pending.due = (due == "inf" || due == "*") ? kNoDueDate
                                                   : to_int(due, line.number);
        pending_modes = to_int(line.tokens[4], line.number);
        pending_line = line.number;
        if (pending_modes < 1) throw ParseError(line.number, "mode count must be positive");
        break;
      }
      case Section::kProfit: {
        expect_fields(line, 4, "profit");
        const int a = to_int(line.tokens[0], line.number);
        check_range(a, 1, inst.num_activities(), line.number, "activity");
        const int m = to_int(line.tokens[1], line.number);
        check_range(m, 1, inst.activity(a - 1).num_modes(), line.number, "mode");
        const int t = to_int(line.tokens[2], line.number);
        check_range(t, 1, inst.horizon(), line.number, "period");
        inst.set_profit(a - 1, m, t, to_double(line.tokens[3], line.number));
        break;
      }
      case Section::kPrecedence: {
        expect_fields(line, 3, "precedence");
        const int c1 = to_int(line.tokens[0], line.number);
        const int c2 = to_int(line.tokens[1], line.number);
        check_range(c2, 1, inst.num_clusters(), line.number, "cluster");
        inst.add_precedence(c2 - 1, {c1 - 1, to_int(line.tokens[2], line.number)});
        break;
      }
    }
  }
  flush_pending();
  if (!have_header) throw ParseError(lines.empty() ? 0 : lines.back().number, "no HEADER section");
  if (inst.num_activities() != declared_activities) {
    throw ParseError(lines.empty() ? 0 : lines.back().number,
                     "declared " + std::to_string(declared_activities) +
                         " activities, found " + std::to_string(inst.num_activities()));
  }
  auto diagnostics = validate_instance(inst);
  if (!diagnostics.empty()) throw InvalidInstanceError(std::move(diagnostics));
  return inst;
}

GpspInstance parse_native(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_native(in);
}

std::string write_native(const GpspInstance& inst) {
  std::ostringstream out;
  const int horizon = inst.horizon();
  out << "HEADER\n"
      << horizon << ' ' << inst.num_resources() << ' ' << inst.num_activities() << ' '
      << inst.num_clusters() << '\n';
  out << "CAPACITY\n";
  for (int r = 0; r < inst.num_resources(); ++r) {
    bool constant = true;
    for (int t = 2; t <= horizon; ++t) {
      if (inst.capacity(r, t) != inst.capacity(r, 1)) constant = false;
    }
    if (constant) {
      out << r + 1 << " * " << format_double(inst.capacity(r, 1)) << '\n';
    } else {
      for (int t = 1; t <= horizon; ++t) {
        out << r + 1 << ' ' << t << ' ' << format_double(inst.capacity(r, t)) << '\n';
      }
    }
  }
  out << "ACTIVITY\n";
  for (int a = 0; a < inst.num_activities(); ++a) {
    const Activity& act = inst.activity(a);
    out << a + 1 << ' ' << act.cluster + 1 << ' ' << act.release << ' '
        << (act.has_due_date() ? std::to_string(act.due) : std::string("inf")) << ' '
        << act.num_modes() << '\n';
    for (const Mode& mode : act.modes) {
      out << mode.duration;
      for (double q : mode.usage) out << ' ' << format_double(q);
      out << '\n';
    }
  }
  out << "PROFIT\n";
  for (int a = 0; a < inst.num_activities(); ++a) {
    for (int m = 1; m <= inst.activity(a).num_modes(); ++m) {
      for (int t = 1; t <= horizon; ++t) {
        const double p = inst.profit(a, m, t);
        if (p != 0.0) {
          out << a + 1 << ' ' << m << ' ' << t << ' ' << format_double(p) << '\n';
        }
      }
    }
  }
  out << "PRECEDENCE\n";
  for (int c = 0; c < inst.num_clusters(); ++c) {
    for (const Precedence& p : inst.predecessors(c)) {
      out << p.predecessor + 1 << ' ' << c + 1 << ' ' << p.lag << '\n';
    }
  }
  return out.str();
}

namespace {

struct RawLine {
  int number;
  std::string text;
};

std::vector<int> ints_of(const RawLine& line) {
  std::istringstream in(line.text);
  std::vector<int> values;
  std::string tok;
  while (in >> tok) values.push_back(to_int(tok, line.number));
  return values;
}

// Value after the last ':' on a "key : value" line.
int field_after_colon(const RawLine& line) {
  const auto colon = line.text.rfind(':');
  if (colon == std::string::npos) throw ParseError(line.number, "expected ':'");
  std::istringstream in(line.text.substr(colon + 1));
  std::string tok;
  if (!(in >> tok)) throw ParseError(line.number, "missing value");
  return to_int(tok, line.number);
}

bool starts_with(const std::string& text, std::string_view prefix) {
  return text.compare(0, prefix.size(), prefix) == 0;
}

std::string trim_left(const std::string& s) {
  const auto pos = s.find_first_not_of(" \t\r");
  return pos == std::string::npos ? std::string() : s.substr(pos);
}

}  // namespace

GpspInstance parse_psplib_sm(std::istream& in, const PsplibOptions& options) {
  std::vector<RawLine> lines;
  {
    std::string text;
    int number = 0;
    while (std::getline(in, text)) {
      ++number;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      lines.push_back({number, text});
    }
  }
  const int last_line = lines.empty() ? 0 : lines.back().number;
  int jobs = -1, renewable = -1;
  size_t prec_at = 0, req_at = 0, avail_at = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim_left(lines[i].text);
    if (starts_with(t, "jobs (incl")) jobs = field_after_colon(lines[i]);
    else if (starts_with(t, "- renewable")) renewable = field_after_colon(lines[i]);
    else if (starts_with(t, "PRECEDENCE RELATIONS")) prec_at = i;
    else if (starts_with(t, "REQUESTS/DURATIONS")) req_at = i;
    else if (starts_with(t, "RESOURCEAVAILABILITIES")) avail_at = i;
  }
  if (jobs < 2) throw ParseError(last_line, "missing or invalid job count");
  if (renewable < 0) throw ParseError(last_line, "missing renewable resource count");
  if (prec_at == 0) throw ParseError(last_line, "missing PRECEDENCE RELATIONS");
  if (req_at == 0) throw ParseError(last_line, "missing REQUESTS/DURATIONS");
  if (avail_at == 0) throw ParseError(last_line, "missing RESOURCEAVAILABILITIES");

  // Data rows are the lines after a section title whose first token is numeric.
  auto data_rows = [&](size_t title, int count) {
    std::vector<RawLine> rows;
    for (size_t i = title + 1; i < lines.size() && static_cast<int>(rows.size()) < count;
         ++i) {
      const std::string t = trim_left(lines[i].text);
      if (t.empty() || starts_with(t, "***")) {
        if (!rows.empty()) break;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(t[0]))) continue;
      rows.push_back(lines[i]);
    }
    if (static_cast<int>(rows.size()) != count) {
      throw ParseError(lines[title].number, "expected " + std::to_string(count) +
                                                " data rows in section");
    }
    return rows;
  };

  std::vector<std::vector<int>> successors(jobs);
  for (const RawLine& row : data_rows(prec_at, jobs)) {
    const std::vector<int> v = ints_of(row);
    if (v.size() < 3 || v[0] < 1 || v[0] > jobs ||
        static_cast<int>(v.size()) != 3 + v[2]) {
      throw ParseError(row.number, "malformed precedence row");
    }
    for (size_t k = 3; k < v.size(); ++k) {
      check_range(v[k], 1, jobs, row.number, "successor");
      successors[v[0] - 1].push_back(v[k] - 1);
    }
  }
  std::vector<int> duration(jobs, -1);
  std::vector<std::vector<double>> usage(jobs);
  for (const RawLine& row : data_rows(req_at, jobs)) {
    const std::vector<int> v = ints_of(row);
    if (static_cast<int>(v.size()) != 3 + renewable || v[0] < 1 || v[0] > jobs) {
      throw ParseError(row.number, "malformed request row");
    }
    if (v[1] != 1) throw ParseError(row.number, "only single-mode files are supported");
    duration[v[0] - 1] = v[2];
    for (int r = 0; r < renewable; ++r) usage[v[0] - 1].push_back(v[3 + r]);
  }
  for (int j = 0; j < jobs; ++j) {
    if (duration[j] < 0) throw ParseError(lines[req_at].number, "job without request row");
  }
  const std::vector<RawLine> avail = data_rows(avail_at, 1);
  const std::vector<int> capacities = ints_of(avail[0]);
  if (static_cast<int>(capacities.size()) != renewable) {
    throw ParseError(avail[0].number, "capacity count does not match resources");
  }

  int provisional = 1;
  for (int d : duration) provisional += d;
  provisional = std::max(provisional, options.horizon);
  GpspInstance draft(provisional, renewable, jobs);
  for (int r = 0; r < renewable; ++r) {
    for (int t = 1; t <= provisional; ++t) draft.set_capacity(r, t, capacities[r]);
  }
  for (int j = 0; j < jobs; ++j) {
    Activity act;
    act.cluster = j;
    act.release = 1;
    act.due = provisional;
    act.modes.push_back({duration[j], usage[j]});
    draft.add_activity(std::move(act));
  }
  for (int i = 0; i < jobs; ++i) {
    for (int j : successors[i]) draft.add_precedence(j, {i, duration[i]});
  }

  int horizon = options.horizon;
  if (horizon == 0) {
    const GreedyResult greedy = greedy_toposort_schedule(draft);
    if (!greedy.feasible) throw ParseError(last_line, greedy.failure);
    horizon = std::max(1, greedy.completion);
  }
  GpspInstance inst = draft.with_horizon(horizon, /*clamp_due_dates=*/true);
  const int sink = jobs - 1;
  for (int t = 1; t <= horizon; ++t) inst.set_profit(sink, 1, t, -(t - 1));

  auto diagnostics = validate_instance(inst);
  if (!diagnostics.empty()) throw InvalidInstanceError(std::move(diagnostics));
  return inst;
}

GpspInstance parse_psplib_sm(std::string_view text, const PsplibOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_psplib_sm(in, options);
}

GpspInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const bool psplib = path.size() >= 3 && path.compare(path.size() - 3, 3, ".sm") == 0;
  return psplib ? parse_psplib_sm(in) : parse_native(in);
}

}  // namespace schedbound
