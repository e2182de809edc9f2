#pragma once

// Independent parser for the metrics text exposition format, used as the
// parse-back oracle for exports. Implements the grammar directly from the
// wire format: `# HELP`/`# TYPE` comment lines and
// `name{label="value",...} value [timestamp]` samples.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqflow::testing {

struct ExpoSample {
  std::string name;
  std::map<std::string, std::string> labels;
  double value = 0.0;
  bool hasTimestamp = false;
  long long timestampMs = 0;
};

struct ExpoDocument {
  std::map<std::string, std::string> types;  // family -> type
  std::map<std::string, std::string> helps;
  std::vector<ExpoSample> samples;
};

struct ExpoParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace expo_detail {

inline bool name_char(char c, bool first) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':') return true;
  return !first && c >= '0' && c <= '9';
}

inline std::string parse_name(const std::string& line, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < line.size() && name_char(line[pos], pos == start)) ++pos;
  if (pos == start) throw ExpoParseError("expected metric name: " + line);
  return line.substr(start, pos - start);
}

inline double parse_value(const std::string& token) {
  if (token == "+Inf") return INFINITY;
  if (token == "-Inf") return -INFINITY;
  if (token == "NaN") return NAN;
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw ExpoParseError("bad sample value '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ExpoParseError("bad sample value '" + token + "'");
  }
}

}  // namespace expo_detail

inline ExpoDocument parse_exposition(const std::string& text) {
  using namespace expo_detail;
  ExpoDocument doc;
  std::size_t lineStart = 0;
  while (lineStart <= text.size()) {
    std::size_t lineEnd = text.find('\n', lineStart);
    if (lineEnd == std::string::npos) lineEnd = text.size();
    std::string line = text.substr(lineStart, lineEnd - lineStart);
    lineStart = lineEnd + 1;
    if (line.empty()) {
      if (lineStart > text.size()) break;
      continue;
    }
    if (line[0] == '#') {
      // "# HELP name text" | "# TYPE name type" | arbitrary comment
      if (line.rfind("# HELP ", 0) == 0) {
        std::size_t pos = 7;
        std::string name = parse_name(line, pos);
        if (pos < line.size() && line[pos] != ' ') throw ExpoParseError("bad HELP line: " + line);
        doc.helps[name] = pos < line.size() ? line.substr(pos + 1) : "";
      } else if (line.rfind("# TYPE ", 0) == 0) {
        std::size_t pos = 7;
        std::string name = parse_name(line, pos);
        if (pos >= line.size() || line[pos] != ' ') throw ExpoParseError("bad TYPE line: " + line);
        std::string type = line.substr(pos + 1);
        if (type != "counter" && type != "gauge" && type != "histogram" && type != "summary" &&
            type != "untyped") {
          throw ExpoParseError("unknown metric type '" + type + "'");
        }
        if (doc.types.count(name)) throw ExpoParseError("duplicate TYPE for " + name);
        doc.types[name] = type;
      }
      continue;
    }
    ExpoSample sample;
    std::size_t pos = 0;
    sample.name = parse_name(line, pos);
    if (pos < line.size() && line[pos] == '{') {
      ++pos;
      while (pos < line.size() && line[pos] != '}') {
        std::string label = parse_name(line, pos);
        if (pos >= line.size() || line[pos] != '=') throw ExpoParseError("expected '=': " + line);
        ++pos;
        if (pos >= line.size() || line[pos] != '"') throw ExpoParseError("expected '\"': " + line);
        ++pos;
        std::string value;
        while (pos < line.size() && line[pos] != '"') {
          if (line[pos] == '\\') {
            ++pos;
            if (pos >= line.size()) throw ExpoParseError("dangling escape: " + line);
            switch (line[pos]) {
              case 'n': value.push_back('\n'); break;
              case '\\': value.push_back('\\'); break;
              case '"': value.push_back('"'); break;
              default: throw ExpoParseError("bad escape in label value: " + line);
            }
          } else {
            value.push_back(line[pos]);
          }
          ++pos;
        }
        if (pos >= line.size()) throw ExpoParseError("unterminated label value: " + line);
        ++pos;  // closing quote
        if (sample.labels.count(label)) throw ExpoParseError("duplicate label '" + label + "'");
        sample.labels[label] = value;
        if (pos < line.size() && line[pos] == ',') ++pos;
      }
      if (pos >= line.size() || line[pos] != '}') throw ExpoParseError("unterminated label set: " + line);
      ++pos;
    }
    if (pos >= line.size() || line[pos] != ' ') throw ExpoParseError("expected value: " + line);
    ++pos;
    std::size_t valueEnd = line.find(' ', pos);
    std::string valueToken =
        valueEnd == std::string::npos ? line.substr(pos) : line.substr(pos, valueEnd - pos);
    sample.value = parse_value(valueToken);
    if (valueEnd != std::string::npos) {
      sample.hasTimestamp = true;
      std::string ts = line.substr(valueEnd + 1);
      try {
        std::size_t used = 0;
        sample.timestampMs = std::stoll(ts, &used);
        if (used != ts.size()) throw ExpoParseError("bad timestamp '" + ts + "'");
      } catch (const std::logic_error&) {
        throw ExpoParseError("bad timestamp '" + ts + "'");
      }
    }
    doc.samples.push_back(std::move(sample));
  }
  return doc;
}

/// Structural checks beyond the grammar: every sample belongs to a declared
/// family (histogram suffixes included) and bucket counts are monotone.
inline void check_exposition(const ExpoDocument& doc) {
  auto family_of = [&](const std::string& name) -> std::string {
    if (doc.types.count(name)) return name;
    for (const char* suffix : {"_bucket", "_sum", "_count"}) {
      std::string s(suffix);
      if (name.size() > s.size() && name.substr(name.size() - s.size()) == s) {
        std::string base = name.substr(0, name.size() - s.size());
        auto it = doc.types.find(base);
        if (it != doc.types.end() && it->second == "histogram") return base;
      }
    }
    throw ExpoParseError("sample '" + name + "' has no declared family");
  };
  std::map<std::string, std::vector<std::pair<double, double>>> buckets;  // family+labels -> (le, count)
  for (const auto& s : doc.samples) {
    std::string family = family_of(s.name);
    if (s.name.size() > 7 && s.name.substr(s.name.size() - 7) == "_bucket") {
      auto labels = s.labels;
      auto le = labels.find("le");
      if (le == labels.end()) throw ExpoParseError("bucket sample without le label");
      double bound = le->second == "+Inf" ? INFINITY : std::stod(le->second);
      labels.erase("le");
      std::string key = family;
      for (const auto& [k, v] : labels) key += "|" + k + "=" + v;
      buckets[key].emplace_back(bound, s.value);
    }
  }
  for (auto& [key, series] : buckets) {
    std::sort(series.begin(), series.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].second < series[i - 1].second) {
        throw ExpoParseError("bucket counts not monotone for " + key);
      }
    }
  }
}

}  // namespace hqflow::testing
