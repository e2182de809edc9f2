#include "hqflow/yaml/yaml.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hqflow::yaml {

Node Node::scalar(std::string value, Mark mark, bool quoted) {
  Node n;
  n.kind_ = Kind::Scalar;
  n.scalar_ = std::move(value);
  n.mark_ = mark;
  n.quoted_ = quoted;
  return n;
}

Node Node::sequence(Mark mark) {
  Node n;
  n.kind_ = Kind::Sequence;
  n.mark_ = mark;
  return n;
}

Node Node::mapping(Mark mark) {
  Node n;
  n.kind_ = Kind::Mapping;
  n.mark_ = mark;
  return n;
}

std::size_t Node::size() const {
  if (kind_ == Kind::Sequence) return items_.size();
  if (kind_ == Kind::Mapping) return keys_.size();
  return 0;
}

const Node* Node::find(std::string_view key) const {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (keys_[i].first == key) return &values_[i];
  }
  return nullptr;
}

bool Node::insert(std::string key, Mark keyMark, Node value) {
  if (find(key) != nullptr) return false;
  keys_.emplace_back(std::move(key), keyMark);
  values_.push_back(std::move(value));
  return true;
}

bool Node::same_structure(const Node& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Scalar:
      return scalar_ == other.scalar_;
    case Kind::Sequence:
      if (items_.size() != other.items_.size()) return false;
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (!items_[i].same_structure(other.items_[i])) return false;
      }
      return true;
    case Kind::Mapping:
      if (keys_.size() != other.keys_.size()) return false;
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i].first != other.keys_[i].first) return false;
        if (!values_[i].same_structure(other.values_[i])) return false;
      }
      return true;
  }
  return false;
}

namespace {

struct Line {
  int no = 0;      // 1-based
  int indent = 0;  // leading spaces
  std::string text;
};

bool starts_with_dash(std::string_view text) {
  return text == "-" || text.substr(0, 2) == "- ";
}

bool is_space(char c) { return c == ' '; }

/// Strips a trailing comment, respecting quotes. Returns the content part.
std::string strip_comment(std::string_view raw, int lineNo) {
  std::string out;
  char quote = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (quote != 0) {
      out.push_back(c);
      if (quote == '"' && c == '\\' && i + 1 < raw.size()) {
        out.push_back(raw[++i]);
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      out.push_back(c);
      continue;
    }
    if (c == '#' && (i == 0 || is_space(raw[i - 1]))) break;
    if (c == '\t') throw ParseError({lineNo, static_cast<int>(i) + 1}, "tab character not allowed");
    out.push_back(c);
  }
  while (!out.empty() && is_space(out.back())) out.pop_back();
  return out;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++no;
    std::size_t indent = 0;
    while (indent < raw.size() && raw[indent] == ' ') ++indent;
    if (indent < raw.size() && raw[indent] == '\t') {
      throw ParseError({no, static_cast<int>(indent) + 1}, "tab character not allowed in indentation");
    }
    std::string content = strip_comment(raw.substr(indent), no);
    if (!content.empty()) {
      lines.push_back(Line{no, static_cast<int>(indent), std::move(content)});
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

/// Scalar text handling: unquotes and unescapes. `col0` is the 0-based
/// absolute column where `text` begins.
std::string parse_scalar_text(std::string_view text, int lineNo, int col0, bool* quoted) {
  if (quoted) *quoted = false;
  if (text.empty()) return "";
  char q = text.front();
  if (q != '"' && q != '\'') {
    return std::string(text);
  }
  if (quoted) *quoted = true;
  std::string out;
  std::size_t i = 1;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (q == '"' && c == '\\') {
      if (i + 1 >= text.size()) throw ParseError({lineNo, col0 + static_cast<int>(i) + 1}, "dangling escape");
      char e = text[++i];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default:
          throw ParseError({lineNo, col0 + static_cast<int>(i) + 1}, std::string("unsupported escape \\") + e);
      }
      continue;
    }
    if (c == q) {
      if (q == '\'' && i + 1 < text.size() && text[i + 1] == '\'') {
        out.push_back('\'');
        ++i;
        continue;
      }
      if (i + 1 != text.size()) {
        throw ParseError({lineNo, col0 + static_cast<int>(i) + 2}, "trailing characters after quoted scalar");
      }
      return out;
    }
    out.push_back(c);
  }
  throw ParseError({lineNo, col0 + 1}, "unterminated quoted scalar");
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  std::vector<Node> parse_documents() {
    std::vector<Node> docs;
    while (pos_ < lines_.size()) {
      if (is_separator(lines_[pos_])) {
        ++pos_;
        continue;
      }
      docEnd_ = pos_;
      while (docEnd_ < lines_.size() && !is_separator(lines_[docEnd_])) ++docEnd_;
      docs.push_back(parse_block(0));
      if (pos_ < docEnd_) {
        throw ParseError(mark_of(lines_[pos_]), "unexpected content after document root");
      }
    }
    return docs;
  }

 private:
  static bool is_separator(const Line& l) { return l.indent == 0 && l.text == "---"; }

  static Mark mark_of(const Line& l) { return Mark{l.no, l.indent + 1}; }

  bool have_line() const { return pos_ < docEnd_; }
  const Line& cur() const { return lines_[pos_]; }

  Node parse_block(int minIndent) {
    if (!have_line()) {
      throw ParseError({pos_ > 0 ? lines_[pos_ - 1].no : 1, 1}, "expected a node");
    }
    const Line& l = cur();
    if (l.indent < minIndent) {
      throw ParseError(mark_of(l), "bad indentation");
    }
    if (starts_with_dash(l.text)) return parse_sequence(l.indent, nullptr, 0, 0);
    return parse_mapping(l.indent, nullptr, 0, 0);
  }

  /// Block sequence whose dashes sit at column `indent`. When `inlineText`
  /// is non-null the first item starts on the current line at `inlineCol`
  /// (used for `- -` nesting); the current line is still owned by the
  /// caller's item in that case.
  Node parse_sequence(int indent, const std::string* inlineText, int inlineCol, int inlineLineNo) {
    Node seq = Node::sequence(inlineText ? Mark{inlineLineNo, inlineCol + 1}
                                         : Mark{cur().no, indent + 1});
    bool first = true;
    while (true) {
      std::string_view text;
      int dashCol = indent;
      int lineNo = 0;
      if (first && inlineText) {
        text = *inlineText;
        dashCol = inlineCol;
        lineNo = inlineLineNo;
      } else {
        if (!have_line() || cur().indent != indent || !starts_with_dash(cur().text)) break;
        text = cur().text;
        lineNo = cur().no;
      }
      first = false;
      // Content begins after the dash and any following spaces.
      std::size_t off = 1;
      while (off < text.size() && is_space(text[off])) ++off;
      int contentCol = dashCol + static_cast<int>(off);
      std::string rest(text.substr(std::min(off, text.size())));
      if (rest.empty()) {
        ++pos_;
        if (have_line() && cur().indent > dashCol) {
          seq.push_back(parse_block(dashCol + 1));
        } else {
          seq.push_back(Node::scalar("", Mark{lineNo, contentCol + 1}));
        }
      } else {
        seq.push_back(parse_inline(rest, contentCol, lineNo));
      }
    }
    return seq;
  }

  /// Block mapping whose keys sit at column `indent`, optionally starting
  /// inline on the current line (sequence item bodies).
  Node parse_mapping(int indent, const std::string* inlineText, int inlineCol, int inlineLineNo) {
    Node map = Node::mapping(inlineText ? Mark{inlineLineNo, inlineCol + 1}
                                        : Mark{cur().no, indent + 1});
    bool first = true;
    while (true) {
      std::string text;
      int keyCol = indent;
      int lineNo = 0;
      if (first && inlineText) {
        text = *inlineText;
        keyCol = inlineCol;
        lineNo = inlineLineNo;
      } else {
        if (!have_line() || cur().indent != indent || starts_with_dash(cur().text)) break;
        text = cur().text;
        lineNo = cur().no;
      }
      first = false;
      parse_mapping_entry(map, text, keyCol, lineNo);
    }
    return map;
  }

  void parse_mapping_entry(Node& map, const std::string& text, int keyCol, int lineNo) {
    auto [key, afterKey] = split_key(text, lineNo, keyCol);
    Mark keyMark{lineNo, keyCol + 1};
    std::string valueText = text.substr(afterKey);
    std::size_t lead = 0;
    while (lead < valueText.size() && is_space(valueText[lead])) ++lead;
    valueText = valueText.substr(lead);
    int valueCol = keyCol + static_cast<int>(afterKey + lead);

    Node value = Node::scalar("", Mark{lineNo, valueCol + 1});
    if (!valueText.empty()) {
      if (valueText.front() == '{' || valueText.front() == '[') {
        value = parse_flow_exact(valueText, lineNo, valueCol);
      } else if (starts_with_dash(valueText)) {
        throw ParseError({lineNo, valueCol + 1}, "block sequence may not start after a key on the same line");
      } else {
        bool quoted = false;
        std::string s = parse_scalar_text(valueText, lineNo, valueCol, &quoted);
        if (!quoted && s.find(": ") != std::string::npos) {
          throw ParseError({lineNo, valueCol + 1}, "plain scalar contains ': '; quote it or use a nested mapping");
        }
        value = Node::scalar(std::move(s), Mark{lineNo, valueCol + 1}, quoted);
      }
      ++pos_;
    } else {
      ++pos_;
      if (have_line() && cur().indent > keyCol) {
        value = parse_block(keyCol + 1);
      } else if (have_line() && cur().indent == keyCol && starts_with_dash(cur().text)) {
        // k8s-style sequence at the same indent as its key
        value = parse_sequence(keyCol, nullptr, 0, 0);
      }
    }
    if (!map.insert(key, keyMark, std::move(value))) {
      throw ParseError(keyMark, "duplicate mapping key '" + key + "'");
    }
  }

  /// Parses item content that begins mid-line (after a dash).
  Node parse_inline(const std::string& rest, int col, int lineNo) {
    if (starts_with_dash(rest)) {
      return parse_sequence(col, &rest, col, lineNo);
    }
    if (rest.front() == '{' || rest.front() == '[') {
      Node n = parse_flow_exact(rest, lineNo, col);
      ++pos_;
      return n;
    }
    if (looks_like_key(rest)) {
      return parse_mapping(col, &rest, col, lineNo);
    }
    bool quoted = false;
    std::string s = parse_scalar_text(rest, lineNo, col, &quoted);
    Node n = Node::scalar(std::move(s), Mark{lineNo, col + 1}, quoted);
    ++pos_;
    return n;
  }

  /// True when `text` starts a `key:` mapping entry.
  static bool looks_like_key(std::string_view text) {
    if (text.empty()) return false;
    if (text.front() == '"' || text.front() == '\'') {
      // quoted key: find closing quote then a colon
      char q = text.front();
      for (std::size_t i = 1; i < text.size(); ++i) {
        if (text[i] == '\\' && q == '"') {
          ++i;
          continue;
        }
        if (text[i] == q) {
          std::size_t j = i + 1;
          while (j < text.size() && is_space(text[j])) ++j;
          return j < text.size() && text[j] == ':' && (j + 1 == text.size() || is_space(text[j + 1]));
        }
      }
      return false;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == ':' && (i + 1 == text.size() || is_space(text[i + 1]))) return true;
    }
    return false;
  }

  /// Splits `key:` from a mapping line. Returns {key, offset past colon}.
  std::pair<std::string, std::size_t> split_key(const std::string& text, int lineNo, int col0) {
    if (text.front() == '"' || text.front() == '\'') {
      char q = text.front();
      std::size_t i = 1;
      for (; i < text.size(); ++i) {
        if (text[i] == '\\' && q == '"') {
          ++i;
          continue;
        }
        if (text[i] == q) break;
      }
      if (i >= text.size()) throw ParseError({lineNo, col0 + 1}, "unterminated quoted key");
      std::string key = parse_scalar_text(text.substr(0, i + 1), lineNo, col0, nullptr);
      std::size_t j = i + 1;
      while (j < text.size() && is_space(text[j])) ++j;
      if (j >= text.size() || text[j] != ':') {
        throw ParseError({lineNo, col0 + static_cast<int>(j) + 1}, "expected ':' after key");
      }
      return {key, j + 1};
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == ':' && (i + 1 == text.size() || is_space(text[i + 1]))) {
        std::string key = text.substr(0, i);
        while (!key.empty() && is_space(key.back())) key.pop_back();
        if (key.empty()) throw ParseError({lineNo, col0 + 1}, "empty mapping key");
        return {key, i + 1};
      }
    }
    throw ParseError({lineNo, col0 + 1}, "expected 'key: value'");
  }

  /// Single-line flow collection; the whole text must be consumed.
  Node parse_flow_exact(const std::string& text, int lineNo, int col0) {
    std::size_t pos = 0;
    Node n = parse_flow(text, pos, lineNo, col0);
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos != text.size()) {
      throw ParseError({lineNo, col0 + static_cast<int>(pos) + 1}, "trailing characters after flow collection");
    }
    return n;
  }

  Node parse_flow(const std::string& text, std::size_t& pos, int lineNo, int col0) {
    auto mark_at = [&](std::size_t p) { return Mark{lineNo, col0 + static_cast<int>(p) + 1}; };
    auto skip_ws = [&] {
      while (pos < text.size() && is_space(text[pos])) ++pos;
    };
    skip_ws();
    if (pos >= text.size()) throw ParseError(mark_at(pos), "unexpected end of flow collection");
    char open = text[pos];
    if (open == '{') {
      Node map = Node::mapping(mark_at(pos));
      ++pos;
      skip_ws();
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        return map;
      }
      while (true) {
        skip_ws();
        std::size_t keyStart = pos;
        std::string key = parse_flow_scalar(text, pos, lineNo, col0, true);
        skip_ws();
        if (pos >= text.size() || text[pos] != ':') {
          throw ParseError(mark_at(pos), "expected ':' in flow mapping");
        }
        ++pos;
        skip_ws();
        Node value = parse_flow_value(text, pos, lineNo, col0);
        if (!map.insert(key, mark_at(keyStart), std::move(value))) {
          throw ParseError(mark_at(keyStart), "duplicate mapping key '" + key + "'");
        }
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == '}') {
          ++pos;
          return map;
        }
        throw ParseError(mark_at(pos), "expected ',' or '}' in flow mapping");
      }
    }
    if (open == '[') {
      Node seq = Node::sequence(mark_at(pos));
      ++pos;
      skip_ws();
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        return seq;
      }
      while (true) {
        skip_ws();
        seq.push_back(parse_flow_value(text, pos, lineNo, col0));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          return seq;
        }
        throw ParseError(mark_at(pos), "expected ',' or ']' in flow sequence");
      }
    }
    throw ParseError(mark_at(pos), "expected flow collection");
  }

  Node parse_flow_value(const std::string& text, std::size_t& pos, int lineNo, int col0) {
    if (pos < text.size() && (text[pos] == '{' || text[pos] == '[')) {
      return parse_flow(text, pos, lineNo, col0);
    }
    std::size_t start = pos;
    bool quoted = (pos < text.size() && (text[pos] == '"' || text[pos] == '\''));
    std::string s = parse_flow_scalar(text, pos, lineNo, col0, false);
    return Node::scalar(std::move(s), Mark{lineNo, col0 + static_cast<int>(start) + 1}, quoted);
  }

  /// Scalar inside a flow collection. Plain scalars end at `,`, `}`, `]`
  /// and, for keys, at `:`.
  std::string parse_flow_scalar(const std::string& text, std::size_t& pos, int lineNo, int col0, bool isKey) {
    if (pos >= text.size()) throw ParseError({lineNo, col0 + static_cast<int>(pos) + 1}, "expected scalar");
    char q = text[pos];
    if (q == '"' || q == '\'') {
      std::size_t i = pos + 1;
      for (; i < text.size(); ++i) {
        if (text[i] == '\\' && q == '"') {
          ++i;
          continue;
        }
        if (text[i] == q) break;
      }
      if (i >= text.size()) throw ParseError({lineNo, col0 + static_cast<int>(pos) + 1}, "unterminated quoted scalar");
      std::string s = parse_scalar_text(text.substr(pos, i - pos + 1), lineNo, col0 + static_cast<int>(pos), nullptr);
      pos = i + 1;
      return s;
    }
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ',' || c == '}' || c == ']') break;
      if (isKey && c == ':' && (pos + 1 >= text.size() || is_space(text[pos + 1]) || text[pos + 1] == '}' ||
                                text[pos + 1] == ',')) {
        break;
      }
      ++pos;
    }
    std::string s = text.substr(start, pos - start);
    while (!s.empty() && is_space(s.back())) s.pop_back();
    if (s.empty()) throw ParseError({lineNo, col0 + static_cast<int>(start) + 1}, "empty flow scalar");
    return s;
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t docEnd_ = 0;
};

bool scalar_needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  if (is_space(s.front()) || is_space(s.back())) return true;
  if (s == "-" || s == "---") return true;
  static const std::string startSpecials = "-?:#&*!|>%@`\"'{}[],";
  if (startSpecials.find(s.front()) != std::string::npos) return true;
  if (s.find(": ") != std::string::npos) return true;
  if (s.back() == ':') return true;
  if (s.find(" #") != std::string::npos) return true;
  for (char c : s) {
    if (c == '\n' || c == '\t' || c == '\r') return true;
  }
  return false;
}

std::string quote_scalar(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string render_scalar(const Node& n) {
  if (n.quoted() || scalar_needs_quotes(n.str())) return quote_scalar(n.str());
  return n.str();
}

void render_node(const Node& n, int indent, std::ostringstream& out);

void render_block_value(const Node& v, int indent, std::ostringstream& out) {
  if (v.is_scalar()) {
    out << " " << render_scalar(v) << "\n";
  } else if (v.size() == 0) {
    out << (v.is_sequence() ? " []" : " {}") << "\n";
  } else {
    out << "\n";
    render_node(v, indent + 2, out);
  }
}

void render_seq_item(const Node& item, int indent, std::ostringstream& out) {
  std::string pad(indent, ' ');
  if (item.is_scalar()) {
    out << pad << "- " << render_scalar(item) << "\n";
    return;
  }
  if (item.size() == 0) {
    out << pad << "- " << (item.is_sequence() ? "[]" : "{}") << "\n";
    return;
  }
  if (item.is_sequence()) {
    // nested sequence: first inner item shares the dash line
    out << pad << "-";
    std::ostringstream inner;
    render_node(item, indent + 2, inner);
    std::string text = inner.str();
    out << text.substr(indent + 1);  // drop the padding of the first inner line
    return;
  }
  // mapping: first entry shares the dash line
  auto first = item.entry(0);
  out << pad << "- " << render_scalar(Node::scalar(first.key)) << ":";
  render_block_value(first.value, indent + 2, out);
  for (std::size_t i = 1; i < item.entry_count(); ++i) {
    auto e = item.entry(i);
    out << pad << "  " << render_scalar(Node::scalar(e.key)) << ":";
    render_block_value(e.value, indent + 2, out);
  }
}

void render_node(const Node& n, int indent, std::ostringstream& out) {
  std::string pad(indent, ' ');
  switch (n.kind()) {
    case Node::Kind::Scalar:
      out << pad << render_scalar(n) << "\n";
      break;
    case Node::Kind::Sequence:
      for (const auto& item : n.items()) render_seq_item(item, indent, out);
      break;
    case Node::Kind::Mapping:
      for (const auto& e : n.entries()) {
        out << pad << render_scalar(Node::scalar(e.key)) << ":";
        render_block_value(e.value, indent, out);
      }
      break;
  }
}

}  // namespace

std::vector<Node> parse_stream(std::string_view text) {
  Parser parser(split_lines(text));
  return parser.parse_documents();
}

Node parse_document(std::string_view text) {
  auto docs = parse_stream(text);
  if (docs.empty()) throw ParseError({1, 1}, "empty document");
  if (docs.size() > 1) throw ParseError({1, 1}, "expected a single document");
  return std::move(docs.front());
}

std::string render(const Node& node) {
  std::ostringstream out;
  render_node(node, 0, out);
  return out.str();
}

}  // namespace hqflow::yaml
