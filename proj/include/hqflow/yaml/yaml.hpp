#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hqflow::yaml {

struct Mark {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
};

/// Error raised while parsing a document stream. Carries the source mark so
/// callers can turn it into a positioned diagnostic.
struct ParseError : std::runtime_error {
  ParseError(Mark m, const std::string& msg) : std::runtime_error(msg), mark(m) {}
  Mark mark;
};

/// One node of a parsed document. The supported language is the strict
/// subset used by the config files in this project: block mappings, block
/// sequences (including `- -` nesting), single-line flow collections,
/// plain / single-quoted / double-quoted scalars, and `#` comments.
/// Documents in a stream are separated by `---` lines.
///
/// Scalars are kept as strings; typing is the schema layer's business.
/// Mapping entries preserve document order and duplicate keys are rejected.
class Node {
 public:
  enum class Kind { Scalar, Sequence, Mapping };

  static Node scalar(std::string value, Mark mark = {}, bool quoted = false);
  static Node sequence(Mark mark = {});
  static Node mapping(Mark mark = {});

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::Scalar; }
  bool is_sequence() const { return kind_ == Kind::Sequence; }
  bool is_mapping() const { return kind_ == Kind::Mapping; }
  const Mark& mark() const { return mark_; }

  // Scalar access.
  const std::string& str() const { return scalar_; }
  bool quoted() const { return quoted_; }

  // Sequence access.
  std::size_t size() const;
  const Node& at(std::size_t i) const { return items_[i]; }
  const std::vector<Node>& items() const { return items_; }
  void push_back(Node n) { items_.push_back(std::move(n)); }

  // Mapping access. Keys are scalars in this subset; order is preserved.
  struct EntryView {
    const std::string& key;
    const Mark& keyMark;
    const Node& value;
  };
  std::size_t entry_count() const { return keys_.size(); }
  EntryView entry(std::size_t i) const { return {keys_[i].first, keys_[i].second, values_[i]}; }

  class EntryRange {
   public:
    explicit EntryRange(const Node& n) : node_(n) {}
    class Iterator {
     public:
      Iterator(const Node& n, std::size_t i) : node_(n), i_(i) {}
      EntryView operator*() const { return node_.entry(i_); }
      Iterator& operator++() {
        ++i_;
        return *this;
      }
      bool operator!=(const Iterator& o) const { return i_ != o.i_; }

     private:
      const Node& node_;
      std::size_t i_;
    };
    Iterator begin() const { return {node_, 0}; }
    Iterator end() const { return {node_, node_.entry_count()}; }

   private:
    const Node& node_;
  };
  EntryRange entries() const { return EntryRange(*this); }

  const Node* find(std::string_view key) const;
  bool insert(std::string key, Mark keyMark, Node value);  // false on duplicate

  /// Structural equality: kinds, scalar values, order and keys. Marks and
  /// quoting style are ignored.
  bool same_structure(const Node& other) const;

 private:
  Kind kind_ = Kind::Scalar;
  Mark mark_;
  std::string scalar_;
  bool quoted_ = false;
  std::vector<Node> items_;
  std::vector<std::pair<std::string, Mark>> keys_;
  std::vector<Node> values_;
};

/// Parses a stream of documents separated by `---`. Throws ParseError.
std::vector<Node> parse_stream(std::string_view text);

/// Parses a stream that must contain exactly one document.
Node parse_document(std::string_view text);

/// Renders a node as canonical block-style text. parse(render(n)) is
/// structurally equal to n for every node this module can produce.
std::string render(const Node& node);

}  // namespace hqflow::yaml
