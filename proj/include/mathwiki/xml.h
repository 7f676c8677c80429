// Minimal strict XML reader/writer. Supports elements, attributes, text,
// CDATA, comments, the five predefined entities and character references.
// DOCTYPE declarations are rejected.
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathwiki/result.h"

namespace mathwiki::xml {

struct Position {
  int line = 1;
  int column = 1;
};

struct Node {
  enum class Kind { Element, Text };

  Kind kind = Kind::Element;
  std::string name;  // element name
  std::string text;  // text content (Kind::Text)
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  Position pos;

  bool is_element() const { return kind == Kind::Element; }
  const std::string* attribute(std::string_view key) const;
};

struct Error {
  Position pos;
  std::string message;
};

Result<Node, Error> parse(std::string_view text);

std::string escape_text(std::string_view s);
std::string escape_attribute(std::string_view s);

// Streaming writer producing indented output. Text written with text() is
// placed inline; the enclosing element is then closed on the same line.
class Writer {
 public:
  explicit Writer(int indent = 2) : indent_(indent) {}

  Writer& open(std::string_view name,
               const std::vector<std::pair<std::string, std::string>>& attrs = {});
  // Opens and immediately closes an element with no children.
  Writer& empty(std::string_view name,
                const std::vector<std::pair<std::string, std::string>>& attrs = {});
  // Element holding only text, written on one line.
  Writer& leaf(std::string_view name, std::string_view text,
               const std::vector<std::pair<std::string, std::string>>& attrs = {});
  // Raw pre-escaped inline content inside the current element.
  Writer& inline_raw(std::string_view raw);
  Writer& close();

  std::string str() const { return out_; }

 private:
  struct Frame {
    std::string name;
    bool has_children = false;
    bool is_inline = false;
  };

  void begin_line();
  void start_child();
  static std::string start_tag(
      std::string_view name,
      const std::vector<std::pair<std::string, std::string>>& attrs,
      bool self_close);

  int indent_;
  std::string out_;
  std::vector<Frame> stack_;
};

}  // namespace mathwiki::xml
