#include "mathwiki/xml.h"

#include <algorithm>
#include <cstdint>

namespace mathwiki::xml {

namespace {

bool name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':' || static_cast<unsigned char>(c) >= 0x80;
}
bool name_char(char c) {
  return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {
    line_starts_.push_back(0);
    for (std::size_t k = 0; k < s_.size(); ++k) {
      if (s_[k] == '\n') line_starts_.push_back(k + 1);
    }
  }

  Result<Node, Error> run() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") i_ = 3;
    if (!skip_misc()) return err_;
    if (eof() || s_[i_] != '<') return fail("expected root element");
    Node root;
    if (!element(root)) return err_;
    if (!skip_misc()) return err_;
    if (!eof()) return fail("content after root element");
    return root;
  }

 private:
  bool eof() const { return i_ >= s_.size(); }
  bool starts(std::string_view p) const { return s_.substr(i_, p.size()) == p; }

  Position pos_at(std::size_t offset) const {
    offset = std::min(offset, s_.size());
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line_index = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    Position p;
    p.line = static_cast<int>(line_index) + 1;
    for (std::size_t k = line_starts_[line_index]; k < offset; ++k) {
      if ((static_cast<unsigned char>(s_[k]) & 0xC0) != 0x80) ++p.column;
    }
    return p;
  }

  Error fail(std::string msg) { return fail_at(i_, std::move(msg)); }
  Error fail_at(std::size_t offset, std::string msg) {
    err_ = Error{pos_at(offset), std::move(msg)};
    return err_;
  }

  // Whitespace, comments and processing instructions outside the root.
  bool skip_misc() {
    for (;;) {
      while (!eof() && is_space(s_[i_])) ++i_;
      if (starts("<!--")) {
        if (!comment()) return false;
      } else if (starts("<?")) {
        auto end = s_.find("?>", i_ + 2);
        if (end == std::string_view::npos) {
          fail("unterminated processing instruction");
          return false;
        }
        i_ = end + 2;
      } else if (starts("<!DOCTYPE") || starts("<!doctype")) {
        fail("DTDs are not supported");
        return false;
      } else {
        return true;
      }
    }
  }

  bool comment() {
    auto end = s_.find("-->", i_ + 4);
    if (end == std::string_view::npos) {
      fail("unterminated comment");
      return false;
    }
    i_ = end + 3;
    return true;
  }

  bool name(std::string& out) {
    if (eof() || !name_start(s_[i_])) {
      fail("expected a name");
      return false;
    }
    std::size_t b = i_;
    while (!eof() && name_char(s_[i_])) ++i_;
    out.assign(s_.substr(b, i_ - b));
    return true;
  }

  bool entity(std::string& out) {
    std::size_t start = i_;
    auto end = s_.find(';', i_);
    if (end == std::string_view::npos || end - i_ > 12) {
      fail("unterminated entity reference");
      return false;
    }
    std::string_view ent = s_.substr(i_ + 1, end - i_ - 1);
    i_ = end + 1;
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ent[1] == 'x';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) {
        fail_at(start, "bad character reference");
        return false;
      }
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else {
          fail_at(start, "bad character reference");
          return false;
        }
        cp = cp * (hex ? 16 : 10) + d;
        if (cp > 0x10FFFF) {
          fail_at(start, "character reference out of range");
          return false;
        }
      }
      if (cp == 0) {
        fail_at(start, "character reference out of range");
        return false;
      }
      append_utf8(out, cp);
    } else {
      fail_at(start, "unknown entity '&" + std::string(ent) + ";'");
      return false;
    }
    return true;
  }

  bool element(Node& node) {
    node.kind = Node::Kind::Element;
    node.pos = pos_at(i_);
    ++i_;  // '<'
    if (!name(node.name)) return false;
    for (;;) {
      bool had_space = false;
      while (!eof() && is_space(s_[i_])) {
        ++i_;
        had_space = true;
      }
      if (eof()) {
        fail("unterminated start tag");
        return false;
      }
      if (starts("/>")) {
        i_ += 2;
        return true;
      }
      if (s_[i_] == '>') {
        ++i_;
        break;
      }
      if (!had_space) {
        fail("expected whitespace before attribute");
        return false;
      }
      std::size_t attr_at = i_;
      std::string key;
      if (!name(key)) return false;
      while (!eof() && is_space(s_[i_])) ++i_;
      if (eof() || s_[i_] != '=') {
        fail("expected '=' after attribute name");
        return false;
      }
      ++i_;
      while (!eof() && is_space(s_[i_])) ++i_;
      if (eof() || (s_[i_] != '"' && s_[i_] != '\'')) {
        fail("expected quoted attribute value");
        return false;
      }
      char quote = s_[i_++];
      std::string value;
      for (;;) {
        if (eof()) {
          fail("unterminated attribute value");
          return false;
        }
        char c = s_[i_];
        if (c == quote) {
          ++i_;
          break;
        }
        if (c == '<') {
          fail("'<' in attribute value");
          return false;
        }
        if (c == '&') {
          if (!entity(value)) return false;
        } else {
          value += c;
          ++i_;
        }
      }
      for (const auto& [k, v] : node.attributes) {
        if (k == key) {
          fail_at(attr_at, "duplicate attribute '" + key + "'");
          return false;
        }
      }
      node.attributes.emplace_back(std::move(key), std::move(value));
    }
    return content(node);
  }

  bool content(Node& node) {
    Node text;
    text.kind = Node::Kind::Text;
    auto flush = [&] {
      if (!text.text.empty()) node.children.push_back(std::move(text));
      text = Node{};
      text.kind = Node::Kind::Text;
    };
    for (;;) {
      if (eof()) {
        fail("missing end tag for '" + node.name + "'");
        return false;
      }
      if (starts("</")) {
        flush();
        std::size_t at = i_;
        i_ += 2;
        std::string end;
        if (!name(end)) return false;
        while (!eof() && is_space(s_[i_])) ++i_;
        if (eof() || s_[i_] != '>') {
          fail("malformed end tag");
          return false;
        }
        ++i_;
        if (end != node.name) {
          fail_at(at, "end tag '" + end + "' does not match '" + node.name + "'");
          return false;
        }
        return true;
      }
      if (starts("<!--")) {
        if (!comment()) return false;
        continue;
      }
      if (starts("<![CDATA[")) {
        if (text.text.empty()) text.pos = pos_at(i_);
        auto end = s_.find("]]>", i_ + 9);
        if (end == std::string_view::npos) {
          fail("unterminated CDATA section");
          return false;
        }
        text.text.append(s_.substr(i_ + 9, end - i_ - 9));
        i_ = end + 3;
        continue;
      }
      if (starts("<!") || starts("<?")) {
        fail("unsupported markup declaration");
        return false;
      }
      if (s_[i_] == '<') {
        flush();
        if (++depth_ > kMaxDepth) {
          fail("elements nested too deeply");
          return false;
        }
        Node child;
        if (!element(child)) return false;
        --depth_;
        node.children.push_back(std::move(child));
        continue;
      }
      if (text.text.empty()) text.pos = pos_at(i_);
      if (s_[i_] == '&') {
        if (!entity(text.text)) return false;
      } else {
        text.text += s_[i_++];
      }
    }
  }

  std::string_view s_;
  std::vector<std::size_t> line_starts_;
  std::size_t i_ = 0;
  int depth_ = 0;
  Error err_;

  static constexpr int kMaxDepth = 256;
};

}  // namespace

const std::string* Node::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

Result<Node, Error> parse(std::string_view text) { return Parser(text).run(); }

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Writer::start_tag(
    std::string_view name,
    const std::vector<std::pair<std::string, std::string>>& attrs,
    bool self_close) {
  std::string tag = "<";
  tag += name;
  for (const auto& [k, v] : attrs) {
    tag += ' ';
    tag += k;
    tag += "=\"";
    tag += escape_attribute(v);
    tag += '"';
  }
  if (self_close) tag += "/>";
  return tag;
}

void Writer::begin_line() {
  if (!out_.empty()) out_ += '\n';
  out_.append(stack_.size() * indent_, ' ');
}

// Terminates the parent's start tag before a child is written.
void Writer::start_child() {
  if (stack_.empty()) return;
  Frame& parent = stack_.back();
  if (!parent.has_children && !parent.is_inline) out_ += '>';
  parent.has_children = true;
}

Writer& Writer::open(std::string_view name,
                     const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_child();
  begin_line();
  out_ += start_tag(name, attrs, false);
  stack_.push_back(Frame{std::string(name)});
  return *this;
}

Writer& Writer::empty(std::string_view name,
                      const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_child();
  begin_line();
  out_ += start_tag(name, attrs, true);
  return *this;
}

Writer& Writer::leaf(std::string_view name, std::string_view text,
                     const std::vector<std::pair<std::string, std::string>>& attrs) {
  open(name, attrs);
  inline_raw(escape_text(text));
  return close();
}

Writer& Writer::inline_raw(std::string_view raw) {
  Frame& f = stack_.back();
  if (!f.is_inline) {
    if (!f.has_children) out_ += '>';
    f.is_inline = true;
  }
  out_ += raw;
  return *this;
}

Writer& Writer::close() {
  Frame f = std::move(stack_.back());
  stack_.pop_back();
  if (f.is_inline) {
    out_ += "</" + f.name + ">";
  } else if (!f.has_children) {
    out_ += "/>";
  } else {
    begin_line();
    out_ += "</" + f.name + ">";
  }
  return *this;
}

}  // namespace mathwiki::xml
