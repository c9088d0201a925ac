#include "acas/xml.hpp"

#include <algorithm>
#include <cctype>

namespace acas::xml {

namespace {

class Reader {
 public:
  explicit Reader(const std::string& input) : input_(input) {}

  Node run() {
    skip_misc();
    Node root = element();
    skip_misc();
    if (pos_ < input_.size()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw AcasError(ErrorCode::ParseError,
                    "XML parse error at line " + std::to_string(line_) + ": " + message);
  }

  bool starts_with(const char* prefix) const {
    return input_.compare(pos_, std::char_traits<char>::length(prefix), prefix) == 0;
  }

  char peek() const { return pos_ < input_.size() ? input_[pos_] : '\0'; }

  char take() {
    if (pos_ >= input_.size()) fail("unexpected end of document");
    const char c = input_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_whitespace() {
    while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) take();
  }

  void skip_misc() {
    while (true) {
      skip_whitespace();
      if (starts_with("<?")) {
        while (!starts_with("?>")) take();
        take();
        take();
      } else if (starts_with("<!--")) {
        skip_comment();
      } else {
        return;
      }
    }
  }

  void skip_comment() {
    pos_ += 4;
    while (!starts_with("-->")) take();
    pos_ += 3;
  }

  std::string name() {
    const std::size_t start = pos_;
    while (pos_ < input_.size() &&
           (std::isalnum(static_cast<unsigned char>(input_[pos_])) || input_[pos_] == '_' ||
            input_[pos_] == '-' || input_[pos_] == '.' || input_[pos_] == ':')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a name");
    return input_.substr(start, pos_ - start);
  }

  std::string unescape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      const std::size_t end = raw.find(';', i);
      if (end == std::string::npos) fail("unterminated entity reference");
      const std::string entity = raw.substr(i + 1, end - i - 1);
      if (entity == "lt") out += '<';
      else if (entity == "gt") out += '>';
      else if (entity == "amp") out += '&';
      else if (entity == "quot") out += '"';
      else if (entity == "apos") out += '\'';
      else fail("unknown entity '&" + entity + ";'");
      i = end;
    }
    return out;
  }

  Node element() {
    if (take() != '<') fail("expected '<'");
    Node node;
    node.name = name();
    while (true) {
      skip_whitespace();
      const char c = peek();
      if (c == '/') {
        take();
        if (take() != '>') fail("expected '>' after '/'");
        return node;  // self-closing
      }
      if (c == '>') {
        take();
        break;
      }
      // attribute
      const std::string key = name();
      skip_whitespace();
      if (take() != '=') fail("expected '=' in attribute");
      skip_whitespace();
      const char quote = take();
      if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
      std::string value;
      while (peek() != quote) value += take();
      take();
      for (const auto& [existing, unused] : node.attributes) {
        (void)unused;
        if (existing == key) fail("duplicate attribute '" + key + "'");
      }
      node.attributes.emplace_back(key, unescape(value));
    }

    // content: text, children and comments until the matching close tag
    std::string text;
    while (true) {
      if (pos_ >= input_.size()) fail("missing close tag for <" + node.name + ">");
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("</")) {
        pos_ += 2;
        const std::string closing = name();
        if (closing != node.name) {
          fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
        }
        skip_whitespace();
        if (take() != '>') fail("expected '>'");
        break;
      }
      if (peek() == '<') {
        node.children.push_back(element());
        continue;
      }
      text += take();
    }

    // trim surrounding whitespace from character data
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos) {
      const auto last = text.find_last_not_of(" \t\r\n");
      node.text = unescape(text.substr(first, last - first + 1));
    }
    if (!node.text.empty() && !node.children.empty()) {
      fail("<" + node.name + "> mixes text and child elements");
    }
    return node;
  }

  const std::string& input_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void write(const Node& node, int depth, std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent + "<" + node.name;

  auto attributes = node.attributes;
  std::sort(attributes.begin(), attributes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, value] : attributes) {
    out += " " + key + "=\"" + escape_attribute(value) + "\"";
  }

  if (node.children.empty() && node.text.empty()) {
    out += "/>\n";
    return;
  }
  if (node.children.empty()) {
    out += ">" + escape_text(node.text) + "</" + node.name + ">\n";
    return;
  }
  out += ">\n";
  for (const auto& child : node.children) write(child, depth + 1, out);
  out += indent + "</" + node.name + ">\n";
}

}  // namespace

const std::string* Node::attr(const std::string& key) const {
  for (const auto& [name, value] : attributes) {
    if (name == key) return &value;
  }
  return nullptr;
}

Node parse(const std::string& input) { return Reader(input).run(); }

std::string serialize(const Node& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write(root, 0, out);
  return out;
}

std::string escape_text(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (const char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (const char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace acas::xml
