#pragma once

#include <string>
#include <utility>
#include <vector>

#include "acas/errors.hpp"

namespace acas::xml {

/// Element tree for the strategy document subset: elements, attributes and
/// text content; no namespaces, CDATA or processing instructions beyond the
/// optional prolog. Comments are skipped on read.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<Node> children;
  std::string text;  // trimmed character data

  const std::string* attr(const std::string& key) const;
};

/// Throws AcasError(ParseError) with a line number on malformed input.
Node parse(const std::string& input);

/// Canonical form: XML declaration, two-space indentation, attributes sorted
/// by name, children in declaration order, minimal escaping, trailing
/// newline. parse(serialize(x)) reproduces x; serialize(parse(bytes)) is
/// byte-identical for documents already in canonical form.
std::string serialize(const Node& root);

std::string escape_text(const std::string& value);
std::string escape_attribute(const std::string& value);

}  // namespace acas::xml
