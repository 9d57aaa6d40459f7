#include "wmload/syntax_tree.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <utility>

#include "wmload/error.hpp"

namespace wmload {

Node Node::leaf(std::string token) {
  Node n;
  n.token_ = std::move(token);
  return n;
}

Node Node::internal(std::vector<Node> children) {
  if (children.empty()) {
    throw EmptyInput("internal node without children");
  }
  Node n;
  n.children_ = std::move(children);
  return n;
}

SyntaxTree::SyntaxTree(Node root) : root_(std::move(root)) {
  if (root_.is_leaf()) {
    std::vector<Node> kids;
    kids.push_back(std::move(root_));
    root_ = Node::internal(std::move(kids));
  }
}

namespace {

template <typename Visit>
void for_each_leaf(const Node& node, Visit&& visit) {
  if (node.is_leaf()) {
    visit(node);
    return;
  }
  for (const Node& child : node.children()) {
    for_each_leaf(child, visit);
  }
}

}  // namespace

std::vector<std::string> SyntaxTree::leaves() const {
  std::vector<std::string> out;
  for_each_leaf(root_, [&](const Node& n) { out.push_back(n.token()); });
  return out;
}

std::size_t SyntaxTree::leaf_count() const {
  std::size_t count = 0;
  for_each_leaf(root_, [&](const Node&) { ++count; });
  return count;
}

SyntaxTree wrap_root(std::span<const std::string> tokens) {
  if (tokens.empty()) {
    throw EmptyInput("token list");
  }
  std::vector<Node> kids;
  kids.reserve(tokens.size());
  for (const auto& t : tokens) {
    kids.push_back(Node::leaf(t));
  }
  return SyntaxTree(Node::internal(std::move(kids)));
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Item {
  std::optional<std::string> atom;
  std::optional<Node> group;
};

Node close_group(std::vector<Item>& items, bool strip_labels) {
  if (strip_labels) {
    bool has_group = false;
    std::size_t atoms = 0;
    for (const auto& it : items) {
      has_group = has_group || it.group.has_value();
      atoms += it.atom.has_value() ? 1 : 0;
    }
    if (has_group) {
      for (auto it = items.begin(); it != items.end(); ++it) {
        if (it->atom) {
          items.erase(it);
          break;
        }
      }
    } else if (atoms == 2 && items.size() == 2) {
      return Node::leaf(std::move(*items[1].atom));
    }
  }
  std::vector<Node> kids;
  kids.reserve(items.size());
  for (auto& it : items) {
    kids.push_back(it.atom ? Node::leaf(std::move(*it.atom)) : std::move(*it.group));
  }
  return Node::internal(std::move(kids));
}

}  // namespace

SyntaxTree parse_bracketed(std::string_view text, const ParseOptions& options) {
  std::vector<std::vector<Item>> stack;
  std::optional<Node> result;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (result) {
      throw ParseError(i, "trailing input after the tree");
    }
    if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.empty()) {
        throw ParseError(i, "unbalanced ')'");
      }
      if (stack.back().empty()) {
        throw ParseError(i, "empty group");
      }
      Node node = close_group(stack.back(), options.strip_labels);
      stack.pop_back();
      if (stack.empty()) {
        result = std::move(node);
      } else {
        stack.back().push_back(Item{std::nullopt, std::move(node)});
      }
      ++i;
    } else {
      if (stack.empty()) {
        throw ParseError(i, "atom outside of a group");
      }
      const std::size_t start = i;
      while (i < text.size() && !is_space(text[i]) && text[i] != '(' && text[i] != ')') {
        ++i;
      }
      stack.back().push_back(Item{std::string(text.substr(start, i - start)), std::nullopt});
    }
  }
  if (!stack.empty()) {
    throw ParseError(text.size(), "unbalanced parentheses, missing ')'");
  }
  if (!result) {
    throw ParseError(text.size(), "expected '('");
  }
  SyntaxTree tree(std::move(*result));
  if (tree.leaf_count() == 0) {
    throw EmptyInput("no leaves after label stripping");
  }
  return options.collapse_unary ? collapse_unary(tree) : tree;
}

namespace {

void write_node(const Node& node, std::string& out) {
  if (node.is_leaf()) {
    out += node.token();
    return;
  }
  out += '(';
  bool first = true;
  for (const Node& child : node.children()) {
    if (!first) {
      out += ' ';
    }
    first = false;
    write_node(child, out);
  }
  out += ')';
}

Node collapse(const Node& node) {
  if (node.is_leaf()) {
    return node;
  }
  const Node* cur = &node;
  while (cur->children().size() == 1 && !cur->children().front().is_leaf()) {
    cur = &cur->children().front();
  }
  std::vector<Node> kids;
  kids.reserve(cur->children().size());
  for (const Node& child : cur->children()) {
    kids.push_back(collapse(child));
  }
  return Node::internal(std::move(kids));
}

std::optional<Node> prune(const Node& node,
                          const std::function<bool(const std::string&)>& drop) {
  if (node.is_leaf()) {
    if (drop(node.token())) {
      return std::nullopt;
    }
    return node;
  }
  std::vector<Node> kids;
  for (const Node& child : node.children()) {
    if (auto kept = prune(child, drop)) {
      kids.push_back(std::move(*kept));
    }
  }
  if (kids.empty()) {
    return std::nullopt;
  }
  return Node::internal(std::move(kids));
}

}  // namespace

std::string to_bracketed(const Node& node) {
  std::string out;
  write_node(node, out);
  return out;
}

std::string to_bracketed(const SyntaxTree& tree) { return to_bracketed(tree.root()); }

SyntaxTree collapse_unary(const SyntaxTree& tree) { return SyntaxTree(collapse(tree.root())); }

SyntaxTree drop_leaves_if(const SyntaxTree& tree,
                          const std::function<bool(const std::string&)>& drop) {
  auto kept = prune(tree.root(), drop);
  if (!kept) {
    throw EmptyInput("every leaf was dropped");
  }
  return SyntaxTree(std::move(*kept));
}

namespace {

// Decodes one UTF-8 code point; returns nullopt on malformed input.
std::optional<char32_t> next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  int extra = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    cp = b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    cp = b0 & 0x1F;
    extra = 1;
  } else if ((b0 & 0xF0) == 0xE0) {
    cp = b0 & 0x0F;
    extra = 2;
  } else if ((b0 & 0xF8) == 0xF0) {
    cp = b0 & 0x07;
    extra = 3;
  } else {
    return std::nullopt;
  }
  if (i + extra >= s.size() && extra > 0) {
    return std::nullopt;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      return std::nullopt;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_punctuation_cp(char32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  switch (cp) {
    case 0x00A1: case 0x00AB: case 0x00B7: case 0x00BB: case 0x00BF:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65);
}

}  // namespace

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) {
    return false;
  }
  std::size_t i = 0;
  while (i < token.size()) {
    auto cp = next_code_point(token, i);
    if (!cp || !is_punctuation_cp(*cp)) {
      return false;
    }
  }
  return true;
}

}  // namespace wmload
