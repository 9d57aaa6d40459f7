#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wmload {

// A node is a leaf (token, no children) or an internal node with at least one
// ordered child. Leaf-ness is encoded by an empty child list.
class Node {
 public:
  static Node leaf(std::string token);
  // Throws EmptyInput when `children` is empty.
  static Node internal(std::vector<Node> children);

  bool is_leaf() const noexcept { return children_.empty(); }
  const std::string& token() const noexcept { return token_; }
  const std::vector<Node>& children() const noexcept { return children_; }
  std::vector<Node>& mutable_children() noexcept { return children_; }

  friend bool operator==(const Node&, const Node&) = default;

 private:
  Node() = default;

  std::string token_;
  std::vector<Node> children_;
};

// Ordered rooted tree whose leaves are the words of one sentence. The root is
// always internal: it is the outermost list that the open-node count starts
// from. A bare leaf handed to the constructor is wrapped in a unary root.
class SyntaxTree {
 public:
  explicit SyntaxTree(Node root);

  const Node& root() const noexcept { return root_; }

  std::vector<std::string> leaves() const;
  std::size_t leaf_count() const;

  friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;

 private:
  Node root_;
};

struct ParseOptions {
  // Drop the first bare atom of any group that also holds a parenthesized
  // child, and read "(LABEL token)" pairs as a single leaf.
  bool strip_labels = false;
  // Fuse internal nodes whose only child is internal.
  bool collapse_unary = false;
};

// Flat root over `tokens`. Throws EmptyInput on an empty list.
SyntaxTree wrap_root(std::span<const std::string> tokens);

// Reads one tree in the bracketed interchange grammar:
//   Tree := '(' Item+ ')'   Item := Tree | Atom
// Throws ParseError (byte offset) on malformed text and EmptyInput if no
// leaves remain after normalization.
SyntaxTree parse_bracketed(std::string_view text, const ParseOptions& options = {});

// Single spaces between items, no trailing whitespace.
std::string to_bracketed(const SyntaxTree& tree);
std::string to_bracketed(const Node& node);

SyntaxTree collapse_unary(const SyntaxTree& tree);

// Removes every leaf matching `drop` and prunes internal nodes left without
// children. Throws EmptyInput if nothing remains.
SyntaxTree drop_leaves_if(const SyntaxTree& tree,
                          const std::function<bool(const std::string&)>& drop);

// Tokens made only of punctuation (ASCII plus the common Unicode
// punctuation blocks).
bool is_punctuation_token(std::string_view token);

}  // namespace wmload
