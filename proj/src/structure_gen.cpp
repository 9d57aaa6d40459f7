#include "wmload/structure_gen.hpp"

#include <utility>
#include <vector>

#include "wmload/error.hpp"

namespace wmload {

std::string MechanismKind::name() const {
  switch (kind) {
    case Mechanism::LinearLeftBranching:
      return "linear";
    case Mechanism::BalancedBinary:
      return "binary";
    case Mechanism::MultiNode:
      return "multi";
  }
  return "unknown";
}

std::uint64_t MechanismKind::stream_id() const noexcept {
  switch (kind) {
    case Mechanism::LinearLeftBranching:
      return 0;
    case Mechanism::BalancedBinary:
      return 1;
    case Mechanism::MultiNode:
      return 2 | (static_cast<std::uint64_t>(min_children) << 8) |
             (static_cast<std::uint64_t>(max_children) << 24);
  }
  return 0;
}

void MechanismKind::validate() const {
  if (kind != Mechanism::MultiNode) {
    return;
  }
  if (min_children < 1 || min_children > max_children) {
    throw ConfigError("multi-node children range must satisfy 1 <= min <= max");
  }
  if (max_children < 2) {
    throw ConfigError("multi-node max children must be >= 2");
  }
}

MechanismKind parse_mechanism(const std::string& name, int min_children, int max_children) {
  if (name == "linear") {
    return MechanismKind::linear();
  }
  if (name == "binary") {
    return MechanismKind::binary();
  }
  if (name == "multi") {
    MechanismKind m = MechanismKind::multi_node(min_children, max_children);
    m.validate();
    return m;
  }
  throw ConfigError("unknown mechanism '" + name + "'");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t GenSeed::stream_seed() const noexcept {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t field : {mechanism, length, token}) {
    state = h ^ field;
    h = splitmix64(state);
  }
  return h;
}

int TokenRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Largest multiple of span that fits; draws above it are rejected.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1) % span;
  std::uint64_t draw = engine_();
  while (draw > limit) {
    draw = engine_();
  }
  return lo + static_cast<int>(draw % span);
}

bool TokenRng::coin() { return (engine_() >> 63) != 0; }

namespace {

std::vector<Node> symbol_leaves(int n) {
  if (n <= 0) {
    throw EmptyInput("structure length must be >= 1");
  }
  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(Node::leaf("s" + std::to_string(i)));
  }
  return out;
}

Node join(std::vector<Node>::iterator first, std::vector<Node>::iterator last) {
  return Node::internal(std::vector<Node>(std::make_move_iterator(first),
                                          std::make_move_iterator(last)));
}

}  // namespace

SyntaxTree gen_left_branching(int n) {
  std::vector<Node> leaves = symbol_leaves(n);
  Node acc = std::move(leaves.front());
  for (std::size_t k = 1; k < leaves.size(); ++k) {
    std::vector<Node> pair;
    pair.reserve(2);
    pair.push_back(std::move(acc));
    pair.push_back(std::move(leaves[k]));
    acc = Node::internal(std::move(pair));
  }
  return SyntaxTree(std::move(acc));
}

SyntaxTree gen_balanced_binary(int n) {
  std::vector<Node> level = symbol_leaves(n);
  while (level.size() > 1) {
    std::vector<Node> next;
    next.reserve(level.size() / 2 + 1);
    std::size_t i = 0;
    for (; i + 1 < level.size(); i += 2) {
      next.push_back(join(level.begin() + static_cast<std::ptrdiff_t>(i),
                          level.begin() + static_cast<std::ptrdiff_t>(i + 2)));
    }
    if (i < level.size()) {
      next.push_back(std::move(level[i]));
    }
    level = std::move(next);
  }
  return SyntaxTree(std::move(level.front()));
}

SyntaxTree gen_multi_node(int n, const GenSeed& seed, int min_children, int max_children) {
  MechanismKind::multi_node(min_children, max_children).validate();
  std::vector<Node> level = symbol_leaves(n);
  TokenRng rng(seed);
  std::vector<int> sizes;
  while (level.size() > 1) {
    const int count = static_cast<int>(level.size());
    if (count < min_children) {
      // Too few siblings left for a legal group: close them under one parent.
      level = {join(level.begin(), level.end())};
      break;
    }
    // Resample until some group merges at least two siblings.
    bool merges = false;
    while (!merges) {
      sizes.clear();
      int remaining = count;
      while (remaining >= min_children && remaining > 0) {
        const int s = rng.uniform_int(min_children, std::min(max_children, remaining));
        sizes.push_back(s);
        merges = merges || s >= 2;
        remaining -= s;
      }
    }
    std::vector<Node> next;
    next.reserve(sizes.size() + static_cast<std::size_t>(min_children));
    auto it = level.begin();
    for (int s : sizes) {
      if (s >= 2 || rng.coin()) {
        next.push_back(join(it, it + s));
      } else {
        next.push_back(std::move(*it));
      }
      it += s;
    }
    // Tail shorter than min_children is carried up unchanged.
    for (; it != level.end(); ++it) {
      next.push_back(std::move(*it));
    }
    level = std::move(next);
  }
  return SyntaxTree(std::move(level.front()));
}

SyntaxTree generate(const MechanismKind& mechanism, int n, const GenSeed& seed) {
  switch (mechanism.kind) {
    case Mechanism::LinearLeftBranching:
      return gen_left_branching(n);
    case Mechanism::BalancedBinary:
      return gen_balanced_binary(n);
    case Mechanism::MultiNode:
      return gen_multi_node(n, seed, mechanism.min_children, mechanism.max_children);
  }
  throw ConfigError("unknown mechanism");
}

std::optional<double> closed_form_theta(const MechanismKind& mechanism, int n) {
  if (n < 1) {
    return std::nullopt;
  }
  switch (mechanism.kind) {
    case Mechanism::LinearLeftBranching:
      if (n == 1) {
        return 1.0;
      }
      return static_cast<double>(n + 4) * static_cast<double>(n - 1) / (2.0 * n);
    case Mechanism::BalancedBinary: {
      if ((n & (n - 1)) != 0) {
        return std::nullopt;
      }
      int d = 0;
      while ((1 << d) < n) {
        ++d;
      }
      // n = 1 is the wrapped single word, u = [1].
      return d == 0 ? 1.0 : 1.5 * d;
    }
    case Mechanism::MultiNode:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace wmload
