#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "wmload/syntax_tree.hpp"

namespace wmload {

enum class Mechanism { LinearLeftBranching, BalancedBinary, MultiNode };

struct MechanismKind {
  Mechanism kind = Mechanism::LinearLeftBranching;
  // Only read for MultiNode.
  int min_children = 1;
  int max_children = 4;

  static MechanismKind linear() { return {Mechanism::LinearLeftBranching, 1, 4}; }
  static MechanismKind binary() { return {Mechanism::BalancedBinary, 1, 4}; }
  static MechanismKind multi_node(int min_children = 1, int max_children = 4) {
    return {Mechanism::MultiNode, min_children, max_children};
  }

  bool deterministic() const noexcept { return kind != Mechanism::MultiNode; }

  // "linear", "binary" or "multi"; also the CSV mechanism column.
  std::string name() const;

  // Stable numeric id folded into per-token random streams.
  std::uint64_t stream_id() const noexcept;

  // Throws ConfigError unless 1 <= min_children <= max_children and
  // max_children >= 2 for MultiNode.
  void validate() const;

  friend bool operator==(const MechanismKind&, const MechanismKind&) = default;
};

// Parses "linear", "binary" or "multi". Throws ConfigError otherwise.
MechanismKind parse_mechanism(const std::string& name, int min_children = 1,
                              int max_children = 4);

// Root seed plus the derivation fields of one structure token. Each distinct
// (seed, mechanism, length, token) tuple yields its own independent stream,
// so scheduling order never changes the trees.
struct GenSeed {
  std::uint64_t seed = 0;
  std::uint64_t mechanism = 0;
  std::uint64_t length = 0;
  std::uint64_t token = 0;

  // SplitMix64 chain over the four fields.
  std::uint64_t stream_seed() const noexcept;
};

// Random stream used by the generators: std::mt19937_64 (fully specified by
// the standard) seeded with GenSeed::stream_seed(), with integer and coin
// draws done by hand so that no implementation-defined distribution is used.
class TokenRng {
 public:
  explicit TokenRng(const GenSeed& seed) : engine_(seed.stream_seed()) {}

  // Uniform on [lo, hi] by rejection sampling.
  int uniform_int(int lo, int hi);
  bool coin();

 private:
  std::mt19937_64 engine_;
};

// [[...[[s0 s1] s2]...] s(n-1)]. Throws EmptyInput for n == 0.
SyntaxTree gen_left_branching(int n);

// Repeated left-to-right pairing of adjacent siblings; an odd trailing node is
// carried unpaired into the next pass. Throws EmptyInput for n == 0.
SyntaxTree gen_balanced_binary(int n);

// Bottom-up random grouping into runs of min..max siblings; singleton groups
// become unary parents with probability 1/2. Throws EmptyInput for n == 0.
SyntaxTree gen_multi_node(int n, const GenSeed& seed, int min_children = 1,
                          int max_children = 4);

// Dispatches on the mechanism; `seed` is ignored by deterministic ones.
SyntaxTree generate(const MechanismKind& mechanism, int n, const GenSeed& seed);

// Analytic mean open-node count where one is known:
//   linear: 1 for n = 1, else (n + 4)(n - 1) / (2n)
//   binary with n = 2^d: 3d / 2
std::optional<double> closed_form_theta(const MechanismKind& mechanism, int n);

}  // namespace wmload
