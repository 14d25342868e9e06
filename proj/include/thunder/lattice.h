// Copyright 2026 The thunder-tok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef THUNDER_LATTICE_H_
#define THUNDER_LATTICE_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "thunder/vocabulary.h"

namespace thunder {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; kLogZero is the identity.
inline double LogAdd(double a, double b);

struct Edge {
  uint32_t begin;
  uint32_t end;
  TokenId token;
  double log_prob;
};

// Segmentation DAG of one chunk. Nodes are byte positions 0..length(); every
// edge is a vocabulary match. Edges with log_prob == kLogZero are kept for
// structure but carry no mass.
class Lattice {
 public:
  Lattice() = default;
  // Edges in any order; they are sorted by (begin, end, token).
  Lattice(size_t length, std::vector<Edge> edges);

  size_t length() const { return length_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Edge> StartingAt(size_t pos) const {
    return std::span<const Edge>(edges_).subspan(
        begin_offsets_[pos], begin_offsets_[pos + 1] - begin_offsets_[pos]);
  }
  // Indices into edges(), ordered by end position.
  std::span<const uint32_t> EndingAt(size_t pos) const {
    return std::span<const uint32_t>(by_end_).subspan(
        end_offsets_[pos], end_offsets_[pos + 1] - end_offsets_[pos]);
  }
  size_t max_edge_length() const { return max_edge_length_; }

 private:
  size_t length_ = 0;
  std::vector<Edge> edges_;
  std::vector<uint32_t> begin_offsets_{0};
  std::vector<uint32_t> by_end_;
  std::vector<uint32_t> end_offsets_{0};
  size_t max_edge_length_ = 0;
};

// All vocabulary matches inside `chunk`, found by common-prefix search.
Lattice BuildLattice(std::string_view chunk, const Vocabulary& vocab);

// log Z: log of the summed probability of all complete paths. kLogZero when
// no path has mass; 0 for the empty lattice.
double Partition(const Lattice& lattice);

struct TokenCount {
  TokenId token;
  double count;
};

// Posterior expected number of occurrences of each token, sorted by token.
// Empty when the lattice has no path. `log_z` receives Partition().
std::vector<TokenCount> ExpectedCounts(const Lattice& lattice,
                                       double* log_z = nullptr);

struct ViterbiResult {
  std::vector<TokenId> tokens;
  double log_prob = 0.0;  // kLogZero when no path exists
};

// Maximum-probability path. Ties prefer fewer tokens, then the longer edge
// at the first point of divergence, then the lower token id.
ViterbiResult Viterbi(const Lattice& lattice);

// log of the mass of paths that avoid `token` entirely.
double PartitionExcluding(const Lattice& lattice, TokenId token);

struct TokenMarginal {
  TokenId token;
  double expected;    // posterior expected count
  double log_absent;  // log(Z_excluding / Z); kLogZero when always used
};

struct LatticeMarginals {
  double log_z = 0.0;
  std::vector<TokenMarginal> tokens;  // sorted by token
};

// Expected counts and, when `with_absence` is set, per-token absence
// probabilities from a single forward-backward sweep. The absence of a token
// is found by re-running the forward pass only over the span between its
// first and last occurrence. Tokens for which `skip` returns true get
// log_absent = 0 without any work.
LatticeMarginals ComputeMarginals(
    const Lattice& lattice, bool with_absence,
    const std::function<bool(TokenId)>& skip = nullptr);

inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace thunder

#endif  // THUNDER_LATTICE_H_
