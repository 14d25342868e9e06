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

#include "thunder/lattice.h"

#include <algorithm>
#include <tuple>

namespace thunder {

Lattice::Lattice(size_t length, std::vector<Edge> edges)
    : length_(length), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.begin, a.end, a.token) < std::tie(b.begin, b.end, b.token);
  });
  begin_offsets_.assign(length_ + 2, 0);
  end_offsets_.assign(length_ + 2, 0);
  for (const Edge& e : edges_) {
    ++begin_offsets_[e.begin + 1];
    ++end_offsets_[e.end + 1];
    max_edge_length_ = std::max<size_t>(max_edge_length_, e.end - e.begin);
  }
  for (size_t i = 1; i < begin_offsets_.size(); ++i) {
    begin_offsets_[i] += begin_offsets_[i - 1];
    end_offsets_[i] += end_offsets_[i - 1];
  }
  by_end_.resize(edges_.size());
  std::vector<uint32_t> fill(end_offsets_.begin(), end_offsets_.end() - 1);
  for (uint32_t i = 0; i < edges_.size(); ++i) {
    by_end_[fill[edges_[i].end]++] = i;
  }
}

Lattice BuildLattice(std::string_view chunk, const Vocabulary& vocab) {
  std::vector<Edge> edges;
  edges.reserve(chunk.size() * 4);
  for (size_t pos = 0; pos < chunk.size(); ++pos) {
    vocab.index().CommonPrefixSearch(chunk, pos, [&](size_t len, TokenId id) {
      edges.push_back({static_cast<uint32_t>(pos),
                       static_cast<uint32_t>(pos + len), id,
                       vocab.token(id).log_prob});
    });
  }
  return Lattice(chunk.size(), std::move(edges));
}

namespace {

std::vector<double> Forward(const Lattice& lattice) {
  std::vector<double> alpha(lattice.length() + 1, kLogZero);
  alpha[0] = 0.0;
  for (const Edge& e : lattice.edges()) {
    if (e.log_prob == kLogZero || alpha[e.begin] == kLogZero) continue;
    alpha[e.end] = LogAdd(alpha[e.end], alpha[e.begin] + e.log_prob);
  }
  return alpha;
}

std::vector<double> Backward(const Lattice& lattice) {
  std::vector<double> beta(lattice.length() + 1, kLogZero);
  beta[lattice.length()] = 0.0;
  const auto edges = lattice.edges();
  for (size_t i = edges.size(); i-- > 0;) {
    const Edge& e = edges[i];
    if (e.log_prob == kLogZero || beta[e.end] == kLogZero) continue;
    beta[e.begin] = LogAdd(beta[e.begin], e.log_prob + beta[e.end]);
  }
  return beta;
}

}  // namespace

double Partition(const Lattice& lattice) {
  return Forward(lattice)[lattice.length()];
}

std::vector<TokenCount> ExpectedCounts(const Lattice& lattice, double* log_z) {
  const LatticeMarginals m = ComputeMarginals(lattice, /*with_absence=*/false);
  if (log_z != nullptr) *log_z = m.log_z;
  std::vector<TokenCount> out;
  out.reserve(m.tokens.size());
  for (const auto& t : m.tokens) out.push_back({t.token, t.expected});
  return out;
}

ViterbiResult Viterbi(const Lattice& lattice) {
  const size_t n = lattice.length();
  struct Best {
    double score = kLogZero;
    uint32_t tokens = 0;
    const Edge* edge = nullptr;
  };
  std::vector<Best> best(n + 1);
  best[n].score = 0.0;
  for (size_t pos = n; pos-- > 0;) {
    Best& b = best[pos];
    for (const Edge& e : lattice.StartingAt(pos)) {
      const Best& next = best[e.end];
      if (e.log_prob == kLogZero || next.score == kLogZero) continue;
      const double score = e.log_prob + next.score;
      const uint32_t tokens = next.tokens + 1;
      bool take = false;
      if (b.edge == nullptr || score > b.score) {
        take = true;
      } else if (score == b.score) {
        if (tokens != b.tokens) {
          take = tokens < b.tokens;
        } else if (e.end != b.edge->end) {
          take = e.end > b.edge->end;
        } else {
          take = e.token < b.edge->token;
        }
      }
      if (take) b = {score, tokens, &e};
    }
  }
  ViterbiResult result;
  result.log_prob = best[0].score;
  if (n > 0 && best[0].edge == nullptr) {
    result.log_prob = kLogZero;
    return result;
  }
  for (size_t pos = 0; pos < n;) {
    const Edge* e = best[pos].edge;
    result.tokens.push_back(e->token);
    pos = e->end;
  }
  return result;
}

double PartitionExcluding(const Lattice& lattice, TokenId token) {
  std::vector<double> alpha(lattice.length() + 1, kLogZero);
  alpha[0] = 0.0;
  for (const Edge& e : lattice.edges()) {
    if (e.token == token || e.log_prob == kLogZero ||
        alpha[e.begin] == kLogZero) {
      continue;
    }
    alpha[e.end] = LogAdd(alpha[e.end], alpha[e.begin] + e.log_prob);
  }
  return alpha[lattice.length()];
}

LatticeMarginals ComputeMarginals(const Lattice& lattice, bool with_absence,
                                  const std::function<bool(TokenId)>& skip) {
  LatticeMarginals result;
  const size_t n = lattice.length();
  const std::vector<double> alpha = Forward(lattice);
  const std::vector<double> beta = Backward(lattice);
  result.log_z = alpha[n];
  if (result.log_z == kLogZero) return result;

  // Group edge indices by token.
  const auto edges = lattice.edges();
  std::vector<uint32_t> order(edges.size());
  for (uint32_t i = 0; i < edges.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return edges[a].token != edges[b].token ? edges[a].token < edges[b].token
                                            : a < b;
  });

  std::vector<double> scratch(with_absence ? n + 1 : 0, kLogZero);
  size_t i = 0;
  while (i < order.size()) {
    const TokenId token = edges[order[i]].token;
    size_t j = i;
    double expected = 0.0;
    uint32_t first = std::numeric_limits<uint32_t>::max();
    uint32_t last = 0;
    for (; j < order.size() && edges[order[j]].token == token; ++j) {
      const Edge& e = edges[order[j]];
      first = std::min(first, e.begin);
      last = std::max(last, e.end);
      if (e.log_prob == kLogZero || alpha[e.begin] == kLogZero ||
          beta[e.end] == kLogZero) {
        continue;
      }
      expected += std::exp(alpha[e.begin] + e.log_prob + beta[e.end] - result.log_z);
    }
    double log_absent = 0.0;
    if (with_absence && !(skip && skip(token))) {
      // Forward values are unchanged up to `first`; recompute them on
      // (first, last] without the token, then close the sum over the cut
      // at `last` using the untouched backward values.
      auto alpha_excl = [&](uint32_t pos) {
        return pos <= first ? alpha[pos] : scratch[pos];
      };
      for (uint32_t pos = first + 1; pos <= last; ++pos) {
        double acc = kLogZero;
        for (const uint32_t k : lattice.EndingAt(pos)) {
          const Edge& e = edges[k];
          if (e.token == token || e.log_prob == kLogZero) continue;
          const double a = alpha_excl(e.begin);
          if (a == kLogZero) continue;
          acc = LogAdd(acc, a + e.log_prob);
        }
        scratch[pos] = acc;
      }
      double z_excl = kLogZero;
      if (alpha_excl(last) != kLogZero && beta[last] != kLogZero) {
        z_excl = alpha_excl(last) + beta[last];
      }
      const size_t reach = lattice.max_edge_length();
      const uint32_t from = last > reach ? static_cast<uint32_t>(last - reach) : 0;
      for (uint32_t pos = from; pos < last; ++pos) {
        const double a = alpha_excl(pos);
        if (a == kLogZero) continue;
        for (const Edge& e : lattice.StartingAt(pos)) {
          if (e.end <= last || e.log_prob == kLogZero ||
              beta[e.end] == kLogZero) {
            continue;
          }
          z_excl = LogAdd(z_excl, a + e.log_prob + beta[e.end]);
        }
      }
      log_absent = z_excl == kLogZero ? kLogZero
                                      : std::min(0.0, z_excl - result.log_z);
    }
    result.tokens.push_back({token, expected, log_absent});
    i = j;
  }
  return result;
}

}  // namespace thunder
