#pragma once

// Small helpers shared by the test binaries.

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "gossip/model.hpp"

namespace gossip::test {

inline CallSequence seq(std::string_view text, int n = 3) {
  return parse_sequence(text, AgentNames::letters(n));
}

inline Call call(std::string_view text, int n = 3) { return parse_call(text, AgentNames::letters(n)); }

// Every sequence over `calls` of length <= max_len, shortlex order.
inline std::vector<CallSequence> all_sequences(const std::vector<Call>& calls, std::size_t max_len) {
  std::vector<CallSequence> out{{}};
  for (std::size_t begin = 0, len = 0; len < max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Call c : calls) {
        CallSequence next = out[i];
        next.push_back(c);
        out.push_back(std::move(next));
      }
    begin = end;
  }
  return out;
}

inline std::vector<CallSequence> all_sequences(int n, std::size_t max_len) {
  return all_sequences(Digraph::complete(n).calls(), max_len);
}

inline CallSequence random_sequence(std::mt19937& rng, const std::vector<Call>& calls, std::size_t len) {
  std::uniform_int_distribution<std::size_t> pick(0, calls.size() - 1);
  CallSequence out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(calls[pick(rng)]);
  return out;
}

inline CallSequence concat(CallSequence a, const CallSequence& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace gossip::test
