#include "gossip/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace gossip {
namespace {

bool redundant_extension(const CallSequence& seq, Call c, int n) {
  const std::vector<GossipSituation> trace = situation_trace(seq, n);
  const GossipSituation& now = trace.back();
  if (apply_call(now, c) != now) return false;
  for (std::size_t p = seq.size(); p-- > 0;)
    if (seq[p] == c) return trace[p + 1] == now;
  return false;
}

std::size_t length_cap(int n, const ExploreOptions& options) {
  const auto m = static_cast<std::size_t>(n);
  const std::size_t full = m * m * m * m;
  return options.depth_budget == 0 ? full : std::min(full, options.depth_budget);
}

}  // namespace

PrefixSet generated_prefixes(const Protocol& p, std::size_t len_bound, const ExploreOptions& options) {
  Engine engine(p, options);
  const int n = p.agents();
  PrefixSet out;
  std::vector<CallSequence> level{CallSequence{}};
  for (std::size_t len = 0; !level.empty(); ++len) {
    for (const CallSequence& seq : level) out.sequences.push_back(seq);
    if (len == len_bound) break;
    std::vector<CallSequence> next;
    for (const CallSequence& seq : level) {
      for (Call c : engine.enabled_calls(seq)) {
        if (redundant_extension(seq, c, n)) continue;
        if (out.sequences.size() + next.size() >= options.node_budget) {
          out.truncated = true;
          return out;
        }
        CallSequence child = seq;
        child.push_back(c);
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return out;
}

SimulationVerdict simulates(const Protocol& simulator, const Protocol& simulated, const ExploreOptions& options) {
  if (simulator.agents() != simulated.agents()) throw GossipError("protocols have different agent counts");
  const int n = simulated.agents();
  Engine big(simulator, options);
  Engine small(simulated, options);
  const std::size_t cap = length_cap(n, options);
  SimulationVerdict v;

  std::vector<CallSequence> level{CallSequence{}};
  std::size_t nodes = 1;
  for (std::size_t len = 0; len < cap && !level.empty(); ++len) {
    std::vector<CallSequence> next;
    std::vector<CallSequence> failures;
    for (const CallSequence& seq : level) {
      const std::vector<Call> allowed = big.enabled_calls(seq);
      for (Call c : small.enabled_calls(seq)) {
        CallSequence child = seq;
        child.push_back(c);
        if (!std::binary_search(allowed.begin(), allowed.end(), c)) {
          failures.push_back(std::move(child));
          continue;
        }
        if (!redundant_extension(seq, c, n)) next.push_back(std::move(child));
      }
    }
    v.bound = len + 1;
    if (!failures.empty()) {
      std::sort(failures.begin(), failures.end(), shortlex_less);
      for (const CallSequence& f : failures)
        if (!small.generable(f) || big.generable(f))
          throw std::logic_error("simulation counterexample " + render(f, simulated.names()) + " failed verification");
      v.simulates = false;
      v.counterexample = failures.front();
      v.minimal_counterexamples = std::move(failures);
      return v;
    }
    nodes += next.size();
    if (nodes > options.node_budget) {
      v.bound_relative = true;
      return v;
    }
    level = std::move(next);
  }
  if (!level.empty()) v.bound_relative = cap < length_cap(n, ExploreOptions{});
  return v;
}

BisimulationVerdict bisimilar(const Protocol& p, const Protocol& q, const ExploreOptions& options) {
  BisimulationVerdict v;
  v.forward = simulates(p, q, options);
  v.backward = simulates(q, p, options);
  v.bisimilar = v.forward.simulates && v.backward.simulates;
  return v;
}

}  // namespace gossip
