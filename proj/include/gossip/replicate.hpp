#pragma once

// Worked examples as data. A manifest is a JSON array of cases
//   {"id", "description", "kind", "params": {...}, "expect": {...}}
// Each expectation key must match the same key of the actual outcome, either
// by equality or through an operator object: {"ge": x}, {"le": x},
// {"contains": x or [x...]}.

#include <string>
#include <string_view>
#include <vector>

#include "gossip/report.hpp"

namespace gossip {

struct ReplicationCase {
  std::string id;
  std::string description;
  std::string kind;
  Json params;
  Json expect;
};

struct ReplicationResult {
  std::string id;
  std::string description;
  Json expected;
  Json actual;
  bool pass = false;
  std::string error;
  std::vector<std::string> mismatches;
};

std::string default_manifest_path();

std::vector<ReplicationCase> load_manifest(const std::string& path);

// "all", an exact id, or an id prefix up to a '-' (a group such as
// "centralized-2n-4"). Throws GossipError when nothing matches.
std::vector<ReplicationCase> select_cases(const std::vector<ReplicationCase>& cases, std::string_view selector);

// Runs the case and returns its actual outcome; throws on malformed cases.
Json run_case_outcome(const ReplicationCase& c);
ReplicationResult run_case(const ReplicationCase& c);

// Appends a message per failed expectation key.
bool matches(const Json& expect, const Json& actual, std::vector<std::string>& mismatches);

}  // namespace gossip
