#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bcl/verification.hpp"

namespace bcl {

/// Key order is fixed so identical reports serialize to identical bytes.
inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.diagnostics) diagnostics[k] = v;
  nlohmann::ordered_json j;
  j["test"] = r.test_name;
  j["params"] = params;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["worst_margin"] = r.worst_margin;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["truncation_budget"] = r.truncation_budget;
  j["diagnostics"] = diagnostics;
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

}  // namespace bcl
