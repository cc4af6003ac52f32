#pragma once

#include <string>
#include <vector>

#include "sdr/feasibility.hpp"

namespace sdr {

// Outcome of one engine-versus-oracle campaign. `jsonl` holds one JSON line
// per disagreement plus a final summary line.
struct CampaignReport {
  std::string name;
  int trials = 0;
  int agreements = 0;
  int disagreements = 0;
  int unknowns = 0;
  std::vector<std::string> jsonl;

  bool passed() const { return disagreements == 0; }
};

// Names accepted by run_campaign, in the order they are usually run.
std::vector<std::string> campaign_names();

// Runs one self-contained randomized campaign pitting the feasibility
// engine (on constructed pencils) against an independent geometric or
// algebraic oracle. `samples` scales the number of randomized trials; a few
// fixed probes may be added on top. Unknown engine verdicts are tallied but
// never count as disagreements.
CampaignReport run_campaign(const std::string& name, int samples,
                            const EngineConfig& cfg);

}  // namespace sdr
