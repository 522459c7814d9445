// Copyright 2026 The atsg Authors.
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

#include <string>

#include "atsg/result.hpp"
#include "json.hpp"

namespace atsg {

void evaluate_into(const Game& game, RealizationPlan plan, SolveResult& result) {
  const BestResponse br =
      distorted_best_response(game, plan, Alpha(result.alpha), result.mode);
  result.leader_behavior = realization_to_behavior(game, plan);
  result.leader_plan = std::move(plan);
  result.follower = br.strategy;
  result.leader_utility = br.leader_utility;
  result.follower_utility = br.follower_utility;
}

namespace {

using OJson = nlohmann::ordered_json;

std::string sequence_label(const Game& game, Player p, SeqId s) {
  if (s == kEmptySequence) return "";
  std::string out;
  const Sequence seq = game.sequence(p, s);
  for (const auto& [infoset, action] : seq.moves()) {
    if (!out.empty()) out += ' ';
    const Infoset& is = game.infoset(infoset);
    out += is.label + "=" + is.actions[action];
  }
  return out;
}

OJson pure_json(const Game& game, const PureStrategy& s) {
  OJson j = OJson::object();
  for (InfosetId i : game.infosets(s.player)) {
    if (s.defines(i)) j[game.infoset(i).label] = game.infoset(i).actions[s.action(i)];
  }
  return j;
}

}  // namespace

std::string result_to_json(const Game& game, const SolveResult& result,
                           bool with_timing) {
  OJson j;
  j["method"] = result.method;
  j["alpha"] = result.alpha;
  j["at_mode"] = std::string(to_string(result.mode));
  j["leader_utility"] = result.leader_utility;
  j["follower_utility"] = result.follower_utility;

  OJson realization = OJson::array();
  for (SeqId s = 0; s < static_cast<SeqId>(result.leader_plan.values.size()); ++s) {
    realization.push_back({{"sequence", sequence_label(game, Player::kLeader, s)},
                           {"value", result.leader_plan[s]}});
  }
  j["leader_realization"] = std::move(realization);

  OJson behavior = OJson::object();
  for (InfosetId i : game.infosets(Player::kLeader)) {
    const Infoset& is = game.infoset(i);
    OJson probs = OJson::object();
    for (int a = 0; a < is.num_actions(); ++a) {
      probs[is.actions[a]] = result.leader_behavior.probs[i][a];
    }
    behavior[is.label] = std::move(probs);
  }
  j["leader_behavior"] = std::move(behavior);

  if (result.leader_mixed) {
    OJson mixed = OJson::array();
    for (const auto& [pure, prob] : result.leader_mixed->support) {
      mixed.push_back({{"probability", prob}, {"strategy", pure_json(game, pure)}});
    }
    j["leader_mixed"] = std::move(mixed);
  }
  j["follower_strategy"] = pure_json(game, result.follower);

  OJson stats = OJson::object();
  stats["lp_solves"] = result.stats.lp_solves;
  stats["bnb_nodes"] = result.stats.bnb_nodes;
  stats["pivots"] = result.stats.pivots;
  stats["generations"] = result.stats.generations;
  stats["samples"] = result.stats.samples;
  stats["positive_passes"] = result.stats.positive_passes;
  stats["feasibility_passes"] = result.stats.feasibility_passes;
  if (with_timing) stats["wall_ms"] = result.stats.wall_ms;
  j["stats"] = std::move(stats);
  return j.dump(2) + "\n";
}

}  // namespace atsg
