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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "atsg/anchoring.hpp"
#include "atsg/error.hpp"
#include "atsg/strategy.hpp"
#include "test_games.hpp"

namespace atsg {
namespace {

using testing::decision;
using testing::leaf;

// Leader plays a1 in {a, b}, then (after a) a2 in {x, y}; follower never acts.
Game two_step_game() {
  GameSpec spec;
  spec.nodes.push_back(decision(0, std::nullopt, std::nullopt, Player::kLeader, "L0", {"a", "b"}));
  spec.nodes.push_back(decision(1, 0, 0, Player::kLeader, "L1", {"x", "y"}));
  spec.nodes.push_back(leaf(2, 0, 1, 0, 0));
  spec.nodes.push_back(leaf(3, 1, 0, 1, 0));
  spec.nodes.push_back(leaf(4, 1, 1, 2, 0));
  return build_game(spec);
}

SeqId seq_ax(const Game& g) {
  return g.infoset(g.node(1).infoset).action_seq[0];
}

BehaviorStrategy two_step_behavior(const Game& g, double q1, double q2) {
  BehaviorStrategy b = uniform_behavior(g, Player::kLeader);
  b.probs[g.node(0).infoset] = {q1, 1 - q1};
  b.probs[g.node(1).infoset] = {q2, 1 - q2};
  return b;
}

TEST(Alpha, Range) {
  EXPECT_NO_THROW(Alpha(0.0));
  EXPECT_NO_THROW(Alpha(0.999));
  EXPECT_THROW(Alpha(1.0), InputError);
  EXPECT_THROW(Alpha(-0.01), InputError);
  EXPECT_THROW(Alpha(std::nan("")), InputError);
}

TEST(DistortLocal, Formula) {
  const Game g = testing::smallest_game();
  BehaviorStrategy b = uniform_behavior(g, Player::kLeader);
  b.probs[0] = {1.0, 0.0};
  const BehaviorStrategy d = distort_local(g, b, Alpha(0.5));
  EXPECT_DOUBLE_EQ(d.probs[0][0], 0.75);
  EXPECT_DOUBLE_EQ(d.probs[0][1], 0.25);
}

TEST(DistortLocal, RandomTriples) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const int m = 2 + static_cast<int>(u(rng) * 4);
    const Game g = testing::matrix_game(std::vector<std::vector<double>>(m, {0.0}),
                                        std::vector<std::vector<double>>(m, {0.0}));
    BehaviorStrategy b = uniform_behavior(g, Player::kLeader);
    double sum = 0.0;
    for (double& q : b.probs[0]) sum += (q = u(rng));
    for (double& q : b.probs[0]) q /= sum;
    const double alpha = u(rng) * 0.999;
    const BehaviorStrategy d = distort_local(g, b, Alpha(alpha));
    double total = 0.0;
    for (int a = 0; a < m; ++a) {
      EXPECT_NEAR(d.probs[0][a], (1 - alpha) * b.probs[0][a] + alpha / m, 1e-12);
      total += d.probs[0][a];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(DistortLocal, IdentityAndFixedPoint) {
  std::mt19937_64 rng(2);
  const Game g = testing::random_game(4, 4);
  const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
  const BehaviorStrategy same = distort_local(g, b, Alpha(0.0));
  const BehaviorStrategy uni = uniform_behavior(g, Player::kLeader);
  const BehaviorStrategy uni_d = distort_local(g, uni, Alpha(0.7));
  for (InfosetId i : g.infosets(Player::kLeader)) {
    for (int a = 0; a < g.infoset(i).num_actions(); ++a) {
      EXPECT_DOUBLE_EQ(same.probs[i][a], b.probs[i][a]);
      EXPECT_NEAR(uni_d.probs[i][a], uni.probs[i][a], 1e-15);
    }
  }
}

TEST(DistortedWeights, ExactTwoStepExample) {
  const Game g = two_step_game();
  const DistortedWeights w =
      distorted_weights_exact(g, two_step_behavior(g, 0.5, 0.4), Alpha(0.2));
  EXPECT_NEAR(w[seq_ax(g)], 0.21, 1e-12);
  EXPECT_DOUBLE_EQ(w[kEmptySequence], 1.0);
}

TEST(DistortedWeights, LinearTwoStepExample) {
  const Game g = two_step_game();
  const RealizationPlan r = behavior_to_realization(g, two_step_behavior(g, 0.5, 0.4));
  const DistortedWeights w = distorted_weights_linear(g, r, Alpha(0.2));
  EXPECT_NEAR(w[seq_ax(g)], 0.5 * 0.1 + 0.8 * 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(w[kEmptySequence], 1.0);
}

TEST(DistortedWeights, ZeroAlphaIsIdentity) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Game g = testing::random_game(seed, 4);
    const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
    const RealizationPlan r = behavior_to_realization(g, b);
    const DistortedWeights e = distorted_weights_exact(g, b, Alpha(0.0));
    const DistortedWeights l = distorted_weights_linear(g, r, Alpha(0.0));
    for (SeqId s = 0; s < g.num_sequences(Player::kLeader); ++s) {
      EXPECT_NEAR(e[s], r[s], 1e-15);
      EXPECT_NEAR(l[s], r[s], 1e-15);
    }
  }
}

TEST(DistortedWeights, ExactEqualsDistortedEdges) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Game g = testing::random_game(seed, 5);
    const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
    const Alpha alpha(0.35);
    const DistortedWeights e = distorted_weights_exact(g, b, alpha);
    const RealizationPlan via = behavior_to_realization(g, distort_local(g, b, alpha));
    for (SeqId s = 0; s < g.num_sequences(Player::kLeader); ++s) {
      EXPECT_NEAR(e[s], via[s], 1e-12);
    }
  }
}

TEST(DistortedWeights, RatioPreservation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Game g = testing::random_game(seed, 5);
    const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
    const Alpha alpha(u(rng));
    const DistortedWeights e = distorted_weights_exact(g, b, alpha);
    const DistortedWeights l =
        distorted_weights_linear(g, behavior_to_realization(g, b), alpha);
    for (InfosetId i : g.infosets(Player::kLeader)) {
      const auto& seqs = g.infoset(i).action_seq;
      for (std::size_t x = 0; x < seqs.size(); ++x) {
        for (std::size_t y = 0; y < seqs.size(); ++y) {
          if (e[seqs[y]] <= 1e-12 || l[seqs[y]] <= 1e-12) continue;
          EXPECT_NEAR(e[seqs[x]] / e[seqs[y]], l[seqs[x]] / l[seqs[y]], 1e-9);
        }
      }
    }
  }
}

TEST(DistortedWeights, GapVanishesWithAlpha) {
  // For a depth-two sequence the two forms differ by
  // alpha (1/M1 - q1) ((1 - alpha) q2 + alpha / M2), so the gap shrinks
  // linearly in alpha. Check the closed form and the trend over sampled
  // plans.
  const Game g = two_step_game();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.16, 0.08, 0.04, 0.02, 0.01}) {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double q1 = u(rng), q2 = u(rng);
      const BehaviorStrategy b = two_step_behavior(g, q1, q2);
      const double e = distorted_weights_exact(g, b, Alpha(alpha))[seq_ax(g)];
      const double l =
          distorted_weights_linear(g, behavior_to_realization(g, b), Alpha(alpha))[seq_ax(g)];
      const double expected = alpha * (0.5 - q1) * ((1 - alpha) * q2 + alpha / 2);
      EXPECT_NEAR(e - l, expected, 1e-12);
      worst = std::max(worst, std::abs(e - l));
    }
    EXPECT_LE(worst, 0.5 * alpha + 1e-12);
    EXPECT_LT(worst, prev);
    prev = worst;
  }
}

TEST(DistortedWeights, BoundedByOne) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = testing::random_game(seed, 5);
    const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
    for (AtMode mode : {AtMode::kExact, AtMode::kLinear}) {
      const DistortedWeights w =
          distorted_weights(g, behavior_to_realization(g, b), Alpha(0.6), mode);
      EXPECT_DOUBLE_EQ(w[kEmptySequence], 1.0);
      for (double x : w.weights) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0 + 1e-12);
      }
    }
  }
}

TEST(DistortedBestResponse, ZeroAlphaMatchesRational) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = testing::random_game(50 + seed, 4);
    const RealizationPlan r = behavior_to_realization(
        g, {Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)});
    const BestResponse rational = best_response(g, r);
    for (AtMode mode : {AtMode::kExact, AtMode::kLinear}) {
      const BestResponse d = distorted_best_response(g, r, Alpha(0.0), mode);
      EXPECT_EQ(d.strategy, rational.strategy);
      EXPECT_NEAR(d.follower_utility, rational.follower_utility, 1e-12);
      EXPECT_NEAR(d.leader_utility, rational.leader_utility, 1e-12);
    }
  }
}

TEST(DistortedBestResponse, DistortionFlipsArgmax) {
  // Rows: leader actions; columns: follower actions.
  const Game g = testing::matrix_game({{1, 0}, {0, 1}}, {{1.0, 0.7}, {0.0, 0.7}});
  BehaviorStrategy b = uniform_behavior(g, Player::kLeader);
  b.probs[0] = {0.9, 0.1};
  const RealizationPlan r = behavior_to_realization(g, b);
  // Enumerate both responses under the distorted row weights.
  const double alpha = 0.6;
  const double w0 = (1 - alpha) * 0.9 + alpha / 2, w1 = (1 - alpha) * 0.1 + alpha / 2;
  const double c0 = w0 * 1.0 + w1 * 0.0, c1 = (w0 + w1) * 0.7;
  ASSERT_GT(c1, c0);
  ASSERT_GT(0.9, 0.7);
  const InfosetId f = g.node(1).infoset;
  EXPECT_EQ(best_response(g, r).strategy.actions[f], 0);
  for (AtMode mode : {AtMode::kExact, AtMode::kLinear}) {
    const BestResponse d = distorted_best_response(g, r, Alpha(alpha), mode);
    EXPECT_EQ(d.strategy.actions[f], 1);
    EXPECT_NEAR(d.follower_utility, c1, 1e-12);
    EXPECT_NEAR(d.leader_utility, 0.1, 1e-12);
  }
}

TEST(DistortedBestResponse, MatchesEnumerationOracle) {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Game g = testing::random_game(400 + seed, 4);
    const auto lb = testing::random_behavior(g, Player::kLeader, rng);
    const BehaviorStrategy b{Player::kLeader, lb};
    const double alpha = 0.45;
    // Perceived reach of a leaf: product of locally distorted leader edges.
    auto perceived = [&](NodeId z, double) {
      double w = 1.0;
      for (auto [i, a] : testing::leader_path(g, z)) {
        w *= (1 - alpha) * lb[i][a] + alpha / g.infoset(i).num_actions();
      }
      return w;
    };
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& f : testing::all_follower_assignments(g)) {
      best = std::max(best, testing::walk(g, lb, f, perceived).follower);
    }
    const BestResponse d =
        distorted_best_response(g, behavior_to_realization(g, b), Alpha(alpha), AtMode::kExact);
    EXPECT_NEAR(d.follower_utility, best, 1e-9) << "seed " << seed;
  }
}

TEST(DistortedBestResponse, ScaleInvariance) {
  std::mt19937_64 rng(10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = testing::random_game(500 + seed, 4);
    const RealizationPlan r = behavior_to_realization(
        g, {Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)});
    DistortedWeights w = distorted_weights(g, r, Alpha(0.3), AtMode::kLinear);
    const BestResponse base = distorted_best_response(g, w, r);
    for (double& x : w.weights) x *= 3.7;
    EXPECT_EQ(distorted_best_response(g, w, r).strategy, base.strategy);
  }
}

TEST(DistortedBestResponse, ModesAgreeWhenLeaderMovesOnce) {
  // Leader sequences have length one, so both weight forms coincide and the
  // ranking of any two follower responses is the same.
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Game g = testing::random_game(600 + seed, 2);
    const RealizationPlan r = behavior_to_realization(
        g, {Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)});
    const auto e = distorted_weights(g, r, Alpha(0.5), AtMode::kExact);
    const auto l = distorted_weights(g, r, Alpha(0.5), AtMode::kLinear);
    const auto all = enumerate_pure_strategies(g, Player::kFollower, 1000);
    for (const auto& x : all) {
      for (const auto& y : all) {
        const double de = follower_value(g, e.weights, x) - follower_value(g, e.weights, y);
        const double dl = follower_value(g, l.weights, x) - follower_value(g, l.weights, y);
        if (std::abs(de) > 1e-9) EXPECT_EQ(de > 0, dl > 0);
      }
    }
  }
}

TEST(AtMode, Parse) {
  EXPECT_EQ(parse_at_mode("exact"), AtMode::kExact);
  EXPECT_EQ(parse_at_mode("linear"), AtMode::kLinear);
  EXPECT_EQ(to_string(AtMode::kLinear), "linear");
  EXPECT_THROW(parse_at_mode("quadratic"), InputError);
}

}  // namespace
}  // namespace atsg
