#pragma once

// Per-turn supervised samples from successful trajectories.

#include <string>
#include <string_view>
#include <vector>

#include "hcua/rollout/trajectory.hpp"

namespace hcua::learn {

struct ChatTurn {
  std::string role;  // system, user, assistant
  std::string text;
  bool operator==(const ChatTurn&) const = default;
};

inline constexpr std::string_view kSystemPrompt =
    "You operate a desktop through GUI actions and tool calls. Reply with one step: an optional "
    "<memory>...</memory> block followed by a single call.";

/// System turn, then one user turn (observation digest and last effect) and
/// one assistant turn (the raw step) per recorded step.
std::vector<ChatTurn> conversation(const rollout::Trajectory& traj);

struct SftSample {
  std::vector<ChatTurn> context;  // every turn before the target
  ChatTurn target;                // the assistant turn trained on
  std::size_t target_index = 0;   // position of target in the conversation
  std::vector<bool> loss_mask;    // over context + target; true only at target_index
};

/// One sample per assistant turn.
std::vector<SftSample> build_sft_samples(const rollout::Trajectory& traj);

/// The conversation recovered from the last sample, after checking that every
/// earlier sample is a prefix of it. Throws std::invalid_argument otherwise.
std::vector<ChatTurn> reconstruct_conversation(const std::vector<SftSample>& samples);

/// {context:[{role,text}], target:{role:"assistant",text}} per line.
std::string sft_to_jsonl(const std::vector<SftSample>& samples);

}  // namespace hcua::learn
