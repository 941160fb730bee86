#include "hcua/learn/sft.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hcua::learn {

std::vector<ChatTurn> conversation(const rollout::Trajectory& traj) {
  std::vector<ChatTurn> turns;
  turns.push_back({"system", std::string(kSystemPrompt)});
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    std::string user;
    if (i == 0) user += "Instruction: " + traj.instruction + "\n";
    user += "Step: " + std::to_string(i) + "\n";
    user += "Observation digest: " + traj.steps[i].observation_digest + "\n";
    user += "Last effect: " + (i == 0 ? std::string() : traj.steps[i - 1].effect_log);
    turns.push_back({"user", std::move(user)});
    turns.push_back({"assistant", traj.steps[i].raw_step});
  }
  return turns;
}

std::vector<SftSample> build_sft_samples(const rollout::Trajectory& traj) {
  const std::vector<ChatTurn> turns = conversation(traj);
  std::vector<SftSample> out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (turns[i].role != "assistant") continue;
    SftSample s;
    s.context.assign(turns.begin(), turns.begin() + static_cast<std::ptrdiff_t>(i));
    s.target = turns[i];
    s.target_index = i;
    s.loss_mask.assign(i + 1, false);
    s.loss_mask[i] = true;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ChatTurn> reconstruct_conversation(const std::vector<SftSample>& samples) {
  if (samples.empty()) return {};
  std::vector<ChatTurn> full = samples.back().context;
  full.push_back(samples.back().target);
  for (const auto& s : samples) {
    if (s.target_index != s.context.size() || s.target_index >= full.size() || full[s.target_index] != s.target) {
      throw std::invalid_argument("reconstruct: sample target out of place");
    }
    for (std::size_t i = 0; i < s.context.size(); ++i) {
      if (s.context[i] != full[i]) throw std::invalid_argument("reconstruct: sample context is not a prefix");
    }
  }
  return full;
}

std::string sft_to_jsonl(const std::vector<SftSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    nlohmann::json context = nlohmann::json::array();
    for (const auto& t : s.context) context.push_back({{"role", t.role}, {"text", t.text}});
    nlohmann::json rec = {{"context", context}, {"target", {{"role", s.target.role}, {"text", s.target.text}}}};
    out += rec.dump() + "\n";
  }
  return out;
}

}  // namespace hcua::learn
