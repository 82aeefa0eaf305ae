#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "playcov/world.hpp"

namespace playcov {

inline constexpr int kActionCount = 54;  // forward x turn x strafe (3 each) x jump (2)

/// Bijective index <-> (forward, turn, strafe, jump) over the discrete grid
/// {-1,0,1}^3 x {0,1}, ordered forward-major.
ActionCommand action_from_index(int index);
int action_index(int forward, int turn, int strafe, int jump);

/// Discretized policy state: nearest buffer point, heading octant, ground bit.
struct StateKey {
    std::int32_t point = -1;
    std::uint8_t octant = 0;
    bool ground = false;

    bool operator==(const StateKey&) const = default;
};

StateKey make_state_key(int point_index, double heading, bool ground_contact);

std::uint64_t pack_state_key(const StateKey& k);
StateKey unpack_state_key(std::uint64_t packed);

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const;
};

using QRow = std::array<double, kActionCount>;

class Policy {
public:
    virtual ~Policy() = default;
    virtual int act(const StateKey& key, std::mt19937_64& rng) = 0;
    virtual bool learning() const { return false; }
};

/// Uniform action baseline.
class RandomPolicy final : public Policy {
public:
    int act(const StateKey&, std::mt19937_64& rng) override;
};

/// Replays a fixed action sequence, then holds the last action.
class ScriptedPolicy final : public Policy {
public:
    explicit ScriptedPolicy(std::vector<int> actions) : actions_(std::move(actions)) {}
    int act(const StateKey&, std::mt19937_64&) override;

private:
    std::vector<int> actions_;
    std::size_t next_ = 0;
};

struct Transition {
    StateKey state;
    int action = 0;
    double reward = 0.0;
    StateKey next_state;
};

/// Epsilon-greedy tabular Q-learner over visit-buffer states. Unseen rows read
/// as all-zero; greedy ties break to the lowest action index.
class TabularPolicy final : public Policy {
public:
    explicit TabularPolicy(double gamma = 0.98, double alpha = 0.1, double epsilon = 0.1)
        : gamma_(gamma), alpha_(alpha), epsilon_(epsilon) {}

    int act(const StateKey& key, std::mt19937_64& rng) override;
    bool learning() const override { return true; }

    int greedy_action(const StateKey& key) const;
    void update(const StateKey& s, int a, double r, const StateKey& next);
    void apply(const std::vector<Transition>& transitions);

    double epsilon() const { return epsilon_; }
    void set_epsilon(double e) { epsilon_ = e; }
    double gamma() const { return gamma_; }
    double alpha() const { return alpha_; }

    double q_value(const StateKey& key, int action) const;
    std::size_t table_size() const { return table_.size(); }
    const std::unordered_map<StateKey, QRow, StateKeyHash>& table() const { return table_; }

    void save(const std::string& path) const;
    static TabularPolicy load(const std::string& path);

private:
    double max_q(const StateKey& key) const;

    double gamma_;
    double alpha_;
    double epsilon_;
    std::unordered_map<StateKey, QRow, StateKeyHash> table_;
};

/// Linear 1.0 -> 0.1 over the first fifth of the step budget, then constant.
double epsilon_schedule(std::uint64_t steps_done, std::uint64_t total_budget);

/// Writes an empty checkpoint marking a table-free policy (the random baseline).
void save_random_policy_checkpoint(const std::string& path);

}  // namespace playcov
