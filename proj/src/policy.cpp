#include "playcov/policy.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace playcov {

namespace {

// Enumeration orders per axis. Index 0 decodes to (forward=1, turn=0,
// strafe=0, jump=1): the greedy tie-break on an all-zero Q row then defaults
// to a forward sprint-hop instead of a degenerate backward pirouette.
constexpr int kForwardOrder[3] = {1, 0, -1};
constexpr int kTurnOrder[3] = {0, 1, -1};
constexpr int kStrafeOrder[3] = {0, 1, -1};
constexpr int kJumpOrder[2] = {1, 0};

int slot_of(const int* order, int n, int value) {
    for (int i = 0; i < n; ++i)
        if (order[i] == value) return i;
    throw std::invalid_argument("action_index: component out of range");
}

}  // namespace

ActionCommand action_from_index(int index) {
    if (index < 0 || index >= kActionCount)
        throw std::invalid_argument("action_from_index: index out of range");
    ActionCommand cmd;
    cmd.jump = kJumpOrder[index % 2] != 0;
    cmd.strafe = kStrafeOrder[(index / 2) % 3];
    cmd.turn = kTurnOrder[(index / 6) % 3];
    cmd.forward = kForwardOrder[(index / 18) % 3];
    return cmd;
}

int action_index(int forward, int turn, int strafe, int jump) {
    return ((slot_of(kForwardOrder, 3, forward) * 3 + slot_of(kTurnOrder, 3, turn)) * 3 +
            slot_of(kStrafeOrder, 3, strafe)) *
               2 +
           slot_of(kJumpOrder, 2, jump);
}

StateKey make_state_key(int point_index, double heading, bool ground_contact) {
    const double a = wrap_angle(heading);
    int octant = static_cast<int>(a / (M_PI / 4.0));
    if (octant > 7) octant = 7;  // wrap_angle can return exactly 2*pi-epsilon territory
    return {static_cast<std::int32_t>(point_index), static_cast<std::uint8_t>(octant),
            ground_contact};
}

std::uint64_t pack_state_key(const StateKey& k) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.point)) << 4) |
           (static_cast<std::uint64_t>(k.octant & 0x7) << 1) | (k.ground ? 1u : 0u);
}

StateKey unpack_state_key(std::uint64_t packed) {
    StateKey k;
    k.point = static_cast<std::int32_t>(static_cast<std::uint32_t>(packed >> 4));
    k.octant = static_cast<std::uint8_t>((packed >> 1) & 0x7);
    k.ground = (packed & 1u) != 0;
    return k;
}

std::size_t StateKeyHash::operator()(const StateKey& k) const {
    std::uint64_t h = pack_state_key(k) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
}

int RandomPolicy::act(const StateKey&, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(0, kActionCount - 1);
    return dist(rng);
}

int ScriptedPolicy::act(const StateKey&, std::mt19937_64&) {
    if (actions_.empty()) return action_index(0, 0, 0, 0);
    if (next_ < actions_.size()) return actions_[next_++];
    return actions_.back();
}

int TabularPolicy::act(const StateKey& key, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon_) {
        std::uniform_int_distribution<int> dist(0, kActionCount - 1);
        return dist(rng);
    }
    return greedy_action(key);
}

int TabularPolicy::greedy_action(const StateKey& key) const {
    const auto it = table_.find(key);
    if (it == table_.end()) return 0;  // all-zero row: lowest-index tie-break
    const QRow& row = it->second;
    int best = 0;
    for (int a = 1; a < kActionCount; ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

double TabularPolicy::max_q(const StateKey& key) const {
    const auto it = table_.find(key);
    if (it == table_.end()) return 0.0;
    double m = it->second[0];
    for (int a = 1; a < kActionCount; ++a) m = std::max(m, it->second[a]);
    return m;
}

double TabularPolicy::q_value(const StateKey& key, int action) const {
    const auto it = table_.find(key);
    return it == table_.end() ? 0.0 : it->second[action];
}

void TabularPolicy::update(const StateKey& s, int a, double r, const StateKey& next) {
    if (!std::isfinite(r)) throw std::invalid_argument("update: non-finite reward");
    const double target = r + gamma_ * max_q(next);
    QRow& row = table_[s];  // value-initialized to zeros on first touch
    row[a] += alpha_ * (target - row[a]);
}

void TabularPolicy::apply(const std::vector<Transition>& transitions) {
    for (const Transition& t : transitions) update(t.state, t.action, t.reward, t.next_state);
}

double epsilon_schedule(std::uint64_t steps_done, std::uint64_t total_budget) {
    const double anneal_steps = 0.2 * static_cast<double>(total_budget);
    if (anneal_steps <= 0.0) return 0.1;
    const double f = std::min(1.0, static_cast<double>(steps_done) / anneal_steps);
    return 1.0 - 0.9 * f;
}

// Checkpoint layout (little-endian): 8-byte magic "PCOVQTBL", u32 version,
// u32 kind (0 = table-free random baseline, 1 = tabular). Tabular payload:
// f64 gamma, f64 alpha, u64 row count, then per row a u64 packed state key
// (point index << 4 | octant << 1 | ground bit) and 54 f64 action values,
// sorted by packed key. Doubles round-trip bit-exactly.
namespace {

constexpr char kCheckpointMagic[8] = {'P', 'C', 'O', 'V', 'Q', 'T', 'B', 'L'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64(std::ofstream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
double read_f64(std::ifstream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void write_header(std::ofstream& out, std::uint32_t kind) {
    out.write(kCheckpointMagic, 8);
    write_u32(out, kCheckpointVersion);
    write_u32(out, kind);
}

}  // namespace

void TabularPolicy::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    write_header(out, 1);
    write_f64(out, gamma_);
    write_f64(out, alpha_);
    write_u64(out, table_.size());

    // Sorted by packed key for a deterministic file.
    std::vector<std::uint64_t> keys;
    keys.reserve(table_.size());
    for (const auto& [k, row] : table_) keys.push_back(pack_state_key(k));
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t pk : keys) {
        write_u64(out, pk);
        const QRow& row = table_.at(unpack_state_key(pk));
        for (double q : row) write_f64(out, q);
    }
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

TabularPolicy TabularPolicy::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw std::runtime_error("not a policy checkpoint: " + path);
    const std::uint32_t version = read_u32(in);
    if (version != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version in " + path);
    const std::uint32_t kind = read_u32(in);
    if (kind == 0) return TabularPolicy();  // random baseline: empty table
    const double gamma = read_f64(in);
    const double alpha = read_f64(in);
    TabularPolicy policy(gamma, alpha);
    const std::uint64_t count = read_u64(in);
    for (std::uint64_t i = 0; i < count; ++i) {
        const StateKey key = unpack_state_key(read_u64(in));
        QRow row;
        for (double& q : row) q = read_f64(in);
        policy.table_[key] = row;
    }
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return policy;
}

void save_random_policy_checkpoint(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    write_header(out, 0);
}

}  // namespace playcov
