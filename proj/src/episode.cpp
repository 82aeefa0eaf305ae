#include "playcov/episode.hpp"

namespace playcov {

const char* to_string(TerminationCause c) {
    switch (c) {
        case TerminationCause::TimeUp: return "time_up";
        case TerminationCause::LeftEb: return "left_EB";
        case TerminationCause::Frozen: return "frozen";
    }
    return "time_up";
}

std::vector<Boundary> scenario_boundaries(const Scenario& scn) {
    std::vector<Boundary> boundaries;
    boundaries.push_back({"EB", scn.exploration_boundary});
    for (const Roi& r : scn.rois) boundaries.push_back({r.name, r.box});
    return boundaries;
}

EpisodeResult run_episode(const Scenario& scn, Policy& policy, VisitAccess& access,
                          std::mt19937_64& rng, const EpisodeOptions& opts,
                          std::uint64_t episode_id) {
    const std::vector<Boundary> boundaries = scenario_boundaries(scn);

    EpisodeResult result;
    result.episode_id = episode_id;

    CharacterState state;
    state.position = opts.initial_position ? *opts.initial_position
                                           : access.sample_spawn(rng, scn.initial_spawn);
    if (opts.initial_heading) {
        state.heading = wrap_angle(*opts.initial_heading);
    } else {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        state.heading = angle(rng);
    }
    state.ground_contact = ground_probe(scn, state.position, 0.0);

    ObserveResult obs = access.observe(state.position, state.ground_contact, false);
    result.total_reward += obs.reward;

    result.trajectory.push_back({0, state.position});
    std::vector<TrajectorySample> stride_samples{{0, state.position}};

    // A spawn point minted just beyond the boundary (an escape landing) is
    // already out of bounds: the episode is over before it starts.
    if (!scn.exploration_boundary.contains(state.position)) {
        result.cause = TerminationCause::LeftEb;
        result.final_position = state.position;
        result.stride_trajectory.push_back(state.position);
        access.record_termination(state.position);
        return result;
    }

    result.cause = TerminationCause::TimeUp;
    int step_index = 0;
    for (int k = 1; k <= opts.max_steps; ++k) {
        const StateKey key = make_state_key(obs.index, state.heading, state.ground_contact);
        const int action = policy.act(key, rng);

        const Vec3 prev_pos = state.position;
        state = step(scn, state, action_from_index(action), (k - 1) * kDt);
        step_index = k;

        obs = access.observe(state.position, state.ground_contact, true);
        result.total_reward += obs.reward;
        result.transitions.push_back(
            {key, action, obs.reward, make_state_key(obs.index, state.heading, state.ground_contact)});

        result.trajectory.push_back({k, state.position});
        if (k % opts.sample_stride == 0) stride_samples.push_back({k, state.position});

        bool left_eb = false;
        for (BoundaryEvent& event : check_crossing(boundaries, prev_pos, state.position, episode_id, k)) {
            std::vector<TrajectorySample> samples = stride_samples;
            if (samples.back().step != k) samples.push_back({k, state.position});
            samples.back() = {k, event.crossing_point};
            if (event.boundary_id == "EB" && event.direction == CrossDirection::Exit) left_eb = true;
            result.crossing_candidates.push_back({std::move(event), std::move(samples)});
        }
        if (left_eb) {
            result.cause = TerminationCause::LeftEb;
            break;
        }
        if (state.frozen) {
            result.cause = TerminationCause::Frozen;
            break;
        }
    }

    result.steps = step_index;
    result.final_position = state.position;
    for (const TrajectorySample& s : stride_samples) result.stride_trajectory.push_back(s.position);
    if (stride_samples.back().step != step_index) result.stride_trajectory.push_back(state.position);
    access.record_termination(state.position);
    return result;
}

}  // namespace playcov
