#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "fran/network_params.hpp"
#include "fran/realization.hpp"

namespace fran::sim {

enum class Mode { D2D, NearestFap, Coordination };

const char* to_string(Mode m) noexcept;

/// SIR with an empty interferer set.
inline constexpr double kInfiniteSir = std::numeric_limits<double>::infinity();

/// Serving D2D transmitter. With no member the transmitter is an extra node
/// at distance |X_d| carrying the designated fading mark, and every D2D user
/// interferes; with a member that user serves (still at distance |X_d|, the
/// model's link length) and is dropped from the interferer set.
struct D2dTransmitter {
    std::optional<std::size_t> member;
};

double sir_d2d(const Realization& real, D2dTransmitter tx, const NetworkParams& p);

/// SIR at U served by F-AP `serving`; the other content-holding F-APs and all
/// D2D users interfere.
double sir_fap(const Realization& real, std::size_t serving, const NetworkParams& p);

/// Joint SIR of the cluster; absent for an empty cluster.
std::optional<double> sir_cluster(const Realization& real, const std::vector<std::size_t>& members,
                                  const NetworkParams& p);

/// Content-holding F-APs within L_c of U, ascending index.
std::vector<std::size_t> cluster_members(const Realization& real, const NetworkParams& p);

/// Nearest F-AP holding the content. Under identical caches every F-AP holds
/// the same set, so this is the nearest F-AP when the request hits.
std::optional<std::size_t> nearest_cached_fap(const Realization& real, const NetworkParams& p);

/// Content-holding D2D users within L_d, ascending distance (ties by index).
std::vector<std::size_t> d2d_candidates(const Realization& real, const NetworkParams& p);

struct ModeDecision {
    Mode mode = Mode::Coordination;
    std::vector<std::size_t> serving_nodes;
    std::optional<double> achieved_sir;  // absent: empty cluster (outage)
};

/// Three-step cascade: D2D, then nearest cached F-AP, then the cluster.
ModeDecision select_mode(const Realization& real, const NetworkParams& p);

}  // namespace fran::sim
