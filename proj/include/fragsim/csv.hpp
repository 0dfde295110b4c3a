#pragma once

#include <ostream>

#include "fragsim/simulator.hpp"

namespace fragsim {

/// `time,target_rank,parent_mass,s1,...,s8`; vectors padded or cut to 8.
void write_events_csv(std::ostream& out, const Trajectory& traj);

/// `time,lambda1,...,lambda16,dust`; one row per observation time.
void write_snapshots_csv(std::ostream& out, const Trajectory& traj);

}  // namespace fragsim
