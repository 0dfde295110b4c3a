#include "fragsim/csv.hpp"

#include "fragsim/text.hpp"

namespace fragsim {

namespace {
constexpr std::size_t kEventColumns = 8;
constexpr std::size_t kSnapshotColumns = 16;
}  // namespace

void write_events_csv(std::ostream& out, const Trajectory& traj) {
  out << "time,target_rank,parent_mass";
  for (std::size_t i = 1; i <= kEventColumns; ++i) out << ",s" << i;
  out << '\n';
  for (const auto& ev : traj.events) {
    out << text::format_g17(ev.time) << ',' << ev.target_rank << ',' << text::format_g17(ev.parent_mass);
    for (std::size_t i = 0; i < kEventColumns; ++i) {
      out << ',' << text::format_g17(i < ev.s.size() ? ev.s[i] : 0.0);
    }
    out << '\n';
  }
}

void write_snapshots_csv(std::ostream& out, const Trajectory& traj) {
  out << "time";
  for (std::size_t i = 1; i <= kSnapshotColumns; ++i) out << ",lambda" << i;
  out << ",dust\n";
  for (std::size_t row = 0; row < traj.snapshots.size(); ++row) {
    const MassState& s = traj.snapshots[row];
    out << text::format_g17(traj.obs_times[row]);
    for (std::size_t k = 1; k <= kSnapshotColumns; ++k) out << ',' << text::format_g17(s.rank(k));
    out << ',' << text::format_g17(s.dust()) << '\n';
  }
}

}  // namespace fragsim
