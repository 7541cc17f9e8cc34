#ifndef RFSI_GREEDY_HPP
#define RFSI_GREEDY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rfsi/hifi.hpp"
#include "rfsi/rom.hpp"

namespace rfsi
{

enum class IndexMode
{
  SingleRun,     // one reduced trajectory over the recorded window
  CyclicVector,  // short trajectories restarted from every snapshot
};

IndexMode index_mode_from_string(const std::string &s);
std::string to_string(IndexMode m);

struct EnrichmentConfig
{
  int n_max_triplets = 4;
  double alpha_train = 0.2;
  IndexMode index_mode = IndexMode::SingleRun;
  int n_steps = 1;        // SingleRun: length of the candidate window
  int n_period = 1;       // CyclicVector: steps per restarted trajectory
  double dual_norm_floor = 0.0;
  double reject_ratio = 1e-10;
  // Initial conditions: start of the recorded window (SingleRun) or every
  // snapshot (CyclicVector). SingleRun starts from zero when null.
  const SnapshotSet *snapshots = nullptr;

  void validate() const;
};

struct CyclicIndex
{
  int n_T;  // absolute step index of the candidate
  int n_S;  // snapshot column the trajectory restarts from
};

// {(steps[s] + n, s) : n = 1..n_period, s over the snapshots}, snapshot-major.
std::vector<CyclicIndex> cyclic_indices(const SnapshotSet &snapshots, int n_period);

struct GreedyRecord
{
  int iteration = 0;
  int n_T = -1;
  int n_S = -1;
  double max_dual_norm = 0.0;
  int basis_size = 0;
  bool skipped = false;
  // Dual norm at the selected index after enrichment, same previous state.
  double post_dual_norm = 0.0;
  double seconds = 0.0;
};

struct GreedyTrace
{
  std::vector<GreedyRecord> records;
  std::string stop_reason;

  int accepted() const;
};

// Greedy enrichment in place. The enrichment solutions come from the
// intermediate full solve driven by the reduced trajectory.
GreedyTrace enrich(ReducedModel &model, const EnrichmentConfig &config);

void write_trace_csv(std::ostream &os, const GreedyTrace &trace);

}  // namespace rfsi

#endif  // RFSI_GREEDY_HPP
