#ifndef RFSI_WORKBENCH_HPP
#define RFSI_WORKBENCH_HPP

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>

#include "rfsi/config.hpp"
#include "rfsi/hifi.hpp"
#include "rfsi/rom.hpp"

namespace rfsi
{

//
// Workspace layout:
//   mesh/       mesh.txt, mesh.json
//   snapshots/  alpha_<a>/{u,p,d,initial_u,initial_p,initial_d}.snap + meta.json
//   rom/        <basis>.rom + <basis>.json, basis = pod | enriched
//   results/    hifi_alpha_<a>/outputs.csv
//               <basis>_alpha_<a>/{coefficients.snap, errors.csv, norms.csv, run.json,
//                                   summary.json, outputs.csv}
//               greedy_trace.csv
//
class Workspace
{
public:
  explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path &root() const { return root_; }
  std::filesystem::path mesh_dir() const { return root_ / "mesh"; }
  std::filesystem::path snapshot_dir(double alpha) const;
  std::filesystem::path rom_file(const std::string &basis) const;
  std::filesystem::path rom_sidecar(const std::string &basis) const;
  std::filesystem::path hifi_results(double alpha) const;
  std::filesystem::path rom_results(const std::string &basis, double alpha) const;
  std::filesystem::path trace_file() const { return root_ / "results" / "greedy_trace.csv"; }

  void create() const;

private:
  std::filesystem::path root_;
};

// Exclusive lock on a workspace for the lifetime of the object.
class WorkspaceLock
{
public:
  explicit WorkspaceLock(const Workspace &ws);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock &) = delete;
  WorkspaceLock &operator=(const WorkspaceLock &) = delete;

private:
  std::filesystem::path path_;
};

// Writes to a temporary sibling, then renames over the target.
void write_file_atomic(const std::filesystem::path &path, const std::string &bytes);

std::string alpha_tag(double alpha);

// Snapshot set (including its initial state) as written by run-hifi.
void save_snapshots(const Workspace &ws, const SnapshotSet &s, const std::string &config_hash,
                    const std::string &mesh_hash);
SnapshotSet load_snapshots(const Workspace &ws, double alpha, const std::string &mesh_hash);

std::shared_ptr<const HifiModel> make_hifi(const RunConfig &config);

struct CompareSummary
{
  double E_u = 0.0;
  double E_p = 0.0;
  double R_N = 0.0;
  int n_snapshots = 0;
  int n_steps = 0;
};

// Aggregates recomputed from the per-instant rows of errors.csv and norms.csv.
CompareSummary summarize_csv(const std::filesystem::path &errors_csv,
                             const std::filesystem::path &norms_csv);

void cmd_run_hifi(const RunConfig &config, const Workspace &ws, double alpha, std::ostream &log);
void cmd_build_rom(const RunConfig &config, const Workspace &ws, std::ostream &log);
void cmd_run_rom(const RunConfig &config, const Workspace &ws, double alpha,
                 const std::string &basis, std::ostream &log);
void cmd_enrich(const RunConfig &config, const Workspace &ws, std::ostream &log);
CompareSummary cmd_compare(const RunConfig &config, const Workspace &ws, double alpha,
                           const std::string &basis, std::ostream &log);
void cmd_outputs(const RunConfig &config, const Workspace &ws, double alpha,
                 const std::string &basis, std::ostream &log);

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace rfsi

#endif  // RFSI_WORKBENCH_HPP
