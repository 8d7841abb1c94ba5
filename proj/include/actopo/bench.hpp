// actopo: benchmark harness shared by the CLI and the acceptance checks.
//
// A bench run prepares one mesh (loaded or generated, partitioned if it
// carries no block labels), builds the block index, then executes one
// workload on one structure `repeat` times and reports per-repeat records
// plus field-wise medians.  Workload outputs must be bit-identical across
// repeats and, under --verify, across structures.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "actopo/baselines.hpp"
#include "actopo/block_index.hpp"
#include "actopo/engine.hpp"
#include "actopo/mesh.hpp"
#include "actopo/mesh_gen.hpp"
#include "actopo/metrics.hpp"
#include "actopo/partition.hpp"
#include "actopo/workloads.hpp"

namespace actopo {

enum class StructureKind { Actopo, Static, OnDemand };

inline const char* structure_name(StructureKind s) {
  switch (s) {
    case StructureKind::Actopo: return "actopo";
    case StructureKind::Static: return "static";
    case StructureKind::OnDemand: return "ondemand";
  }
  return "?";
}

inline StructureKind parse_structure(const std::string& s) {
  if (s == "actopo") return StructureKind::Actopo;
  if (s == "static") return StructureKind::Static;
  if (s == "ondemand") return StructureKind::OnDemand;
  throw std::invalid_argument("unknown structure '" + s + "'");
}

struct BenchOptions {
  std::string mesh_spec;  // path to a .tmsh file, or "gen:nx,ny,nz"
  StructureKind structure = StructureKind::Actopo;
  std::string workload = "relations";
  std::string mode = "linear-single";
  int consumers = 1;
  int producers = 1;  // per consumer: one leader plus producers-1 workers
  Id blocks = 0;      // 0: keep the mesh's labels, or default-count partition
  std::string partitioner = "index";
  double buffer_fraction = 0.20;
  std::string field_spec;  // empty: mesh scalars if present, else index
  int repeat = 3;
  bool verify = false;
  std::string out_path;  // JSONL sink; empty disables
};

// One run's (or the median row's) worth of report fields.
struct BenchReport {
  std::string structure;
  std::string mode;
  int t_c = 1;
  int t_pc = 0;
  double buffer_fraction = 0.0;
  Id buffer_capacity_blocks = 0;
  Id n_blocks = 0;
  double preprocess_seconds = 0.0;
  double execute_seconds = 0.0;
  double wait_seconds = 0.0;
  std::int64_t leader_computes = 0;
  std::int64_t worker_computes = 0;
  std::int64_t consumer_computes = 0;
  std::int64_t evicted_blocks = 0;
  std::int64_t eviction_batches = 0;
  Id peak_resident_blocks = 0;
  std::int64_t peak_memory_bytes = 0;
  std::uint64_t checksum = 0;
};

namespace detail {

inline double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[(xs.size() - 1) / 2];
}

inline std::int64_t median_of(std::vector<std::int64_t> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[(xs.size() - 1) / 2];
}

}  // namespace detail

inline Id default_block_count(Id n_vertices) {
  return std::max<Id>(1, (n_vertices + 4999) / 5000);
}

inline Id capacity_from_fraction(double fraction, Id n_blocks) {
  return std::max<Id>(1, static_cast<Id>(std::ceil(fraction * double(n_blocks))));
}

// Loads or generates the mesh named by `spec`, then guarantees usable block
// labels: an unlabeled mesh (or an explicit --blocks request) is partitioned
// and reordered so labels are monotone in vertex id.
inline Mesh prepare_mesh(const std::string& spec, Id blocks, const std::string& partitioner) {
  Mesh mesh;
  if (spec.rfind("gen:", 0) == 0) {
    mesh = generate_grid_spec(spec.substr(4));
  } else {
    mesh = load_mesh_file(spec);
  }
  if (mesh.has_blocks() && blocks == 0) return mesh;

  const Id n = blocks > 0 ? blocks : default_block_count(mesh.n_vertices());
  std::vector<BlockId> labels;
  if (partitioner == "index") {
    labels = partition_by_index(mesh, n);
  } else if (partitioner == "grid") {
    labels = partition_grid(mesh, n);
  } else {
    throw std::invalid_argument("unknown partitioner '" + partitioner + "'");
  }
  return apply_partition(mesh, labels);
}

namespace detail {

// Executes one workload over [0, domain) split contiguously across t_c
// threads, each with its own Access constructed by `make_access`.
template <class W, class MakeAccess>
typename W::Output run_consumers(const Mesh& mesh, const BlockIndex& index, const W& workload,
                                 int t_c, MakeAccess&& make_access) {
  const Id domain = workload.domain_size(mesh, index);
  std::vector<typename W::Output> outs(static_cast<std::size_t>(t_c));
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t_c));
  for (int i = 0; i < t_c; ++i) {
    const Id lo = static_cast<Id>(std::int64_t(domain) * i / t_c);
    const Id hi = static_cast<Id>(std::int64_t(domain) * (i + 1) / t_c);
    auto body = [&, i, lo, hi] {
      try {
        auto access = make_access(i);
        workload.run_range(access, lo, hi, outs[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    };
    if (t_c == 1)
      body();
    else
      threads.emplace_back(std::move(body));
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  typename W::Output merged = std::move(outs[0]);
  for (std::size_t i = 1; i < outs.size(); ++i) merged.merge(std::move(outs[i]));
  return merged;
}

}  // namespace detail

// Runs the workload once on a freshly built structure and fills a report.
// `index_seconds` (the shared block-index build) is folded into the
// preprocess phase.  When `out` is non-null the merged workload output is
// stored for cross-structure comparison.
template <class W>
BenchReport run_once(const Mesh& mesh, const BlockIndex& index, double index_seconds,
                     const BenchOptions& opt, const W& workload, typename W::Output* out) {
  BenchReport report;
  report.structure = structure_name(opt.structure);
  report.mode = opt.mode;
  report.t_c = opt.consumers;
  report.buffer_fraction = opt.buffer_fraction;
  report.n_blocks = index.n_blocks;

  typename W::Output merged;

  if (opt.structure == StructureKind::Actopo) {
    report.t_pc = opt.producers;
    report.buffer_capacity_blocks = capacity_from_fraction(opt.buffer_fraction, index.n_blocks);

    EngineConfig cfg;
    auto [direction, scope] = parse_mode(opt.mode);
    cfg.direction = direction;
    cfg.scope = scope;
    cfg.consumers = opt.consumers;
    cfg.workers_per_consumer = opt.producers - 1;
    cfg.buffer_capacity = report.buffer_capacity_blocks;

    StopWatch pre;
    TaskTopology topo(mesh, index, cfg);
    report.preprocess_seconds = index_seconds + pre.seconds();

    RunMetrics metrics;
    merged = topo.run(workload, &metrics);
    const GroupMetrics totals = metrics.totals();
    report.execute_seconds = metrics.execute_seconds;
    report.wait_seconds = totals.wait_seconds;
    report.leader_computes = totals.leader_computes;
    report.worker_computes = totals.worker_computes;
    report.evicted_blocks = metrics.evicted_blocks;
    report.eviction_batches = metrics.eviction_batches;
    report.peak_resident_blocks = metrics.peak_resident_blocks;
    // The block index stays live alongside the buffer, as it does for the
    // other structures; fold it in so the peaks are comparable.
    report.peak_memory_bytes =
        metrics.peak_memory_bytes + static_cast<std::int64_t>(index.bytes());
  } else if (opt.structure == StructureKind::Static) {
    MemoryMeter meter;
    meter.add(index.bytes());
    StopWatch pre;
    StaticTopology topo(mesh, index, workload.required_kinds(), &meter,
                        std::max(1, opt.producers));
    report.preprocess_seconds = index_seconds + pre.seconds();

    StopWatch exec;
    merged = detail::run_consumers(mesh, index, workload, opt.consumers,
                                   [&](int) { return StaticAccess(mesh, index, topo); });
    report.execute_seconds = exec.seconds();
    report.peak_memory_bytes = static_cast<std::int64_t>(meter.peak_bytes());
  } else {
    report.buffer_capacity_blocks = capacity_from_fraction(opt.buffer_fraction, index.n_blocks);
    MemoryMeter meter;
    meter.add(index.bytes());
    StopWatch pre;
    OnDemandTopology topo(mesh, index, report.buffer_capacity_blocks, &meter);
    report.preprocess_seconds = index_seconds + pre.seconds();

    StopWatch exec;
    merged = detail::run_consumers(mesh, index, workload, opt.consumers,
                                   [&](int) { return OnDemandAccess(mesh, index, topo); });
    report.execute_seconds = exec.seconds();
    report.consumer_computes = topo.computes();
    report.evicted_blocks = static_cast<std::int64_t>(topo.buffer().evicted_blocks());
    report.eviction_batches = static_cast<std::int64_t>(topo.buffer().eviction_batches());
    report.peak_resident_blocks = topo.buffer().peak_resident_blocks();
    report.peak_memory_bytes = static_cast<std::int64_t>(meter.peak_bytes());
  }

  report.checksum = merged.checksum();
  if (out) *out = std::move(merged);
  return report;
}

inline nlohmann::ordered_json report_json(const BenchReport& r, const BenchOptions& opt,
                                          const std::string& record, int repeat) {
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "0x%016llx",
                static_cast<unsigned long long>(r.checksum));
  nlohmann::ordered_json j;
  j["record"] = record;
  j["repeat"] = repeat;
  j["mesh"] = opt.mesh_spec;
  j["workload"] = opt.workload;
  j["structure"] = r.structure;
  j["mode"] = r.mode;
  j["consumers"] = r.t_c;
  j["producers"] = r.t_pc;
  j["n_blocks"] = r.n_blocks;
  j["buffer_fraction"] = r.buffer_fraction;
  j["buffer_capacity_blocks"] = r.buffer_capacity_blocks;
  j["preprocess_seconds"] = r.preprocess_seconds;
  j["execute_seconds"] = r.execute_seconds;
  j["wait_seconds"] = r.wait_seconds;
  j["leader_computes"] = r.leader_computes;
  j["worker_computes"] = r.worker_computes;
  j["consumer_computes"] = r.consumer_computes;
  j["evicted_blocks"] = r.evicted_blocks;
  j["eviction_batches"] = r.eviction_batches;
  j["peak_resident_blocks"] = r.peak_resident_blocks;
  j["peak_memory_bytes"] = r.peak_memory_bytes;
  j["checksum"] = checksum;
  return j;
}

inline BenchReport median_report(const std::vector<BenchReport>& runs) {
  BenchReport m = runs.front();
  const auto collect_d = [&](double BenchReport::* field) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(r.*field);
    return detail::median_of(std::move(xs));
  };
  const auto collect_i = [&](std::int64_t BenchReport::* field) {
    std::vector<std::int64_t> xs;
    for (const auto& r : runs) xs.push_back(r.*field);
    return detail::median_of(std::move(xs));
  };
  m.preprocess_seconds = collect_d(&BenchReport::preprocess_seconds);
  m.execute_seconds = collect_d(&BenchReport::execute_seconds);
  m.wait_seconds = collect_d(&BenchReport::wait_seconds);
  m.leader_computes = collect_i(&BenchReport::leader_computes);
  m.worker_computes = collect_i(&BenchReport::worker_computes);
  m.consumer_computes = collect_i(&BenchReport::consumer_computes);
  m.evicted_blocks = collect_i(&BenchReport::evicted_blocks);
  m.eviction_batches = collect_i(&BenchReport::eviction_batches);
  m.peak_memory_bytes = collect_i(&BenchReport::peak_memory_bytes);
  {
    std::vector<std::int64_t> xs;
    for (const auto& r : runs) xs.push_back(r.peak_resident_blocks);
    m.peak_resident_blocks = static_cast<Id>(detail::median_of(std::move(xs)));
  }
  return m;
}

inline void print_report(std::FILE* f, const BenchReport& r, const BenchOptions& opt) {
  std::fprintf(f, "%-16s %s\n", "mesh", opt.mesh_spec.c_str());
  std::fprintf(f, "%-16s %s\n", "workload", opt.workload.c_str());
  std::fprintf(f, "%-16s %s\n", "structure", r.structure.c_str());
  std::fprintf(f, "%-16s %s\n", "mode", r.mode.c_str());
  std::fprintf(f, "%-16s %d consumer(s), %d producer(s) each\n", "threads", r.t_c, r.t_pc);
  std::fprintf(f, "%-16s %d blocks, partitioner %s\n", "decomposition", int(r.n_blocks),
               opt.partitioner.c_str());
  std::fprintf(f, "%-16s %.2f (%d block(s))\n", "buffer", r.buffer_fraction,
               int(r.buffer_capacity_blocks));
  std::fprintf(f, "%-16s %.6f s\n", "preprocess", r.preprocess_seconds);
  std::fprintf(f, "%-16s %.6f s\n", "execute", r.execute_seconds);
  std::fprintf(f, "%-16s %.6f s\n", "consumer wait", r.wait_seconds);
  std::fprintf(f, "%-16s leader %lld, worker %lld, consumer %lld\n", "computes",
               static_cast<long long>(r.leader_computes),
               static_cast<long long>(r.worker_computes),
               static_cast<long long>(r.consumer_computes));
  std::fprintf(f, "%-16s %lld block(s) in %lld batch(es)\n", "evictions",
               static_cast<long long>(r.evicted_blocks),
               static_cast<long long>(r.eviction_batches));
  std::fprintf(f, "%-16s %d block(s)\n", "peak resident", int(r.peak_resident_blocks));
  std::fprintf(f, "%-16s %lld bytes\n", "peak memory", static_cast<long long>(r.peak_memory_bytes));
  std::fprintf(f, "%-16s 0x%016llx\n", "checksum", static_cast<unsigned long long>(r.checksum));
}

// Full bench pipeline for one workload type.  Returns the process exit code:
// 0 on success, 2 on a verification or reproducibility failure.
template <class W>
int bench_workload(const Mesh& mesh, const BlockIndex& index, double index_seconds,
                   const BenchOptions& opt, const W& workload) {
  std::vector<BenchReport> runs;
  typename W::Output first_output;
  for (int r = 0; r < opt.repeat; ++r) {
    typename W::Output out;
    runs.push_back(run_once(mesh, index, index_seconds, opt, workload, &out));
    if (r == 0) {
      first_output = std::move(out);
    } else if (!(out == first_output)) {
      std::fprintf(stderr, "error: repeat %d produced a different workload output (checksum 0x%016llx vs 0x%016llx)\n",
                   r, static_cast<unsigned long long>(runs.back().checksum),
                   static_cast<unsigned long long>(runs.front().checksum));
      return 2;
    }
  }

  int exit_code = 0;
  std::optional<std::uint64_t> oracle_checksum;
  if (opt.verify) {
    // Differential oracle: recompute the workload through an independent
    // structure (static tables normally; the on-demand path when the benched
    // structure already is static) and require identical output.
    BenchOptions oracle_opt = opt;
    oracle_opt.structure = opt.structure == StructureKind::Static ? StructureKind::OnDemand
                                                                  : StructureKind::Static;
    typename W::Output oracle_out;
    const BenchReport oracle_report =
        run_once(mesh, index, index_seconds, oracle_opt, workload, &oracle_out);
    oracle_checksum = oracle_report.checksum;
    if (!(oracle_out == first_output)) {
      std::fprintf(stderr, "error: verification failed: %s checksum 0x%016llx != %s oracle checksum 0x%016llx\n",
                   structure_name(opt.structure),
                   static_cast<unsigned long long>(runs.front().checksum),
                   structure_name(oracle_opt.structure),
                   static_cast<unsigned long long>(oracle_report.checksum));
      exit_code = 2;
    }
  }

  const BenchReport median = median_report(runs);
  print_report(stdout, median, opt);
  if (oracle_checksum) {
    std::fprintf(stdout, "%-16s %s\n", "verify",
                 exit_code == 0 ? "ok (matches oracle)" : "FAILED");
  }

  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open '" + opt.out_path + "' for writing");
    for (std::size_t r = 0; r < runs.size(); ++r)
      out << report_json(runs[r], opt, "run", static_cast<int>(r)).dump() << "\n";
    out << report_json(median, opt, "median", -1).dump() << "\n";
  }
  return exit_code;
}

// Dispatches on the workload name.  vpath needs its input gradient, which is
// computed once up front (it is part of the problem input, not of the
// benchmarked phase).
inline int run_bench(const BenchOptions& opt) {
  const Mesh mesh = prepare_mesh(opt.mesh_spec, opt.blocks, opt.partitioner);
  StopWatch index_clock;
  const BlockIndex index = build_block_index(mesh);
  const double index_seconds = index_clock.seconds();
  const ScalarField field = field_from_spec(mesh, opt.field_spec);

  if (opt.workload == "relations")
    return bench_workload(mesh, index, index_seconds, opt, SweepWorkload{});
  if (opt.workload == "critical-points")
    return bench_workload(mesh, index, index_seconds, opt, CriticalPointsWorkload(field));
  if (opt.workload == "discrete-gradient")
    return bench_workload(mesh, index, index_seconds, opt, DiscreteGradientWorkload(field));
  if (opt.workload == "vpath") {
    MemoryMeter meter;
    OnDemandTopology setup(mesh, index, index.n_blocks, &meter);
    OnDemandAccess access(mesh, index, setup);
    GradientOutput gradient;
    DiscreteGradientWorkload(field).run_range(access, 0, mesh.n_vertices(), gradient);
    return bench_workload(mesh, index, index_seconds, opt,
                          VPathWorkload(mesh, index, field, gradient));
  }
  throw std::invalid_argument("unknown workload '" + opt.workload + "'");
}

}  // namespace actopo
