// actopo command-line tool: mesh generation and the benchmark harness.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "actopo/bench.hpp"
#include "actopo/mesh.hpp"
#include "actopo/mesh_gen.hpp"
#include "actopo/partition.hpp"
#include "actopo/workloads.hpp"

namespace {

int run_gen(const std::string& grid, const std::string& out_path, const std::string& field_spec,
            actopo::Id blocks, const std::string& partitioner) {
  actopo::Mesh mesh = actopo::generate_grid_spec(grid);
  if (!field_spec.empty()) {
    mesh.scalars = actopo::field_from_spec(mesh, field_spec).values;
  }
  if (blocks > 0) {
    std::vector<actopo::BlockId> labels;
    if (partitioner == "index") {
      labels = actopo::partition_by_index(mesh, blocks);
    } else if (partitioner == "grid") {
      labels = actopo::partition_grid(mesh, blocks);
    } else {
      std::fprintf(stderr, "error: unknown partitioner '%s'\n", partitioner.c_str());
      return 1;
    }
    mesh = actopo::apply_partition(mesh, labels);
  }
  actopo::save_mesh_file(out_path, mesh);
  std::fprintf(stdout, "wrote %s: %d vertices, %d tets, %d block label(s)\n", out_path.c_str(),
               int(mesh.n_vertices()), int(mesh.n_tets()), int(mesh.n_blocks));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-decomposed topology benchmarks for tetrahedral meshes"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a grid tetrahedralization as a .tmsh file");
  std::string gen_grid;
  std::string gen_out;
  std::string gen_field;
  actopo::Id gen_blocks = 0;
  std::string gen_partitioner = "index";
  gen->add_option("--grid", gen_grid, "vertex grid extents nx,ny,nz")->required();
  gen->add_option("--out", gen_out, "output .tmsh path")->required();
  gen->add_option("--field", gen_field, "embed a scalars section: index, x, or random:<seed>");
  gen->add_option("--blocks", gen_blocks, "embed block labels for this many blocks");
  gen->add_option("--partitioner", gen_partitioner, "index or grid (with --blocks)")
      ->check(CLI::IsMember({"index", "grid"}));

  // --- bench -------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run one workload on one structure and report");
  actopo::BenchOptions opt;
  std::string structure = "actopo";
  bench->add_option("--mesh", opt.mesh_spec, ".tmsh path or gen:nx,ny,nz")->required();
  bench->add_option("--structure", structure, "actopo, static, or ondemand")
      ->check(CLI::IsMember({"actopo", "static", "ondemand"}));
  bench
      ->add_option("--workload", opt.workload,
                   "relations, critical-points, discrete-gradient, or vpath")
      ->check(CLI::IsMember({"relations", "critical-points", "discrete-gradient", "vpath"}));
  bench->add_option("--mode", opt.mode, "linear-single, linear-all, spatial-single, spatial-all")
      ->check(CLI::IsMember({"linear-single", "linear-all", "spatial-single", "spatial-all"}));
  bench->add_option("--consumers", opt.consumers, "consumer thread count")
      ->check(CLI::PositiveNumber);
  bench->add_option("--producers", opt.producers, "producers per consumer (leader + workers)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--blocks", opt.blocks, "re-partition into this many blocks");
  bench->add_option("--partitioner", opt.partitioner, "index or grid")
      ->check(CLI::IsMember({"index", "grid"}));
  bench->add_option("--buffer-capacity", opt.buffer_fraction,
                    "buffer capacity as a fraction of the block count");
  bench->add_option("--field", opt.field_spec, "index, x, or random:<seed>");
  bench->add_option("--repeat", opt.repeat, "runs per configuration (medians reported)")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--verify", opt.verify, "compare the output against an independent oracle run");
  bench->add_option("--out", opt.out_path, "append machine-readable JSONL records to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen(gen_grid, gen_out, gen_field, gen_blocks, gen_partitioner);
    }
    opt.structure = actopo::parse_structure(structure);
    return actopo::run_bench(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
