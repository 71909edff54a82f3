#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccr/gbmodel.hpp"
#include "ccr/report.hpp"

namespace ccr::suites {

struct Level {
  int n = 5;
  double spacing = 0.5;
};

// Random symplectic instances: integer forms, dims up to maxDim.
std::vector<CheckResult> tprocedure(std::uint64_t seed, int instances = 200, int maxDim = 12);
std::vector<CheckResult> stages(std::uint64_t seed, int instances = 100, int maxDim = 12);
// Two-chain on a grid.
std::vector<CheckResult> stages_gb(const gb::GridPtr& g);
// Without the second stage: radical of B on the observable space p.
std::vector<CheckResult> stage1_radical(const gb::GridPtr& g);
std::vector<CheckResult> weyl(std::uint64_t seed, int instances = 300);

std::vector<CheckResult> gauge(const gb::GridPtr& g, std::uint64_t seed, int instances = 500);
std::vector<CheckResult> krein(const gb::GridPtr& g);
std::vector<CheckResult> decompose(const gb::GridPtr& g, std::uint64_t seed, int instances = 200);

// Refinement study of the Cauchy-data identity for Coulomb-projected samples of one box.
struct CauchyRow {
  Level level;
  double residual = 0;   // max |cp - B| / (|f| |h|)
  double signFlip = 0;   // max |cp + B| / (|f| |h|)
  double selfPair = 0;   // max |cp(f,f)|
  double tolQuad = 0;
};
std::vector<CauchyRow> cauchy_rows(const std::vector<Level>& levels, const gb::Box& box, int samples = 6);
std::vector<CheckResult> cauchy(const std::vector<Level>& levels, const gb::Box& box);

struct CausalityConfig {
  std::vector<Level> levels;
  std::vector<gb::RegionSpec> regions;
  std::optional<std::vector<std::pair<int, int>>> spacelike;
  // Field witness search runs on the finest level; defaults to `regions`.
  std::vector<gb::RegionSpec> witnessRegions;
  double factor = 10.0;
  int positions = 1;
};
CausalityConfig default_causality();
struct CausalityRow {
  Level level;
  double tolQuad = 0;
  double maxB = 0;
  bool pass = false;
};
std::vector<CausalityRow> causality_rows(const CausalityConfig& c);
std::vector<CheckResult> causality(const CausalityConfig& c);

// Nested boxes B < C around A and its shifts along +-x, +-y; closed under the z rotation.
std::vector<gb::RegionSpec> default_net_regions(const gb::GBGrid& g);
std::vector<gb::PoincareElement> default_actions(const gb::GBGrid& g);
std::vector<CheckResult> net(const gb::GridPtr& g, const std::vector<gb::RegionSpec>& regions,
                             const std::vector<gb::PoincareElement>& actions);
// Abstract nets violating one axiom each.
std::vector<CheckResult> net_counterexamples();

struct FockConfig {
  std::vector<Eigen::Vector3i> lattice{{1, 0, 0}, {-1, 0, 0}};
  double spacing = 1.0;
  int N = 3;
  // Spectral grid: several p0 values, smaller truncation.
  std::vector<Eigen::Vector3i> spectralLattice{{1, 0, 0}, {-1, 0, 0}, {1, 1, 0}, {-1, -1, 0}, {0, 2, 0}, {0, -2, 0}};
  int spectralN = 2;
};
std::vector<CheckResult> fock(const FockConfig& c, std::uint64_t seed);
std::vector<CheckResult> spectral(const FockConfig& c);

// Six axis momenta; seven overlapping boxes (origin and +-0.8 along each axis) whose local
// constraints span p0 and whose observables span p.
gb::GridPtr global_local_grid();
std::vector<gb::RegionSpec> default_global_regions();
std::vector<CheckResult> global_local(const gb::GridPtr& g, const std::vector<gb::RegionSpec>& regions,
                                      int positions = 1);

// Converge table: spacing, Cauchy residual, spacelike residual, K kernel gap.
struct ConvergeRow {
  double spacing = 0;
  double cauchy = 0;
  double spacelike = 0;
  double kernelGap = 0;
};
struct ConvergeResult {
  std::vector<ConvergeRow> rows;
  bool cauchyMonotone = false;
  bool spacelikeMonotone = false;
};
ConvergeResult converge(const CausalityConfig& c, const gb::Box& cauchyBox);
gb::Box default_cauchy_box();

}  // namespace ccr::suites
