#include <benchmark/benchmark.h>

#include <cmath>

#include "tnfem/assembly.hpp"
#include "tnfem/basis.hpp"
#include "tnfem/dofs.hpp"
#include "tnfem/lattice.hpp"
#include "tnfem/mesh.hpp"
#include "tnfem/quadrature.hpp"
#include "tnfem/solver.hpp"

using namespace tnfem;

static void BM_LatticeEnumerate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const SimplicialLattice lat = lattice_points(3, k);
    benchmark::DoNotOptimize(lat.points.data());
  }
}
BENCHMARK(BM_LatticeEnumerate)->Arg(2)->Arg(4)->Arg(8);

static void BM_LatticeRank(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SimplicialLattice lat = lattice_points(3, k);
  for (auto _ : state)
    for (const MultiIndex& a : lat.points)
      benchmark::DoNotOptimize(lattice_rank(a));
  state.SetItemsProcessed(state.iterations() * lat.size());
}
BENCHMARK(BM_LatticeRank)->Arg(2)->Arg(4)->Arg(8);

static void BM_TabulateBasis(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SimplicialLattice lat = lattice_points(3, k);
  const QuadratureRule rule = simplex_rule(3, 2 * k);
  for (auto _ : state) {
    const Tabulation tab = tabulate(lat, rule.points);
    benchmark::DoNotOptimize(tab.values.data());
  }
  state.SetItemsProcessed(state.iterations() * lat.size() * rule.size());
}
BENCHMARK(BM_TabulateBasis)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

static void BM_BuildCurlConformingDofs(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Mesh mesh = structured_cube(3, 4);
  for (auto _ : state) {
    const DofMap dm = build_nedelec_dofmap(mesh, k);
    benchmark::DoNotOptimize(dm.cell2dof.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_BuildCurlConformingDofs)->Arg(1)->Arg(2)->Arg(3);

static void BM_BuildDivConformingDofs(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Mesh mesh = structured_cube(3, 4);
  for (auto _ : state) {
    const DofMap dm = build_bdm_dofmap(mesh, k);
    benchmark::DoNotOptimize(dm.cell2dof.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_BuildDivConformingDofs)->Arg(1)->Arg(2)->Arg(3);

static void BM_AssembleVectorMass(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Mesh mesh = structured_cube(3, 2);
  const DofMap dm = build_bdm_dofmap(mesh, k);
  for (auto _ : state) {
    const CsrMatrix M = assemble_vector_mass(mesh, dm);
    benchmark::DoNotOptimize(M.vals.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_AssembleVectorMass)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_AssembleCurlCurl(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Mesh mesh = structured_cube(3, 2);
  const DofMap dm = build_nedelec_dofmap(mesh, k);
  for (auto _ : state) {
    const CsrMatrix A = assemble_curl_curl(mesh, dm);
    benchmark::DoNotOptimize(A.vals.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_AssembleCurlCurl)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SparseApply(benchmark::State& state) {
  const Mesh mesh = structured_cube(3, 3);
  const DofMap dm = build_nedelec_dofmap(mesh, 2);
  const CsrMatrix A = assemble_vector_mass(mesh, dm);
  Eigen::VectorXd x(A.cols);
  for (int i = 0; i < A.cols; ++i) x[i] = std::sin(0.37 * i);
  for (auto _ : state) {
    const Eigen::VectorXd y = A.apply(x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * A.nnz());
}
BENCHMARK(BM_SparseApply);

static void BM_MassSolveCG(benchmark::State& state) {
  const Mesh mesh = structured_cube(3, 2);
  const DofMap dm = build_bdm_dofmap(mesh, 2);
  const CsrMatrix M = assemble_vector_mass(mesh, dm);
  const Eigen::VectorXd b = assemble_load(mesh, dm, [](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(p[0], p[1] * p[2], std::sin(p[0]));
  });
  SolverOptions opt;
  opt.method = "cg";
  opt.tol = 1e-10;
  for (auto _ : state) {
    const Eigen::VectorXd x = solve(M, b, opt);
    benchmark::DoNotOptimize(x.data());
  }
  state.counters["n"] = M.rows;
}
BENCHMARK(BM_MassSolveCG)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
