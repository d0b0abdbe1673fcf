#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipflow/borel.hpp"
#include "lipflow/flows.hpp"
#include "lipflow/report.hpp"
#include "lipflow/topo.hpp"

namespace lipflow {

Flow make_flow(const std::string& name, double scale);

/// Equivariant torus-2 test ensemble F(y) = 1/2 + 0.15 sin(2 pi y1)
/// + 0.1 cos(2 pi y2), evaluated along the orbit.
Ensemble torus2_test_ensemble(double scale);

struct GaussianRunConfig {
    int num_states = 20;
    int num_triples = 100;
    std::uint64_t seed = 42;
};
Report run_gaussian_check(const GaussianRunConfig& cfg);

struct BorelRunConfig {
    std::string flow = "torus1";
    double scale = 8.0;
    double base = 0.3;  // section base (every coordinate for torus)
    int num_points = 50;
    int m_max = 20;
    std::uint64_t seed = 42;
    std::string out_dir;  // when set, per-point CSVs are written here
};
Report run_borel(const BorelRunConfig& cfg);

struct MainLemmaRunConfig {
    double a = 1.0;
    double delta = 0.4;
    int M = 2;
    double scale = 8.0;
    int num_states = 50;
    int fuzz_trials = 1000;
    double match_tol = 1e-6;
    std::uint64_t seed = 42;
    bool negative_control = true;
};

struct MainLemmaArtifacts {
    MainLemmaParams params;
    GenericVectorSet uset;
    std::vector<Vec> states;
    std::vector<GridFunction> gs;
    GridFunction f1_sample;  // f1 of the first state on the evaluation grid
};

Report run_main_lemma(const MainLemmaRunConfig& cfg, MainLemmaArtifacts* artifacts = nullptr);

struct MarkerRunConfig {
    double a = 1.0;
    double delta = 0.4;
    double scale = 8.0;
    int num_A = 100;
    int num_BC = 20;
    int m_max = 12;
    std::uint64_t seed = 42;
};
Report run_marker_perturbation(const MarkerRunConfig& cfg);

}  // namespace lipflow
