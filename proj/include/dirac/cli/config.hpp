#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/asymptotics/asymptotics.hpp"
#include "dirac/bvp/spectrum.hpp"

namespace dirac::cli {

/// Invalid configuration; the message names the field and, when known, the line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCommands[] = {"fundamental", "verify-asymptotics", "lemma1-sweep", "eigs",
                                                 "expansion-audit"};

struct PotentialSpec {
    std::string preset = "zero";  ///< zero | constant | trigpoly | sampled
    Complex p{};
    Complex q{};
    std::vector<Potential::Term> p_terms;
    std::vector<Potential::Term> q_terms;
    std::string file;  ///< for sampled, relative to the config directory
};

struct ExperimentConfig {
    std::string command;  ///< optional in the file; must match the CLI when both are set
    PotentialSpec potential;

    std::size_t nodes_per_panel = Grid::kDefaultNodesPerPanel;
    std::size_t panels = 0;  ///< 0: sized from lambda

    std::optional<Complex> lambda;
    std::string system = "direct";
    std::optional<double> sigma;
    std::vector<double> taus;
    std::vector<double> sigmas;
    std::optional<double> tau;
    std::optional<Rectangle> rectangle;

    std::string boundary_preset;  ///< demo | periodic | initial, or empty when `a` is given
    std::optional<BoundaryMatrix> boundary;

    double picard_tolerance = 1e-12;
    int max_iterations = 200;
    double eigen_tolerance = 1e-12;
    double min_cell = 1e-3;
    double lower_bound_threshold = 2.0;

    CombinationCoefficients coefficients{{1, 0}, {1, 0}, {1, 0}, {1, 0}};
    bool normalize = false;
    std::size_t samples = 100;

    std::string expansion_source = "spectrum";  ///< spectrum | lemma1
    std::string probe = "ones";                 ///< ones | none

    std::string output = "out";
    std::uint64_t seed = 42;
    unsigned threads = 1;

    std::filesystem::path base_dir;  ///< directory of the config file
};

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration as TOML; loading it reproduces the run.
std::string to_toml(const ExperimentConfig& cfg);

Potential build_potential(const ExperimentConfig& cfg);
BoundaryConditions build_boundary(const ExperimentConfig& cfg);
SolverOptions solver_options(const ExperimentConfig& cfg);

}  // namespace dirac::cli
