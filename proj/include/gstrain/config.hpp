#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gstrain/field.hpp"

namespace gstrain {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiscountConfig {
    double dx = 0.004;
    double domain_mult = 8.0;
    std::optional<double> theta_override;
    double damping = 0.5;
};

struct SimConfig {
    int grid = 128;
    double T = 4.0;
    double cfl = 0.4;
    double perturb = 0.0;
};

struct ExperimentConfig {
    FieldSpec field;
    double m = 0.6;
    double n = 0.8;
    std::vector<double> c_values = {0.0, 0.2, 0.5};
    double window = 0.0;  // 0: field default (2000 / min frequency)
    double eps_gap = 1e-3;
    double mu_range = 5.0;
    int table_points = 48;
    double p_min = -3.0, p_max = 3.0;
    int p_steps = 121;
    std::vector<double> delta_list = {0.16, 0.08, 0.04};
    DiscountConfig discount;
    SimConfig sim;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string output_dir = "out";

    /// Normalizes (m, n) to the unit circle (warning on stderr when off by
    /// more than 1e-6) and rejects empty grids / duplicate seeds.
    void finalize();

    std::string canonical_json() const;  // stable key order, round-trip exact
    std::string hash() const;

    static ExperimentConfig golden();  // periodic v = 0.5 cos(2 pi x), (m,n) = (.6,.8)
    static FieldSpec random_phase_golden(std::uint64_t seed);
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
void save_config(const ExperimentConfig& cfg, const std::string& path);

}  // namespace gstrain
