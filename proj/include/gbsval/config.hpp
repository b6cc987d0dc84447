#pragma once

#include "gbsval/gcp.hpp"
#include "gbsval/linear_network.hpp"
#include "gbsval/phase_space.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbsval {

/// Raised for unparseable or inconsistent run configurations; the CLI maps
/// this to its validation exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Key=value run configuration. All physical parameters live here so runs
/// are archivable; commands only add output paths.
struct RunConfig {
    int modes = 0;
    double r = 0.0;
    std::string r_file;
    double epsilon = 0.0;
    double t_correction = 1.0;

    std::string matrix = "haar"; // "haar" | "file"
    std::string matrix_file;
    std::uint64_t haar_seed = 1;
    double loss_t = 1.0; // uniform amplitude loss applied to the haar matrix

    EnsemblePlan plan;

    int dimension = 1;
    std::vector<int> window_min, window_max; // explicit windows, else auto
    double auto_window_threshold = 1e-7;

    std::string dataset;
    std::string model = "lossy-squeezed";  // exact-model selector
    int m_cut = -1;                        // -1: derive from the window
    std::string theory = "simulation";     // validation baseline: "simulation" | "exact"

    int c_max = 13;
    std::string tail_policy = "renormalize"; // "renormalize" | "clamp"
    std::uint64_t fake_seed = 7;

    bool fit = false;
    std::string ground_truth = "nonideal"; // "ideal" strips epsilon and t

    std::string hash; // FNV-1a of the config text, embedded in reports

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    void validate() const;

    SqueezerBank make_bank() const;    // honors ground_truth
    TransmissionMatrix make_network() const;
    BinningSpec make_subsets() const;  // windows unset unless given explicitly
    bool windows_explicit() const { return !window_min.empty(); }
};

std::string fnv1a_hex(const std::string& text);

} // namespace gbsval
