#pragma once

#include <string>

#include "mollerscat/smatrix.hpp"

namespace moller {

/// Fully resolved run configuration. Defaults come from the experiment
/// preset; a config file overlays individual keys on top of its preset.
struct RunConfig {
    std::string experiment = "well1d";  // well1d | h3 | free-identity
    std::string backend = "classical";  // classical | statevector | sampled

    // spatial grid (per axis; h3 uses a square box)
    std::size_t n = 256;
    double x_min = 0.0;
    double x_max = 160.0;

    // packets (x0 and k0 in the channel's translational Jacobi coordinate)
    GaussianSpec packet_in;
    GaussianSpec packet_out;
    int v_in = 0;   // vibrational channel labels (h3)
    int v_out = 0;
    std::size_t n_vib_basis = 8;

    // correlation time grid
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t n_t = 512;
    double decay_threshold = 1e-3;
    bool check_decay = true;

    // Moller construction
    bool auto_tau0 = true;
    double tau0 = 0.0;      // used when auto_tau0 is false
    double tau_base = 0.0;  // first probe of the doubling schedule
    double tau_tol = 1e-6;

    // propagator
    std::string method = "split_operator";  // split_operator | exact_eigen | trotter
    int order = 2;
    double dt = 0.0;         // explicit step; 0 defers to dt_factor * dt_max
    double dt_factor = 1.0;
    double breach_threshold = 1e-6;

    // extraction
    std::size_t n_energies = 200;
    double eta_floor = 1e-3;     // validity-mask floor
    double window_floor = 2e-4;  // energy-grid extent (below the mask floor,
                                 // so the csv shows where masking kicks in)
    double taper_fraction = 0.0; // raised-cosine FT taper (suppresses ringing
                                 // of undecayed correlation tails)

    // sampled backend
    std::uint64_t shots = 100000;
    std::uint64_t seed = 20260825;

    // physical system
    double mu = 1.0;          // 1D reduced mass (ignored for h3)
    double m_h = 1836.152673; // h3 atomic mass
    double sato = 0.1386;     // LEPS Sato parameter (surrogate surface)
    std::string pes_table;    // optional tabulated surface; overrides the surrogate
    double v_cap = 1.0;       // potential clamp for step-size control (h3)

    // snapshots of |psi| along the run
    rvec snapshot_times;
    std::string snapshot_unit = "tau_v";  // tau_v | absolute

    std::string output_dir = "out";
    std::string units = "natural (hbar = 1)";
};

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

/// Parse a config file: {"experiment": ...} selects the preset, remaining
/// keys overlay it. Unknown keys are schema errors.
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& c);

/// Dry-run checks (geometry, purity, power-of-two, dt bound, qubit count).
/// Returns human-readable violations with remedies; empty means valid.
std::vector<std::string> validate_config(const RunConfig& c);

struct Snapshot {
    double time = 0.0;
    WaveFunction psi;
};

struct RunResult {
    RunConfig resolved;
    double tau_v = 0.0;  // grid traversal time of the central momentum
    Tau0Result moller_trace;
    CorrelationSeries corr;
    std::vector<SMatrixPoint> smat;
    std::vector<Snapshot> snapshots;
};

/// Execute the configured experiment end to end (no file output).
RunResult run_experiment(const RunConfig& c);

/// run_experiment + CSV/JSON export into `out_dir` (defaults to the config's
/// output_dir). Writes corr.csv, smatrix.csv, moller_trace.csv,
/// snapshots/*.csv and run.json; files land atomically via rename.
RunResult run_and_export(const RunConfig& c, const std::string& out_dir = "");

void write_outputs(const RunResult& r, const std::string& out_dir);

} // namespace moller
