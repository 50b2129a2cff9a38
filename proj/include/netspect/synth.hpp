// Seeded synthetic market panels with sector-block correlation structure and
// event-injected connectivity breaks, plus the independent numerical oracles
// used by the test suite. The oracles deliberately share no code with the
// implementations they check.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netspect/marketdata.hpp"
#include "netspect/netbuild.hpp"

namespace netspect::synth {

enum class BreakType { none, fragment, consolidate };

struct SynthEvent {
    int day_index;       // trading-day index into the generated calendar
    BreakType break_type;
    Tone tone;
};

// Correlation model per day: stock i in block b has
//   r_i = beta_spy * m + beta_qqq * q + sigma * eps_i,
// where eps has compound-symmetric block structure with intra-block
// correlation rho_in and cross-block correlation rho_out. For
// break_horizon days after each event, rho_in shifts by -delta (fragment)
// or +delta (consolidate), clamped to [rho_out, 0.995].
struct SynthConfig {
    int n_stocks = 60;
    int n_sectors = 6;
    int n_days = 600;
    double rho_in = 0.50;
    double rho_out = 0.05;
    double sigma = 0.02;        // idiosyncratic daily volatility
    double beta_spy = 1.0;      // set factor betas to 0 for a pure block panel
    double beta_qqq = 0.5;
    double factor_vol = 0.01;
    double break_delta = 0.0;   // delta in [0, 1]
    int break_horizon = 7;
    std::vector<SynthEvent> events;
    std::uint64_t seed = 1;
    std::string start_date = "2015-01-05";

    void validate() const;  // throws InvalidCovariance
};

struct SynthBundle {
    PricePanel prices;        // stocks plus SPY and QQQ columns
    SectorMap sectors;        // stocks only
    EventCalendar events;
    ControlRows controls;     // simulated macro controls on the same calendar
};

/// Deterministic synthetic price panel (prices integrated from returns at
/// base 100). Identical seeds give byte-identical panels.
PricePanel gen_panel(const SynthConfig& config);

/// Full input bundle for end-to-end runs: prices, sectors, events, controls.
SynthBundle gen_bundle(const SynthConfig& config);

/// Evenly spaced events over the usable calendar with the given spacing,
/// tones cycling through the provided list.
std::vector<SynthEvent> evenly_spaced_events(const SynthConfig& config, int n_events, int spacing,
                                             int first_index,
                                             const std::vector<std::pair<BreakType, Tone>>& cycle);

// ---------------------------------------------------------------------------
// oracles
// ---------------------------------------------------------------------------

/// Eigenvalues (ascending) by plain cyclic-by-row Jacobi rotations, iterated
/// to off-diagonal Frobenius norm <= 1e-12. Independent of the main
/// eigensolver's code path. Throws NonConvergence.
std::vector<double> dense_eig_oracle(const Eigen::MatrixXd& sym);

/// All maximal cliques of size 3..12 by exhaustive subset scan. Requires at
/// most 15 vertices (throws TooLarge). Members sorted, set sorted.
std::vector<std::vector<int>> brute_force_cliques(const Adjacency& adj);

/// Coefficients by explicit normal equations (X'X)^{-1} X'y via dense
/// Gaussian elimination with partial pivoting. Throws Singular.
Eigen::VectorXd normal_equation_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Full oracle-side fit used by cross-implementation checks: classical
// standard errors, R-squared and F computed from the normal-equation route.
struct OracleFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    double r2 = 0.0;
    double f_stat = 0.0;
};

OracleFit normal_equation_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

}  // namespace netspect::synth
