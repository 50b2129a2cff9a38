// Factor residualization: per-stock OLS of returns on market factor returns
// (intercept included); residuals feed the correlation stage.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netspect/panel.hpp"

namespace netspect {

struct ResidualizeOptions {
    int min_beta_obs = 60;    // joint observations required to fit a stock
    bool rolling = false;     // trailing-window betas instead of full sample
    int rolling_window = 250;
    int threads = 1;          // per-stock fits are independent; 0 = hardware
};

struct ResidualPanel {
    ReturnPanel residuals;            // same shape as the input return panel
    std::vector<std::string> factor_names;
    Eigen::MatrixXd coef;             // n_tickers x (1 + n_factors): intercept, betas (NaN = skipped)
    std::vector<std::string> skipped; // stocks below the observation floor
};

/// Per-stock OLS of returns on [1, factor columns]; residuals are stored
/// where the stock and every factor are observed. Stocks with fewer than
/// min_beta_obs joint observations are excluded with a warning entry.
/// Throws RankDeficientFactors when the factor matrix is collinear.
ResidualPanel residualize(const ReturnPanel& returns, const ReturnPanel& factors,
                          const ResidualizeOptions& opts = {});

}  // namespace netspect
