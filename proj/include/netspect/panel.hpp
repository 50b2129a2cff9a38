// Date x ticker value panels. NaN marks a missing observation.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

namespace netspect {

inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

template <class Tag>
struct BasicPanel {
    std::vector<std::string> dates;    // strictly increasing ISO dates
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;            // rows = dates, cols = tickers

    Eigen::Index n_dates() const { return static_cast<Eigen::Index>(dates.size()); }
    Eigen::Index n_tickers() const { return static_cast<Eigen::Index>(tickers.size()); }

    // -1 when absent
    Eigen::Index find_ticker(const std::string& name) const {
        for (std::size_t j = 0; j < tickers.size(); ++j)
            if (tickers[j] == name) return static_cast<Eigen::Index>(j);
        return -1;
    }

    bool empty() const { return dates.empty() || tickers.empty(); }
};

struct PriceTag;
struct ReturnTag;

using PricePanel = BasicPanel<PriceTag>;
using ReturnPanel = BasicPanel<ReturnTag>;

}  // namespace netspect
