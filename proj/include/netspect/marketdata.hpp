// Input loading, validation and calendar alignment: prices, sectors,
// announcement calendar with tones, and macro control series.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netspect/panel.hpp"

namespace netspect {

// ---------------------------------------------------------------------------
// prices
// ---------------------------------------------------------------------------

/// Load a wide-layout price CSV: header `date,TICK1,TICK2,...`, ISO dates in
/// the first column, empty cells = missing. Validates strictly increasing
/// dates, unique tickers, non-negative prices, and at least one price per row.
PricePanel load_price_panel(const std::string& path);

/// Simple returns r[t][i] = (P[t][i] - P[t-1][i]) / P[t-1][i]. The first date
/// is dropped; a return is missing when either price is missing.
ReturnPanel compute_returns(const PricePanel& panel);

enum class CleanPolicy { winsorize, drop };

/// Clamp (winsorize) or blank (drop) returns with |r| beyond `bound`.
ReturnPanel clean_returns(const ReturnPanel& panel, CleanPolicy policy, double bound = 0.50);

/// Restrict a panel to dates in [start, end] (inclusive; empty string = open).
template <class Tag>
BasicPanel<Tag> subset_dates(const BasicPanel<Tag>& panel, const std::string& start,
                             const std::string& end) {
    BasicPanel<Tag> out;
    out.tickers = panel.tickers;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < panel.n_dates(); ++t) {
        const std::string& d = panel.dates[t];
        if (!start.empty() && d < start) continue;
        if (!end.empty() && d > end) continue;
        keep.push_back(t);
    }
    out.dates.reserve(keep.size());
    out.values.resize(static_cast<Eigen::Index>(keep.size()), panel.n_tickers());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        out.dates.push_back(panel.dates[keep[r]]);
        out.values.row(static_cast<Eigen::Index>(r)) = panel.values.row(keep[r]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// sectors
// ---------------------------------------------------------------------------

// Ticker -> GICS-style sector label. Tickers without an assignment fall back
// to "UNKNOWN", which the thresholding stage treats as cross-sector.
struct SectorMap {
    std::map<std::string, std::string> sector_of;
    static constexpr const char* kUnknown = "UNKNOWN";

    std::string sector_or_unknown(const std::string& ticker) const {
        auto it = sector_of.find(ticker);
        return it == sector_of.end() ? kUnknown : it->second;
    }

    // Tickers in `universe` that have no sector assignment.
    std::vector<std::string> unassigned(const std::vector<std::string>& universe) const;

    // Throws MissingTickerSector unless the map covers the whole universe.
    void require_total(const std::vector<std::string>& universe) const;
};

/// Load `ticker,sector` CSV (header row optional). Empty labels rejected.
SectorMap load_sector_map(const std::string& path);

// ---------------------------------------------------------------------------
// events
// ---------------------------------------------------------------------------

enum class Tone { hawkish, dovish, neutral };

const char* tone_name(Tone t);
Tone parse_tone(const std::string& s);  // throws UnknownTone

struct EventCalendar {
    struct Entry {
        std::string date;
        Tone tone;
    };
    std::vector<Entry> entries;  // sorted by date, dates unique

    std::size_t count(Tone t) const;
};

/// Load `date,tone` CSV with tone in {hawkish,dovish,neutral}. Duplicate
/// dates rejected; entries sorted by date.
EventCalendar load_event_calendar(const std::string& path);

// ---------------------------------------------------------------------------
// controls
// ---------------------------------------------------------------------------

// Raw control rows exactly as read from controls.csv:
// `date,vix,spx_ret,y2,y10,twi`.
struct ControlRows {
    std::vector<std::string> dates;
    Eigen::MatrixXd values;  // n x 5: vix, spx_ret, y2, y10, twi
};

ControlRows load_controls(const std::string& path);

struct AlignmentReport {
    std::vector<std::string> uncovered_dates;  // trading days with no control row within reach
    int forward_filled = 0;                    // trading days served by a stale row
};

// Per-trading-date control values. vix_change is derived on the trading
// calendar: vix_level[t] - vix_level[prev trading day], missing at the first
// covered date.
struct ControlPanel {
    std::vector<std::string> dates;  // == trading calendar
    Eigen::VectorXd vix_level, vix_change, spx_return, yield_2y, yield_10y, dollar_twi;
    AlignmentReport report;

    static const std::vector<std::string>& column_names();
    const Eigen::VectorXd& column(const std::string& name) const;
};

/// Join raw control rows onto the trading calendar. A trading date uses the
/// most recent control row at most `max_ffill_days` calendar days old.
/// Uncovered dates are reported, not fatal.
ControlPanel align_controls(const ControlRows& raw, const std::vector<std::string>& calendar,
                            int max_ffill_days = 3);

}  // namespace netspect
