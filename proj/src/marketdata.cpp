#include "netspect/marketdata.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "netspect/dates.hpp"
#include "netspect/errors.hpp"

namespace netspect {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            // strip UTF-8 BOM
            if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
                static_cast<unsigned char>(line[1]) == 0xBB &&
                static_cast<unsigned char>(line[2]) == 0xBF)
                line.erase(0, 3);
            first = false;
        }
        if (!trim(line).empty() && trim(line)[0] == '#') continue;  // comment lines
        lines.push_back(line);
    }
    return lines;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty()) return missing_value();
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw ParseError("malformed numeric cell '" + cell + "'", row, col);
    }
    if (pos != cell.size())
        throw ParseError("malformed numeric cell '" + cell + "'", row, col);
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// prices
// ---------------------------------------------------------------------------

PricePanel load_price_panel(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("empty price file: " + path);

    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2)
        throw ParseError("price header needs a date column and at least one ticker", 1);

    PricePanel panel;
    panel.tickers.assign(header.begin() + 1, header.end());
    {
        std::set<std::string> seen;
        for (std::size_t j = 0; j < panel.tickers.size(); ++j) {
            if (panel.tickers[j].empty())
                throw ParseError("empty ticker name in header", 1, j + 2);
            if (!seen.insert(panel.tickers[j]).second)
                throw ParseError("duplicate ticker '" + panel.tickers[j] + "' in header", 1, j + 2);
        }
    }

    std::vector<std::string> dates;
    std::vector<Eigen::VectorXd> rows;
    int prev_serial = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()), i + 1);
        int serial;
        try {
            serial = parse_date_serial(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), i + 1, 1);
        }
        if (!dates.empty()) {
            if (serial == prev_serial)
                throw CalendarError("duplicate date '" + cells[0] + "' at row " +
                                    std::to_string(i + 1));
            if (serial < prev_serial)
                throw CalendarError("dates not increasing at row " + std::to_string(i + 1) +
                                    " ('" + cells[0] + "')");
        }
        prev_serial = serial;

        Eigen::VectorXd row(static_cast<Eigen::Index>(panel.tickers.size()));
        int n_present = 0;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            const double v = parse_cell(cells[j], i + 1, j + 1);
            if (!is_missing(v)) {
                if (v < 0)
                    throw ParseError("negative price " + cells[j], i + 1, j + 1);
                ++n_present;
            }
            row(static_cast<Eigen::Index>(j - 1)) = v;
        }
        if (n_present == 0)
            throw ParseError("row has no prices", i + 1);
        dates.push_back(cells[0]);
        rows.push_back(std::move(row));
    }
    if (dates.empty()) throw ParseError("price file has no data rows: " + path);

    panel.dates = std::move(dates);
    panel.values.resize(static_cast<Eigen::Index>(rows.size()), panel.n_tickers());
    for (std::size_t r = 0; r < rows.size(); ++r)
        panel.values.row(static_cast<Eigen::Index>(r)) = rows[r];
    return panel;
}

ReturnPanel compute_returns(const PricePanel& panel) {
    if (panel.n_dates() < 2)
        throw DegeneratePanel("need at least 2 dates to compute returns");
    ReturnPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.values.resize(panel.n_dates() - 1, panel.n_tickers());
    for (Eigen::Index t = 1; t < panel.n_dates(); ++t) {
        for (Eigen::Index j = 0; j < panel.n_tickers(); ++j) {
            const double p0 = panel.values(t - 1, j);
            const double p1 = panel.values(t, j);
            out.values(t - 1, j) = (is_missing(p0) || is_missing(p1) || p0 == 0.0)
                                       ? missing_value()
                                       : (p1 - p0) / p0;
        }
    }
    return out;
}

ReturnPanel clean_returns(const ReturnPanel& panel, CleanPolicy policy, double bound) {
    if (!(bound > 0)) throw std::invalid_argument("clean_returns: bound must be > 0");
    ReturnPanel out = panel;
    for (Eigen::Index t = 0; t < out.n_dates(); ++t) {
        for (Eigen::Index j = 0; j < out.n_tickers(); ++j) {
            double& v = out.values(t, j);
            if (is_missing(v) || std::abs(v) <= bound) continue;
            v = (policy == CleanPolicy::winsorize) ? (v > 0 ? bound : -bound) : missing_value();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sectors
// ---------------------------------------------------------------------------

std::vector<std::string> SectorMap::unassigned(const std::vector<std::string>& universe) const {
    std::vector<std::string> out;
    for (const auto& t : universe)
        if (sector_of.find(t) == sector_of.end()) out.push_back(t);
    return out;
}

void SectorMap::require_total(const std::vector<std::string>& universe) const {
    const auto missing = unassigned(universe);
    if (missing.empty()) return;
    std::string list;
    for (const auto& t : missing) {
        if (!list.empty()) list += ", ";
        list += t;
    }
    throw MissingTickerSector("tickers without a sector assignment: " + list);
}

SectorMap load_sector_map(const std::string& path) {
    const auto lines = read_lines(path);
    SectorMap map;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv_line(lines[i]);
        if (i == 0 && cells.size() >= 2 && lower(cells[0]) == "ticker") continue;
        if (cells.size() != 2)
            throw ParseError("expected 'ticker,sector'", i + 1);
        if (cells[0].empty()) throw ParseError("empty ticker", i + 1, 1);
        if (cells[1].empty()) throw ParseError("empty sector label", i + 1, 2);
        map.sector_of[cells[0]] = cells[1];
    }
    return map;
}

// ---------------------------------------------------------------------------
// events
// ---------------------------------------------------------------------------

const char* tone_name(Tone t) {
    switch (t) {
        case Tone::hawkish: return "hawkish";
        case Tone::dovish: return "dovish";
        case Tone::neutral: return "neutral";
    }
    return "?";
}

Tone parse_tone(const std::string& s) {
    const std::string v = lower(trim(s));
    if (v == "hawkish") return Tone::hawkish;
    if (v == "dovish") return Tone::dovish;
    if (v == "neutral") return Tone::neutral;
    throw UnknownTone("unknown tone '" + s + "', expected hawkish|dovish|neutral");
}

std::size_t EventCalendar::count(Tone t) const {
    std::size_t n = 0;
    for (const auto& e : entries)
        if (e.tone == t) ++n;
    return n;
}

EventCalendar load_event_calendar(const std::string& path) {
    const auto lines = read_lines(path);
    EventCalendar cal;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv_line(lines[i]);
        if (i == 0 && cells.size() >= 2 && lower(cells[0]) == "date") continue;
        if (cells.size() != 2) throw ParseError("expected 'date,tone'", i + 1);
        try {
            parse_date_serial(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), i + 1, 1);
        }
        cal.entries.push_back({cells[0], parse_tone(cells[1])});
    }
    std::sort(cal.entries.begin(), cal.entries.end(),
              [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < cal.entries.size(); ++i)
        if (cal.entries[i].date == cal.entries[i - 1].date)
            throw CalendarError("duplicate event date '" + cal.entries[i].date + "'");
    return cal;
}

// ---------------------------------------------------------------------------
// controls
// ---------------------------------------------------------------------------

ControlRows load_controls(const std::string& path) {
    const auto lines = read_lines(path);
    ControlRows raw;
    std::vector<Eigen::VectorXd> rows;
    int prev_serial = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split_csv_line(lines[i]);
        if (i == 0 && !cells.empty() && lower(cells[0]) == "date") continue;
        if (cells.size() != 6)
            throw ParseError("expected 'date,vix,spx_ret,y2,y10,twi'", i + 1);
        int serial;
        try {
            serial = parse_date_serial(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), i + 1, 1);
        }
        if (!raw.dates.empty() && serial <= prev_serial)
            throw CalendarError("control dates not increasing at row " + std::to_string(i + 1));
        prev_serial = serial;
        Eigen::VectorXd row(5);
        for (int j = 0; j < 5; ++j)
            row(j) = parse_cell(cells[static_cast<std::size_t>(j) + 1], i + 1,
                                static_cast<std::size_t>(j) + 2);
        raw.dates.push_back(cells[0]);
        rows.push_back(std::move(row));
    }
    raw.values.resize(static_cast<Eigen::Index>(rows.size()), 5);
    for (std::size_t r = 0; r < rows.size(); ++r)
        raw.values.row(static_cast<Eigen::Index>(r)) = rows[r];
    return raw;
}

const std::vector<std::string>& ControlPanel::column_names() {
    static const std::vector<std::string> names = {"vix_level",  "vix_change", "spx_return",
                                                   "yield_2y",   "yield_10y",  "dollar_twi"};
    return names;
}

const Eigen::VectorXd& ControlPanel::column(const std::string& name) const {
    if (name == "vix_level") return vix_level;
    if (name == "vix_change") return vix_change;
    if (name == "spx_return") return spx_return;
    if (name == "yield_2y") return yield_2y;
    if (name == "yield_10y") return yield_10y;
    if (name == "dollar_twi") return dollar_twi;
    throw Error("no control column named '" + name + "'");
}

ControlPanel align_controls(const ControlRows& raw, const std::vector<std::string>& calendar,
                            int max_ffill_days) {
    ControlPanel out;
    out.dates = calendar;
    const Eigen::Index n = static_cast<Eigen::Index>(calendar.size());
    out.vix_level = out.vix_change = out.spx_return = out.yield_2y = out.yield_10y =
        out.dollar_twi = Eigen::VectorXd::Constant(n, missing_value());

    std::vector<int> raw_serial(raw.dates.size());
    for (std::size_t i = 0; i < raw.dates.size(); ++i)
        raw_serial[i] = parse_date_serial(raw.dates[i]);

    std::size_t cursor = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const int serial = parse_date_serial(calendar[static_cast<std::size_t>(t)]);
        while (cursor + 1 < raw.dates.size() && raw_serial[cursor + 1] <= serial) ++cursor;
        if (raw.dates.empty() || raw_serial[cursor] > serial ||
            serial - raw_serial[cursor] > max_ffill_days) {
            out.report.uncovered_dates.push_back(calendar[static_cast<std::size_t>(t)]);
            continue;
        }
        if (raw_serial[cursor] != serial) ++out.report.forward_filled;
        const Eigen::Index r = static_cast<Eigen::Index>(cursor);
        out.vix_level(t) = raw.values(r, 0);
        out.spx_return(t) = raw.values(r, 1);
        out.yield_2y(t) = raw.values(r, 2);
        out.yield_10y(t) = raw.values(r, 3);
        out.dollar_twi(t) = raw.values(r, 4);
    }

    // vix_change on the trading calendar, so the level/change identity holds
    // exactly on the loaded panel
    for (Eigen::Index t = 1; t < n; ++t) {
        if (!is_missing(out.vix_level(t)) && !is_missing(out.vix_level(t - 1)))
            out.vix_change(t) = out.vix_level(t) - out.vix_level(t - 1);
    }
    return out;
}

}  // namespace netspect
