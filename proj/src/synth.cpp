#include "netspect/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "netspect/dates.hpp"
#include "netspect/errors.hpp"

namespace netspect::synth {

namespace {

// Box-Muller on explicit uniforms: one engine draw pattern regardless of
// platform, unlike std::normal_distribution.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform() {
        // (0, 1]: log() stays finite
        return (static_cast<double>(engine_()) + 1.0) * 0x1p-64;
    }
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::string serial_to_iso(int serial) {
    // inverse of days_from_civil
    int z = serial + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    const int year = y + (m <= 2);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, m, d);
    return buf;
}

std::vector<std::string> weekday_calendar(const std::string& start, int n_days) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n_days));
    int serial = parse_date_serial(start);
    while (static_cast<int>(out.size()) < n_days) {
        const int weekday = ((serial % 7) + 7 + 4) % 7;  // 1970-01-01 was a Thursday
        if (weekday != 6 && weekday != 0) out.push_back(serial_to_iso(serial));
        ++serial;
    }
    return out;
}

std::string sector_name(int b) { return "SEC" + std::to_string(b + 1); }

std::string stock_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%03d", i + 1);
    return buf;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_stocks < 2 || n_sectors < 1 || n_sectors > n_stocks || n_days < 2)
        throw InvalidCovariance("synth: bad panel dimensions");
    if (!(rho_in >= 0.0 && rho_in < 1.0))
        throw InvalidCovariance("synth: rho_in must be in [0, 1)");
    if (rho_out < 0.0 || rho_out > rho_in)
        throw InvalidCovariance("synth: need 0 <= rho_out <= rho_in for a PSD block covariance");
    if (break_delta < 0.0 || break_delta > 1.0)
        throw InvalidCovariance("synth: break magnitude must be in [0, 1]");
    if (sigma <= 0.0) throw InvalidCovariance("synth: sigma must be positive");
    for (const auto& e : events)
        if (e.day_index < 0 || e.day_index >= n_days)
            throw InvalidCovariance("synth: event index outside the calendar");
}

PricePanel gen_panel(const SynthConfig& config) {
    return gen_bundle(config).prices;
}

SynthBundle gen_bundle(const SynthConfig& config) {
    config.validate();
    const int n = config.n_stocks;
    const int nb = config.n_sectors;
    const int nd = config.n_days;

    SynthBundle bundle;
    const auto calendar = weekday_calendar(config.start_date, nd + 1);  // +1 base-price row

    // rho_in per day, shifted inside break windows (e+1 .. e+horizon]
    std::vector<double> rho_in_day(static_cast<std::size_t>(nd), config.rho_in);
    for (const auto& e : config.events) {
        if (e.break_type == BreakType::none) continue;
        const double shift = e.break_type == BreakType::fragment ? -config.break_delta
                                                                 : config.break_delta;
        for (int t = e.day_index + 1; t <= e.day_index + config.break_horizon && t < nd; ++t)
            rho_in_day[static_cast<std::size_t>(t)] =
                std::clamp(config.rho_in + shift, config.rho_out, 0.995);
    }

    Gaussian gauss(config.seed);
    Eigen::MatrixXd returns(nd, n);
    Eigen::VectorXd spy(nd), qqq(nd);
    std::vector<int> block(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) block[static_cast<std::size_t>(i)] = i % nb;

    for (int t = 0; t < nd; ++t) {
        const double m = config.factor_vol * gauss();
        const double q = config.factor_vol * gauss();
        const double g = gauss();
        std::vector<double> sec(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) sec[static_cast<std::size_t>(b)] = gauss();

        const double rin = rho_in_day[static_cast<std::size_t>(t)];
        // closed-form square root of the compound-symmetric block structure:
        // eps = sqrt(rho_out) g + sqrt(rho_in - rho_out) s_b + sqrt(1 - rho_in) z
        const double w_g = std::sqrt(config.rho_out);
        const double w_s = std::sqrt(std::max(0.0, rin - config.rho_out));
        const double w_z = std::sqrt(std::max(0.0, 1.0 - rin));

        spy(t) = m;
        qqq(t) = q;
        for (int i = 0; i < n; ++i) {
            const double z = gauss();
            const double eps =
                w_g * g + w_s * sec[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])] +
                w_z * z;
            returns(t, i) = config.beta_spy * m + config.beta_qqq * q + config.sigma * eps;
        }
    }

    // integrate prices from base 100
    PricePanel& prices = bundle.prices;
    prices.dates = calendar;
    for (int i = 0; i < n; ++i) prices.tickers.push_back(stock_name(i));
    prices.tickers.push_back("SPY");
    prices.tickers.push_back("QQQ");
    prices.values.resize(nd + 1, n + 2);
    prices.values.row(0).setConstant(100.0);
    for (int t = 0; t < nd; ++t) {
        for (int i = 0; i < n; ++i)
            prices.values(t + 1, i) = prices.values(t, i) * (1.0 + returns(t, i));
        prices.values(t + 1, n) = prices.values(t, n) * (1.0 + spy(t));
        prices.values(t + 1, n + 1) = prices.values(t, n + 1) * (1.0 + qqq(t));
    }

    for (int i = 0; i < n; ++i)
        bundle.sectors.sector_of[stock_name(i)] =
            sector_name(block[static_cast<std::size_t>(i)]);

    for (const auto& e : config.events)
        bundle.events.entries.push_back(
            {calendar[static_cast<std::size_t>(e.day_index) + 1], e.tone});
    std::sort(bundle.events.entries.begin(), bundle.events.entries.end(),
              [](const auto& a, const auto& b) { return a.date < b.date; });

    // simulated macro controls on the return calendar
    bundle.controls.dates.assign(calendar.begin() + 1, calendar.end());
    bundle.controls.values.resize(nd, 5);
    double vix_state = 0.0, y2 = 1.5, y10 = 2.5, twi = 100.0;
    for (int t = 0; t < nd; ++t) {
        vix_state = 0.95 * vix_state + 0.05 * gauss();
        y2 = std::max(0.0, y2 + 0.02 * gauss());
        y10 = std::max(0.0, y10 + 0.02 * gauss());
        twi += 0.2 * gauss();
        bundle.controls.values(t, 0) = 20.0 * std::exp(vix_state);
        bundle.controls.values(t, 1) = spy(t);
        bundle.controls.values(t, 2) = y2;
        bundle.controls.values(t, 3) = y10;
        bundle.controls.values(t, 4) = twi;
    }
    return bundle;
}

std::vector<SynthEvent> evenly_spaced_events(const SynthConfig& config, int n_events, int spacing,
                                             int first_index,
                                             const std::vector<std::pair<BreakType, Tone>>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("evenly_spaced_events: empty cycle");
    std::vector<SynthEvent> out;
    int idx = first_index;
    for (int e = 0; e < n_events; ++e, idx += spacing) {
        if (idx >= config.n_days) break;
        const auto& [bt, tone] = cycle[static_cast<std::size_t>(e) % cycle.size()];
        out.push_back({idx, bt, tone});
    }
    return out;
}

// ---------------------------------------------------------------------------
// oracles
// ---------------------------------------------------------------------------

std::vector<double> dense_eig_oracle(const Eigen::MatrixXd& sym) {
    const int n = static_cast<int>(sym.rows());
    if (n == 0 || sym.cols() != n)
        throw std::invalid_argument("dense_eig_oracle: square matrix required");

    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            sym(i, j);

    const auto offnorm = [&] {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                         a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 200;
    int sweep = 0;
    while (offnorm() > 1e-12) {
        if (sweep++ >= kMaxSweeps)
            throw NonConvergence("oracle jacobi did not converge", sweep, offnorm());
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (apq == 0.0) continue;
                const double app = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
                const double aqq = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)];
                const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                for (int i = 0; i < n; ++i) {
                    const double aip = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                    const double aiq = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * aip - s * aiq;
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
                    const double aqj = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] = c * apj - s * aqj;
                    a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] = s * apj + c * aqj;
                }
            }
        }
    }

    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        values[static_cast<std::size_t>(i)] =
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    std::sort(values.begin(), values.end());
    return values;
}

std::vector<std::vector<int>> brute_force_cliques(const Adjacency& adj) {
    const int n = adj.n_vertices();
    if (n > 15) throw TooLarge("brute_force_cliques: at most 15 vertices");

    std::vector<std::uint32_t> nbr(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && adj.adj.test(i, j)) nbr[static_cast<std::size_t>(i)] |= 1u << j;

    std::vector<std::vector<int>> out;
    const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
    for (std::uint32_t s = 1; s <= all; ++s) {
        const int size = std::popcount(s);
        if (size < 3 || size > 12) continue;
        bool clique = true;
        for (std::uint32_t rest = s; rest && clique; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            if ((s & ~(1u << v) & ~nbr[static_cast<std::size_t>(v)]) != 0) clique = false;
        }
        if (!clique) continue;
        bool maximal = true;
        for (int v = 0; v < n && maximal; ++v)
            if (!(s >> v & 1u) && (s & nbr[static_cast<std::size_t>(v)]) == s) maximal = false;
        if (!maximal) continue;
        std::vector<int> members;
        for (std::uint32_t rest = s; rest; rest &= rest - 1)
            members.push_back(std::countr_zero(rest));
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::VectorXd normal_equation_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(x.rows());
    const int p = static_cast<int>(x.cols());

    // explicit X'X and X'y
    std::vector<std::vector<double>> a(static_cast<std::size_t>(p),
                                       std::vector<double>(static_cast<std::size_t>(p) + 1, 0.0));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            double s = 0;
            for (int r = 0; r < n; ++r) s += x(r, i) * x(r, j);
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
        double s = 0;
        for (int r = 0; r < n; ++r) s += x(r, i) * y(r);
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = s;
    }

    // Gaussian elimination with partial pivoting on the augmented system
    for (int col = 0; col < p; ++col) {
        int pivot = col;
        for (int r = col + 1; r < p; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
                pivot = r;
        if (std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-12)
            throw Singular("normal equations are singular at column " + std::to_string(col));
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < p; ++r) {
            if (r == col) continue;
            const double factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                                  a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c <= p; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }

    Eigen::VectorXd beta(p);
    for (int i = 0; i < p; ++i)
        beta(i) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] /
                  a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return beta;
}

OracleFit normal_equation_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(x.rows());
    const int p = static_cast<int>(x.cols());

    OracleFit fit;
    fit.coef = normal_equation_oracle(x, y);

    // invert X'X by eliminating against the identity, same pivoting route
    std::vector<std::vector<double>> a(
        static_cast<std::size_t>(p), std::vector<double>(2 * static_cast<std::size_t>(p), 0.0));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            double s = 0;
            for (int r = 0; r < n; ++r) s += x(r, i) * x(r, j);
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p + i)] = 1.0;
    }
    for (int col = 0; col < p; ++col) {
        int pivot = col;
        for (int r = col + 1; r < p; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
                pivot = r;
        if (std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-12)
            throw Singular("X'X singular");
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        const double d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int c = 0; c < 2 * p; ++c) a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] /= d;
        for (int r = 0; r < p; ++r) {
            if (r == col) continue;
            const double factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            for (int c = 0; c < 2 * p; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }

    double rss = 0, ybar = 0;
    for (int r = 0; r < n; ++r) ybar += y(r);
    ybar /= n;
    double tss = 0;
    for (int r = 0; r < n; ++r) {
        double fitv = 0;
        for (int j = 0; j < p; ++j) fitv += x(r, j) * fit.coef(j);
        const double e = y(r) - fitv;
        rss += e * e;
        tss += (y(r) - ybar) * (y(r) - ybar);
    }
    const double s2 = rss / (n - p);
    fit.se.resize(p);
    for (int i = 0; i < p; ++i)
        fit.se(i) = std::sqrt(s2 * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p + i)]);
    fit.r2 = tss > 0 ? 1.0 - rss / tss : 0.0;
    fit.f_stat = (p > 1 && fit.r2 < 1.0)
                     ? (fit.r2 / (p - 1)) / ((1.0 - fit.r2) / (n - p))
                     : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

}  // namespace netspect::synth
