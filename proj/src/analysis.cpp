#include "jcdiss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace jcdiss {

ComparisonReport compare_generators(const Liouvillian<double>& a, const Liouvillian<double>& b, double tolerance) {
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols() ||
        a.hilbert_dim() != b.hilbert_dim()) {
        std::ostringstream os;
        os << "compare: dimension mismatch (" << a.matrix.rows() << " vs " << b.matrix.rows() << ")";
        throw std::invalid_argument(os.str());
    }
    ComparisonReport rep;
    rep.kind_a = a.kind;
    rep.kind_b = b.kind;
    rep.tolerance = tolerance;
    const double scale = std::max(a.matrix.norm(), b.matrix.norm());
    const CMatrix<double> diff = a.matrix - b.matrix;
    rep.distance = scale > 0 ? diff.norm() / scale : 0.0;
    rep.coincident = rep.distance <= tolerance;

    const Eigen::Index d = a.hilbert_dim();
    const int n_max = a.params.n_max;
    std::vector<double> by_sector(static_cast<std::size_t>(2 * n_max + 1), 0.0);
    for (Eigen::Index i = 0; i < diff.rows(); ++i) {
        const int k = manifold_of(i % d) - manifold_of(i / d);
        auto& slot = by_sector[static_cast<std::size_t>(k + n_max)];
        slot = std::max(slot, diff.row(i).cwiseAbs().maxCoeff());
    }
    for (int k = -n_max; k <= n_max; ++k) rep.sectors.push_back({k, by_sector[static_cast<std::size_t>(k + n_max)]});
    return rep;
}

// ------------------------------------------------------------------ Rabi fit

std::optional<double> predicted_rabi_frequency(double Omega, double gamma) {
    const double r = gamma / (4 * Omega);
    if (!(r < 1)) return std::nullopt;
    return 2 * Omega * std::sqrt(1 - r * r);
}

namespace {

void check_series(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_rabi: time and value series differ in length");
    if (t.size() < 16) throw std::invalid_argument("fit_rabi: at least 16 samples are required");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw std::invalid_argument("fit_rabi: non-finite sample");
        if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("fit_rabi: times must increase strictly");
    }
}

double periodogram(const std::vector<double>& t, const std::vector<double>& y, double nu) {
    std::complex<double> acc(0);
    for (std::size_t i = 0; i < t.size(); ++i) acc += y[i] * std::polar(1.0, -nu * t[i]);
    return std::norm(acc);
}

struct Projection {
    Eigen::Vector4d coefficients;  // a_cos, a_sin, baseline, offset
    Eigen::VectorXd residual;
};

// Linear parameters solved exactly for a fixed (nu, kappa).
Projection project(const Eigen::VectorXd& t, const Eigen::VectorXd& y, double nu, double kappa) {
    const Eigen::Index n = t.size();
    Eigen::MatrixXd Phi(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double e = std::exp(-kappa * t(i));
        Phi(i, 0) = e * std::cos(nu * t(i));
        Phi(i, 1) = e * std::sin(nu * t(i));
        Phi(i, 2) = e;
        Phi(i, 3) = 1.0;
    }
    Projection p;
    p.coefficients = Phi.colPivHouseholderQr().solve(y);
    p.residual = y - Phi * p.coefficients;
    return p;
}

}  // namespace

RabiGuess rabi_initial_guess(const std::vector<double>& t, const std::vector<double>& y) {
    check_series(t, y);
    const double span = t.back() - t.front();

    // Thin to at most 1024 samples for the spectral scan and remove a cubic trend.
    const std::size_t stride = std::max<std::size_t>(1, (t.size() + 1023) / 1024);
    std::vector<double> ts;
    std::vector<double> raw;
    for (std::size_t i = 0; i < t.size(); i += stride) {
        ts.push_back(t[i] - t.front());
        raw.push_back(y[i]);
    }
    const Eigen::Index m = static_cast<Eigen::Index>(ts.size());
    Eigen::MatrixXd V(m, 4);
    Eigen::VectorXd rv(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double x = 2 * ts[static_cast<std::size_t>(i)] / span - 1;
        V.row(i) << 1.0, x, x * x, x * x * x;
        rv(i) = raw[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd detrended = rv - V * V.colPivHouseholderQr().solve(rv);
    const double scale = rv.cwiseAbs().maxCoeff();
    if (detrended.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale)) {
        throw RabiFitError("fit_rabi: series has no oscillatory component (initial guess: frequency 0, decay rate 0)",
                           RabiGuess{});
    }
    const std::vector<double> ys(detrended.data(), detrended.data() + m);

    // Spectrum of the derivative (power weighted by nu^2) keeps any leftover slow trend from winning.
    const double step = span / double(m - 1);
    const double nyquist = std::numbers::pi / step;
    const double coarse = 2 * std::numbers::pi / span / 4;
    double best_nu = 0, best_power = -1;
    for (double nu = 2 * std::numbers::pi / span; nu <= nyquist; nu += coarse) {
        const double pw = nu * nu * periodogram(ts, ys, nu);
        if (pw > best_power) best_power = pw, best_nu = nu;
    }
    const double fine = coarse / 64;
    const double centre = best_nu;
    for (double nu = centre - coarse; nu <= centre + coarse; nu += fine) {
        if (nu <= 0) continue;
        const double pw = nu * nu * periodogram(ts, ys, nu);
        if (pw > best_power) best_power = pw, best_nu = nu;
    }

    RabiGuess g;
    g.frequency = best_nu;

    // Half peak-to-peak per period, regressed in log space.
    const double period = 2 * std::numbers::pi / best_nu;
    std::vector<double> centres, logs;
    double first_amp = 0;
    std::size_t i = 0;
    while (i < t.size()) {
        const double start = t[i];
        double lo = y[i], hi = y[i];
        std::size_t j = i;
        while (j < t.size() && t[j] < start + period) {
            lo = std::min(lo, y[j]);
            hi = std::max(hi, y[j]);
            ++j;
        }
        if (j == t.size() && t.back() - start < 0.999 * period) break;
        const double amp = 0.5 * (hi - lo);
        if (first_amp == 0) first_amp = amp;
        if (amp > 1e-8 * first_amp && amp > 0) {
            centres.push_back(start + 0.5 * period);
            logs.push_back(std::log(amp));
        }
        i = j;
    }
    if (centres.size() >= 2) {
        const double n = double(centres.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < centres.size(); ++k) {
            sx += centres[k];
            sy += logs[k];
            sxx += centres[k] * centres[k];
            sxy += centres[k] * logs[k];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        g.decay_rate = std::max(0.0, -slope);
    }
    return g;
}

RabiFit fit_rabi(const std::vector<double>& t_in, const std::vector<double>& y_in) {
    const RabiGuess guess = rabi_initial_guess(t_in, y_in);
    const Eigen::Index n = static_cast<Eigen::Index>(t_in.size());
    Eigen::VectorXd t(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i) = t_in[static_cast<std::size_t>(i)];
        y(i) = y_in[static_cast<std::size_t>(i)];
    }

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "fit_rabi: " << why << " (initial guess: frequency " << guess.frequency << ", decay rate "
           << guess.decay_rate << ")";
        throw RabiFitError(os.str(), guess);
    };

    // Levenberg-Marquardt over (nu, kappa) with the linear coefficients projected out.
    Eigen::Vector2d theta(guess.frequency, guess.decay_rate);
    Projection cur = project(t, y, theta(0), theta(1));
    double cost = cur.residual.squaredNorm();
    const double floor = 1e-28 * std::max(1.0, y.squaredNorm());
    double lambda = 1e-3;
    int iter = 0;
    bool converged = cost <= floor;
    for (; iter < 300 && !converged; ++iter) {
        Eigen::MatrixXd J(n, 2);
        const double h_nu = 1e-7 * std::max(std::abs(theta(0)), 1e-6);
        const double h_ka = 1e-7 * std::max(std::abs(theta(1)), 1e-3 * std::abs(theta(0)));
        J.col(0) = (project(t, y, theta(0) + h_nu, theta(1)).residual - project(t, y, theta(0) - h_nu, theta(1)).residual) /
                   (2 * h_nu);
        J.col(1) = (project(t, y, theta(0), theta(1) + h_ka).residual - project(t, y, theta(0), theta(1) - h_ka).residual) /
                   (2 * h_ka);
        const Eigen::Matrix2d JtJ = J.transpose() * J;
        const Eigen::Vector2d g = J.transpose() * cur.residual;

        bool accepted = false;
        for (int tries = 0; tries < 30 && !accepted; ++tries) {
            Eigen::Matrix2d A = JtJ;
            A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-300);
            const Eigen::Vector2d delta = A.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10;
                continue;
            }
            const Eigen::Vector2d trial = theta + delta;
            Projection next = project(t, y, trial(0), trial(1));
            const double trial_cost = next.residual.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const double rel_step = (delta.cwiseAbs().array() / (theta.cwiseAbs().array() + 1e-12)).maxCoeff();
                const double gain = cost - trial_cost;
                theta = trial;
                cur = std::move(next);
                cost = trial_cost;
                lambda = std::max(lambda / 3, 1e-12);
                accepted = true;
                if (rel_step <= 1e-13 || gain <= 1e-15 * cost || cost <= floor) converged = true;
            } else {
                lambda *= 4;
            }
        }
        if (!accepted) converged = true;  // no descent direction left: at a minimum to working precision
    }
    if (!converged) fail("no convergence after " + std::to_string(iter) + " iterations");
    if (!(theta(0) > 0) || !theta.allFinite()) fail("fitted frequency is not positive");

    RabiFit f;
    f.frequency = theta(0);
    f.decay_rate = theta(1);
    f.a_cos = cur.coefficients(0);
    f.a_sin = cur.coefficients(1);
    f.baseline = cur.coefficients(2);
    f.offset = cur.coefficients(3);
    f.amplitude = std::hypot(f.a_cos, f.a_sin);
    f.phase = std::atan2(-f.a_sin, f.a_cos);
    f.residual_norm = std::sqrt(cost);
    f.rms_residual = std::sqrt(cost / double(n));
    f.iterations = iter;
    return f;
}

RabiFit fit_rabi(const Trajectory<double>& traj, const std::string& observable) {
    const auto it = traj.series.find(observable);
    if (it == traj.series.end()) throw std::invalid_argument("fit_rabi: trajectory has no series '" + observable + "'");
    return fit_rabi(traj.times, it->second);
}

RabiFit fit_rabi(const Trajectory<double>& traj, const std::string& observable, double Omega, double gamma) {
    RabiFit f = fit_rabi(traj, observable);
    f.predicted_frequency = predicted_rabi_frequency(Omega, gamma);
    if (f.predicted_frequency) f.relative_error = std::abs(f.frequency - *f.predicted_frequency) / *f.predicted_frequency;
    return f;
}

// ------------------------------------------------------------------ rate spread

double relative_spread(const std::vector<double>& rates) {
    if (rates.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
    if (*hi == 0) return 0.0;
    if (*lo == 0) return std::numeric_limits<double>::infinity();
    return *hi / *lo - 1.0;
}

RateSpreadReport rate_spread(const SystemParams<double>& p, const BathModel& bath) {
    validate_for_system(bath, p);
    const auto table = gamma_table(p, bath);
    RateSpreadReport rep;
    std::vector<double> down, up;
    double w_lo = std::numeric_limits<double>::infinity(), w_hi = -w_lo;
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
        RateEntry e{table.labels[i], bohr_frequency(table.labels[i], p).value, 2 * table.down[i].real(),
                    2 * table.up[i].real()};
        down.push_back(e.downward_rate);
        up.push_back(e.upward_rate);
        w_lo = std::min(w_lo, e.bohr_frequency);
        w_hi = std::max(w_hi, e.bohr_frequency);
        rep.table.push_back(std::move(e));
    }
    rep.downward_spread = relative_spread(down);
    rep.upward_spread = relative_spread(up);
    const double half_width = (std::sqrt(double(p.n_max)) + std::sqrt(double(p.n_max - 1))) * p.Omega;
    rep.band_low = p.omega0 - half_width;
    rep.band_high = p.omega0 + half_width;
    rep.band_edges_confirmed = std::abs(w_lo - rep.band_low) <= 1e-12 * p.omega0 &&
                               std::abs(w_hi - rep.band_high) <= 1e-12 * p.omega0;
    return rep;
}

// ------------------------------------------------------------------ timescales

namespace {

TimescaleCheck make_check(const SystemParams<double>& p, double gamma_max, double threshold) {
    TimescaleCheck c;
    c.gamma_max = gamma_max;
    c.threshold = threshold;
    const double inf = std::numeric_limits<double>::infinity();
    c.strong_coupling_ratio = gamma_max > 0 ? 2 * p.Omega / gamma_max : inf;
    c.optical_ratio = gamma_max > 0 ? p.omega0 / gamma_max : inf;
    c.strong_coupling_holds = c.strong_coupling_ratio >= threshold;
    c.optical_holds = c.optical_ratio >= threshold;
    c.secular_rwa_valid = c.strong_coupling_holds && c.optical_holds;
    c.quasi_rwa_valid = c.optical_holds;
    c.phenomenological_valid = c.optical_holds;
    return c;
}

}  // namespace

TimescaleCheck timescale_check(const SystemParams<double>& p, double gamma, double threshold) {
    if (!(gamma >= 0)) throw InvalidParameters("timescale_check: gamma must be >= 0");
    return make_check(p, gamma, threshold);
}

TimescaleCheck timescale_check(const SystemParams<double>& p, const BathModel& bath, double threshold) {
    const auto rep = rate_spread(p, bath);
    double g = 0;
    for (const auto& e : rep.table) g = std::max({g, e.downward_rate, e.upward_rate});
    return make_check(p, g, threshold);
}

// ------------------------------------------------------------------ surface

std::vector<double> linear_grid(double lo, double hi, int points) {
    std::vector<double> out;
    if (points <= 0) return out;
    if (points == 1) return {lo};
    for (int i = 0; i < points; ++i) out.push_back(i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1));
    return out;
}

std::vector<double> default_surface_temperatures() { return linear_grid(0.01, 0.5, 50); }
std::vector<double> default_surface_offsets() { return linear_grid(0.0, 0.5, 51); }

Surface delta_n_surface(double omega, const std::vector<double>& temperatures, const std::vector<double>& offsets) {
    if (!(omega > 0) || !std::isfinite(omega)) throw InvalidParameters("delta_n_surface: omega must be > 0");
    for (double T : temperatures)
        if (!(T >= 0) || !std::isfinite(T)) throw InvalidParameters("delta_n_surface: temperatures must be >= 0");
    for (double dw : offsets)
        if (!(dw >= 0 && dw < 1)) throw InvalidParameters("delta_n_surface: offsets must lie in [0, 1) units of omega");

    Surface s{temperatures, offsets, {}};
    for (double T : temperatures) {
        std::vector<double> row;
        const double n0 = bose_occupation(omega, T * omega);
        for (double dw : offsets) row.push_back(n0 - bose_occupation(omega * (1 + dw), T * omega));
        s.values.push_back(std::move(row));
    }
    return s;
}

}  // namespace jcdiss
