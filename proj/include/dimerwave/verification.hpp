#pragma once

#include "dimerwave/jost.hpp"
#include "dimerwave/solitary.hpp"

#include <json.hpp>

#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace dimerwave {

enum class Level { quick, full };

struct CheckReport {
    int id = 0;
    std::string name;
    bool pass = false;
    nlohmann::json measured = nlohmann::json::object();
    std::string target;
    std::string summary; ///< one-line measured values
    std::string error;   ///< set when the check threw
    double runtime = 0.0;
};

/// Admissible mass ratios derived from an M_c scan.
struct AdmissiblePoints {
    Vec midpoints; ///< geometric midpoints of intervals with both ends resolved
    McInterval top; ///< the interval reaching the largest scanned mu
    bool has_top = false;
    /// n log-spaced points strictly inside top, ends trimmed by 2 % in log mu.
    Vec top_points(int n) const;
};

/**
 * Shared lazily computed inputs: sigma_c and the M_c scan. Checks that need them share one
 * copy so the suite does each expensive step once.
 */
class SuiteContext {
public:
    SuiteContext(double c, Level level);
    double c() const { return c_; }
    Level level() const { return level_; }
    bool quick() const { return level_ == Level::quick; }
    const SolitaryWave& base();
    const McScan& scan();
    const AdmissiblePoints& admissible();
    /// gamma/kappa data on 40 log-spaced mu in [1e-4, 0.1] (quick: 16).
    const std::vector<McPoint>& sweep();
    /// Scan grid: log-spaced over [8e-4, 0.1], 61 points (quick: [1.5e-3, 0.1], 41 points).
    Vec scan_grid() const;

private:
    double c_;
    Level level_;
    std::optional<SolitaryWave> base_;
    std::optional<McScan> scan_;
    std::exception_ptr scan_error_;
    std::optional<AdmissiblePoints> adm_;
    std::optional<std::vector<McPoint>> sweep_;
};

CheckReport check_operator_algebra(SuiteContext& ctx);
/// amplitude_scale != 1 corrupts sigma_c before the residual check.
CheckReport check_solitary(SuiteContext& ctx, double amplitude_scale = 1.0);
CheckReport check_refined_core(SuiteContext& ctx);
CheckReport check_dispersion(SuiteContext& ctx);
CheckReport check_periodic(SuiteContext& ctx);
CheckReport check_jost(SuiteContext& ctx);
CheckReport check_kappa(SuiteContext& ctx);
CheckReport check_mc_structure(SuiteContext& ctx);
CheckReport check_inversion_scaling(SuiteContext& ctx);
CheckReport check_nanopteron(SuiteContext& ctx);
CheckReport check_dynamics(SuiteContext& ctx);

/// All eleven checks in order; failures and exceptions are recorded, never propagated.
std::vector<CheckReport> run_suite(Level level, double c = 1.45);

nlohmann::json report_json(const std::vector<CheckReport>& reports);
/// One line per check: "[PASS] 3 refined core: ...".
std::string report_table(const std::vector<CheckReport>& reports);

}  // namespace dimerwave
