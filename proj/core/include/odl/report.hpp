#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "odl/ensemble.hpp"
#include "odl/theory.hpp"

namespace odl {

/// Tolerance bundle for the regime checks. Mean-style checks use standard
/// error multiples; spread-style checks use relative deviations.
struct Tolerances {
    double mean_se = 4.0;
    double variance_rel = 0.10;
    double asclt_sup_sub = 0.05;
    double asclt_sup_crit = 0.10;
    double mavg_m1_rel = 0.10;
    double mavg_m2_rel = 0.15;
    double kernel_rel = 0.10;
    double cn_var_rel = 0.10;
    double cn_var_rel_crit = 0.15;
    double coupling_corr_min = 0.95;
    double vn_rel = 0.01;
    double w_second_rel = 0.10;
    double wfluct_rel = 0.15;
    double lil_max_ratio = 1.5;
};

struct CheckRow {
    std::string name;
    std::string tag;          // which limit statement the row verifies
    double theoretical = 0.0;
    double empirical = 0.0;
    double tolerance = 0.0;
    std::string tolerance_kind;  // "rel", "se", "abs", "min"
    double standard_error = 0.0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    ModelParams params;
    Regime regime = Regime::subcritical;
    std::vector<CheckRow> checks;
    bool nothing_verified = false;
    bool near_critical_warning = false;
    bool degenerate_warning = false;

    bool all_pass() const;
    std::string to_json() const;
    void write_csv(std::ostream& os) const;
};

/// One report row per applicable limit statement, comparing ensemble
/// statistics to the regime's theoretical values. Both inputs must have been
/// built from the same parameters.
VerificationReport compare_to_theory(const EnsembleSummary& summary, const TheorySummary& theory,
                                     const Tolerances& tol);

} // namespace odl
