#pragma once

// Parameter sweeps and structured output for the command-line front end.
// Rows are evaluated by a bounded worker pool; output order follows the sweep
// index regardless of completion order, and identical spec + config produce
// identical bytes.

#include "cpshift/core.hpp"
#include "cpshift/numerics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cpshift::scan {

enum class Quantity {
    GroundShift,
    ExcitedShift,
    ResonantShift,
    TrappedModes,
    Completeness,
    Greens,
};

enum class SweepVar { Z, L, E, NL, NS, KPar };

enum class Normalization { Raw, TimesZ3, TimesZ4 };

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 2;
    bool log = false;
};

struct ScanSpec {
    Quantity quantity = Quantity::GroundShift;
    SweepVar sweep = SweepVar::Z;
    Range range;
    Stack stack;
    std::vector<Transition> transitions;
    double Z = 1.0;
    double k_par = 1.0; // trapped-mode scans
    double rho = 0.0;   // completeness scans
    Normalization normalization = Normalization::Raw;
    numerics::QuadratureConfig cfg;
    int threads = 0; // 0: hardware concurrency

    void validate() const;
};

enum class RowFlag { Ok, Unconverged, PoleNear, Failed };

struct ScanRow {
    double sweep_value = 0.0;
    double value_par = 0.0;
    double value_perp = 0.0;
    double value_total = 0.0;
    double abs_error = 0.0;
    RowFlag flag = RowFlag::Ok;
};

struct ScanTable {
    ScanSpec spec;
    std::vector<ScanRow> rows;
};

// Evaluates the requested quantity at every sweep point. Per-row failures are
// recorded in the row flag and never abort the sweep.
ScanTable run_scan(const ScanSpec& spec);

// CSV: '# key=value' header lines echoing the resolved spec, then
// '<sweep>,value_par,value_perp,value_total,abs_error,flag' rows with
// 17-significant-digit numbers.
void emit_csv(const ScanTable& table, std::ostream& os);

// JSON: {"spec": {...}, "rows": [...]}, UTF-8, newline-terminated.
void emit_json(const ScanTable& table, std::ostream& os);

std::string to_string(Quantity q);
std::string to_string(SweepVar v);
std::string to_string(Normalization n);
std::string to_string(RowFlag f);

} // namespace cpshift::scan
