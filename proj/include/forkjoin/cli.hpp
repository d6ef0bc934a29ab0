#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "forkjoin/model.hpp"
#include "forkjoin/simulate.hpp"

namespace forkjoin {

/// Cost-rate family h^(N) or b^(N): c, c*N, or c*N^alpha,
/// written as "const:c", "linear:c", "power:c:alpha".
struct RateRule {
    enum class Kind { Const, LinearN, PowerN };
    Kind kind = Kind::Const;
    double coeff = 1.0;
    double exponent = 1.0;

    double at(int n) const;
    std::string str() const;
    static RateRule parse(const std::string& text);  // throws std::invalid_argument
};

struct SolveOptions {
    std::vector<int> ns;
    double sigma = 1.0;
    double sigma_a = 0.0;
    RateRule h_rule{RateRule::Kind::Const, 1.0, 1.0};
    RateRule b_rule{RateRule::Kind::LinearN, 1.0, 1.0};
    std::string method = "exact";
    SimConfig sim;
};

struct RunRecord {
    int n = 0;
    double sigma = 0.0, sigma_a = 0.0;
    RateRule h_rule, b_rule;
    double holding = 0.0, backorder = 0.0, gamma = 0.0;
    std::string method;
    Solution solution{Policy{0.0, 1.0}, 0.0, 0.0, Method::ExactIndep, 0.0};
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

std::vector<RunRecord> cmd_solve(const SolveOptions& opts);

/// One checked (or informational) value of a reproduced table.
struct TableCell {
    std::string column;
    double computed = 0.0;
    double reference = 0.0;
    double stderr_value = 0.0;  // 0 for deterministic entries
    double tolerance = 0.0;
    bool relative = false;
    bool checked = false;  // informational columns carry no PASS/FAIL
    bool pass = true;
};

struct TableRow {
    int n = 0;
    double sigma_a = 0.0;
    std::vector<TableCell> cells;
};

struct TableReport {
    int table_id = 0;
    std::string title;
    std::vector<TableRow> rows;
    bool all_pass = true;
};

struct TableOptions {
    SimConfig sim;
    bool quick = false;  // deterministic columns only
};

/// Recompute one of the published tables (ids 2..9) and compare.
TableReport cmd_table(int table_id, const TableOptions& opts);

struct CltOptions {
    std::vector<int> ladder{10, 100, 1000};
    double sigma = 1.0;
    double sigma_a = 1.0;
    int reps = 2000;
    SimConfig sim;
    std::string dump_samples_path;  // write max-backlog samples of the largest n
};

struct CltRow {
    int n = 0;
    double sd_z = 0.0;           // empirical sd of the standardized max
    double target_sd = 0.0;      // sigma sigma_a / sqrt(2)
    double ks_z = 0.0;           // KS of z / target vs standard normal
    double ks_x = 0.0;           // KS of the coupled normal vs standard normal
    double coupling_mad = 0.0;   // mean |z - target * x_coupled|
    double truncated_share = 0.0;  // fraction of replications flagged truncated
    bool x_normal_pass = true;
};

struct CltReport {
    std::vector<CltRow> rows;
    double sd_band_lo = 0.59, sd_band_hi = 0.83;
    bool sd_band_pass = true;        // checked on n = 1000 rows
    bool coupling_decreasing = true; // along the ladder
    bool all_pass = true;
};

CltReport cmd_clt(const CltOptions& opts);

void print_records_human(std::ostream& out, const std::vector<RunRecord>& records);
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_records_json(std::ostream& out, const std::vector<RunRecord>& records);
void print_table_report(std::ostream& out, const TableReport& report);
void print_clt_report(std::ostream& out, const CltReport& report);

/// RFC-4180 reader/writer used for the record round-trip.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows);

/// Full command-line entry point; returns the process exit code
/// (0 all checks pass, 1 check failure, 2 usage error).
int run_cli(int argc, const char* const* argv);

}  // namespace forkjoin
