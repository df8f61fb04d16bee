#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrdtest/changepoint.hpp"
#include "lrdtest/montecarlo.hpp"

namespace lrdtest::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kParseError = 2,
    kDegenerateData = 3,
    kBadFlags = 4,
};

class InputParseError : public std::runtime_error {
public:
    InputParseError(const std::string& source, std::size_t line, const std::string& why);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// One real per line, or a single-column CSV whose first non-blank line may be
/// a header. Blank lines are skipped; values may be double-quoted.
std::vector<double> parse_series(std::istream& in, const std::string& source = "<input>");

nlohmann::json report_to_json(const TestReport& r);

// One row of a size/power table: the CUSUM and Wilcoxon rates for one design.
struct TableRow {
    int table = 0;
    std::string measure;  // "size" or "power"
    std::size_t n = 0;
    double theta = 0.0;  // AR(1) designs only
    double delta = 0.0;
    double d = 0.0;  // fGn designs only
    bool outliers = false;
    std::string cusum_variance;
    std::optional<McTestResult> cusum;
    std::optional<McTestResult> wilcoxon;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

extern const std::vector<std::string> kTableColumns;

std::string csv_field(const std::string& s);
std::string table_row_csv(const TableRow& row);

// Size/power table grids, restricted to n <= max_n.
struct TableOptions {
    std::size_t reps = 10000;
    std::size_t max_n = 5000;
    std::uint64_t seed = 20180404;
    unsigned workers = 0;
};
std::vector<TableRow> run_table(int table, const TableOptions& opt);

// Seed of the cell with index `cell` of table `table`.
std::uint64_t cell_seed(std::uint64_t base, int table, std::size_t cell);

struct RhoSample {
    double acf = 0.0;
    double robust = 0.0;
};
// AR(1) rho = 0.4 with outliers, the sample and the robust lag-1 estimates.
std::vector<RhoSample> figure_rho_samples(std::size_t n, double rho, std::size_t reps,
                                          std::uint64_t seed, unsigned workers);

/// Entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrdtest::cli
