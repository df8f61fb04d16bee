#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lrdtest/kernels.hpp"
#include "lrdtest/limit_dist.hpp"

namespace lrdtest::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string fmt_pct(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * rate);
    return buf;
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

VarianceKind cusum_kind(const std::string& name) {
    return name == "bartlett" ? VarianceKind::Bartlett : VarianceKind::CarlsteinC;
}

RhoSource rho_source_of(const std::string& name) {
    return name == "robust" ? RhoSource::RobustQ : RhoSource::SampleAcf;
}

nlohmann::json variance_json(const VarianceConfig& v) {
    nlohmann::json j{{"kind", to_string(v.kind)}};
    if (v.kind == VarianceKind::Bartlett) {
        j["bandwidth_c"] = v.bandwidth_c;
    } else {
        j["block_rule"] = "carlstein-ar1";
        j["rho_source"] = to_string(v.rho_source);
        j["fixed_block"] = v.fixed_block ? nlohmann::json(*v.fixed_block) : nlohmann::json();
    }
    return j;
}

nlohmann::json base_manifest(const std::string& command) {
    return {{"command", command},
            {"version", kVersion},
            {"kernels", kernels::active().name}};
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
}

std::string csv_with_manifest(const nlohmann::json& manifest, const std::string& body) {
    return "# " + manifest.dump() + "\n" + body;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string s;
    for (std::size_t i = 0; i < kTableColumns.size(); ++i) {
        if (i) s += ',';
        s += kTableColumns[i];
    }
    s += '\n';
    for (const auto& r : rows) s += table_row_csv(r) + '\n';
    return s;
}

nlohmann::json result_json(const McTestResult& r) {
    return {{"procedure", to_string(r.spec.procedure)},
            {"variance", variance_json(r.spec.variance)},
            {"rejections", r.rejections},
            {"failures", r.failures},
            {"replications_used", r.replications_used},
            {"rejection_rate", r.rejection_rate}};
}

TableRow cell_row(int table, const std::string& measure, const McConfig& cfg, const McCell& cell,
                  const std::string& cusum_variance) {
    TableRow row;
    row.table = table;
    row.measure = measure;
    row.outliers = cfg.outliers;
    row.cusum_variance = cusum_variance;
    if (const auto* a = std::get_if<Ar1Config>(&cfg.dgp)) {
        row.n = a->n;
        row.theta = a->theta;
        row.delta = a->delta;
    } else {
        const auto& f = std::get<FgnConfig>(cfg.dgp);
        row.n = f.n;
        row.d = f.d;
    }
    for (const auto& t : cell.tests) {
        if (t.spec.procedure == Procedure::Cusum) row.cusum = t; else row.wilcoxon = t;
    }
    row.replications = cell.replications;
    row.seed = cfg.seed;
    return row;
}

const std::vector<std::size_t> kSampleSizes{200, 500, 1000, 2000, 5000};

struct GridCell {
    Dgp dgp;
    bool outliers;
    std::string measure;
};

std::vector<GridCell> table_grid(int table, std::size_t max_n) {
    std::vector<GridCell> cells;
    auto ar1 = [](std::size_t n, double theta, double delta) {
        Ar1Config a;
        a.rho = 0.4;
        a.n = n;
        a.theta = theta;
        a.delta = delta;
        return a;
    };
    auto fgn = [](std::size_t n, double d) {
        FgnConfig f;
        f.n = n;
        f.d = d;
        return f;
    };
    switch (table) {
        case 1:
            for (std::size_t n : {500, 1000, 2000, 5000}) {
                if (n > max_n) continue;
                cells.push_back({ar1(n, 0.5, 1.0), false, "size"});
                cells.push_back({fgn(n, 0.4), false, "power"});
            }
            break;
        case 2:
            for (double delta : {1.0, 2.0})
                for (double theta : {0.25, 0.5, 0.75})
                    for (std::size_t n : kSampleSizes)
                        if (n <= max_n) cells.push_back({ar1(n, theta, delta), false, "size"});
            for (double delta : {0.0, 0.5})
                for (std::size_t n : kSampleSizes)
                    if (n <= max_n) cells.push_back({ar1(n, 0.5, delta), false, "size"});
            break;
        case 3:
            for (double delta : {1.0, 2.0})
                for (std::size_t n : kSampleSizes)
                    if (n <= max_n) cells.push_back({ar1(n, 0.5, delta), true, "size"});
            break;
        case 4:
        case 5:
            for (double d : {0.1, 0.2, 0.3, 0.4})
                for (std::size_t n : kSampleSizes)
                    if (n <= max_n) cells.push_back({fgn(n, d), table == 5, "power"});
            break;
        default:
            throw std::invalid_argument("unknown table " + std::to_string(table));
    }
    return cells;
}

// ---- subcommands -----------------------------------------------------------

struct CommonFlags {
    double alpha = 0.05;
    std::string test = "both";
    std::string variance = "carlstein";
    std::string rho_source;  // empty: acf, or robust with outliers
    std::optional<std::size_t> block;
    double bandwidth_c = 15.0;
    std::string out;
    std::string format;
    std::string isa;
};

void add_common(CLI::App* app, CommonFlags& f, bool with_format_default_json) {
    app->add_option("--alpha", f.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    app->add_option("--test", f.test, "Procedure to run")
        ->check(CLI::IsMember({"wilcoxon", "cusum", "both"}));
    app->add_option("--variance", f.variance, "Long-run variance for the CUSUM test")
        ->check(CLI::IsMember({"bartlett", "carlstein"}));
    app->add_option("--rho-source", f.rho_source, "Lag-1 autocorrelation for the block length")
        ->check(CLI::IsMember({"acf", "robust"}));
    app->add_option("--block", f.block, "Fixed block length")->check(CLI::PositiveNumber);
    app->add_option("--bandwidth-c", f.bandwidth_c, "Bartlett bandwidth constant C in C*log10(n)")
        ->check(CLI::PositiveNumber);
    app->add_option("--out", f.out, "Output path ('-' for stdout)");
    f.format = with_format_default_json ? "json" : "csv";
    app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--isa", f.isa, "Force a kernel variant")
        ->check(CLI::IsMember({"scalar", "avx2", "neon"}));
}

std::vector<TestSpec> specs_from(const CommonFlags& f, bool outliers) {
    const RhoSource rho = f.rho_source.empty() ? (outliers ? RhoSource::RobustQ : RhoSource::SampleAcf)
                                               : rho_source_of(f.rho_source);
    std::vector<TestSpec> specs;
    if (f.test == "cusum" || f.test == "both") {
        TestSpec c{Procedure::Cusum, {}};
        c.variance.kind = cusum_kind(f.variance);
        c.variance.rho_source = rho;
        c.variance.bandwidth_c = f.bandwidth_c;
        c.variance.fixed_block = f.block;
        specs.push_back(c);
    }
    if (f.test == "wilcoxon" || f.test == "both") {
        TestSpec w{Procedure::Wilcoxon, {}};
        w.variance.kind = VarianceKind::CarlsteinW;
        w.variance.rho_source = rho;
        w.variance.fixed_block = f.block;
        specs.push_back(w);
    }
    return specs;
}

void apply_isa(const std::string& isa) {
    if (isa.empty()) return;
    if (!kernels::select(*kernels::parse_isa(isa)))
        throw CLI::ValidationError("--isa", isa + " kernels are not available on this machine");
}

std::string report_csv_row(const TestReport& r) {
    return std::string(to_string(r.procedure)) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.k_hat) + ',' + fmt_g(r.t1) + ',' + fmt_g(r.t2) + ',' + fmt_g(r.sigma1) +
           ',' + fmt_g(r.sigma2) + ',' + std::to_string(r.block1) + ',' + std::to_string(r.block2) +
           ',' + fmt_g(r.statistic) + ',' + fmt_g(r.alpha) + ',' + fmt_g(r.critical_value) + ',' +
           (r.reject ? "true" : "false");
}

int cmd_test(const std::string& input, const CommonFlags& f, std::ostream& out) {
    std::vector<double> data;
    {
        std::ifstream in(input);
        if (!in) throw InputParseError(input, 0, "cannot open file");
        data = parse_series(in, input);
    }
    const auto specs = specs_from(f, false);

    nlohmann::json manifest = base_manifest("test");
    manifest["input"] = input;
    manifest["n"] = data.size();
    manifest["alpha"] = f.alpha;
    manifest["format"] = f.format;
    manifest["output"] = f.out.empty() ? "-" : f.out;
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& s : specs)
        tests.push_back({{"procedure", to_string(s.procedure)}, {"variance", variance_json(s.variance)}});
    manifest["tests"] = tests;

    // a degenerate test still reports its split estimate next to the error
    nlohmann::json reports = nlohmann::json::array();
    std::string csv =
        "procedure,n,k_hat,t1,t2,sigma1,sigma2,block1,block2,statistic,alpha,critical_value,reject,"
        "error\n";
    std::string first_error;
    for (const auto& s : specs) {
        try {
            const TestReport r = s.procedure == Procedure::Wilcoxon ? test_wilcoxon(data, f.alpha, s.variance)
                                                                    : test_cusum(data, f.alpha, s.variance);
            reports.push_back(report_to_json(r));
            csv += report_csv_row(r) + ",\n";
        } catch (const DegenerateDataError& e) {
            if (first_error.empty()) first_error = e.what();
            const std::size_t k_hat = s.procedure == Procedure::Wilcoxon ? estimate_changepoint_wilcoxon(data)
                                                                         : estimate_changepoint_cusum(data);
            reports.push_back({{"procedure", to_string(s.procedure)},
                               {"n", data.size()},
                               {"k_hat", k_hat},
                               {"alpha", f.alpha},
                               {"error", e.what()}});
            csv += std::string(to_string(s.procedure)) + ',' + std::to_string(data.size()) + ',' +
                   std::to_string(k_hat) + ",,,,,,,," + fmt_g(f.alpha) + ",,," + csv_field(e.what()) + '\n';
        }
    }

    if (f.format == "json") {
        nlohmann::json j{{"manifest", manifest}, {"reports", reports}};
        emit(f.out, out, j.dump(2) + "\n");
    } else {
        emit(f.out, out, csv_with_manifest(manifest, csv));
    }
    if (!first_error.empty()) throw DegenerateDataError(first_error);
    return kOk;
}

struct McFlags {
    std::size_t n = 1000;
    double theta = 0.5;
    double delta = 1.0;
    double rho = 0.4;
    double d = 0.4;
    bool outliers = false;
    std::size_t reps = 10000;
    std::uint64_t seed = 20180404;
    unsigned workers = 0;
};

int cmd_mc(bool power, const McFlags& m, const CommonFlags& f, std::ostream& out) {
    McConfig cfg;
    if (power) {
        FgnConfig fc;
        fc.n = m.n;
        fc.d = m.d;
        cfg.dgp = fc;
    } else {
        Ar1Config a;
        a.n = m.n;
        a.theta = m.theta;
        a.delta = m.delta;
        a.rho = m.rho;
        cfg.dgp = a;
    }
    cfg.outliers = m.outliers;
    cfg.replications = m.reps;
    cfg.alpha = f.alpha;
    cfg.seed = m.seed;
    cfg.workers = m.workers;
    cfg.tests = specs_from(f, m.outliers);
    cfg.validate();

    nlohmann::json manifest = base_manifest(power ? "power" : "size");
    if (power) {
        manifest["dgp"] = {{"model", "fgn"}, {"n", m.n}, {"d", m.d}};
    } else {
        manifest["dgp"] = {{"model", "ar1"}, {"n", m.n}, {"theta", m.theta}, {"delta", m.delta},
                           {"rho", m.rho}, {"mu", 0.0}};
    }
    manifest["outliers"] = m.outliers;
    manifest["replications"] = m.reps;
    manifest["alpha"] = f.alpha;
    manifest["seed"] = m.seed;
    manifest["format"] = f.format;
    manifest["output"] = f.out.empty() ? "-" : f.out;
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& s : cfg.tests)
        tests.push_back({{"procedure", to_string(s.procedure)}, {"variance", variance_json(s.variance)}});
    manifest["tests"] = tests;

    const McCell cell = run_mc(cfg);
    if (f.format == "json") {
        nlohmann::json j{{"manifest", manifest}, {"replications", cell.replications},
                         {"results", nlohmann::json::array()}};
        for (const auto& t : cell.tests) j["results"].push_back(result_json(t));
        emit(f.out, out, j.dump(2) + "\n");
    } else {
        const auto row = cell_row(0, power ? "power" : "size", cfg, cell,
                                  f.test == "wilcoxon" ? "" : f.variance);
        emit(f.out, out, csv_with_manifest(manifest, table_csv({row})));
    }
    return kOk;
}

std::string figure_rho_csv(const std::vector<RhoSample>& samples) {
    std::string s = "replication,rho_acf,rho_robust\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        s += std::to_string(i + 1) + ',' + fmt_g(samples[i].acf) + ',' + fmt_g(samples[i].robust) + '\n';
    return s;
}

nlohmann::json figure_rho_manifest(std::size_t n, double rho, std::size_t reps, std::uint64_t seed) {
    auto m = base_manifest("figure-rho");
    m["dgp"] = {{"model", "ar1"}, {"n", n}, {"rho", rho}, {"theta", 0.5}, {"delta", 0.0}};
    m["outliers"] = true;
    m["replications"] = reps;
    m["seed"] = seed;
    m["format"] = "csv";
    return m;
}

int cmd_tables(const std::string& which, const TableOptions& opt, const std::string& dir,
               std::ostream& out) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> ids;
    if (which == "all") ids = {"1", "2", "3", "4", "5", "figure-rho"};
    else ids = {which};

    for (const auto& id : ids) {
        std::string name, body;
        nlohmann::json manifest;
        if (id == "figure-rho") {
            name = "figure_rho";
            const auto samples = figure_rho_samples(500, 0.4, opt.reps, opt.seed, opt.workers);
            manifest = figure_rho_manifest(500, 0.4, opt.reps, opt.seed);
            body = figure_rho_csv(samples);
        } else {
            const int t = std::stoi(id);
            name = "table" + id;
            manifest = base_manifest("tables");
            manifest["table"] = t;
            manifest["replications"] = opt.reps;
            manifest["max_n"] = opt.max_n;
            manifest["seed"] = opt.seed;
            manifest["alpha"] = 0.05;
            manifest["format"] = "csv";
            body = table_csv(run_table(t, opt));
        }
        const auto csv_path = (std::filesystem::path(dir) / (name + ".csv")).string();
        manifest["output"] = csv_path;
        emit(csv_path, out, csv_with_manifest(manifest, body));
        emit((std::filesystem::path(dir) / (name + ".manifest.json")).string(), out,
             manifest.dump(2) + "\n");
        out << "wrote " << csv_path << "\n";
    }
    return kOk;
}

}  // namespace

InputParseError::InputParseError(const std::string& source, std::size_t line, const std::string& why)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + why),
      line_(line) {}

std::vector<double> parse_series(std::istream& in, const std::string& source) {
    std::vector<double> values;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_first = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string field = trim(raw);
        if (field.empty()) continue;
        if (line_no == 1 && field.rfind("\xEF\xBB\xBF", 0) == 0) field = trim(field.substr(3));
        const bool first = !seen_first;
        seen_first = true;
        if (field.find(',') != std::string::npos)
            throw InputParseError(source, line_no, "expected a single column");
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"')
            field = trim(field.substr(1, field.size() - 2));
        const auto v = parse_number(field);
        if (!v) {
            if (first) continue;  // header
            throw InputParseError(source, line_no, "not a number: '" + field + "'");
        }
        if (!std::isfinite(*v))
            throw InputParseError(source, line_no, "non-finite value '" + field + "'");
        values.push_back(*v);
    }
    if (values.empty()) throw InputParseError(source, 0, "no observations");
    return values;
}

nlohmann::json report_to_json(const TestReport& r) {
    return {{"procedure", to_string(r.procedure)},
            {"n", r.n},
            {"k_hat", r.k_hat},
            {"t1", r.t1},
            {"t2", r.t2},
            {"sigma1", r.sigma1},
            {"sigma2", r.sigma2},
            {"block1", r.block1},
            {"block2", r.block2},
            {"statistic", r.statistic},
            {"alpha", r.alpha},
            {"critical_value", r.critical_value},
            {"p_value", limit_pvalue(r.statistic)},
            {"reject", r.reject}};
}

const std::vector<std::string> kTableColumns{
    "table",          "measure",          "n",
    "theta",          "delta",            "d",
    "outliers",       "cusum_variance",   "cusum_pct",
    "wilcoxon_pct",   "cusum_rejections", "wilcoxon_rejections",
    "cusum_failures", "wilcoxon_failures", "replications",
    "seed"};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string table_row_csv(const TableRow& r) {
    const bool ar1 = r.measure == "size";
    auto opt_pct = [](const std::optional<McTestResult>& t) {
        return t ? fmt_pct(t->rejection_rate) : std::string();
    };
    auto opt_count = [](const std::optional<McTestResult>& t, bool failures) {
        return t ? std::to_string(failures ? t->failures : t->rejections) : std::string();
    };
    std::vector<std::string> f{std::to_string(r.table),
                               r.measure,
                               std::to_string(r.n),
                               ar1 ? fmt_g(r.theta) : "",
                               ar1 ? fmt_g(r.delta) : "",
                               ar1 ? "" : fmt_g(r.d),
                               r.outliers ? "true" : "false",
                               r.cusum ? r.cusum_variance : "",
                               opt_pct(r.cusum),
                               opt_pct(r.wilcoxon),
                               opt_count(r.cusum, false),
                               opt_count(r.wilcoxon, false),
                               opt_count(r.cusum, true),
                               opt_count(r.wilcoxon, true),
                               std::to_string(r.replications),
                               std::to_string(r.seed)};
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ',';
        s += csv_field(f[i]);
    }
    return s;
}

std::uint64_t cell_seed(std::uint64_t base, int table, std::size_t cell) {
    return splitmix64(base ^ splitmix64((static_cast<std::uint64_t>(table) << 32) | cell));
}

std::vector<TableRow> run_table(int table, const TableOptions& opt) {
    const auto grid = table_grid(table, opt.max_n);
    std::vector<TableRow> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        McConfig cfg;
        cfg.dgp = grid[i].dgp;
        cfg.outliers = grid[i].outliers;
        cfg.replications = opt.reps;
        cfg.seed = cell_seed(opt.seed, table, i);
        cfg.workers = opt.workers;
        std::string cusum_variance = "carlstein";
        if (table == 1) {
            TestSpec b{Procedure::Cusum, {}};
            b.variance.kind = VarianceKind::Bartlett;
            cfg.tests = {b};
            cusum_variance = "bartlett";
        } else {
            cfg.tests = default_tests(cfg.outliers);
        }
        rows.push_back(cell_row(table, grid[i].measure, cfg, run_mc(cfg), cusum_variance));
    }
    return rows;
}

std::vector<RhoSample> figure_rho_samples(std::size_t n, double rho, std::size_t reps,
                                          std::uint64_t seed, unsigned workers) {
    Ar1Config a;
    a.n = n;
    a.rho = rho;
    a.delta = 0.0;
    return run_replications<RhoSample>(reps, workers, [&](std::size_t r) {
        Rng rng(seed, r);
        const Series x = inject_outliers(gen_ar1_changepoint(a, rng));
        return RhoSample{sample_acf1(x), robust_acf1(x)};
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Split-sample Wilcoxon and CUSUM tests: long memory vs. a mean shift", "lrdtest"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonFlags test_flags;
    std::string input;
    auto* test = app.add_subcommand("test", "Run the tests on a data file");
    test->add_option("input", input, "One value per line, or a single-column CSV")->required();
    add_common(test, test_flags, true);

    CommonFlags size_flags, power_flags;
    McFlags size_mc, power_mc;
    auto add_mc = [](CLI::App* sub, McFlags& m, bool power) {
        sub->add_option("--n", m.n, "Sample size")->check(CLI::PositiveNumber);
        if (power) {
            sub->add_option("--d", m.d, "Memory parameter d, H = d + 1/2")
                ->check(CLI::Range(0.0, 0.5));
        } else {
            sub->add_option("--theta", m.theta, "Change-point fraction")->check(CLI::Range(0.0, 1.0));
            sub->add_option("--delta", m.delta, "Shift size");
            sub->add_option("--rho", m.rho, "AR(1) coefficient")->check(CLI::Range(-1.0, 1.0));
        }
        sub->add_flag("--outliers", m.outliers, "Multiply four observations by 50");
        sub->add_option("--reps", m.reps, "Replications")->check(CLI::PositiveNumber);
        sub->add_option("--seed", m.seed, "Base seed");
        sub->add_option("--workers", m.workers, "Worker threads (0: all cores)");
    };
    auto* size = app.add_subcommand("size", "Empirical size under AR(1) with a mean shift");
    add_common(size, size_flags, true);
    add_mc(size, size_mc, false);
    auto* power = app.add_subcommand("power", "Empirical power under fractional Gaussian noise");
    add_common(power, power_flags, true);
    add_mc(power, power_mc, true);

    TableOptions topt;
    std::string which = "all", out_dir = "tables", tables_isa;
    auto* tables = app.add_subcommand("tables", "Reproduce the size/power tables as CSV");
    tables->add_option("--table", which, "1-5, figure-rho or all")
        ->check(CLI::IsMember({"1", "2", "3", "4", "5", "figure-rho", "all"}));
    tables->add_option("--reps", topt.reps, "Replications per cell")->check(CLI::PositiveNumber);
    tables->add_option("--max-n", topt.max_n, "Skip sample sizes above this")->check(CLI::PositiveNumber);
    tables->add_option("--seed", topt.seed, "Base seed");
    tables->add_option("--workers", topt.workers, "Worker threads (0: all cores)");
    tables->add_option("--out", out_dir, "Output directory");
    tables->add_option("--isa", tables_isa, "Force a kernel variant")
        ->check(CLI::IsMember({"scalar", "avx2", "neon"}));

    std::size_t fig_n = 500, fig_reps = 10000;
    double fig_rho = 0.4;
    std::uint64_t fig_seed = 20180404;
    unsigned fig_workers = 0;
    std::string fig_out, fig_isa;
    auto* fig = app.add_subcommand("figure-rho", "Sample and robust lag-1 autocorrelations under outliers");
    fig->add_option("--n", fig_n, "Sample size")->check(CLI::Range(5, 100000000));
    fig->add_option("--rho", fig_rho, "AR(1) coefficient")->check(CLI::Range(-1.0, 1.0));
    fig->add_option("--reps", fig_reps, "Replications")->check(CLI::PositiveNumber);
    fig->add_option("--seed", fig_seed, "Base seed");
    fig->add_option("--workers", fig_workers, "Worker threads (0: all cores)");
    fig->add_option("--out", fig_out, "Output path ('-' for stdout)");
    fig->add_option("--isa", fig_isa, "Force a kernel variant")
        ->check(CLI::IsMember({"scalar", "avx2", "neon"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadFlags;
    }

    try {
        if (test->parsed()) {
            apply_isa(test_flags.isa);
            return cmd_test(input, test_flags, out);
        }
        if (size->parsed()) {
            apply_isa(size_flags.isa);
            return cmd_mc(false, size_mc, size_flags, out);
        }
        if (power->parsed()) {
            apply_isa(power_flags.isa);
            return cmd_mc(true, power_mc, power_flags, out);
        }
        if (tables->parsed()) {
            apply_isa(tables_isa);
            return cmd_tables(which, topt, out_dir, out);
        }
        if (fig->parsed()) {
            apply_isa(fig_isa);
            const auto samples = figure_rho_samples(fig_n, fig_rho, fig_reps, fig_seed, fig_workers);
            auto manifest = figure_rho_manifest(fig_n, fig_rho, fig_reps, fig_seed);
            manifest["output"] = fig_out.empty() ? "-" : fig_out;
            emit(fig_out, out, csv_with_manifest(manifest, figure_rho_csv(samples)));
            return kOk;
        }
    } catch (const InputParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const DegenerateDataError& e) {
        err << "degenerate data: " << e.what() << "\n";
        return kDegenerateData;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kBadFlags;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kBadFlags;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kBadFlags;
}

}  // namespace lrdtest::cli
