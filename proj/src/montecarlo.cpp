#include "lrdtest/montecarlo.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace lrdtest {
namespace {

enum Outcome : std::uint8_t { kAccept = 0, kReject = 1, kFailed = 2 };

}  // namespace

std::vector<TestSpec> default_tests(bool outliers) {
    const RhoSource rho = outliers ? RhoSource::RobustQ : RhoSource::SampleAcf;
    TestSpec w{Procedure::Wilcoxon, {}};
    w.variance.kind = VarianceKind::CarlsteinW;
    w.variance.rho_source = rho;
    TestSpec c{Procedure::Cusum, {}};
    c.variance.kind = VarianceKind::CarlsteinC;
    c.variance.rho_source = rho;
    return {w, c};
}

void McConfig::validate() const {
    std::visit([](const auto& d) { d.validate(); }, dgp);
    if (replications < 1) throw std::invalid_argument("McConfig: replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("McConfig: alpha must lie in (0, 1)");
    if (tests.empty()) throw std::invalid_argument("McConfig: no tests configured");
    for (const auto& t : tests) t.variance.validate();
    const std::size_t n = std::visit([](const auto& d) { return d.n; }, dgp);
    if (n < 4) throw std::invalid_argument("McConfig: the tests need n >= 4");
    if (outliers && n < 5) throw std::invalid_argument("McConfig: outliers need n >= 5");
}

McCell run_mc(const McConfig& cfg) {
    cfg.validate();
    std::optional<FgnSampler> fgn;
    if (const auto* f = std::get_if<FgnConfig>(&cfg.dgp)) fgn.emplace(*f);

    const std::size_t n_tests = cfg.tests.size();
    auto outcomes = run_replications<std::vector<std::uint8_t>>(
        cfg.replications, cfg.workers, [&](std::size_t r) {
            Rng rng(cfg.seed, r);
            Series x = fgn ? fgn->sample(rng)
                           : gen_ar1_changepoint(std::get<Ar1Config>(cfg.dgp), rng);
            if (cfg.outliers) x = inject_outliers(x);

            std::vector<std::uint8_t> row(n_tests, kAccept);
            for (std::size_t t = 0; t < n_tests; ++t) {
                const auto& spec = cfg.tests[t];
                try {
                    const TestReport rep = spec.procedure == Procedure::Wilcoxon
                                               ? test_wilcoxon(x, cfg.alpha, spec.variance)
                                               : test_cusum(x, cfg.alpha, spec.variance);
                    row[t] = rep.reject ? kReject : kAccept;
                } catch (const DegenerateDataError&) {
                    row[t] = kFailed;
                }
            }
            return row;
        });

    McCell cell;
    cell.replications = cfg.replications;
    for (std::size_t t = 0; t < n_tests; ++t) {
        McTestResult res;
        res.spec = cfg.tests[t];
        for (const auto& row : outcomes) {
            if (row[t] == kReject) ++res.rejections;
            if (row[t] == kFailed) ++res.failures;
        }
        res.replications_used = cfg.replications - res.failures;
        res.rejection_rate = res.replications_used == 0
                                 ? 0.0
                                 : static_cast<double>(res.rejections) /
                                       static_cast<double>(res.replications_used);
        cell.tests.push_back(res);
    }
    return cell;
}

}  // namespace lrdtest
