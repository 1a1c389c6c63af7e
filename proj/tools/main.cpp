#include "sentimark/errors.hpp"
#include "sentimark/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> m_max;
    std::string break_date;
};

void apply(const Overrides& ov, sentimark::PipelineConfig& cfg) {
    if (!ov.output.empty()) cfg.output = ov.output;
    if (ov.seed) cfg.classify.seed = *ov.seed;
    if (ov.k_max) cfg.k_max = *ov.k_max;
    if (ov.m_max) cfg.m_max = *ov.m_max;
    if (!ov.break_date.empty()) {
        auto d = sentimark::Date::parse(ov.break_date);
        if (!d) throw sentimark::ConfigError("--break-date is not a valid YYYY-MM-DD date");
        cfg.period_break = *d;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sentiment/market batch toolkit: daily lexicon scores, structural breaks, "
                 "lagged regressions, rank tests and a polarity-classification benchmark"};
    app.set_version_flag("--version", std::string("sentimark ") +
                                          std::string(sentimark::kToolkitVersion) + " (formats v" +
                                          std::string(sentimark::kFormatVersion) + ")");
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::string check_pairs_table;
    std::string check_pairs_report = "consistency_check.csv";

    const struct {
        const char* name;
        const char* help;
    } commands[] = {
        {"score", "daily sentiment series (raw and standardized) per configured scorer"},
        {"series", "interpolated market series and emotion trend series"},
        {"breaks", "least-squares segmentation with BIC model selection"},
        {"lagreg", "lag-sweep regressions of market levels on sentiment"},
        {"periods", "Mann-Whitney comparison of the two periods around the break date"},
        {"classify", "naive Bayes vs linear SVM polarity benchmark"},
        {"simulate", "generate a synthetic corpus, market file and labeled set"},
        {"all", "every report family in one run"},
    };

    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("-c,--config", config_path, "JSON config file")->required();
        sub->add_option("-o,--output", ov.output, "override the configured output directory");
        sub->add_option("--seed", ov.seed, "override classify.seed");
        sub->add_option("--k-max", ov.k_max, "override lags.k_max");
        sub->add_option("--m-max", ov.m_max, "override breaks.m_max");
        sub->add_option("--break-date", ov.break_date, "override periods.break_date");
        if (std::string(c.name) == "lagreg") {
            sub->add_option("--check-pairs", check_pairs_table,
                            "check r2 = round(beta_std^2, 2) over a printed coefficient table "
                            "(lexicon,k,beta_std,r2 CSV) instead of running regressions");
            sub->add_option("--check-report", check_pairs_report,
                            "where to write the per-row consistency report");
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        auto command = sentimark::command_from_name(sub->get_name());
        if (!command) throw sentimark::ConfigError("unknown command");

        if (*command == sentimark::Command::lagreg && !check_pairs_table.empty()) {
            std::size_t bad =
                sentimark::run_pair_check(check_pairs_table, check_pairs_report, std::cerr);
            std::cerr << (bad == 0 ? "all rows consistent\n"
                                   : std::to_string(bad) + " inconsistent row(s) flagged\n");
            return 0;
        }

        auto cfg = sentimark::PipelineConfig::load_file(config_path);
        apply(ov, cfg);
        sentimark::run(*command, cfg, std::cerr);
        return 0;
    } catch (const sentimark::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
