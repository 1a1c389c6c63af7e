#pragma once

#include "sentimark/dates.hpp"
#include "sentimark/ingest.hpp"
#include "sentimark/series.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sentimark {

inline constexpr std::string_view kToolkitVersion = "1.0.0";
inline constexpr std::string_view kFormatVersion = "1";

enum class ScoreMode { unigram, shifted, emotion_polarity };

struct ScorerConfig {
    std::string label;
    ScoreMode mode = ScoreMode::unigram;
    std::filesystem::path lexicon;  // valence TSV, or emotion TSV for emotion_polarity
    std::filesystem::path shifters; // shifted mode only
    int window = 4;
};

struct SimScheduleConfig {
    std::vector<double> means;
    std::vector<std::int64_t> breaks;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
};

struct SimulateConfig {
    SimScheduleConfig tweets;
    std::int64_t docs_per_day = 0;
    std::filesystem::path lexicon; // valence lexicon driving token sampling
    SimScheduleConfig market;
    std::int64_t labeled_count = 0;
    double labeled_positive_rate = 0.5;
    double labeled_fidelity = 0.75; // chance a token matches the doc's label polarity
    std::uint64_t labeled_seed = 0;
};

struct ClassifyConfig {
    double alpha = 1.0;
    double c_penalty = 1.0;
    std::size_t epochs = 30;
    double ratio = 0.8;
    std::uint64_t seed = 42;
    std::size_t min_df = 1;
    bool drop_numbers = true;
    bool stratified = false;
};

struct PipelineConfig {
    std::filesystem::path base_dir; // config file directory; all paths resolve against it

    Date range_start;
    Date range_end;

    std::filesystem::path tweets;
    std::optional<TweetFormat> tweet_format; // by extension when unset
    std::filesystem::path market;
    std::filesystem::path stopwords;
    std::filesystem::path labeled;
    std::filesystem::path emotion_lexicon;

    std::vector<ScorerConfig> scorers;

    MissingDayPolicy empty_days = MissingDayPolicy::fail;

    std::size_t m_max = 5;
    double h_frac = 0.15;
    std::size_t k_max = 50;

    std::optional<Date> period_break;

    ClassifyConfig classify;
    SimulateConfig simulate;

    std::filesystem::path output = "out";

    // Parses the JSON config file; unknown keys are fatal so typos surface.
    static PipelineConfig load_file(const std::filesystem::path& path);

    std::filesystem::path resolve(const std::filesystem::path& p) const {
        return p.is_absolute() ? p : base_dir / p;
    }
};

enum class Command { score, series, breaks, lagreg, periods, classify, simulate, all };

std::optional<Command> command_from_name(std::string_view name);

// Executes one command. Reports land under config.output; on failure every
// file written by this invocation is removed and the exception propagates
// (ConfigError for bad config or missing inputs, DataError for bad data).
void run(Command command, const PipelineConfig& config, std::ostream& log);

// Standalone consistency check over a printed coefficient table
// ("lexicon,k,beta_std,r2" CSV). Returns the number of inconsistent rows and
// writes a per-row report.
std::size_t run_pair_check(const std::filesystem::path& table_csv,
                           const std::filesystem::path& report_csv, std::ostream& log);

} // namespace sentimark
