#include "sentimark/pipeline.hpp"

#include "sentimark/breaks.hpp"
#include "sentimark/classify.hpp"
#include "sentimark/csv.hpp"
#include "sentimark/errors.hpp"
#include "sentimark/lexicon.hpp"
#include "sentimark/rng.hpp"
#include "sentimark/sentiment.hpp"
#include "sentimark/series.hpp"
#include "sentimark/stats.hpp"
#include "sentimark/synthkit.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace sentimark {

namespace {

// ---- config parsing ----

void require_known_keys(const json& obj, const std::string& where,
                        std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config key '" + where + key + "'");
    }
}

const json* get_obj(const json& parent, const char* key) {
    auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    if (!it->is_object()) throw ConfigError(std::string("config key '") + key + "' must be an object");
    return &*it;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

Date get_date(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw ConfigError("config key '" + where + key + "' must be a YYYY-MM-DD string");
    auto d = Date::parse(it->get_ref<const std::string&>());
    if (!d) throw ConfigError("config key '" + where + key + "' is not a valid date");
    return *d;
}

SimScheduleConfig parse_schedule(const json& obj, const std::string& where) {
    require_known_keys(obj, where, {"means", "breaks", "noise_sd", "seed"});
    SimScheduleConfig s;
    s.means = get_or(obj, "means", std::vector<double>{});
    s.breaks = get_or(obj, "breaks", std::vector<std::int64_t>{});
    s.noise_sd = get_or(obj, "noise_sd", 0.0);
    s.seed = get_or(obj, "seed", std::uint64_t{0});
    return s;
}

ScoreMode parse_mode(const std::string& mode, const std::string& where) {
    if (mode == "unigram") return ScoreMode::unigram;
    if (mode == "shifted") return ScoreMode::shifted;
    if (mode == "emotion_polarity") return ScoreMode::emotion_polarity;
    throw ConfigError(where + ": unknown scoring mode '" + mode + "'");
}

// ---- atomic report writing ----

class ReportWriter {
public:
    explicit ReportWriter(fs::path root) : root_(std::move(root)) {}

    // Full write to a temp file, then rename: a report is either complete or
    // absent, never truncated.
    void write(const fs::path& relative, const std::string& content) {
        fs::path target = root_ / relative;
        fs::create_directories(target.parent_path());
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw DataError("cannot open output file " + tmp.string());
            out << content;
            out.flush();
            if (!out) {
                out.close();
                std::error_code ec;
                fs::remove(tmp, ec);
                throw DataError("failed writing " + tmp.string());
            }
        }
        fs::rename(tmp, target);
        written_.push_back(target);
    }

    // Removes everything written by this run; used on failure so no partial
    // report bundle survives.
    void discard() noexcept {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

private:
    fs::path root_;
    std::vector<fs::path> written_;
};

// ---- shared loading ----

fs::path require_input(const PipelineConfig& cfg, const fs::path& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("config does not set '") + what + "'");
    fs::path full = cfg.resolve(p);
    if (!fs::exists(full))
        throw ConfigError(std::string(what) + " not found: " + full.string());
    return full;
}

DateRange config_range(const PipelineConfig& cfg) {
    if (cfg.range_end < cfg.range_start) throw ConfigError("range.end precedes range.start");
    return DateRange(cfg.range_start, cfg.range_end);
}

TweetFormat tweet_format_for(const PipelineConfig& cfg, const fs::path& path) {
    if (cfg.tweet_format) return *cfg.tweet_format;
    return path.extension() == ".csv" ? TweetFormat::csv : TweetFormat::jsonl;
}

std::vector<TweetRecord> load_tweets(const PipelineConfig& cfg, std::ostream& log) {
    fs::path path = require_input(cfg, cfg.tweets, "inputs.tweets");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    auto parsed = parse_tweets(in, tweet_format_for(cfg, path));
    if (parsed.skipped > 0)
        log << "warning: skipped " << parsed.skipped << " malformed tweet record(s) in "
            << path.string() << "\n";
    for (auto& rec : parsed.records) {
        rec.clean_text = clean_text(rec.raw_text);
        rec.tokens = tokenize(rec.clean_text);
    }
    log << "loaded " << parsed.records.size() << " tweets from " << path.string() << "\n";
    return parsed.records;
}

// One configured scoring method with its loaded lexicons.
struct Scorer {
    ScorerConfig cfg;
    ValenceLexicon valence;
    EmotionLexicon emotions;
    ShifterLexicon shifters;

    double score(std::span<const std::string> tokens) const {
        switch (cfg.mode) {
        case ScoreMode::unigram:
            return score_unigram(tokens, valence);
        case ScoreMode::shifted:
            return score_shifted(tokens, valence, shifters, cfg.window);
        case ScoreMode::emotion_polarity:
            return polarity(score_emotions(tokens, emotions));
        }
        return 0.0;
    }
};

std::vector<Scorer> load_scorers(const PipelineConfig& cfg) {
    if (cfg.scorers.empty()) throw ConfigError("config defines no scorers");
    std::set<std::string> labels;
    std::vector<Scorer> out;
    for (const auto& sc : cfg.scorers) {
        if (!labels.insert(sc.label).second)
            throw ConfigError("duplicate scorer label '" + sc.label + "'");
        Scorer s;
        s.cfg = sc;
        fs::path lex = require_input(cfg, sc.lexicon, "scorer lexicon");
        if (sc.mode == ScoreMode::emotion_polarity) {
            s.emotions = EmotionLexicon::load_file(lex.string(), sc.label);
        } else {
            s.valence = ValenceLexicon::load_file(lex.string(), sc.label);
            if (sc.mode == ScoreMode::shifted) {
                fs::path sh = require_input(cfg, sc.shifters, "scorer shifters");
                s.shifters = ShifterLexicon::load_file(sh.string());
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Raw per-day mean score series, one per configured scorer.
std::vector<DailySeries> sentiment_daily_series(const PipelineConfig& cfg,
                                                std::span<const TweetRecord> tweets,
                                                std::span<const Scorer> scorers) {
    DateRange range = config_range(cfg);
    std::vector<DailySeries> out;
    for (const auto& scorer : scorers) {
        std::vector<std::pair<Timestamp, double>> scored;
        scored.reserve(tweets.size());
        for (const auto& rec : tweets)
            scored.emplace_back(rec.created_at, scorer.score(rec.tokens));
        out.push_back(daily_mean(scored, range, cfg.empty_days, scorer.cfg.label));
    }
    return out;
}

// Raw per-day mean label counts, one series per emotion label.
std::vector<DailySeries> emotion_daily_series(const PipelineConfig& cfg,
                                              std::span<const TweetRecord> tweets,
                                              const EmotionLexicon& lex) {
    DateRange range = config_range(cfg);
    std::vector<DailySeries> out;
    std::vector<EmotionVector> vectors;
    vectors.reserve(tweets.size());
    for (const auto& rec : tweets)
        vectors.push_back(score_emotions(rec.tokens, lex));
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        std::vector<std::pair<Timestamp, double>> scored;
        scored.reserve(tweets.size());
        for (std::size_t i = 0; i < tweets.size(); ++i)
            scored.emplace_back(tweets[i].created_at, static_cast<double>(vectors[i].counts[e]));
        out.push_back(daily_mean(scored, range, cfg.empty_days, std::string(kEmotionNames[e])));
    }
    return out;
}

DailySeries market_daily_series(const PipelineConfig& cfg) {
    fs::path path = require_input(cfg, cfg.market, "inputs.market");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    auto quotes = parse_market(in);
    return interpolate_calendar(quotes, config_range(cfg), "market");
}

std::string series_to_csv(const DailySeries& s) {
    std::ostringstream out;
    write_series_csv(out, s);
    return out.str();
}

// ---- command bodies ----

void write_sentiment_series(const PipelineConfig& cfg, ReportWriter& writer,
                            std::span<const TweetRecord> tweets, std::span<const Scorer> scorers) {
    auto series = sentiment_daily_series(cfg, tweets, scorers);
    for (const auto& s : series) {
        writer.write(fs::path("series") / (s.label + ".csv"), series_to_csv(s));
        writer.write(fs::path("series") / (s.label + "_z.csv"), series_to_csv(zscore(s)));
    }
}

void write_emotion_series(const PipelineConfig& cfg, ReportWriter& writer,
                          std::span<const TweetRecord> tweets) {
    fs::path lex_path = require_input(cfg, cfg.emotion_lexicon, "inputs.emotion_lexicon");
    auto lex = EmotionLexicon::load_file(lex_path.string(), "emotions");
    auto series = emotion_daily_series(cfg, tweets, lex);
    for (const auto& s : series) {
        writer.write(fs::path("emotions") / (s.label + ".csv"), series_to_csv(s));
        writer.write(fs::path("emotions") / (s.label + "_z.csv"), series_to_csv(zscore(s)));
    }
}

void write_market_series(const PipelineConfig& cfg, ReportWriter& writer) {
    writer.write(fs::path("series") / "market.csv", series_to_csv(market_daily_series(cfg)));
}

void write_segmentation(ReportWriter& writer, const DailySeries& series,
                        const SegmentationResult& result) {
    ordered_json j;
    j["label"] = series.label;
    j["n"] = result.n;
    j["h_min"] = result.h_min;
    j["per_m"] = ordered_json::array();
    for (const auto& c : result.per_m) {
        ordered_json jc;
        jc["m"] = c.m;
        jc["breakpoints"] = c.breakpoints;
        // A breakpoint is the last observation of a segment; the reported
        // date is the first day of the regime that follows it.
        std::vector<std::string> dates;
        for (auto bp : c.breakpoints)
            dates.push_back((series.start + static_cast<std::int64_t>(bp)).to_string());
        jc["break_dates"] = dates;
        jc["rss"] = c.rss;
        if (std::isinf(c.bic))
            jc["bic"] = "-inf";
        else
            jc["bic"] = c.bic;
        j["per_m"].push_back(std::move(jc));
    }
    j["chosen_m"] = result.chosen_m;
    writer.write(fs::path("breaks") / (series.label + ".json"), j.dump(2) + "\n");

    std::ostringstream curve;
    curve << "m,rss,bic\n";
    // fmt_double renders the zero-RSS sentinel as "-inf"
    for (const auto& c : result.per_m)
        curve << c.m << ',' << csv::fmt_double(c.rss) << ',' << csv::fmt_double(c.bic) << '\n';
    writer.write(fs::path("breaks") / (series.label + "_curve.csv"), curve.str());

    const auto& chosen = result.per_m[result.chosen_m];
    auto means = segment_means(series.values, chosen.breakpoints);
    std::ostringstream fit;
    fit << "date,value,segment_mean\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        fit << series.date_at(i).to_string() << ',' << csv::fmt_double(series.values[i]) << ','
            << csv::fmt_double(means[i]) << '\n';
    writer.write(fs::path("breaks") / (series.label + "_fit.csv"), fit.str());
}

void breaks_body(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log,
                 std::span<const TweetRecord> tweets, std::span<const Scorer> scorers) {
    // Sentiment is segmented standardized, market on raw levels; the
    // breakpoints are invariant to the affine rescale either way.
    std::vector<DailySeries> targets;
    for (const auto& s : sentiment_daily_series(cfg, tweets, scorers))
        targets.push_back(zscore(s));
    targets.push_back(market_daily_series(cfg));

    for (const auto& series : targets) {
        std::size_t h_min = default_h_min(series.size());
        std::size_t m_max = std::min(cfg.m_max, series.size() / h_min - 1);
        auto result = select_m_bic(series.values, m_max, h_min);
        write_segmentation(writer, series, result);
        log << "breaks[" << series.label << "]: chosen_m=" << result.chosen_m << "\n";
    }
}

void lagreg_body(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log,
                 std::span<const TweetRecord> tweets, std::span<const Scorer> scorers) {
    auto sentiment = sentiment_daily_series(cfg, tweets, scorers);
    DailySeries market = market_daily_series(cfg);

    std::ostringstream out;
    out << "lexicon,k,beta_std,r2,p_value,n\n";
    std::size_t rows = 0;
    for (const auto& s : sentiment) {
        auto results = lag_sweep(s, market, cfg.k_max);
        for (const auto& r : results) {
            out << r.label << ',' << r.k << ',' << csv::fmt_double(r.fit.beta_std) << ','
                << csv::fmt_double(r.fit.r2) << ',' << csv::fmt_double(r.fit.p_value) << ','
                << r.fit.n << '\n';
            ++rows;
        }
    }
    writer.write(fs::path("lagreg") / "lag_sweep.csv", out.str());
    log << "lagreg: " << rows << " models (" << sentiment.size() << " series x "
        << (cfg.k_max + 1) << " lags)\n";
}

void periods_body(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log,
                  std::span<const TweetRecord> tweets, std::span<const Scorer> scorers) {
    if (!cfg.period_break) throw ConfigError("config does not set 'periods.break_date'");
    auto series = sentiment_daily_series(cfg, tweets, scorers);

    fs::path lex_path = require_input(cfg, cfg.emotion_lexicon, "inputs.emotion_lexicon");
    auto lex = EmotionLexicon::load_file(lex_path.string(), "emotions");
    auto emotions = emotion_daily_series(cfg, tweets, lex);
    series.insert(series.end(), emotions.begin(), emotions.end());

    std::ostringstream out;
    out << "label,n_a,n_b,u_a,u_b,method,p_value,degenerate\n";
    for (const auto& s : series) {
        auto split = split_periods(s, *cfg.period_break);
        auto mw = mann_whitney(split.period_a.values, split.period_b.values);
        out << s.label << ',' << split.period_a.size() << ',' << split.period_b.size() << ','
            << csv::fmt_double(mw.u_a) << ',' << csv::fmt_double(mw.u_b) << ','
            << (mw.method == MwMethod::exact ? "exact" : "normal_approx") << ','
            << csv::fmt_double(mw.p_value) << ',' << (mw.degenerate ? 1 : 0) << '\n';
        log << "periods[" << s.label << "]: p " << format_p_value(mw.p_value) << "\n";
    }
    writer.write(fs::path("periods") / "mann_whitney.csv", out.str());
    log << "periods: compared " << series.size() << " series at "
        << cfg.period_break->to_string() << "\n";
}

void cmd_breaks(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    auto tweets = load_tweets(cfg, log);
    auto scorers = load_scorers(cfg);
    breaks_body(cfg, writer, log, tweets, scorers);
}

void cmd_lagreg(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    auto tweets = load_tweets(cfg, log);
    auto scorers = load_scorers(cfg);
    lagreg_body(cfg, writer, log, tweets, scorers);
}

void cmd_periods(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    auto tweets = load_tweets(cfg, log);
    auto scorers = load_scorers(cfg);
    periods_body(cfg, writer, log, tweets, scorers);
}

ordered_json metrics_to_json(const MetricsReport& report) {
    ordered_json j;
    j["accuracy"] = report.accuracy;
    ordered_json classes;
    for (auto p : {Polarity::positive, Polarity::negative}) {
        const auto& m = report.per_class[static_cast<std::size_t>(p)];
        ordered_json jm;
        jm["precision"] = m.precision;
        jm["recall"] = m.recall;
        jm["f1"] = m.f1;
        jm["support"] = m.support;
        if (m.undefined_precision) jm["undefined_precision"] = true;
        if (m.undefined_recall) jm["undefined_recall"] = true;
        classes[std::string(polarity_name(p))] = std::move(jm);
    }
    j["classes"] = std::move(classes);
    return j;
}

void cmd_classify(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    fs::path labeled_path = require_input(cfg, cfg.labeled, "inputs.labeled");
    fs::path stops_path = require_input(cfg, cfg.stopwords, "inputs.stopwords");
    StopList stops = StopList::load_file(stops_path.string());

    std::ifstream in(labeled_path, std::ios::binary);
    if (!in) throw DataError("cannot open " + labeled_path.string());
    auto raw_docs = parse_labeled_docs(in);
    if (raw_docs.empty()) throw DataError("labeled corpus is empty");

    std::vector<LabeledDoc> docs;
    docs.reserve(raw_docs.size());
    for (const auto& rd : raw_docs) {
        LabeledDoc doc;
        doc.id = rd.id;
        doc.label = rd.label;
        doc.period = rd.period;
        auto tokens = tokenize(clean_text(rd.text));
        doc.tokens = remove_stopwords(tokens, stops, cfg.classify.drop_numbers);
        docs.push_back(std::move(doc));
    }

    const auto& cc = cfg.classify;
    ordered_json runs;
    struct RunDef {
        const char* name;
        std::optional<Period> period;
    };
    for (const RunDef run_def : {RunDef{"whole", std::nullopt}, RunDef{"period_a", Period::a},
                                 RunDef{"period_b", Period::b}}) {
        std::vector<LabeledDoc> subset;
        for (const auto& d : docs)
            if (!run_def.period || d.period == *run_def.period) subset.push_back(d);
        if (subset.size() < 2)
            throw DataError(std::string("classification run '") + run_def.name +
                            "' has fewer than 2 documents");

        auto dtm = DocumentTermMatrix::build(subset, cc.min_df);
        std::vector<Polarity> labels;
        labels.reserve(subset.size());
        for (const auto& d : subset)
            labels.push_back(d.label);

        TrainTestSplit split = cc.stratified
                                   ? split_train_test_stratified(labels, cc.ratio, cc.seed)
                                   : split_train_test(subset.size(), cc.ratio, cc.seed);

        DocumentTermMatrix train_dtm;
        train_dtm.vocab = dtm.vocab;
        std::vector<Polarity> train_labels, test_labels;
        for (auto i : split.train) {
            train_dtm.rows.push_back(dtm.rows[i]);
            train_labels.push_back(labels[i]);
        }
        for (auto i : split.test)
            test_labels.push_back(labels[i]);

        auto nb = train_nb(train_dtm, train_labels, cc.alpha);
        auto svm = train_svm(train_dtm, train_labels, cc.c_penalty, cc.epochs, cc.seed);

        std::vector<Polarity> nb_pred, svm_pred;
        for (auto i : split.test) {
            nb_pred.push_back(predict_nb(nb, dtm.rows[i]).label);
            svm_pred.push_back(predict_svm(svm, dtm.rows[i]).label);
        }

        ordered_json jr;
        jr["documents"] = subset.size();
        jr["train_size"] = split.train.size();
        jr["test_size"] = split.test.size();
        jr["vocabulary"] = dtm.vocab.size();
        jr["nb"] = metrics_to_json(evaluate(nb_pred, test_labels));
        jr["svm"] = metrics_to_json(evaluate(svm_pred, test_labels));
        runs[run_def.name] = std::move(jr);

        log << "classify[" << run_def.name << "]: " << subset.size() << " docs, vocab "
            << dtm.vocab.size() << ", nb acc " << runs[run_def.name]["nb"]["accuracy"]
            << ", svm acc " << runs[run_def.name]["svm"]["accuracy"] << "\n";
    }

    ordered_json root;
    root["settings"] = {{"alpha", cc.alpha},     {"c_penalty", cc.c_penalty},
                        {"epochs", cc.epochs},   {"ratio", cc.ratio},
                        {"seed", cc.seed},       {"min_df", cc.min_df},
                        {"drop_numbers", cc.drop_numbers}, {"stratified", cc.stratified}};
    root["runs"] = std::move(runs);
    writer.write(fs::path("classify") / "metrics.json", root.dump(2) + "\n");
}

// Labeled-corpus synthesis: token bags biased by the assigned label, dated
// uniformly over the range so both periods are populated.
std::string simulate_labeled_csv(const PipelineConfig& cfg, const ValenceLexicon& lex) {
    const auto& sim = cfg.simulate;
    if (sim.labeled_count < 2) throw ConfigError("simulate.labeled_count must be >= 2");
    if (!cfg.period_break) throw ConfigError("simulate needs 'periods.break_date'");
    DateRange range = config_range(cfg);

    std::vector<std::string> pos_tokens, neg_tokens;
    for (const auto& [token, valence] : lex.entries)
        (valence > 0 ? pos_tokens : neg_tokens).push_back(token);
    std::sort(pos_tokens.begin(), pos_tokens.end());
    std::sort(neg_tokens.begin(), neg_tokens.end());
    if (pos_tokens.empty() || neg_tokens.empty())
        throw DataError("simulate: lexicon must contain both polarities");

    SplitMix64 rng(sim.labeled_seed);
    std::ostringstream out;
    out << "id,period,label,text\n";
    for (std::int64_t i = 0; i < sim.labeled_count; ++i) {
        bool positive = rng.next_double() < sim.labeled_positive_rate;
        Date day = range.first + static_cast<std::int64_t>(rng.below(
                                     static_cast<std::uint64_t>(range.length())));
        Period period = day < *cfg.period_break ? Period::a : Period::b;

        std::string text;
        // Variable length plus imperfect polarity fidelity keep the corpus
        // learnable without being trivially separable.
        std::size_t words = 3 + rng.below(8);
        for (std::size_t w = 0; w < words; ++w) {
            double fidelity = sim.labeled_fidelity;
            bool draw_pos = rng.next_double() < (positive ? fidelity : 1.0 - fidelity);
            const auto& pool = draw_pos ? pos_tokens : neg_tokens;
            if (!text.empty()) text += ' ';
            text += pool[rng.below(pool.size())];
        }
        const std::string row[] = {"lab" + std::to_string(i), period == Period::a ? "A" : "B",
                                   positive ? "positive" : "negative", text};
        std::ostringstream line;
        csv::write_record(line, row);
        out << line.str();
    }
    return out.str();
}

void cmd_simulate(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    const auto& sim = cfg.simulate;
    DateRange range = config_range(cfg);
    fs::path lex_path = require_input(cfg, sim.lexicon, "simulate.lexicon");
    auto lex = ValenceLexicon::load_file(lex_path.string(), "simulate");

    // tweets
    if (sim.docs_per_day < 1) throw ConfigError("simulate.docs_per_day must be >= 1");
    RegimeSchedule tweet_schedule{sim.tweets.means, sim.tweets.breaks, sim.tweets.noise_sd,
                                  sim.tweets.seed};
    auto corpus = gen_corpus(range.length(), tweet_schedule, range.first, lex, sim.docs_per_day);
    std::ostringstream tweets_out;
    serialize_tweets(tweets_out, corpus, TweetFormat::jsonl);
    writer.write(fs::path("simulated") / "tweets.jsonl", tweets_out.str());
    log << "simulate: " << corpus.size() << " tweets over " << range.length() << " days\n";

    // market: weekday quotes plus forced anchors at the range boundaries
    RegimeSchedule market_schedule{sim.market.means, sim.market.breaks, sim.market.noise_sd,
                                   sim.market.seed};
    auto level = gen_step_series(range.length(), market_schedule, range.first, "market");
    std::ostringstream market_out;
    market_out << "date,close\n";
    for (std::size_t i = 0; i < level.size(); ++i) {
        Date d = level.date_at(i);
        int wd = d.weekday();
        bool is_boundary = i == 0 || i + 1 == level.size();
        if (!is_boundary && (wd == 0 || wd == 6)) continue;
        if (level.values[i] <= 0)
            throw DataError("simulate: market schedule produced a non-positive close");
        market_out << d.to_string() << ',' << csv::fmt_double(level.values[i]) << '\n';
    }
    writer.write(fs::path("simulated") / "market.csv", market_out.str());

    // labeled corpus
    writer.write(fs::path("simulated") / "labeled.csv", simulate_labeled_csv(cfg, lex));
}

void cmd_score(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    auto tweets = load_tweets(cfg, log);
    auto scorers = load_scorers(cfg);
    write_sentiment_series(cfg, writer, tweets, scorers);
}

void cmd_series(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    write_market_series(cfg, writer);
    auto tweets = load_tweets(cfg, log);
    write_emotion_series(cfg, writer, tweets);
}

void cmd_all(const PipelineConfig& cfg, ReportWriter& writer, std::ostream& log) {
    auto tweets = load_tweets(cfg, log);
    auto scorers = load_scorers(cfg);

    write_sentiment_series(cfg, writer, tweets, scorers);
    write_market_series(cfg, writer);
    write_emotion_series(cfg, writer, tweets);
    breaks_body(cfg, writer, log, tweets, scorers);
    lagreg_body(cfg, writer, log, tweets, scorers);
    periods_body(cfg, writer, log, tweets, scorers);
    cmd_classify(cfg, writer, log);
}

} // namespace

PipelineConfig PipelineConfig::load_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
        throw ConfigError("config file is not valid JSON: " + path.string());

    require_known_keys(j, "", {"range", "inputs", "scorers", "empty_days", "breaks", "lags",
                               "periods", "classify", "simulate", "output"});

    PipelineConfig cfg;
    cfg.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");

    if (const json* range = get_obj(j, "range")) {
        require_known_keys(*range, "range.", {"start", "end"});
        cfg.range_start = get_date(*range, "start", "range.");
        cfg.range_end = get_date(*range, "end", "range.");
    } else {
        throw ConfigError("config does not set 'range'");
    }

    if (const json* inputs = get_obj(j, "inputs")) {
        require_known_keys(*inputs, "inputs.",
                           {"tweets", "tweets_format", "market", "stopwords", "labeled",
                            "emotion_lexicon"});
        cfg.tweets = get_or(*inputs, "tweets", std::string{});
        cfg.market = get_or(*inputs, "market", std::string{});
        cfg.stopwords = get_or(*inputs, "stopwords", std::string{});
        cfg.labeled = get_or(*inputs, "labeled", std::string{});
        cfg.emotion_lexicon = get_or(*inputs, "emotion_lexicon", std::string{});
        std::string fmt = get_or(*inputs, "tweets_format", std::string{});
        if (fmt == "jsonl")
            cfg.tweet_format = TweetFormat::jsonl;
        else if (fmt == "csv")
            cfg.tweet_format = TweetFormat::csv;
        else if (!fmt.empty())
            throw ConfigError("inputs.tweets_format must be 'jsonl' or 'csv'");
    }

    if (auto it = j.find("scorers"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("'scorers' must be an array");
        for (const auto& js : *it) {
            require_known_keys(js, "scorers[].", {"label", "mode", "lexicon", "shifters", "window"});
            ScorerConfig sc;
            sc.label = get_or(js, "label", std::string{});
            if (sc.label.empty()) throw ConfigError("scorer without a label");
            sc.mode = parse_mode(get_or(js, "mode", std::string{"unigram"}),
                                 "scorer '" + sc.label + "'");
            sc.lexicon = get_or(js, "lexicon", std::string{});
            sc.shifters = get_or(js, "shifters", std::string{});
            sc.window = get_or(js, "window", 4);
            if (sc.window < 0) throw ConfigError("scorer '" + sc.label + "': negative window");
            if (sc.lexicon.empty())
                throw ConfigError("scorer '" + sc.label + "' does not set a lexicon");
            if (sc.mode == ScoreMode::shifted && sc.shifters.empty())
                throw ConfigError("scorer '" + sc.label + "' is shifted but sets no shifters");
            cfg.scorers.push_back(std::move(sc));
        }
    }

    std::string empty_days = get_or(j, "empty_days", std::string{"error"});
    if (empty_days == "error")
        cfg.empty_days = MissingDayPolicy::fail;
    else if (empty_days == "interpolate")
        cfg.empty_days = MissingDayPolicy::interpolate;
    else
        throw ConfigError("'empty_days' must be 'error' or 'interpolate'");

    if (const json* breaks = get_obj(j, "breaks")) {
        require_known_keys(*breaks, "breaks.", {"m_max", "h_frac"});
        cfg.m_max = get_or(*breaks, "m_max", std::size_t{5});
        cfg.h_frac = get_or(*breaks, "h_frac", 0.15);
        if (cfg.h_frac <= 0 || cfg.h_frac >= 1) throw ConfigError("breaks.h_frac must be in (0, 1)");
    }
    if (const json* lags = get_obj(j, "lags")) {
        require_known_keys(*lags, "lags.", {"k_max"});
        cfg.k_max = get_or(*lags, "k_max", std::size_t{50});
    }
    if (const json* periods = get_obj(j, "periods")) {
        require_known_keys(*periods, "periods.", {"break_date"});
        cfg.period_break = get_date(*periods, "break_date", "periods.");
    }
    if (const json* cc = get_obj(j, "classify")) {
        require_known_keys(*cc, "classify.",
                           {"alpha", "c_penalty", "epochs", "ratio", "seed", "min_df",
                            "drop_numbers", "stratified"});
        cfg.classify.alpha = get_or(*cc, "alpha", 1.0);
        cfg.classify.c_penalty = get_or(*cc, "c_penalty", 1.0);
        cfg.classify.epochs = get_or(*cc, "epochs", std::size_t{30});
        cfg.classify.ratio = get_or(*cc, "ratio", 0.8);
        cfg.classify.seed = get_or(*cc, "seed", std::uint64_t{42});
        cfg.classify.min_df = get_or(*cc, "min_df", std::size_t{1});
        cfg.classify.drop_numbers = get_or(*cc, "drop_numbers", true);
        cfg.classify.stratified = get_or(*cc, "stratified", false);
        if (!(cfg.classify.ratio > 0 && cfg.classify.ratio < 1))
            throw ConfigError("classify.ratio must be in (0, 1)");
        if (!(cfg.classify.alpha > 0)) throw ConfigError("classify.alpha must be positive");
        if (!(cfg.classify.c_penalty > 0)) throw ConfigError("classify.c_penalty must be positive");
    }
    if (const json* sim = get_obj(j, "simulate")) {
        require_known_keys(*sim, "simulate.",
                           {"tweets", "docs_per_day", "lexicon", "market", "labeled_count",
                            "labeled_positive_rate", "labeled_fidelity", "labeled_seed"});
        if (const json* t = get_obj(*sim, "tweets"))
            cfg.simulate.tweets = parse_schedule(*t, "simulate.tweets.");
        if (const json* m = get_obj(*sim, "market"))
            cfg.simulate.market = parse_schedule(*m, "simulate.market.");
        cfg.simulate.docs_per_day = get_or(*sim, "docs_per_day", std::int64_t{0});
        cfg.simulate.lexicon = get_or(*sim, "lexicon", std::string{});
        cfg.simulate.labeled_count = get_or(*sim, "labeled_count", std::int64_t{0});
        cfg.simulate.labeled_positive_rate = get_or(*sim, "labeled_positive_rate", 0.5);
        cfg.simulate.labeled_fidelity = get_or(*sim, "labeled_fidelity", 0.75);
        if (!(cfg.simulate.labeled_fidelity > 0 && cfg.simulate.labeled_fidelity < 1))
            throw ConfigError("simulate.labeled_fidelity must be in (0, 1)");
        cfg.simulate.labeled_seed = get_or(*sim, "labeled_seed", std::uint64_t{0});
    }

    cfg.output = get_or(j, "output", std::string{"out"});
    return cfg;
}

std::optional<Command> command_from_name(std::string_view name) {
    if (name == "score") return Command::score;
    if (name == "series") return Command::series;
    if (name == "breaks") return Command::breaks;
    if (name == "lagreg") return Command::lagreg;
    if (name == "periods") return Command::periods;
    if (name == "classify") return Command::classify;
    if (name == "simulate") return Command::simulate;
    if (name == "all") return Command::all;
    return std::nullopt;
}

void run(Command command, const PipelineConfig& config, std::ostream& log) {
    ReportWriter writer(config.resolve(config.output));
    try {
        switch (command) {
        case Command::score: cmd_score(config, writer, log); break;
        case Command::series: cmd_series(config, writer, log); break;
        case Command::breaks: cmd_breaks(config, writer, log); break;
        case Command::lagreg: cmd_lagreg(config, writer, log); break;
        case Command::periods: cmd_periods(config, writer, log); break;
        case Command::classify: cmd_classify(config, writer, log); break;
        case Command::simulate: cmd_simulate(config, writer, log); break;
        case Command::all: cmd_all(config, writer, log); break;
        }
    } catch (...) {
        writer.discard();
        throw;
    }
}

std::size_t run_pair_check(const fs::path& table_csv, const fs::path& report_csv,
                           std::ostream& log) {
    std::ifstream in(table_csv, std::ios::binary);
    if (!in) throw ConfigError("cannot open coefficient table: " + table_csv.string());
    auto rows = read_reported_pairs(in);
    auto checks = check_reported_pairs(rows);

    std::ostringstream out;
    out << "lexicon,k,beta_std,r2,expected_r2,consistent\n";
    std::size_t inconsistent = 0;
    for (const auto& c : checks) {
        if (!c.consistent) {
            ++inconsistent;
            log << "inconsistent: " << c.row.label << " k=" << c.row.k << " beta_std="
                << c.row.beta_std << " r2=" << c.row.r2 << " expected " << c.expected_r2 << "\n";
        }
        out << c.row.label << ',' << c.row.k << ',' << csv::fmt_double(c.row.beta_std) << ','
            << csv::fmt_double(c.row.r2) << ',' << csv::fmt_double(c.expected_r2) << ','
            << (c.consistent ? 1 : 0) << '\n';
    }
    if (!report_csv.empty()) {
        fs::create_directories(report_csv.parent_path().empty() ? fs::path(".")
                                                                : report_csv.parent_path());
        std::ofstream rep(report_csv, std::ios::binary | std::ios::trunc);
        if (!rep) throw DataError("cannot open report file " + report_csv.string());
        rep << out.str();
    }
    log << "pair check: " << (checks.size() - inconsistent) << "/" << checks.size()
        << " rows consistent\n";
    return inconsistent;
}

} // namespace sentimark
