#include "sentimark/classify.hpp"

#include "sentimark/csv.hpp"
#include "sentimark/errors.hpp"
#include "sentimark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>

namespace sentimark {

std::string_view polarity_name(Polarity p) {
    return p == Polarity::negative ? "negative" : "positive";
}

DocumentTermMatrix DocumentTermMatrix::build(std::span<const LabeledDoc> docs, std::size_t min_df) {
    if (min_df < 1) throw DataError("build_dtm: min_df must be >= 1");

    // Document frequencies; std::map keeps the vocabulary sorted.
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::vector<std::string> uniq(doc.tokens.begin(), doc.tokens.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (auto& t : uniq)
            ++df[t];
    }

    DocumentTermMatrix dtm;
    for (const auto& [term, count] : df)
        if (count >= min_df) dtm.vocab.push_back(term);
    if (dtm.vocab.empty()) throw DataError("build_dtm: empty vocabulary (min_df too high?)");

    dtm.rows.reserve(docs.size());
    for (const auto& doc : docs)
        dtm.rows.push_back(row_for_vocab(dtm.vocab, doc.tokens));
    return dtm;
}

namespace {

std::uint32_t vocab_index(const std::vector<std::string>& vocab, const std::string& term,
                          bool& found) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), term);
    found = it != vocab.end() && *it == term;
    return static_cast<std::uint32_t>(it - vocab.begin());
}

} // namespace

SparseRow row_for_vocab(const std::vector<std::string>& vocab,
                        std::span<const std::string> tokens) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& t : tokens) {
        bool found = false;
        std::uint32_t idx = vocab_index(vocab, t, found);
        if (found) ++counts[idx];
    }
    return SparseRow(counts.begin(), counts.end());
}

SparseRow DocumentTermMatrix::row_for(std::span<const std::string> tokens) const {
    return row_for_vocab(vocab, tokens);
}

NbModel train_nb(const DocumentTermMatrix& dtm, std::span<const Polarity> labels, double alpha) {
    if (dtm.rows.size() != labels.size()) throw DataError("train_nb: row/label count mismatch");
    if (!(alpha > 0)) throw DataError("train_nb: smoothing alpha must be positive");

    const std::size_t v = dtm.vocab.size();
    std::array<std::size_t, 2> doc_counts{};
    std::array<std::vector<double>, 2> term_counts{std::vector<double>(v, 0.0),
                                                   std::vector<double>(v, 0.0)};
    std::array<double, 2> token_totals{};

    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto c = static_cast<std::size_t>(labels[i]);
        ++doc_counts[c];
        for (const auto& [idx, count] : dtm.rows[i]) {
            term_counts[c][idx] += count;
            token_totals[c] += count;
        }
    }
    for (std::size_t c = 0; c < 2; ++c)
        if (doc_counts[c] == 0)
            throw DataError(std::string("train_nb: class '") +
                            std::string(polarity_name(static_cast<Polarity>(c))) +
                            "' absent from training data");

    NbModel model;
    model.smoothing_alpha = alpha;
    const auto n_docs = static_cast<double>(labels.size());
    for (std::size_t c = 0; c < 2; ++c) {
        model.class_log_priors[c] = std::log(static_cast<double>(doc_counts[c]) / n_docs);
        model.feature_log_likelihoods[c].resize(v);
        double denom = token_totals[c] + alpha * static_cast<double>(v);
        for (std::size_t j = 0; j < v; ++j)
            model.feature_log_likelihoods[c][j] = std::log((term_counts[c][j] + alpha) / denom);
    }
    return model;
}

NbPrediction predict_nb(const NbModel& model, const SparseRow& doc_counts) {
    NbPrediction pred;
    for (std::size_t c = 0; c < 2; ++c) {
        double lp = model.class_log_priors[c];
        for (const auto& [idx, count] : doc_counts) {
            if (idx < model.feature_log_likelihoods[c].size())
                lp += static_cast<double>(count) * model.feature_log_likelihoods[c][idx];
        }
        pred.log_posteriors[c] = lp;
    }
    // Ties break toward the lexicographically smaller label ("negative").
    pred.label = pred.log_posteriors[1] > pred.log_posteriors[0] ? Polarity::positive
                                                                 : Polarity::negative;
    return pred;
}

namespace {

double hinge(double margin) {
    return margin < 1.0 ? 1.0 - margin : 0.0;
}

double row_dot(const std::vector<double>& w, const SparseRow& row) {
    double s = 0;
    for (const auto& [idx, count] : row)
        s += w[idx] * static_cast<double>(count);
    return s;
}

} // namespace

double svm_objective(const SvmModel& model, std::span<const SparseRow> rows,
                     std::span<const Polarity> labels) {
    double obj = 0;
    for (double wj : model.w)
        obj += wj * wj;
    obj *= 0.5;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double y = labels[i] == Polarity::positive ? 1.0 : -1.0;
        obj += model.c_penalty * hinge(y * (row_dot(model.w, rows[i]) + model.b));
    }
    return obj;
}

SvmModel train_svm(const DocumentTermMatrix& dtm, std::span<const Polarity> labels,
                   double c_penalty, std::size_t epochs, std::uint64_t seed) {
    const std::size_t n = dtm.rows.size();
    if (n != labels.size()) throw DataError("train_svm: row/label count mismatch");
    if (!(c_penalty > 0)) throw DataError("train_svm: c_penalty must be positive");
    if (epochs < 1) throw DataError("train_svm: epochs must be >= 1");

    bool has_pos = false, has_neg = false, any_feature = false;
    for (std::size_t i = 0; i < n; ++i) {
        (labels[i] == Polarity::positive ? has_pos : has_neg) = true;
        if (!dtm.rows[i].empty()) any_feature = true;
    }
    if (!has_pos || !has_neg) throw DataError("train_svm: both classes must be present");
    if (!any_feature) throw DataError("train_svm: all document rows are zero");

    const std::size_t v = dtm.vocab.size();
    // Equivalent scaled objective: lambda/2 ||w||^2 + mean hinge, with
    // lambda = 1 / (c_penalty * n). The step offset t0 ~ 1/lambda keeps the
    // first steps near unit size; without it step 1 is 1/lambda and the
    // iterate starts from a catastrophic overshoot it then pays back at
    // O(1/t).
    const double lambda = 1.0 / (c_penalty * static_cast<double>(n));
    const double step_offset = std::ceil(1.0 / lambda);

    // w is kept as scale * direction so the shrink step is O(1).
    std::vector<double> direction(v, 0.0);
    double scale = 1.0;
    double b = 0.0;

    SvmModel best;
    best.w.assign(v, 0.0);
    best.b = 0.0;
    best.c_penalty = c_penalty;
    double best_obj = svm_objective(best, dtm.rows, labels);

    SplitMix64 rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Subgradient descent does not descend monotonically, so the best
    // iterate seen is tracked: every step on small problems, a few times per
    // epoch on large ones. A tail-averaged iterate is evaluated as well; the
    // average is what settles the unregularized bias, whose per-step updates
    // only balance out in expectation.
    const std::size_t eval_interval = n <= 64 ? 1 : n / 4;
    const std::size_t total_steps = epochs * n;
    SvmModel candidate;
    candidate.c_penalty = c_penalty;
    auto consider = [&](const std::vector<double>& w, double bias) {
        candidate.w = w;
        candidate.b = bias;
        double obj = svm_objective(candidate, dtm.rows, labels);
        if (obj < best_obj) {
            best_obj = obj;
            best.w = candidate.w;
            best.b = candidate.b;
        }
    };

    std::vector<double> current(v, 0.0);
    auto materialize = [&]() {
        for (std::size_t j = 0; j < v; ++j)
            current[j] = scale * direction[j];
    };

    std::vector<double> avg_w(v, 0.0);
    double avg_b = 0;
    std::size_t avg_count = 0;

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (lambda * (static_cast<double>(t) + step_offset));
            const SparseRow& row = dtm.rows[i];
            const double y = labels[i] == Polarity::positive ? 1.0 : -1.0;

            double margin = y * (scale * row_dot(direction, row) + b);
            scale *= 1.0 - eta * lambda; // = 1 - 1/(t + t0), never zero
            if (margin < 1.0) {
                double step = eta * y;
                for (const auto& [idx, count] : row)
                    direction[idx] += step * static_cast<double>(count) / scale;
                b += step;
            }
            if (t % eval_interval == 0) {
                materialize();
                consider(current, b);
                if (2 * t >= total_steps) {
                    for (std::size_t j = 0; j < v; ++j)
                        avg_w[j] += current[j];
                    avg_b += b;
                    ++avg_count;
                }
            }
        }
    }
    materialize();
    consider(current, b);
    if (avg_count > 0) {
        for (double& wj : avg_w)
            wj /= static_cast<double>(avg_count);
        consider(avg_w, avg_b / static_cast<double>(avg_count));
    }
    return best;
}

SvmPrediction predict_svm(const SvmModel& model, const SparseRow& doc_counts) {
    SvmPrediction pred;
    double s = model.b;
    for (const auto& [idx, count] : doc_counts)
        if (idx < model.w.size()) s += model.w[idx] * static_cast<double>(count);
    pred.margin = s;
    pred.label = s > 0 ? Polarity::positive : Polarity::negative;
    return pred;
}

TrainTestSplit split_train_test(std::size_t n_docs, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split_train_test: ratio must be in (0, 1)");
    if (n_docs < 2) throw DataError("split_train_test: need at least 2 documents");

    std::vector<std::size_t> order(n_docs);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(seed);
    rng.shuffle(order);

    auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n_docs)));
    if (n_train == 0 || n_train == n_docs)
        throw DataError("split_train_test: a side of the split is empty");

    TrainTestSplit split;
    split.train.assign(order.begin(), order.begin() + n_train);
    split.test.assign(order.begin() + n_train, order.end());
    return split;
}

TrainTestSplit split_train_test_stratified(std::span<const Polarity> labels, double ratio,
                                           std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split_train_test: ratio must be in (0, 1)");
    TrainTestSplit split;
    SplitMix64 rng(seed);
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (static_cast<int>(labels[i]) == c) idx.push_back(i);
        if (idx.empty()) continue;
        rng.shuffle(idx);
        auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(idx.size())));
        split.train.insert(split.train.end(), idx.begin(), idx.begin() + n_train);
        split.test.insert(split.test.end(), idx.begin() + n_train, idx.end());
    }
    if (split.train.empty() || split.test.empty())
        throw DataError("split_train_test: a side of the split is empty");
    return split;
}

MetricsReport evaluate(std::span<const Polarity> predictions, std::span<const Polarity> truth) {
    if (predictions.size() != truth.size() || truth.empty())
        throw DataError("evaluate: prediction/truth lengths must match and be nonempty");

    // confusion[t][p]
    std::array<std::array<std::size_t, 2>, 2> confusion{};
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predictions[i])];

    MetricsReport report;
    std::size_t correct = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        std::size_t tp = confusion[c][c];
        std::size_t fp = confusion[1 - c][c];
        std::size_t fn = confusion[c][1 - c];
        correct += tp;

        ClassMetrics& m = report.per_class[c];
        m.support = tp + fn;
        if (tp + fp == 0) {
            m.precision = 0;
            m.undefined_precision = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.recall = 0;
            m.undefined_recall = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        m.f1 = (m.precision + m.recall) > 0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    return report;
}

std::vector<LabeledRawDoc> parse_labeled_docs(std::istream& in) {
    if (!in) throw DataError("unreadable labeled-docs stream");
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields) ||
        fields != std::vector<std::string>{"id", "period", "label", "text"})
        throw DataError("labeled CSV must start with header \"id,period,label,text\"");

    std::vector<LabeledRawDoc> docs;
    while (csv::read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 4) throw DataError("labeled CSV row needs 4 fields");
        LabeledRawDoc doc;
        doc.id = std::move(fields[0]);
        if (fields[1] == "A" || fields[1] == "a")
            doc.period = Period::a;
        else if (fields[1] == "B" || fields[1] == "b")
            doc.period = Period::b;
        else
            throw DataError("labeled CSV: unknown period '" + fields[1] + "' for id " + doc.id);
        if (fields[2] == "positive")
            doc.label = Polarity::positive;
        else if (fields[2] == "negative")
            doc.label = Polarity::negative;
        else
            throw DataError("labeled CSV: unknown label '" + fields[2] + "' for id " + doc.id);
        doc.text = std::move(fields[3]);
        docs.push_back(std::move(doc));
    }
    return docs;
}

} // namespace sentimark
