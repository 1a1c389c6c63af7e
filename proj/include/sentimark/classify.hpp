#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sentimark {

// Order matters: "negative" < "positive" is the lexicographic tie rule.
enum class Polarity : std::uint8_t { negative = 0, positive = 1 };

std::string_view polarity_name(Polarity p);

enum class Period : std::uint8_t { a, b };

struct LabeledDoc {
    std::string id;
    std::vector<std::string> tokens;
    Polarity label = Polarity::negative;
    Period period = Period::a;
};

// Sparse row: (vocab index, count), sorted by index.
using SparseRow = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Counts tokens against a sorted vocabulary; out-of-vocab tokens are dropped.
SparseRow row_for_vocab(const std::vector<std::string>& vocab, std::span<const std::string> tokens);

struct DocumentTermMatrix {
    std::vector<std::string> vocab; // sorted, duplicate-free
    std::vector<SparseRow> rows;    // one per input document

    // vocab = terms appearing in at least min_df documents. Empty vocabulary
    // is fatal.
    static DocumentTermMatrix build(std::span<const LabeledDoc> docs, std::size_t min_df);

    // Counts an arbitrary token list against this vocabulary (out-of-vocab
    // tokens are dropped).
    SparseRow row_for(std::span<const std::string> tokens) const;
};

// ---- multinomial naive Bayes ----

struct NbModel {
    std::array<double, 2> class_log_priors{};        // indexed by Polarity
    std::array<std::vector<double>, 2> feature_log_likelihoods{};
    double smoothing_alpha = 1.0;
};

// Laplace-smoothed multinomial model; priors are class document
// proportions. A class absent from training is fatal.
NbModel train_nb(const DocumentTermMatrix& dtm, std::span<const Polarity> labels, double alpha);

struct NbPrediction {
    Polarity label = Polarity::negative;
    std::array<double, 2> log_posteriors{}; // up to the shared evidence constant
};

NbPrediction predict_nb(const NbModel& model, const SparseRow& doc_counts);

// ---- linear soft-margin SVM ----

struct SvmModel {
    std::vector<double> w; // hyperplane normal over the vocabulary
    double b = 0;
    double c_penalty = 1.0;
};

// Minimizes 0.5*||w||^2 + c_penalty * sum_i hinge(y_i * (w.x_i + b)) by
// seeded subgradient descent with step 1/(lambda*(t + t0)), lambda =
// 1/(c_penalty*n) and warm-start offset t0 = ceil(1/lambda), keeping the
// iterate with the best objective. Reproducible given (seed, epochs).
SvmModel train_svm(const DocumentTermMatrix& dtm, std::span<const Polarity> labels,
                   double c_penalty, std::size_t epochs, std::uint64_t seed);

// The primal objective the trainer minimizes; exposed so solver quality can
// be measured directly.
double svm_objective(const SvmModel& model, std::span<const SparseRow> rows,
                     std::span<const Polarity> labels);

struct SvmPrediction {
    Polarity label = Polarity::negative; // sign(w.x + b); zero margin maps to negative
    double margin = 0;
};

SvmPrediction predict_svm(const SvmModel& model, const SparseRow& doc_counts);

// ---- train/test split ----

struct TrainTestSplit {
    std::vector<std::size_t> train; // indices into the input docs
    std::vector<std::size_t> test;
};

// Uniform seeded shuffle; train size = floor(ratio * n). Either side empty
// is fatal. With stratified=true the ratio is applied per class.
TrainTestSplit split_train_test(std::size_t n_docs, double ratio, std::uint64_t seed);
TrainTestSplit split_train_test_stratified(std::span<const Polarity> labels, double ratio,
                                           std::uint64_t seed);

// ---- evaluation ----

struct ClassMetrics {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::size_t support = 0;
    bool undefined_precision = false; // no predictions for this class
    bool undefined_recall = false;    // no truth for this class
};

struct MetricsReport {
    std::array<ClassMetrics, 2> per_class{}; // indexed by Polarity
    double accuracy = 0;
};

MetricsReport evaluate(std::span<const Polarity> predictions, std::span<const Polarity> truth);

// ---- labeled corpus I/O ----

struct LabeledRawDoc {
    std::string id;
    Period period = Period::a;
    Polarity label = Polarity::negative;
    std::string text;
};

// CSV "id,period,label,text" with period in {A, B} and label in
// {positive, negative}.
std::vector<LabeledRawDoc> parse_labeled_docs(std::istream& in);

} // namespace sentimark
