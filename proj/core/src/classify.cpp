#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hawe/error.hpp"
#include "hawe/evalharness.hpp"
#include "hawe/random.hpp"

namespace hawe {

namespace {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

constexpr int kMaxSplitAttempts = 10;

/// Largest eigenvalue of a symmetric PSD matrix by power iteration from a
/// fixed start vector.
double top_eigenvalue(const MatX& a) {
  VecX v = VecX::Ones(a.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    VecX w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(norm - lambda) <= 1e-10 * norm) return norm;
    lambda = norm;
  }
  return lambda;
}

void softmax_rows(MatX& scores) {
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const double m = scores.row(r).maxCoeff();
    scores.row(r) = (scores.row(r).array() - m).exp().matrix();
    scores.row(r) /= scores.row(r).sum();
  }
}

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, shuffles its rows and sends round(train_frac * n) of them to
/// training, keeping at least one row for testing.
Split stratified_split(const std::vector<std::vector<std::size_t>>& by_class, double train_frac,
                       Rng& rng) {
  Split split;
  for (const auto& members : by_class) {
    std::vector<std::size_t> rows = members;
    rng.shuffle(rows.begin(), rows.end());
    auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(rows.size())));
    n_train = std::min(n_train, rows.size() - 1);
    split.train.insert(split.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

bool covers_all_classes(const Split& split, std::span<const std::int32_t> dense_labels,
                        std::size_t num_classes) {
  std::vector<bool> seen(num_classes, false);
  for (std::size_t r : split.train) seen[static_cast<std::size_t>(dense_labels[r])] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Matrix gather(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(m.row(rows[i]).begin(), m.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

std::int32_t SoftmaxModel::predict(std::span<const double> x) const {
  const std::size_t d = mean.size();
  if (x.size() != d) throw std::invalid_argument("feature width mismatch");
  const std::size_t k = weights.cols();
  std::int32_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    double s = weights(d, c);
    for (std::size_t i = 0; i < d; ++i) s += (x[i] - mean[i]) / scale[i] * weights(i, c);
    if (s > best_score) {
      best_score = s;
      best = static_cast<std::int32_t>(c);
    }
  }
  return best;
}

SoftmaxModel fit_softmax(const Matrix& features, std::span<const std::int32_t> labels,
                         std::int32_t num_classes, const ClassifyConfig& config) {
  const auto n = static_cast<Eigen::Index>(features.rows());
  const auto d = static_cast<Eigen::Index>(features.cols());
  if (n == 0 || labels.size() != features.rows()) {
    throw std::invalid_argument("features and labels must be non-empty and of equal length");
  }
  if (num_classes < 2) throw std::invalid_argument("need at least two classes");

  SoftmaxModel model;
  model.mean.assign(static_cast<std::size_t>(d), 0.0);
  model.scale.assign(static_cast<std::size_t>(d), 1.0);

  // Standardized design matrix with a trailing intercept column.
  MatX x(n, d + 1);
  for (Eigen::Index j = 0; j < d; ++j) {
    double mu = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mu += features(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = features(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - mu;
      var += c * c;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double s = sd > 1e-12 ? sd : 1.0;
    model.mean[static_cast<std::size_t>(j)] = mu;
    model.scale[static_cast<std::size_t>(j)] = s;
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = (features(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - mu) / s;
    }
  }
  x.col(d).setOnes();

  MatX y = MatX::Zero(n, num_classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::int32_t c = labels[static_cast<std::size_t>(i)];
    if (c < 0 || c >= num_classes) throw std::invalid_argument("label out of range");
    y(i, c) = 1.0;
  }

  // Loss is mean cross-entropy + (l2 / 2) ||W||^2 over non-intercept rows.
  // Its gradient is Lipschitz with constant 0.5 * lambda_max(X'X / n) + l2.
  const MatX gram = (x.transpose() * x) / static_cast<double>(n);
  const double lipschitz = 0.5 * top_eigenvalue(gram) + config.l2;
  const double step = 1.0 / lipschitz;

  MatX w = MatX::Zero(d + 1, num_classes);
  MatX penalty_mask = MatX::Ones(d + 1, num_classes);
  penalty_mask.row(d).setZero();

  std::uint32_t it = 0;
  double grad_norm = 0.0;
  for (;;) {
    MatX p = x * w;
    softmax_rows(p);
    const MatX grad = (x.transpose() * (p - y)) / static_cast<double>(n) +
                      config.l2 * w.cwiseProduct(penalty_mask);
    grad_norm = grad.norm();
    if (grad_norm < config.grad_tol || it >= config.max_iters) break;
    w -= step * grad;
    ++it;
  }

  model.iterations = it;
  model.final_grad_norm = grad_norm;
  model.weights = Matrix(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(num_classes));
  for (Eigen::Index r = 0; r <= d; ++r) {
    for (Eigen::Index c = 0; c < num_classes; ++c) {
      model.weights(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = w(r, c);
    }
  }
  return model;
}

EvalReport classify(const Matrix& embeddings, std::span<const std::int32_t> labels,
                    const ClassifyConfig& config) {
  if (labels.size() != embeddings.rows()) {
    throw std::invalid_argument("label count " + std::to_string(labels.size()) +
                                " does not match embedding rows " +
                                std::to_string(embeddings.rows()));
  }
  if (!(config.train_frac > 0.0 && config.train_frac < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");

  // Dense class ids in ascending order of the original label.
  std::map<std::int32_t, std::int32_t> dense_of;
  for (std::int32_t l : labels) {
    if (l != kNoLabel) dense_of.emplace(l, 0);
  }
  std::int32_t next = 0;
  for (auto& [label, dense] : dense_of) dense = next++;
  if (dense_of.size() < 2) throw std::invalid_argument("classification needs at least 2 classes");

  std::vector<std::int32_t> dense_labels(labels.size(), -1);
  std::vector<std::vector<std::size_t>> by_class(dense_of.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] == kNoLabel) continue;
    dense_labels[r] = dense_of[labels[r]];
    by_class[static_cast<std::size_t>(dense_labels[r])].push_back(r);
  }
  for (const auto& [label, dense] : dense_of) {
    if (by_class[static_cast<std::size_t>(dense)].size() < 2) {
      throw std::invalid_argument("class " + std::to_string(label) +
                                  " has fewer than 2 labeled rows");
    }
  }

  EvalReport report;
  report.task = "role-classification";
  report.accuracies.resize(config.repeats);
  const auto num_classes = static_cast<std::int32_t>(dense_of.size());

  for (std::uint32_t r = 0; r < config.repeats; ++r) {
    Rng rng(derive_seed(config.seed, r));
    Split split;
    int attempt = 0;
    do {
      if (attempt++ == kMaxSplitAttempts) {
        throw std::runtime_error("repeat " + std::to_string(r) + ": no split with every class in training after " +
                                 std::to_string(kMaxSplitAttempts) + " attempts");
      }
      split = stratified_split(by_class, config.train_frac, rng);
    } while (!covers_all_classes(split, dense_labels, dense_of.size()));

    const Matrix train_x = gather(embeddings, split.train);
    std::vector<std::int32_t> train_y;
    train_y.reserve(split.train.size());
    for (std::size_t row : split.train) train_y.push_back(dense_labels[row]);
    const SoftmaxModel model = fit_softmax(train_x, train_y, num_classes, config);

    std::size_t correct = 0;
    for (std::size_t row : split.test) {
      if (model.predict(embeddings.row(row)) == dense_labels[row]) ++correct;
    }
    report.accuracies[r] = static_cast<double>(correct) / static_cast<double>(split.test.size());
  }

  report.mean_accuracy = std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) /
                         static_cast<double>(report.accuracies.size());
  report.config = {
      {"train_frac", fmt(config.train_frac)},
      {"repeats", std::to_string(config.repeats)},
      {"seed", std::to_string(config.seed)},
      {"l2", fmt(config.l2)},
      {"max_iters", std::to_string(config.max_iters)},
      {"grad_tol", fmt(config.grad_tol)},
      {"classes", std::to_string(dense_of.size())},
      {"labeled_rows", std::to_string(std::count_if(dense_labels.begin(), dense_labels.end(),
                                                    [](std::int32_t l) { return l >= 0; }))},
  };
  return report;
}

double one_nn_accuracy(const Matrix& embeddings, std::span<const std::int32_t> labels) {
  if (labels.size() != embeddings.rows()) throw std::invalid_argument("label count mismatch");
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] != kNoLabel) rows.push_back(r);
  }
  if (rows.size() < 2) throw std::invalid_argument("1-NN needs at least 2 labeled rows");

  std::size_t correct = 0;
  for (std::size_t a : rows) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_row = a;
    for (std::size_t b : rows) {
      if (b == a) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < embeddings.cols(); ++i) {
        const double diff = embeddings(a, i) - embeddings(b, i);
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        best_row = b;
      }
    }
    if (labels[best_row] == labels[a]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# task=" << report.task << '\n';
  for (const auto& [key, value] : report.config) out << "# " << key << '=' << value << '\n';
  out << "repeat\taccuracy\n";
  for (std::size_t r = 0; r < report.accuracies.size(); ++r) {
    out << r << '\t' << fmt(report.accuracies[r]) << '\n';
  }
  out << "mean\t" << fmt(report.mean_accuracy) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string summarize(const EvalReport& report) {
  double lo = 1.0;
  double hi = 0.0;
  double sq = 0.0;
  for (double a : report.accuracies) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    sq += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  }
  const double sd = report.accuracies.size() > 1
                        ? std::sqrt(sq / static_cast<double>(report.accuracies.size() - 1))
                        : 0.0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: mean accuracy %.4f (sd %.4f, min %.4f, max %.4f) over %zu repeats\n",
                report.task.c_str(), report.mean_accuracy, sd, lo, hi, report.accuracies.size());
  return buf;
}

}  // namespace hawe
