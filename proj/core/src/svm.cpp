#include "pqk/svm.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>

#include "pqk/errors.hpp"
#include "pqk/hashing.hpp"

namespace pqk {

namespace {

constexpr double kTau = 1e-12;

void validate_labels(std::span<const int> y, std::size_t n) {
  if (y.size() != n) throw std::invalid_argument("label count differs from sample count");
  if (n < 2) throw DataError("SVM training needs at least two samples");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw DataError("SVM labels must be +1 or -1");
  }
  if (!pos || !neg) throw DataError("SVM training needs both labels present");
}

}  // namespace

DualSolution smo_solve(const Matrix& k, std::span<const int> y, double c, const SmoOptions& opts) {
  const std::size_t n = k.rows();
  if (k.cols() != n) throw std::invalid_argument("Gram matrix must be square");
  validate_labels(y, n);
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be a positive number");
  for (double v : k.data())
    if (!std::isfinite(v)) throw NumericError("kernel matrix has non-finite entries");

  const std::size_t max_iter = opts.max_iter ? opts.max_iter : std::max<std::size_t>(10'000'000, 100 * n);
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k(i, j); };

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> g(n, -1.0);  // ∇f = Qα − e
  auto& a = sol.alpha;

  auto in_up = [&](std::size_t t) { return (y[t] == 1 && a[t] < c) || (y[t] == -1 && a[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] == 1 && a[t] > 0.0) || (y[t] == -1 && a[t] < c); };

  std::size_t iter = 0;
  for (;; ++iter) {
    // i: maximal violator in I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_up(t)) continue;
      const double v = -y[t] * g[t];
      if (v > gmax) {
        gmax = v;
        i = t;
      }
    }
    // j: second-order choice in I_low among pairs that violate; track M.
    double gmin = std::numeric_limits<double>::infinity();
    double best_gain = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * g[t];
      gmin = std::min(gmin, v);
      if (i == n) continue;
      const double b = gmax - v;
      if (b > 0.0) {
        double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (quad <= 0.0) quad = kTau;
        const double gain = -(b * b) / quad;
        if (gain < best_gain) {
          best_gain = gain;
          j = t;
        }
      }
    }
    if (i == n || j == n || gmax - gmin < opts.tol) break;
    if (iter >= max_iter) {
      sol.converged = false;
      spdlog::warn("SMO stopped after {} iterations without reaching tol {}", iter, opts.tol);
      break;
    }

    const double ai_old = a[i];
    const double aj_old = a[j];
    if (y[i] != y[j]) {
      double quad = k(i, i) + k(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = c - diff;
        }
      } else if (a[j] > c) {
        a[j] = c;
        a[i] = c + diff;
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (g[i] - g[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > c) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = sum - c;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > c) {
        if (a[j] > c) {
          a[j] = c;
          a[i] = sum - c;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }

    const double di = a[i] - ai_old;
    const double dj = a[j] - aj_old;
    for (std::size_t t = 0; t < n; ++t) g[t] += q(t, i) * di + q(t, j) * dj;
  }
  sol.iterations = iter;

  // Bias: average over free vectors, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * g[t];
    if (a[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (a[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.bias = -rho;
  return sol;
}

double dual_objective(const Matrix& k, std::span<const int> y, std::span<const double> alpha) {
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    lin += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
  }
  return 0.5 * quad - lin;
}

double kkt_violation(const Matrix& k, std::span<const int> y, std::span<const double> alpha,
                     double bias, double c) {
  const std::size_t n = alpha.size();
  const double bound_eps = 1e-12 * c;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = bias;
    for (std::size_t j = 0; j < n; ++j) f += alpha[j] * y[j] * k(i, j);
    const double m = y[i] * f;
    double v;
    if (alpha[i] <= bound_eps) v = 1.0 - m;
    else if (alpha[i] >= c - bound_eps) v = m - 1.0;
    else v = std::abs(m - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

double SvmModel::decision(std::span<const double> x) const {
  if (x.size() != n_features())
    throw std::invalid_argument("feature width " + std::to_string(x.size()) +
                                " does not match the model's " + std::to_string(n_features()));
  double f = bias;
  for (std::size_t s = 0; s < dual_coef.size(); ++s) f += dual_coef[s] * kernel(support_vectors.row(s), x);
  return f;
}

SvmModel model_from_dual(const Matrix& x, std::span<const int> y, const KernelSpec& spec,
                         const ResolvedKernel& kernel, double c, const DualSolution& sol) {
  SvmModel m;
  m.spec = spec;
  m.kernel = kernel;
  m.c = c;
  m.bias = sol.bias;
  m.iterations = sol.iterations;
  m.converged = sol.converged;
  for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
    if (sol.alpha[i] > 0.0) {
      m.support.push_back(i);
      m.dual_coef.push_back(sol.alpha[i] * y[i]);
    }
  }
  m.support_vectors = x.select_rows(m.support);
  if (m.support.empty()) m.support_vectors = Matrix(0, x.cols());
  m.training_hash = training_hash(x, y);
  return m;
}

SvmModel smo_train(const Matrix& x, std::span<const int> y, const KernelSpec& spec, double c,
                   const SmoOptions& opts) {
  validate_labels(y, x.rows());
  const auto kernel = ResolvedKernel::resolve(spec, x);
  const Matrix gram = kernel_matrix(x, kernel);
  const auto sol = smo_solve(gram, y, c, opts);

  // Box and equality constraints hold by construction of the updates.
  double eq = 0.0;
  for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
    if (sol.alpha[i] < 0.0 || sol.alpha[i] > c) throw std::logic_error("SMO left the box");
    eq += sol.alpha[i] * y[i];
  }
  if (std::abs(eq) > 1e-6 * std::max(1.0, c)) throw std::logic_error("SMO broke y·α = 0");

  return model_from_dual(x, y, spec, kernel, c, sol);
}

std::vector<double> decision_function(const SvmModel& m, const Matrix& x) {
  std::vector<double> out(x.rows());
  if (x.rows() > 0 && x.cols() != m.n_features())
    throw std::invalid_argument("feature width " + std::to_string(x.cols()) +
                                " does not match the model's " + std::to_string(m.n_features()));
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = m.decision(x.row(i));
  return out;
}

std::vector<int> predict(const SvmModel& m, const Matrix& x) {
  const auto f = decision_function(m, x);
  std::vector<int> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] >= 0.0 ? 1 : -1;
  return out;
}

double weighted_f1(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("weighted_f1: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("weighted_f1: empty input");

  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
  };
  std::map<int, Counts> per_label;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    auto& t = per_label[y_true[i]];
    auto& p = per_label[y_pred[i]];
    ++t.support;
    if (y_true[i] == y_pred[i]) {
      ++t.tp;
    } else {
      ++t.fn;
      ++p.fp;
    }
  }
  double total = 0.0;
  for (const auto& [label, c] : per_label) {
    if (c.support == 0) continue;
    const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp + c.fn);
    const double f1 = denom > 0.0 ? 2.0 * static_cast<double>(c.tp) / denom : 0.0;
    total += f1 * static_cast<double>(c.support);
  }
  return total / static_cast<double>(y_true.size());
}

std::string training_hash(const Matrix& x, std::span<const int> y) {
  Fnv1a h;
  h.update(std::uint64_t{x.rows()}).update(std::uint64_t{x.cols()});
  for (double v : x.data()) h.update(v);
  for (int v : y) h.update(static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
  return h.hex();
}

nlohmann::json to_json(const SvmModel& m) {
  nlohmann::json sv = nlohmann::json::array();
  for (std::size_t s = 0; s < m.support_vectors.rows(); ++s) {
    auto r = m.support_vectors.row(s);
    sv.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {
      {"kernel",
       {{"kind", std::string(to_string(m.spec.kind))},
        {"gamma", m.spec.gamma.str()},
        {"gamma_resolved", m.kernel.gamma},
        {"degree", m.spec.degree},
        {"coef0", m.spec.coef0}}},
      {"C", m.c},
      {"bias", m.bias},
      {"support", m.support},
      {"dual_coef", m.dual_coef},
      {"support_vectors", sv},
      {"n_features", m.support_vectors.cols()},
      {"training_hash", m.training_hash},
      {"iterations", m.iterations},
      {"converged", m.converged},
  };
}

SvmModel model_from_json(const nlohmann::json& j) {
  try {
    SvmModel m;
    const auto& kj = j.at("kernel");
    m.spec.kind = parse_kernel_kind(kj.at("kind").get<std::string>());
    m.spec.gamma = Gamma::parse(kj.at("gamma").get<std::string>());
    m.spec.degree = kj.at("degree").get<int>();
    m.spec.coef0 = kj.at("coef0").get<double>();
    m.kernel = {m.spec.kind, kj.at("gamma_resolved").get<double>(), m.spec.degree, m.spec.coef0};
    m.c = j.at("C").get<double>();
    m.bias = j.at("bias").get<double>();
    m.support = j.at("support").get<std::vector<std::size_t>>();
    m.dual_coef = j.at("dual_coef").get<std::vector<double>>();
    const auto width = j.at("n_features").get<std::size_t>();
    const auto rows = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.support_vectors = rows.empty() ? Matrix(0, width) : Matrix::from_rows(rows);
    m.training_hash = j.at("training_hash").get<std::string>();
    m.iterations = j.value("iterations", std::size_t{0});
    m.converged = j.value("converged", true);
    if (m.dual_coef.size() != m.support_vectors.rows() || m.support_vectors.cols() != width)
      throw DataError("model JSON is inconsistent");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace pqk
