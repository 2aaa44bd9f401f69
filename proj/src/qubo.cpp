#include "qpop/qubo.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qpop/errors.hpp"

namespace qpop {

namespace {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string bits_to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

Bits bits_from_string(const std::string& text) {
  Bits bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw input_error("bitstring may contain only 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

void BitLayout::validate() const {
  if (n_assets < 1) throw input_error("layout needs at least one asset");
  if (levels < 1 || levels > 8)
    throw input_error("levels per asset must be in [1, 8], got " + std::to_string(levels));
}

QuboProblem build_qubo(const Eigen::VectorXd& expected_returns, const CovarianceMatrix& cov,
                       const BitLayout& layout, double alpha, double beta, double gamma,
                       double budget) {
  layout.validate();
  const int n = layout.n_assets;
  if (expected_returns.size() != n || cov.size() != n)
    throw input_error("expected returns, covariance and layout sizes disagree");
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw config_error("multipliers must be >= 0");
  if (!(budget > 0.0)) throw config_error("budget must be > 0");

  const int nv = layout.n_vars();
  QuboProblem q;
  q.n_vars = nv;
  q.layout = layout;
  q.alpha = alpha;
  q.beta = beta;
  q.gamma = gamma;
  q.budget = budget;
  q.linear.assign(static_cast<size_t>(nv), 0.0);
  Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(nv, nv);

  // Return term: -alpha * sum_i er_i * omega_i, omega in budget fractions.
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < layout.levels; ++d)
      q.linear[static_cast<size_t>(layout.var_index(i, d))] -=
          alpha * expected_returns[i] * BitLayout::level_value(d);

  // Risk term: beta * omega^T Cov omega expanded over all level bit pairs.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double cij = beta * cov.values(i, j);
      if (cij == 0.0) continue;
      for (int d = 0; d < layout.levels; ++d) {
        const int v = layout.var_index(i, d);
        const double cv = BitLayout::level_value(d);
        for (int e = 0; e < layout.levels; ++e) {
          const int u = layout.var_index(j, e);
          const double w = cij * cv * BitLayout::level_value(e);
          if (v == u)
            q.linear[static_cast<size_t>(v)] += w;  // x^2 == x for binaries
          else if (v < u)
            quad(v, u) += w;
          else
            quad(u, v) += w;
        }
      }
    }
  }

  // Budget penalty: gamma * (sum omega - 1)^2.
  if (gamma != 0.0) {
    q.offset += gamma;
    for (int v = 0; v < nv; ++v) {
      const double cv = BitLayout::level_value(v % layout.levels);
      q.linear[static_cast<size_t>(v)] += gamma * (cv * cv - 2.0 * cv);
      for (int u = v + 1; u < nv; ++u)
        quad(v, u) += 2.0 * gamma * cv * BitLayout::level_value(u % layout.levels);
    }
  }

  for (int v = 0; v < nv; ++v)
    for (int u = v + 1; u < nv; ++u)
      if (quad(v, u) != 0.0) q.quadratic.push_back({v, u, quad(v, u)});
  return q;
}

double energy(const QuboProblem& q, const Bits& bits) {
  if (static_cast<int>(bits.size()) != q.n_vars)
    throw input_error("bitstring length does not match variable count");
  double e = q.offset;
  for (int v = 0; v < q.n_vars; ++v)
    if (bits[static_cast<size_t>(v)]) e += q.linear[static_cast<size_t>(v)];
  for (const auto& t : q.quadratic)
    if (bits[static_cast<size_t>(t.v)] && bits[static_cast<size_t>(t.u)]) e += t.coeff;
  return e;
}

WeightVector decode_weights(const Bits& bits, const BitLayout& layout, double budget,
                            std::vector<std::string> tickers) {
  layout.validate();
  if (static_cast<int>(bits.size()) != layout.n_vars())
    throw input_error("bitstring length does not match layout");
  if (static_cast<int>(tickers.size()) != layout.n_assets)
    throw input_error("ticker count does not match layout");
  if (!(budget > 0.0)) throw config_error("budget must be > 0");
  WeightVector w;
  w.tickers = std::move(tickers);
  w.weights = Eigen::VectorXd::Zero(layout.n_assets);
  for (int i = 0; i < layout.n_assets; ++i) {
    double fraction = 0.0;
    for (int d = 0; d < layout.levels; ++d)
      if (bits[static_cast<size_t>(layout.var_index(i, d))])
        fraction += BitLayout::level_value(d);
    w.weights[i] = budget * fraction;
  }
  return w;
}

void dump_qubo(const QuboProblem& q, std::ostream& out) {
  out << "qubo n_vars=" << q.n_vars << " assets=" << q.layout.n_assets
      << " levels=" << q.layout.levels << " offset=" << fmt_g17(q.offset)
      << " alpha=" << fmt_g17(q.alpha) << " beta=" << fmt_g17(q.beta)
      << " gamma=" << fmt_g17(q.gamma) << " budget=" << fmt_g17(q.budget) << '\n';
  for (int v = 0; v < q.n_vars; ++v)
    if (q.linear[static_cast<size_t>(v)] != 0.0)
      out << v << ' ' << v << ' ' << fmt_g17(q.linear[static_cast<size_t>(v)]) << '\n';
  for (const auto& t : q.quadratic)
    out << t.v << ' ' << t.u << ' ' << fmt_g17(t.coeff) << '\n';
}

QuboProblem load_qubo(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw input_error("empty qubo dump");
  QuboProblem q;
  {
    std::istringstream hs(header);
    std::string tag;
    hs >> tag;
    if (tag != "qubo") throw input_error("qubo dump must start with a 'qubo' header line");
    std::string field;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw input_error("malformed qubo header field: " + field);
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      try {
        if (key == "n_vars")
          q.n_vars = std::stoi(val);
        else if (key == "assets")
          q.layout.n_assets = std::stoi(val);
        else if (key == "levels")
          q.layout.levels = std::stoi(val);
        else if (key == "offset")
          q.offset = std::stod(val);
        else if (key == "alpha")
          q.alpha = std::stod(val);
        else if (key == "beta")
          q.beta = std::stod(val);
        else if (key == "gamma")
          q.gamma = std::stod(val);
        else if (key == "budget")
          q.budget = std::stod(val);
        else
          throw input_error("unknown qubo header field: " + key);
      } catch (const std::invalid_argument&) {
        throw input_error("malformed qubo header field: " + field);
      }
    }
  }
  q.layout.validate();
  if (q.n_vars != q.layout.n_vars())
    throw input_error("qubo header n_vars does not match assets*levels");
  q.linear.assign(static_cast<size_t>(q.n_vars), 0.0);

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int v = 0, u = 0;
    double coeff = 0.0;
    if (!(ls >> v >> u >> coeff)) throw input_error("malformed qubo coefficient line: " + line);
    if (v < 0 || u < 0 || v >= q.n_vars || u >= q.n_vars)
      throw input_error("qubo variable index out of range: " + line);
    if (v == u)
      q.linear[static_cast<size_t>(v)] += coeff;
    else if (v < u)
      q.quadratic.push_back({v, u, coeff});
    else
      q.quadratic.push_back({u, v, coeff});
  }
  std::sort(q.quadratic.begin(), q.quadratic.end(), [](const QuadraticTerm& a, const QuadraticTerm& b) {
    return a.v != b.v ? a.v < b.v : a.u < b.u;
  });
  return q;
}

}  // namespace qpop
