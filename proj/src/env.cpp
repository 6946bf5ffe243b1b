#include "dsee/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dsee/error.hpp"

namespace dsee {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kSqrtPi = 1.7724538509055160273;

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(what);
}

// Integral of g over [0, inf) through y = s / (1 - s).
template <class F>
double half_line_integral(F g) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto h = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double y = s / one_minus;
    const double v = g(y) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrator.integrate(h, 0.0, 1.0);
}

// Integral of g over [0, len].
template <class F>
double segment_integral(F g, double len) {
  if (len <= 0.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(g, 0.0, len);
}

double student_pdf(double x, double dof) {
  using boost::math::tgamma;
  const double norm = std::exp(std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0)) /
                      (std::sqrt(dof) * kSqrtPi);
  return norm * std::pow(1.0 + x * x / dof, -(dof + 1.0) / 2.0);
}

// E|c + T|^p for Student t with `dof` degrees of freedom, split at -c.
double student_abs_moment(double dof, double c, double p) {
  const double right = half_line_integral(
      [&](double y) { return std::pow(y, p) * student_pdf(y - c, dof); });
  const double left = half_line_integral(
      [&](double y) { return std::pow(y, p) * student_pdf(-y - c, dof); });
  return right + left;
}

double gaussian_abs_moment(double mean, double std, double p) {
  auto pdf = [&](double x) {
    const double z = (x - mean) / std;
    return std::exp(-0.5 * z * z) / (std * kSqrtPi * std::sqrt(2.0));
  };
  const double right = half_line_integral([&](double y) { return std::pow(y, p) * pdf(y); });
  const double left = half_line_integral([&](double y) { return std::pow(y, p) * pdf(-y); });
  return right + left;
}

// E|X - c|^p for Pareto(shape, scale) and c >= scale. Both pieces are mapped
// onto (0, 1] through x = c / s so the algebraic tail becomes an endpoint
// singularity.
double pareto_abs_moment(double shape, double scale, double c, double p) {
  const double coef = shape * std::pow(scale, shape);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto tail = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double v = std::pow(c, p - shape) * coef * std::pow(1.0 - s, p) *
                     std::pow(s, shape - p - 1.0);
    return std::isfinite(v) ? v : 0.0;
  };
  double total = integrator.integrate(tail, 0.0, 1.0);
  if (c > scale) {
    auto body = [&](double x) { return std::pow(c - x, p) * coef * std::pow(x, -shape - 1.0); };
    total += integrator.integrate(body, scale, c);
  }
  return total;
}

}  // namespace

ArmSpec::ArmSpec(Params params) : params_(params) {
  std::visit(overloaded{
                 [](const Bernoulli& b) {
                   require(b.q >= 0.0 && b.q <= 1.0, "Bernoulli q must lie in [0, 1]");
                 },
                 [](const Gaussian& g) {
                   require(std::isfinite(g.mean), "Gaussian mean must be finite");
                   require(g.std > 0.0 && std::isfinite(g.std), "Gaussian std must be > 0");
                 },
                 [](const Exponential& e) {
                   require(e.rate > 0.0 && std::isfinite(e.rate), "Exponential rate must be > 0");
                 },
                 [](const Pareto& p) {
                   require(p.shape > 1.0 && std::isfinite(p.shape), "Pareto shape must be > 1");
                   require(p.scale > 0.0 && std::isfinite(p.scale), "Pareto scale must be > 0");
                 },
                 [](const StudentT& t) {
                   require(t.dof > 1.0 && std::isfinite(t.dof), "StudentT dof must be > 1");
                   require(std::isfinite(t.location), "StudentT location must be finite");
                 },
             },
             params_);
}

std::string ArmSpec::kind() const {
  return std::visit(overloaded{
                        [](const Bernoulli&) { return "bernoulli"; },
                        [](const Gaussian&) { return "gaussian"; },
                        [](const Exponential&) { return "exponential"; },
                        [](const Pareto&) { return "pareto"; },
                        [](const StudentT&) { return "studentt"; },
                    },
                    params_);
}

std::string ArmSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Bernoulli& b) { os << "Bernoulli(q=" << b.q << ")"; },
                 [&](const Gaussian& g) { os << "Gaussian(mean=" << g.mean << ", std=" << g.std << ")"; },
                 [&](const Exponential& e) { os << "Exponential(rate=" << e.rate << ")"; },
                 [&](const Pareto& p) { os << "Pareto(shape=" << p.shape << ", scale=" << p.scale << ")"; },
                 [&](const StudentT& t) { os << "StudentT(dof=" << t.dof << ", location=" << t.location << ")"; },
             },
             params_);
  return os.str();
}

double ArmSpec::mean() const noexcept {
  return std::visit(overloaded{
                        [](const Bernoulli& b) { return b.q; },
                        [](const Gaussian& g) { return g.mean; },
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Pareto& p) { return p.shape * p.scale / (p.shape - 1.0); },
                        [](const StudentT& t) { return t.location; },
                    },
                    params_);
}

double ArmSpec::sample(Rng& rng) const {
  return std::visit(overloaded{
                        [&](const Bernoulli& b) { return rng.uniform() < b.q ? 1.0 : 0.0; },
                        [&](const Gaussian& g) { return g.mean + g.std * rng.normal(); },
                        [&](const Exponential& e) { return -std::log(rng.uniform_open_low()) / e.rate; },
                        [&](const Pareto& p) {
                          return p.scale * std::pow(rng.uniform_open_low(), -1.0 / p.shape);
                        },
                        [&](const StudentT& t) {
                          const double z = rng.normal();
                          const double chi2 = 2.0 * rng.gamma(t.dof / 2.0);
                          return t.location + z / std::sqrt(chi2 / t.dof);
                        },
                    },
                    params_);
}

bool ArmSpec::light_tailed() const noexcept {
  return std::holds_alternative<Bernoulli>(params_) || std::holds_alternative<Gaussian>(params_) ||
         std::holds_alternative<Exponential>(params_);
}

Ranking rank_means(const std::vector<double>& means) {
  Ranking r;
  r.order.resize(means.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  r.gaps.resize(means.size());
  r.rank.resize(means.size());
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    r.gaps[k] = means[r.order.front()] - means[r.order[k]];
    r.rank[r.order[k]] = k + 1;
  }
  return r;
}

Bandit::Bandit(std::vector<ArmSpec> arms) : arms_(std::move(arms)) {
  // Single-arm bandits are allowed as a degenerate harness fixture.
  if (arms_.empty()) throw UsageError("bandit needs at least one arm");
}

const ArmSpec& Bandit::arm(std::size_t n) const {
  if (n >= arms_.size()) throw UsageError("arm index out of range");
  return arms_[n];
}

double Bandit::sample_reward(std::size_t arm, Rng& rng) const {
  return this->arm(arm).sample(rng);
}

std::vector<double> Bandit::true_means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.mean());
  return out;
}

std::optional<double> central_moment_bound(const ArmSpec& spec, double p) {
  if (!(p > 1.0)) throw UsageError("moment order p must be > 1");
  return std::visit(
      overloaded{
          [&](const Bernoulli& b) -> std::optional<double> {
            return b.q * std::pow(1.0 - b.q, p) + (1.0 - b.q) * std::pow(b.q, p);
          },
          [&](const Gaussian& g) -> std::optional<double> {
            return std::pow(g.std, p) * std::pow(2.0, p / 2.0) *
                   boost::math::tgamma((p + 1.0) / 2.0) / kSqrtPi;
          },
          [&](const Exponential& e) -> std::optional<double> {
            // Above the mean the integral is exp(-1) * Gamma(p + 1) / rate^p.
            const double mu = 1.0 / e.rate;
            const double above = std::exp(-1.0) * boost::math::tgamma(p + 1.0) / std::pow(e.rate, p);
            const double below = segment_integral(
                [&](double x) { return std::pow(mu - x, p) * e.rate * std::exp(-e.rate * x); }, mu);
            return above + below;
          },
          [&](const Pareto& par) -> std::optional<double> {
            if (p >= par.shape) return std::nullopt;
            return pareto_abs_moment(par.shape, par.scale, spec.mean(), p);
          },
          [&](const StudentT& t) -> std::optional<double> {
            if (p >= t.dof) return std::nullopt;
            return std::pow(t.dof, p / 2.0) *
                   std::exp(std::lgamma((p + 1.0) / 2.0) + std::lgamma((t.dof - p) / 2.0) -
                            std::lgamma(t.dof / 2.0)) /
                   kSqrtPi;
          },
      },
      spec.params());
}

std::optional<double> raw_moment_bound(const ArmSpec& spec, double p) {
  if (!(p > 1.0)) throw UsageError("moment order p must be > 1");
  return std::visit(
      overloaded{
          [&](const Bernoulli& b) -> std::optional<double> { return b.q; },
          [&](const Gaussian& g) -> std::optional<double> {
            return gaussian_abs_moment(g.mean, g.std, p);
          },
          [&](const Exponential& e) -> std::optional<double> {
            return boost::math::tgamma(p + 1.0) / std::pow(e.rate, p);
          },
          [&](const Pareto& par) -> std::optional<double> {
            if (p >= par.shape) return std::nullopt;
            return par.shape * std::pow(par.scale, p) / (par.shape - p);
          },
          [&](const StudentT& t) -> std::optional<double> {
            if (p >= t.dof) return std::nullopt;
            return student_abs_moment(t.dof, t.location, p);
          },
      },
      spec.params());
}

std::optional<double> mgf_curvature_bound(const ArmSpec& spec, double u0) {
  if (!(u0 > 0.0)) throw UsageError("u0 must be > 0");
  // M''(u) = E[Y^2 exp(uY)] is convex in u, so its sup over [-u0, u0] sits
  // at an endpoint.
  auto endpoint_max = [u0](auto second) { return std::max(second(-u0), second(u0)); };
  return std::visit(
      overloaded{
          [&](const Bernoulli& b) -> std::optional<double> {
            const double q = b.q;
            return endpoint_max([q](double u) {
              return q * (1.0 - q) * (1.0 - q) * std::exp(u * (1.0 - q)) +
                     (1.0 - q) * q * q * std::exp(-u * q);
            });
          },
          [&](const Gaussian& g) -> std::optional<double> {
            const double s2 = g.std * g.std;
            return endpoint_max(
                [s2](double u) { return s2 * (1.0 + s2 * u * u) * std::exp(s2 * u * u / 2.0); });
          },
          [&](const Exponential& e) -> std::optional<double> {
            const double lam = e.rate;
            if (u0 >= lam) return std::nullopt;
            const double mu = 1.0 / lam;
            return endpoint_max([lam, mu](double u) {
              const double d = lam - u;
              return std::exp(-u * mu) * lam *
                     (2.0 / (d * d * d) - 2.0 * mu / (d * d) + mu * mu / d);
            });
          },
          [](const Pareto&) -> std::optional<double> { return std::nullopt; },
          [](const StudentT&) -> std::optional<double> { return std::nullopt; },
      },
      spec.params());
}

}  // namespace dsee
