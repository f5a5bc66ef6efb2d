#include "stopstare/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stopstare::bounds {

namespace {
void require_positive_eps(double eps) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
}
}  // namespace

double upsilon(double eps, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("delta must lie in (0,1)");
  return upsilon_ln(eps, std::log(1.0 / delta));
}

double upsilon_ln(double eps, double ln_inv_delta) {
  require_positive_eps(eps);
  if (!(ln_inv_delta > 0.0))
    throw std::domain_error("ln(1/delta) must be positive");
  return (2.0 + 2.0 * eps / 3.0) * ln_inv_delta / (eps * eps);
}

double ln_choose(uint64_t n, uint64_t k) {
  if (k > n) throw std::domain_error("ln_choose: k > n");
  return std::lgamma((double)n + 1.0) - std::lgamma((double)k + 1.0) -
         std::lgamma((double)(n - k) + 1.0);
}

bool check_epsilon_constraint(const EpsilonSplit& s, double eps) {
  if (!(s.eps1 > -1.0) || !(s.eps2 >= 0.0) || !(s.eps3 >= 0.0)) return false;
  double lhs = kOneMinusInvE * (s.eps1 + s.eps2 + s.eps1 * s.eps2 + s.eps3) /
               ((1.0 + s.eps1) * (1.0 + s.eps2));
  return lhs <= eps + 1e-12;
}

EpsilonSplit default_epsilon_split(double eps) {
  require_positive_eps(eps);
  if (!(eps < kOneMinusInvE))
    throw std::domain_error(
        "default split needs eps < 1 - 1/e, got eps = " + std::to_string(eps));
  double e23 = eps / (2.0 * kOneMinusInvE);
  double e1 = (1.0 + eps / (2.0 * (kOneMinusInvE - eps))) / (1.0 + e23) - 1.0;
  return {e1, e23, e23};
}

Caps caps_for(uint64_t n, uint64_t k, double eps, double delta) {
  require_positive_eps(eps);
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("delta must lie in (0,1)");
  if (k == 0 || k > n) throw std::domain_error("caps_for needs 1 <= k <= n");
  Caps c;
  double kernel = 2.0 + 2.0 * eps / 3.0;
  double ups_nmax =
      upsilon_ln(eps, std::log(6.0 / delta) + ln_choose(n, k));
  c.n_max = 8.0 * kOneMinusInvE / kernel * ups_nmax * (double)n / (double)k;
  double ups_d3 = upsilon_ln(eps, std::log(3.0 / delta));
  c.i_max = (uint32_t)std::max(1.0, std::ceil(std::log2(2.0 * c.n_max / ups_d3)));
  c.lambda = upsilon_ln(eps, std::log(3.0 * c.i_max / delta));
  c.lambda1 = 1.0 + (1.0 + eps) * c.lambda;
  return c;
}

double split_lambda1(const EpsilonSplit& s, double delta, uint32_t i_max) {
  return (1.0 + s.eps1) * (1.0 + s.eps2) *
         upsilon_ln(s.eps3, std::log(3.0 * i_max / delta));
}

double tim_threshold(uint64_t n, uint64_t k, double eps, double delta,
                     double opt_k) {
  require_positive_eps(eps);
  if (!(opt_k > 0.0)) throw std::domain_error("opt_k must be positive");
  return (8.0 + 2.0 * eps) * (double)n *
         (std::log(2.0 / delta) + ln_choose(n, k)) / (eps * eps * opt_k);
}

double imm_threshold(uint64_t n, uint64_t k, double eps, double delta,
                     double opt_k) {
  require_positive_eps(eps);
  if (!(opt_k > 0.0)) throw std::domain_error("opt_k must be positive");
  double alpha = std::sqrt(std::log(2.0 / delta));
  double beta =
      std::sqrt(kOneMinusInvE * (std::log(2.0 / delta) + ln_choose(n, k)));
  double s = kOneMinusInvE * alpha + beta;
  return 2.0 * (double)n * s * s / (eps * eps * opt_k);
}

double simplified_threshold(uint64_t n, uint64_t k, double eps, double delta) {
  require_positive_eps(eps);
  return 8.0 * kOneMinusInvE * (std::log(2.0 / delta) + ln_choose(n, k)) /
         (eps * eps) * (double)n / (double)k;
}

}  // namespace stopstare::bounds
