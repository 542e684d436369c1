#pragma once

// Rate-equation solution for linear preferential attachment with a hard
// degree cutoff, plus the scaling laws for the natural cutoff.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adhocsf {

struct AnalyticSolution {
  std::size_t m = 1;
  std::size_t k_c = 2;
  double nu = 0.0;                 // total attachment rate per stub, A = nu * m * N
  std::vector<double> n;           // n[k - m] for k in [m, k_c]
  double bulk_exponent = 1.0;      // 1 + nu
  double spike_exponent = 0.0;     // nu
  std::size_t iterations = 0;

  [[nodiscard]] double n_k(std::size_t k) const {
    if (k < m || k > k_c) return 0.0;
    return n[k - m];
  }
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double last_nu, std::size_t iterations)
      : std::runtime_error("master equation did not converge after " + std::to_string(iterations) +
                           " iterations (last nu = " + std::to_string(last_nu) + ")"),
        last_nu_(last_nu) {}
  [[nodiscard]] double last_nu() const noexcept { return last_nu_; }

 private:
  double last_nu_;
};

/// Stationary fractions n_k for a fixed rate nu, by forward substitution:
/// n_m = nu/(m+nu), n_k = (k-1) n_{k-1}/(nu+k) below the cutoff, and the
/// inert class n_{k_c} = (k_c-1) n_{k_c-1}/nu. Index k - m.
inline std::vector<double> degree_fractions(std::size_t m, std::size_t k_c, double nu) {
  std::vector<double> n(k_c - m + 1);
  n[0] = nu / (static_cast<double>(m) + nu);
  for (std::size_t k = m + 1; k < k_c; ++k) {
    const double kd = static_cast<double>(k);
    n[k - m] = (kd - 1.0) * n[k - m - 1] / (nu + kd);
  }
  n[k_c - m] = (static_cast<double>(k_c) - 1.0) * n[k_c - m - 1] / nu;
  return n;
}

/// Right-hand side of the self-consistency condition, (1/m) sum_{k<k_c} k n_k.
inline double attachment_rate(std::size_t m, std::size_t k_c, double nu) {
  const auto n = degree_fractions(m, k_c, nu);
  double s = 0.0;
  for (std::size_t k = m; k < k_c; ++k) s += static_cast<double>(k) * n[k - m];
  return s / static_cast<double>(m);
}

/// 2 - 2m/k_c, the large-cutoff limit of nu.
inline double asymptotic_nu(std::size_t m, std::size_t k_c) {
  return 2.0 - 2.0 * static_cast<double>(m) / static_cast<double>(k_c);
}

/// Solves for nu by damped fixed-point iteration (factor 0.5) started from
/// the asymptote, then fills in n_k.
///
/// Near nu = 0 every class below the cutoff holds n_k ~ nu/k, so the
/// rate map has slope (k_c - m)/m there and a positive fixed point exists
/// only for k_c > 2m. Below that the cutoff cannot host the mean degree 2m;
/// the stationary state is the limit nu = 0 with all mass on k_c, and that
/// limit is returned directly.
inline AnalyticSolution solve_master_equation(std::size_t m, std::size_t k_c, double tol = 1e-12,
                                              std::size_t max_iterations = 1'000'000) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (k_c <= m) throw std::invalid_argument("k_c must exceed m");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  AnalyticSolution sol;
  sol.m = m;
  sol.k_c = k_c;
  if (k_c <= 2 * m) {
    sol.nu = 0.0;
    sol.n.assign(k_c - m + 1, 0.0);
    sol.n.back() = 1.0;
    sol.bulk_exponent = 1.0;
    sol.spike_exponent = 0.0;
    return sol;
  }

  double nu = std::clamp(asymptotic_nu(m, k_c), 1e-6, 2.0 - 1e-6);
  std::size_t it = 0;
  for (;;) {
    if (it == max_iterations) throw ConvergenceError(nu, it);
    const double next = 0.5 * nu + 0.5 * attachment_rate(m, k_c, nu);
    ++it;
    const bool done = std::abs(next - nu) < tol;
    nu = next;
    if (done) break;
  }
  sol.nu = nu;
  sol.n = degree_fractions(m, k_c, nu);
  sol.bulk_exponent = 1.0 + nu;
  sol.spike_exponent = nu;
  sol.iterations = it;
  return sol;
}

/// Order-of-magnitude natural cutoff m * N^(1/(gamma-1)), unit prefactor.
inline double natural_cutoff(std::size_t m, std::size_t n, double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (n < 1 || m < 1) throw std::invalid_argument("m and n must be >= 1");
  return static_cast<double>(m) * std::pow(static_cast<double>(n), 1.0 / (gamma - 1.0));
}

}  // namespace adhocsf
