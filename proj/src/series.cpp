#include "combspec/series.hpp"

#include <cmath>
#include <stdexcept>

namespace combspec {

namespace {

constexpr std::uint64_t kDirectTerms = 4096;

double direct_sum(double alpha, std::uint64_t from, std::uint64_t to) {
  // Smallest terms first.
  double s = 0.0;
  for (std::uint64_t l = to; l >= from; --l) {
    s += std::pow(static_cast<double>(l), -alpha);
    if (l == from) break;
  }
  return s;
}

// Euler-Maclaurin for sum_{l=a}^{b} f(l), f(x) = x^{-alpha}, a large.
double euler_maclaurin(double alpha, double a, double b) {
  const double integral = alpha == 1.0 ? std::log(b / a)
                                       : (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) /
                                             (1.0 - alpha);
  auto f = [alpha](double x) { return std::pow(x, -alpha); };
  // Derivatives f^{(m)}(x) = (-1)^m alpha(alpha+1)...(alpha+m-1) x^{-alpha-m}.
  auto d1 = [alpha](double x) { return -alpha * std::pow(x, -alpha - 1.0); };
  auto d3 = [alpha](double x) {
    return -alpha * (alpha + 1.0) * (alpha + 2.0) * std::pow(x, -alpha - 3.0);
  };
  auto d5 = [alpha](double x) {
    return -alpha * (alpha + 1.0) * (alpha + 2.0) * (alpha + 3.0) * (alpha + 4.0) *
           std::pow(x, -alpha - 5.0);
  };
  return integral + 0.5 * (f(a) + f(b)) + (d1(b) - d1(a)) / 12.0 - (d3(b) - d3(a)) / 720.0 +
         (d5(b) - d5(a)) / 30240.0;
}

}  // namespace

double power_partial_sum(double alpha, std::uint64_t n) {
  if (!(alpha > 0.0)) throw std::invalid_argument("power_partial_sum: alpha must be positive");
  if (n == 0) return 0.0;
  if (n <= kDirectTerms) return direct_sum(alpha, 1, n);
  return direct_sum(alpha, 1, kDirectTerms - 1) +
         euler_maclaurin(alpha, static_cast<double>(kDirectTerms), static_cast<double>(n));
}

double riemann_zeta(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("riemann_zeta: alpha must exceed 1");
  // Tail sum_{l>=N} via Euler-Maclaurin with b -> infinity.
  constexpr double N = 64.0;
  const double head = direct_sum(alpha, 1, static_cast<std::uint64_t>(N) - 1);
  const double tail = std::pow(N, 1.0 - alpha) / (alpha - 1.0) + 0.5 * std::pow(N, -alpha) +
                      alpha * std::pow(N, -alpha - 1.0) / 12.0 -
                      alpha * (alpha + 1.0) * (alpha + 2.0) * std::pow(N, -alpha - 3.0) / 720.0 +
                      alpha * (alpha + 1.0) * (alpha + 2.0) * (alpha + 3.0) * (alpha + 4.0) *
                          std::pow(N, -alpha - 5.0) / 30240.0;
  return head + tail;
}

}  // namespace combspec
