#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "invpow/special_functions.hpp"

namespace invpow {
namespace {

// Kronrod 15-point abscissae; odd indices are the embedded Gauss 7 nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = kWk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opts) {
  if (!std::isfinite(lo) || std::isnan(hi) || !(hi > lo)) {
    throw DomainError("integrate_adaptive requires finite lo < hi");
  }
  if (!(opts.rel_tol > 0.0) && !(opts.abs_tol > 0.0)) {
    throw DomainError("integrate_adaptive requires a positive tolerance");
  }

  QuadratureResult result;
  const bool infinite = std::isinf(hi);
  const double scale = opts.scale;
  if (infinite && !(scale > 0.0)) throw DomainError("map scale must be positive");

  // On [lo, inf) integrate over t in [0, 1) with r = lo + scale t / (1 - t).
  // Gauss-Kronrod nodes are interior, so t = 1 is never evaluated.
  auto g = [&](double t) -> double {
    ++result.evaluations;
    if (!infinite) return f(t);
    const double s = 1.0 - t;
    const double value = f(lo + scale * t / s);
    return value == 0.0 ? 0.0 : value * scale / (s * s);
  };
  const double a = infinite ? 0.0 : lo;
  const double b = infinite ? 1.0 : hi;

  // Start from a few equal panels so narrow features are not missed.
  constexpr int kInitialPanels = 8;
  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  for (int i = 0; i < kInitialPanels; ++i) {
    const double p_lo = a + (b - a) * i / kInitialPanels;
    const double p_hi = a + (b - a) * (i + 1) / kInitialPanels;
    const Panel panel = gauss_kronrod(g, p_lo, p_hi);
    value += panel.value;
    error += panel.error;
    heap.push(panel);
  }

  auto converged = [&] {
    return error <= std::max(opts.rel_tol * std::abs(value), opts.abs_tol);
  };
  std::size_t splits = 0;
  while (!converged()) {
    if (splits++ >= opts.max_subdivisions) {
      throw ConvergenceFailure("integrate_adaptive exceeded subdivision budget",
                               value);
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw ConvergenceFailure("integrate_adaptive hit floating-point resolution",
                               value);
    }
    const Panel left = gauss_kronrod(g, worst.lo, mid);
    const Panel right = gauss_kronrod(g, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the incremental updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = value;
  result.error_estimate = error;
  return result;
}

}  // namespace invpow
