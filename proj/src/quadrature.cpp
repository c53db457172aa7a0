#include "recmle/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "recmle/error.hpp"
#include "recmle/summation.hpp"

namespace recmle {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxPanels = 200000;

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  // integral of |f|, for the round-off floor
  int depth = 0;
  bool finite = true;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) {
      return a.error < b.error;
    }
    return a.lo > b.lo;
  }
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi, int depth) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);

  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  bool finite = std::isfinite(fc);

  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    finite = finite && std::isfinite(f1[j]) && std::isfinite(f2[j]);
    const double s = f1[j] + f2[j];
    kronrod += kWgk[j] * s;
    abs_k += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) {
      gauss += kWg[j / 2] * s;
    }
  }

  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.depth = depth;
  p.finite = finite;
  p.value = kronrod * half;
  p.abs_value = abs_k * std::abs(half);
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  if (p.abs_value > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * p.abs_value, err);
  }
  p.error = err;
  return p;
}

double ordered_total(std::vector<Panel> panels) {
  std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  CompensatedSum s;
  for (const auto& p : panels) {
    s.add(p.value);
  }
  return s.value();
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double tol, int max_depth) {
  if (!(tol > 0.0)) {
    throw ArgumentError("integrate_adaptive: tolerance must be > 0");
  }
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("integrate_adaptive: need a finite interval with lo < hi");
  }

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  QuadratureResult out;

  Panel first = gk15(f, lo, hi, 0);
  double total = first.value;
  double total_err = first.error;
  double total_abs = first.abs_value;
  bool finite = first.finite;
  queue.push(first);
  out.previous_value = total;

  while (finite) {
    // Every panel's estimate is floored at 50 eps |f|, so allow twice that.
    if (total_err <= std::max(tol, 100.0 * kEps * total_abs)) {
      out.converged = true;
      break;
    }
    if (queue.size() >= kMaxPanels) {
      break;
    }
    const Panel worst = queue.top();
    if (worst.depth >= max_depth) {
      break;
    }
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gk15(f, worst.lo, mid, worst.depth + 1);
    const Panel right = gk15(f, mid, worst.hi, worst.depth + 1);
    out.previous_value = total;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    finite = left.finite && right.finite;
    out.depth = std::max(out.depth, worst.depth + 1);
    queue.push(left);
    queue.push(right);
  }

  // Re-add in positional order so the result does not depend on the
  // incremental update history.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  double err = 0.0;
  while (!queue.empty()) {
    err += queue.top().error;
    panels.push_back(queue.top());
    queue.pop();
  }
  out.panels = panels.size();
  out.value = finite ? ordered_total(std::move(panels)) : std::numeric_limits<double>::infinity();
  out.error = finite ? err : std::numeric_limits<double>::infinity();
  if (!finite) {
    out.converged = false;
  }
  return out;
}

}  // namespace recmle
